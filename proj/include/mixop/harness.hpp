#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mixop/mixing.hpp"
#include "mixop/parametric.hpp"
#include "mixop/transport.hpp"

namespace mixop {

enum class SequenceKind { AtomShift, WeightDrift, EmpiricalSample, ThetaPath };

const char* to_string(SequenceKind kind);
SequenceKind parse_sequence_kind(const std::string& name);

/// Recipe for a sequence nu_1..nu_K converging to a limit nu_0.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::AtomShift;
  /// nu_0 itself, or for ThetaPath the parameter measure lambda_0.
  std::variant<MetaMeasure, ThetaMeasure> base = MetaMeasure(1);
  std::size_t steps = 20;
  /// Magnitudes s_1 > ... > s_K > 0; empty means s_k = 1/k.
  std::vector<double> schedule;
  std::uint64_t seed = 0;

  /// AtomShift: translation direction (normalized); empty draws one from the seed.
  std::vector<double> direction;
  /// WeightDrift: weights at s = 1; empty draws them from the seed.
  std::vector<double> start_weights;
  /// ThetaPath: theta_k = theta + s_k * (mean_step, sd_step) for every atom.
  double theta_mean_step = 1.0;
  double theta_sd_step = 0.0;
  std::size_t n_quantiles = kDefaultQuantiles;
  /// EmpiricalSample: step k draws k * samples_per_step meta atoms.
  std::size_t samples_per_step = 1;
};

struct GeneratedSequence {
  std::vector<MetaMeasure> terms;  // nu_1..nu_K
  MetaMeasure limit;               // nu_0
  std::vector<double> schedule;
};

/// Validated schedule of `spec` (the 1/k default filled in).
std::vector<double> resolve_schedule(const SequenceSpec& spec);

/// Deterministic in the spec. Randomness for step k is drawn from a stream
/// keyed by (seed, k) only.
GeneratedSequence generate_sequence(const SequenceSpec& spec);

struct NamedSet {
  std::string id;
  TestSet set;
};

struct HarnessOptions {
  GroundMetric metric = GroundMetric::W1;
  double gap_tol = 1e-6;
  double cert_tol = 1e-6;
  /// Workers used to evaluate steps concurrently; 0 selects the hardware concurrency.
  unsigned threads = 1;
};

enum class Verdict { Converges, ViolatesBoundaryCondition, Inconclusive };
const char* to_string(Verdict v);

struct StepRecord {
  std::size_t k = 0;
  double d_meta = 0.0;
  double d_mixed = 0.0;
  std::vector<double> set_gaps;
};

struct ConvergenceReport {
  GroundMetric metric = GroundMetric::W1;
  bool probability_ensembles = false;
  std::vector<std::string> set_ids;
  std::vector<StepRecord> steps;
  std::vector<double> boundary_masses;          // Mix(nu_0)(boundary of A)
  std::vector<double> min_boundary_distances;   // closest atom of Mix(nu_0) to the boundary
  std::vector<Verdict> verdicts;
  double mass_bound = 0.0;                      // sup of first-level masses seen
};

/// Measures both levels at every step and classifies each test set: a set
/// carrying boundary mass under Mix(nu_0) violates the boundary condition and
/// gets no gap assertion; otherwise the gaps must settle monotonically below
/// gap_tol, failing which the verdict is inconclusive.
ConvergenceReport portmanteau_check(std::span<const MetaMeasure> sequence, const MetaMeasure& limit,
                                    std::span<const NamedSet> sets, const HarnessOptions& options = {});

struct ContinuityCertificate {
  bool distances_vanish = false;      // final d_mixed < cert_tol
  bool nonexpansive_checked = false;  // only for probability ensembles
  double max_excess = 0.0;            // max_k (d_mixed_k - d_meta_k)
  bool d_meta_strictly_decreasing = false;
  bool d_mixed_nonincreasing = false;
  double final_d_meta = 0.0;
  double final_d_mixed = 0.0;
  /// Least-squares slope of d_mixed against d_meta through the origin; descriptive only.
  double observed_slope = 0.0;
  std::vector<std::pair<double, double>> pairs;  // (d_meta_k, d_mixed_k)
};

/// Throws NonexpansiveViolation naming the first k where d_mixed_k > d_meta_k + 1e-9.
/// Requires at least five steps.
ContinuityCertificate continuity_certificate(const ConvergenceReport& report,
                                             const HarnessOptions& options = {});

struct ConvergenceRun {
  SequenceSpec spec;
  std::vector<double> schedule;
  ConvergenceReport report;
  ContinuityCertificate certificate;
  /// max_k d_meta_k / s_k: the constant C in d_meta_k <= C * s_k.
  double rate_constant = 0.0;
};

ConvergenceRun run_convergence(const SequenceSpec& spec, std::span<const NamedSet> sets,
                               const HarnessOptions& options = {});

/// Columns k, d_meta, d_mixed, then gap_<id> per test set; 17 significant digits.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace mixop
