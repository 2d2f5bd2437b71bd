#include "mixop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "mixop/error.hpp"
#include "parallel.hpp"

namespace mixop {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream for step k; k = 0 is reserved for draws shared by all steps.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t k) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ k));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

const MetaMeasure& meta_base(const SequenceSpec& spec) {
  if (!std::holds_alternative<MetaMeasure>(spec.base)) {
    throw InvariantViolation(std::string(to_string(spec.kind)) + " needs a meta-measure base");
  }
  return std::get<MetaMeasure>(spec.base);
}

std::vector<double> unit_direction(const SequenceSpec& spec, std::size_t dim) {
  std::vector<double> u = spec.direction;
  if (u.empty()) {
    auto rng = stream(spec.seed, 0);
    u.resize(dim);
    for (double& x : u) x = standard_normal(rng);
  }
  if (u.size() != dim) throw DimensionMismatch("atom_shift direction has the wrong dimension");
  double norm = 0.0;
  for (double x : u) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvariantViolation("atom_shift direction must be nonzero");
  for (double& x : u) x /= norm;
  return u;
}

MetaMeasure shift_atoms(const MetaMeasure& nu, std::span<const double> offset) {
  std::vector<DiscreteMeasure> atoms;
  atoms.reserve(nu.size());
  for (const auto& mu : nu.atoms()) atoms.push_back(translate(mu, offset));
  return MetaMeasure(nu.dim(), std::move(atoms), nu.weights());
}

ThetaMeasure shift_thetas(const ThetaMeasure& lambda, double s, double dm, double dsd) {
  std::vector<ThetaPoint> thetas;
  thetas.reserve(lambda.thetas.size());
  for (std::size_t i = 0; i < lambda.thetas.size(); ++i) {
    const auto& t = lambda.thetas[i];
    try {
      thetas.emplace_back(t.mean() + s * dm, t.sd() + s * dsd);
    } catch (const Error& e) {
      throw InvariantViolation("theta_path leaves the parameter half-plane at atom " + std::to_string(i) +
                               ": " + e.what());
    }
  }
  return ThetaMeasure(std::move(thetas), lambda.weights);
}

double distance_between(const DiscreteMeasure& a, const DiscreteMeasure& b, GroundMetric metric) {
  return metric == GroundMetric::W1 ? w1_exact(a, b).cost : bl_distance(a, b);
}

}  // namespace

const char* to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::AtomShift: return "atom_shift";
    case SequenceKind::WeightDrift: return "weight_drift";
    case SequenceKind::EmpiricalSample: return "empirical_sample";
    case SequenceKind::ThetaPath: return "theta_path";
  }
  return "unknown";
}

SequenceKind parse_sequence_kind(const std::string& name) {
  for (auto k : {SequenceKind::AtomShift, SequenceKind::WeightDrift, SequenceKind::EmpiricalSample,
                 SequenceKind::ThetaPath}) {
    if (name == to_string(k)) return k;
  }
  throw InvariantViolation("unknown sequence kind '" + name + "'");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::ViolatesBoundaryCondition: return "violates_bcond";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<double> resolve_schedule(const SequenceSpec& spec) {
  if (spec.steps < 2) throw InvariantViolation("a sequence needs at least 2 steps");
  std::vector<double> s = spec.schedule;
  if (s.empty()) {
    for (std::size_t k = 1; k <= spec.steps; ++k) s.push_back(1.0 / static_cast<double>(k));
  }
  if (s.size() != spec.steps) {
    throw InvariantViolation("schedule has " + std::to_string(s.size()) + " entries for " +
                             std::to_string(spec.steps) + " steps");
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s[k]) || s[k] <= 0.0) {
      throw InvariantViolation("schedule entry " + std::to_string(k + 1) + " is not positive");
    }
    if (k > 0 && !(s[k] < s[k - 1])) {
      throw InvariantViolation("schedule is not strictly decreasing at step " + std::to_string(k + 1));
    }
  }
  return s;
}

GeneratedSequence generate_sequence(const SequenceSpec& spec) {
  GeneratedSequence out{{}, MetaMeasure(1), resolve_schedule(spec)};
  const auto& s = out.schedule;

  switch (spec.kind) {
    case SequenceKind::AtomShift: {
      const MetaMeasure& nu0 = meta_base(spec);
      const auto u = unit_direction(spec, nu0.dim());
      out.limit = nu0;
      for (double sk : s) {
        std::vector<double> offset(u);
        for (double& x : offset) x *= sk;
        out.terms.push_back(shift_atoms(nu0, offset));
      }
      break;
    }
    case SequenceKind::WeightDrift: {
      const MetaMeasure& nu0 = meta_base(spec);
      std::vector<double> start = spec.start_weights;
      if (start.empty()) {
        auto rng = stream(spec.seed, 0);
        double total = 0.0;
        for (std::size_t j = 0; j < nu0.size(); ++j) total += start.emplace_back(uniform01(rng) + 1e-3);
        for (double& w : start) w *= meta_mass(nu0) / total;
      }
      if (start.size() != nu0.size()) {
        throw InvariantViolation("weight_drift start_weights must match the " + std::to_string(nu0.size()) +
                                 " canonical atoms of the base");
      }
      if (s.front() > 1.0) throw InvariantViolation("weight_drift schedule must stay within (0, 1]");
      out.limit = nu0;
      for (double sk : s) {
        std::vector<double> w(nu0.size());
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = (1.0 - sk) * nu0.weight(j) + sk * start[j];
        out.terms.emplace_back(nu0.dim(), nu0.atoms(), std::move(w));
      }
      break;
    }
    case SequenceKind::EmpiricalSample: {
      const MetaMeasure& nu0 = meta_base(spec);
      if (nu0.size() == 0) throw InvariantViolation("empirical_sample needs a nonempty base");
      if (spec.samples_per_step == 0) throw InvariantViolation("samples_per_step must be positive");
      const double total = meta_mass(nu0);
      std::vector<double> cdf(nu0.size());
      double acc = 0.0;
      for (std::size_t j = 0; j < nu0.size(); ++j) cdf[j] = (acc += nu0.weight(j) / total);
      out.limit = nu0;
      for (std::size_t k = 1; k <= s.size(); ++k) {
        auto rng = stream(spec.seed, k);
        const std::size_t draws = k * spec.samples_per_step;
        std::vector<DiscreteMeasure> atoms;
        atoms.reserve(draws);
        for (std::size_t d = 0; d < draws; ++d) {
          const double u = uniform01(rng);
          const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
          const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), nu0.size() - 1);
          atoms.push_back(nu0.atom(j));
        }
        out.terms.emplace_back(nu0.dim(), std::move(atoms),
                               std::vector<double>(draws, total / static_cast<double>(draws)));
      }
      break;
    }
    case SequenceKind::ThetaPath: {
      if (!std::holds_alternative<ThetaMeasure>(spec.base)) {
        throw InvariantViolation("theta_path needs a theta-measure base");
      }
      const auto& lambda0 = std::get<ThetaMeasure>(spec.base);
      out.limit = pushforward(lambda0, spec.n_quantiles);
      for (double sk : s) {
        out.terms.push_back(
            pushforward(shift_thetas(lambda0, sk, spec.theta_mean_step, spec.theta_sd_step), spec.n_quantiles));
      }
      break;
    }
  }
  return out;
}

ConvergenceReport portmanteau_check(std::span<const MetaMeasure> sequence, const MetaMeasure& limit,
                                    std::span<const NamedSet> sets, const HarnessOptions& options) {
  ConvergenceReport report;
  report.metric = options.metric;
  const DiscreteMeasure mixed0 = mix(limit);
  report.mass_bound = limit.mass_bound();
  report.probability_ensembles = is_probability_ensemble(limit);
  for (const auto& nu : sequence) {
    report.mass_bound = std::max(report.mass_bound, nu.mass_bound());
    report.probability_ensembles = report.probability_ensembles && is_probability_ensemble(nu);
  }

  std::vector<double> set_values0;
  for (const auto& s : sets) {
    report.set_ids.push_back(s.id);
    report.boundary_masses.push_back(boundary_mass(mixed0, s.set));
    report.min_boundary_distances.push_back(min_boundary_distance(mixed0, s.set));
    set_values0.push_back(measure_of_set(mixed0, s.set));
  }

  report.steps.resize(sequence.size());
  std::vector<std::exception_ptr> failures(sequence.size());
  detail::parallel_for(sequence.size(), options.threads, [&](std::size_t idx) {
    try {
      StepRecord rec;
      rec.k = idx + 1;
      rec.d_meta = nested_w1(sequence[idx], limit, options.metric).cost;
      const DiscreteMeasure mixed = mix(sequence[idx]);
      rec.d_mixed = distance_between(mixed, mixed0, options.metric);
      for (std::size_t a = 0; a < sets.size(); ++a) {
        rec.set_gaps.push_back(std::abs(measure_of_set(mixed, sets[a].set) - set_values0[a]));
      }
      report.steps[idx] = std::move(rec);
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  });
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (std::size_t a = 0; a < sets.size(); ++a) {
    if (report.boundary_masses[a] > 0.0) {
      report.verdicts.push_back(Verdict::ViolatesBoundaryCondition);
      continue;
    }
    bool settles = !report.steps.empty() && report.steps.back().set_gaps[a] < options.gap_tol;
    // Monotone over the second half of the run, up to gap_tol of noise.
    for (std::size_t k = report.steps.size() / 2 + 1; settles && k < report.steps.size(); ++k) {
      settles = report.steps[k].set_gaps[a] <= report.steps[k - 1].set_gaps[a] + options.gap_tol;
    }
    report.verdicts.push_back(settles ? Verdict::Converges : Verdict::Inconclusive);
  }
  return report;
}

ContinuityCertificate continuity_certificate(const ConvergenceReport& report, const HarnessOptions& options) {
  if (report.steps.size() < 5) {
    throw InvariantViolation("continuity_certificate needs at least 5 steps, got " +
                             std::to_string(report.steps.size()));
  }
  ContinuityCertificate cert;
  cert.nonexpansive_checked = report.probability_ensembles;
  cert.max_excess = -std::numeric_limits<double>::infinity();
  cert.d_meta_strictly_decreasing = true;
  cert.d_mixed_nonincreasing = true;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const auto& r = report.steps[i];
    cert.pairs.emplace_back(r.d_meta, r.d_mixed);
    cert.max_excess = std::max(cert.max_excess, r.d_mixed - r.d_meta);
    if (cert.nonexpansive_checked && r.d_mixed > r.d_meta + kTransportTolerance) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "nonexpansive bound violated at k = %zu: d_mixed %.17g > d_meta %.17g",
                    r.k, r.d_mixed, r.d_meta);
      throw NonexpansiveViolation(buf, r.k);
    }
    if (i > 0) {
      cert.d_meta_strictly_decreasing = cert.d_meta_strictly_decreasing && r.d_meta < report.steps[i - 1].d_meta;
      cert.d_mixed_nonincreasing =
          cert.d_mixed_nonincreasing && r.d_mixed <= report.steps[i - 1].d_mixed + kTransportTolerance;
    }
    num += r.d_meta * r.d_mixed;
    den += r.d_meta * r.d_meta;
  }
  cert.final_d_meta = report.steps.back().d_meta;
  cert.final_d_mixed = report.steps.back().d_mixed;
  cert.distances_vanish = cert.final_d_mixed < options.cert_tol;
  cert.observed_slope = den > 0.0 ? num / den : 0.0;
  return cert;
}

ConvergenceRun run_convergence(const SequenceSpec& spec, std::span<const NamedSet> sets,
                               const HarnessOptions& options) {
  GeneratedSequence seq = generate_sequence(spec);
  ConvergenceRun run{spec, seq.schedule, portmanteau_check(seq.terms, seq.limit, sets, options), {}, 0.0};
  run.certificate = continuity_certificate(run.report, options);
  for (std::size_t i = 0; i < run.schedule.size(); ++i) {
    run.rate_constant = std::max(run.rate_constant, run.report.steps[i].d_meta / run.schedule[i]);
  }
  return run;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "k,d_meta,d_mixed";
  for (const auto& id : report.set_ids) out << ",gap_" << id;
  out << '\n';
  char buf[64];
  for (const auto& r : report.steps) {
    out << r.k;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g", r.d_meta, r.d_mixed);
    out << buf;
    for (double g : r.set_gaps) {
      std::snprintf(buf, sizeof buf, ",%.17g", g);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace mixop
