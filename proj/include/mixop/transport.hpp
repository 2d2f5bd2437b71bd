#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mixop/measures.hpp"
#include "mixop/mixing.hpp"

namespace mixop {

/// Absolute tolerance on marginal feasibility and relative tolerance on optimality.
inline constexpr double kTransportTolerance = 1e-9;

/// Coupling between a source with `rows` atoms and a target with `cols` atoms.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> flow;       // row-major rows x cols
  std::vector<double> unit_cost;  // row-major rows x cols ground costs
  double cost = 0.0;

  double at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
  double unit_cost_at(std::size_t i, std::size_t j) const { return unit_cost[i * cols + j]; }
};

/// Optimal solution of a balanced transportation problem together with the
/// dual potentials certifying it: u_i + v_j <= c_ij everywhere, with equality
/// wherever flow is positive.
struct TransportSolution {
  TransportPlan plan;
  std::vector<double> u;
  std::vector<double> v;
  double dual_objective = 0.0;
};

/// Exact balanced transportation by successive shortest augmenting paths with
/// node potentials (Dijkstra on reduced costs over the dense bipartite residual
/// graph). `cost` is row-major supply.size() x demand.size() and must be
/// non-negative. Supplies and demands must have equal totals up to rounding.
TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  std::span<const double> cost);

struct W1Result {
  double cost = 0.0;
  TransportPlan plan;
  std::vector<double> u;  // source potentials
  std::vector<double> v;  // target potentials
  double dual_objective = 0.0;
};

/// Exact Wasserstein-1 distance with Euclidean ground cost. Weights are
/// normalized to unit mass for the solve and the cost rescaled afterwards.
/// Throws MassMismatch when masses differ by more than 1e-9 relative and
/// InvariantViolation for an empty measure.
W1Result w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct SinkhornOptions {
  double epsilon = 1e-3;
  int max_iter = 100000;
  /// L1 violation of the row marginal (relative to unit mass) at which to stop.
  double tolerance = 1e-6;
  /// Subtract the mean of the two self-transport terms.
  bool debiased = false;
};

struct SinkhornResult {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Transport cost <P, C> of the entropic optimal plan P, computed in
/// the log domain with epsilon scaling. Never negative. Throws
/// ConvergenceFailure carrying the residual when max_iter is exhausted.
SinkhornResult w1_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const SinkhornOptions& options);
double w1_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double epsilon,
                   int max_iter);

struct BLResult {
  double value = 0.0;
  std::vector<Point> support;    // union support
  std::vector<double> signed_mass;  // mu - nu on the union support
  std::vector<double> witness;   // optimal f: |f| <= 1, |f_i - f_j| <= d_ij
};

/// Bounded-Lipschitz (Dudley) distance: the optimum of
///   max sum_i f_i (p_i - q_i)  s.t.  |f_i| <= 1,  |f_i - f_j| <= d(z_i, z_j)
/// over the union support. Solved exactly through its min-cost-flow dual, in
/// which every atom may also exchange mass with an auxiliary ground node at
/// unit cost. Either measure may be empty.
BLResult bl_distance_detailed(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

enum class GroundMetric { W1, BoundedLipschitz };

struct NestedResult {
  double cost = 0.0;
  TransportPlan plan;  // unit_cost holds the first-level distances
};

/// Transport between meta-measures with ground cost given by a first-level
/// distance. Cost cells are evaluated independently, across `threads` workers
/// (0 selects the hardware concurrency); the result does not depend on it.
NestedResult nested_w1(const MetaMeasure& nu, const MetaMeasure& nu_prime,
                       GroundMetric ground = GroundMetric::W1, unsigned threads = 1);

/// CSV with header i,j,flow,cost_ij; one row per positive flow entry.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);

}  // namespace mixop
