#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mixop/error.hpp"
#include "mixop/transport.hpp"

namespace mixop {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  std::span<const double> cost) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  if (cost.size() != n * m) {
    throw DimensionMismatch("transport cost matrix must be " + std::to_string(n) + " x " +
                            std::to_string(m));
  }
  for (double c : cost) {
    if (!std::isfinite(c) || c < 0.0) throw InvariantViolation("transport costs must be finite and >= 0");
  }
  for (double s : supply) {
    if (!std::isfinite(s) || s < 0.0) throw InvariantViolation("supplies must be finite and >= 0");
  }
  for (double d : demand) {
    if (!std::isfinite(d) || d < 0.0) throw InvariantViolation("demands must be finite and >= 0");
  }

  const double total = std::max(std::accumulate(supply.begin(), supply.end(), 0.0),
                                std::accumulate(demand.begin(), demand.end(), 0.0));
  // Residual amounts below this are rounding noise, not unmet supply.
  const double eps = 1e-14 * std::max(total, 1.0);

  TransportSolution sol;
  sol.plan.rows = n;
  sol.plan.cols = m;
  sol.plan.flow.assign(n * m, 0.0);
  sol.plan.unit_cost.assign(cost.begin(), cost.end());
  if (n == 0 || m == 0) {
    sol.u.assign(n, 0.0);
    sol.v.assign(m, 0.0);
    return sol;
  }

  auto& flow = sol.plan.flow;
  std::vector<double> left(supply.begin(), supply.end());
  std::vector<double> need(demand.begin(), demand.end());

  // Nodes 0..n-1 are sources, n..n+m-1 sinks. Reduced cost of source i -> sink j
  // is c_ij + pot_i - pot_j, of the reverse residual arc it is the negation;
  // both stay >= 0 throughout.
  const std::size_t nodes = n + m;
  std::vector<double> pot(nodes, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, cost[i * m + j]);
    pot[n + j] = best;
  }

  std::vector<double> dist(nodes);
  std::vector<std::size_t> parent(nodes);
  std::vector<char> done(nodes);

  const std::size_t max_rounds = 64 * (n + 1) * (m + 1) + 1024;
  for (std::size_t round = 0;; ++round) {
    if (round > max_rounds) {
      throw ConvergenceFailure("transport solver exceeded its augmentation budget", 0.0);
    }
    bool any_source = false;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), kNone);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (left[i] > eps) {
        dist[i] = 0.0;
        any_source = true;
      }
    }
    if (!any_source) break;

    std::size_t target = kNone;
    while (true) {
      std::size_t best = kNone;
      double best_dist = kInf;
      for (std::size_t x = 0; x < nodes; ++x) {
        if (!done[x] && dist[x] < best_dist) {
          best_dist = dist[x];
          best = x;
        }
      }
      if (best == kNone) break;
      done[best] = 1;
      if (best >= n) {
        const std::size_t j = best - n;
        if (need[j] > eps) {
          target = best;
          break;
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (done[i] || flow[i * m + j] <= 0.0) continue;
          const double rc = std::max(0.0, -cost[i * m + j] + pot[best] - pot[i]);
          if (best_dist + rc < dist[i]) {
            dist[i] = best_dist + rc;
            parent[i] = best;
          }
        }
      } else {
        const std::size_t i = best;
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t y = n + j;
          if (done[y]) continue;
          const double rc = std::max(0.0, cost[i * m + j] + pot[i] - pot[y]);
          if (best_dist + rc < dist[y]) {
            dist[y] = best_dist + rc;
            parent[y] = i;
          }
        }
      }
    }
    if (target == kNone) break;  // only rounding noise remains on the demand side

    const double reach = dist[target];
    for (std::size_t x = 0; x < nodes; ++x) pot[x] += std::min(dist[x], reach);

    double delta = need[target - n];
    std::size_t x = target;
    while (parent[x] != kNone) {
      const std::size_t p = parent[x];
      if (p >= n) delta = std::min(delta, flow[x * m + (p - n)]);  // reverse arc sink p -> source x
      x = p;
    }
    delta = std::min(delta, left[x]);

    const std::size_t origin = x;
    x = target;
    while (parent[x] != kNone) {
      const std::size_t p = parent[x];
      if (p < n) {
        flow[p * m + (x - n)] += delta;
      } else {
        double& f = flow[x * m + (p - n)];
        f -= delta;
        if (f < eps) f = 0.0;
      }
      x = p;
    }
    left[origin] -= delta;
    need[target - n] -= delta;
  }

  sol.u.resize(n);
  sol.v.resize(m);
  for (std::size_t i = 0; i < n; ++i) sol.u[i] = -pot[i];
  for (std::size_t j = 0; j < m; ++j) sol.v[j] = pot[n + j];

  double primal = 0.0;
  for (std::size_t k = 0; k < n * m; ++k) primal += flow[k] * cost[k];
  double dual = 0.0;
  for (std::size_t i = 0; i < n; ++i) dual += supply[i] * sol.u[i];
  for (std::size_t j = 0; j < m; ++j) dual += demand[j] * sol.v[j];
  sol.plan.cost = primal;
  sol.dual_objective = dual;
  return sol;
}

}  // namespace mixop
