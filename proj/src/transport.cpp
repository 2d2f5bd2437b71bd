#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "mixop/error.hpp"
#include "mixop/transport.hpp"
#include "parallel.hpp"

namespace mixop {
namespace {

void check_equal_mass(double a, double b, const char* what) {
  if (std::abs(a - b) > kTransportTolerance * std::max(a, b)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: masses differ (%.17g vs %.17g); normalize the inputs first",
                  what, a, b);
    throw MassMismatch(buf);
  }
}

std::vector<double> normalized(const std::vector<double>& w, double total) {
  std::vector<double> out(w);
  for (double& x : out) x /= total;
  return out;
}

std::vector<double> distance_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<double> c(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) c[i * nu.size() + j] = distance(mu.point(i), nu.point(j));
  }
  return c;
}

}  // namespace

W1Result w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw DimensionMismatch("w1_exact: measures live in different dimensions");
  if (mu.empty() || nu.empty()) throw InvariantViolation("w1_exact: empty measure");
  const double m_mu = mass(mu);
  const double m_nu = mass(nu);
  check_equal_mass(m_mu, m_nu, "w1_exact");

  const auto a = normalized(mu.weights(), m_mu);
  const auto b = normalized(nu.weights(), m_nu);
  TransportSolution sol = solve_transport(a, b, distance_matrix(mu, nu));

  W1Result out;
  out.plan = std::move(sol.plan);
  for (double& f : out.plan.flow) f *= m_mu;
  out.plan.cost *= m_mu;
  out.cost = out.plan.cost;
  out.u = std::move(sol.u);
  out.v = std::move(sol.v);
  out.dual_objective = sol.dual_objective * m_mu;
  return out;
}

BLResult bl_distance_detailed(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw DimensionMismatch("bl_distance: measures live in different dimensions");
  BLResult out;

  auto slot = [&](const Point& p) {
    for (std::size_t k = 0; k < out.support.size(); ++k) {
      if (distance(out.support[k], p) <= kMergeTolerance) return k;
    }
    out.support.push_back(p);
    out.signed_mass.push_back(0.0);
    return out.support.size() - 1;
  };
  for (std::size_t i = 0; i < mu.size(); ++i) out.signed_mass[slot(mu.point(i))] += mu.weight(i);
  for (std::size_t i = 0; i < nu.size(); ++i) out.signed_mass[slot(nu.point(i))] -= nu.weight(i);

  const std::size_t n = out.support.size();
  out.witness.assign(n, 0.0);
  const double excess = std::accumulate(out.signed_mass.begin(), out.signed_mass.end(), 0.0);

  // Node n is the ground node. Shortest-path costs: min(d, 2) between atoms,
  // 1 between an atom and the ground.
  constexpr std::size_t kGround = std::numeric_limits<std::size_t>::max();
  auto path_cost = [&](std::size_t x, std::size_t y) {
    if (x == y) return 0.0;
    if (x == kGround || y == kGround) return 1.0;
    return std::min(distance(out.support[x], out.support[y]), 2.0);
  };

  std::vector<std::size_t> sources;
  std::vector<std::size_t> sinks;
  std::vector<double> supply;
  std::vector<double> demand;
  for (std::size_t k = 0; k < n; ++k) {
    if (out.signed_mass[k] > 0.0) {
      sources.push_back(k);
      supply.push_back(out.signed_mass[k]);
    } else if (out.signed_mass[k] < 0.0) {
      sinks.push_back(k);
      demand.push_back(-out.signed_mass[k]);
    }
  }
  if (excess > 0.0) {
    sinks.push_back(kGround);
    demand.push_back(excess);
  } else if (excess < 0.0) {
    sources.push_back(kGround);
    supply.push_back(-excess);
  }
  if (sources.empty() || sinks.empty()) return out;

  // Rounding in `excess` can leave the two sides a few ulps apart.
  const double s_total = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double d_total = std::accumulate(demand.begin(), demand.end(), 0.0);
  const double fix = s_total - d_total;
  if (fix > 0.0) demand.back() += fix; else supply.back() -= fix;

  std::vector<double> cost(sources.size() * sinks.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (std::size_t t = 0; t < sinks.size(); ++t) cost[s * sinks.size() + t] = path_cost(sources[s], sinks[t]);
  }
  TransportSolution sol = solve_transport(supply, demand, cost);
  out.value = std::max(0.0, sol.plan.cost);

  // c-transform of the sink potentials is 1-Lipschitz for the path metric and
  // attains the dual bound; anchoring it at the ground gives |f| <= 1.
  auto phi = [&](std::size_t x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < sinks.size(); ++t) best = std::min(best, path_cost(x, sinks[t]) - sol.v[t]);
    return best;
  };
  const double ground = phi(kGround);
  for (std::size_t k = 0; k < n; ++k) out.witness[k] = std::clamp(phi(k) - ground, -1.0, 1.0);
  return out;
}

double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return bl_distance_detailed(mu, nu).value;
}

NestedResult nested_w1(const MetaMeasure& nu, const MetaMeasure& nu_prime, GroundMetric ground,
                       unsigned threads) {
  if (nu.dim() != nu_prime.dim()) throw DimensionMismatch("nested_w1: ground dimensions differ");
  if (nu.size() == 0 || nu_prime.size() == 0) throw InvariantViolation("nested_w1: empty meta-measure");
  const double m_nu = meta_mass(nu);
  const double m_prime = meta_mass(nu_prime);
  check_equal_mass(m_nu, m_prime, "nested_w1 (meta level)");

  const std::size_t rows = nu.size();
  const std::size_t cols = nu_prime.size();
  std::vector<double> cost(rows * cols, 0.0);
  std::vector<std::exception_ptr> failures(rows * cols);
  detail::parallel_for(rows * cols, threads, [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    try {
      cost[cell] = ground == GroundMetric::W1 ? w1_exact(nu.atom(i), nu_prime.atom(j)).cost
                                              : bl_distance(nu.atom(i), nu_prime.atom(j));
    } catch (...) {
      failures[cell] = std::current_exception();
    }
  });
  for (std::size_t cell = 0; cell < failures.size(); ++cell) {
    if (!failures[cell]) continue;
    const std::string where = "nested_w1: ground metric failed for meta atoms (" +
                              std::to_string(cell / cols) + ", " + std::to_string(cell % cols) + "): ";
    try {
      std::rethrow_exception(failures[cell]);
    } catch (const MassMismatch& e) {
      throw MassMismatch(where + e.what());
    } catch (const std::exception& e) {
      throw InvariantViolation(where + e.what());
    }
  }

  const auto a = normalized(nu.weights(), m_nu);
  const auto b = normalized(nu_prime.weights(), m_prime);
  TransportSolution sol = solve_transport(a, b, cost);
  NestedResult out;
  out.plan = std::move(sol.plan);
  for (double& f : out.plan.flow) f *= m_nu;
  out.plan.cost *= m_nu;
  out.cost = out.plan.cost;
  return out;
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  out << "i,j,flow,cost_ij\n";
  char buf[128];
  for (std::size_t i = 0; i < plan.rows; ++i) {
    for (std::size_t j = 0; j < plan.cols; ++j) {
      if (plan.at(i, j) <= 0.0) continue;
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", i, j, plan.at(i, j), plan.unit_cost_at(i, j));
      out << buf;
    }
  }
}

}  // namespace mixop
