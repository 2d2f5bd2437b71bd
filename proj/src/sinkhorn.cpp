#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mixop/error.hpp"
#include "mixop/transport.hpp"

namespace mixop {
namespace {

struct EntropicState {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

double log_sum_exp(const std::vector<double>& x) {
  const double c = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(c)) return c;
  double s = 0.0;
  for (double v : x) s += std::exp(v - c);
  return c + std::log(s);
}

// Log-domain Sinkhorn on unit-mass marginals a, b with cost C (n x m),
// annealing epsilon geometrically down to the target.
EntropicState entropic_transport(const std::vector<double>& a, const std::vector<double>& b,
                                 const std::vector<double>& c, const SinkhornOptions& opt) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> log_a(n), log_b(m);
  for (std::size_t i = 0; i < n; ++i) log_a[i] = std::log(a[i]);
  for (std::size_t j = 0; j < m; ++j) log_b[j] = std::log(b[j]);

  const double c_max = *std::max_element(c.begin(), c.end());
  std::vector<double> f(n, 0.0), g(m, 0.0), row(m), col(n);
  double eps = std::max(opt.epsilon, c_max);
  EntropicState st;

  auto update = [&](double e) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) row[j] = log_b[j] + (g[j] - c[i * m + j]) / e;
      f[i] = -e * log_sum_exp(row);
    }
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = log_a[i] + (f[i] - c[i * m + j]) / e;
      g[j] = -e * log_sum_exp(col);
    }
  };
  // Column marginals are exact after a g-update; measure the row violation.
  auto row_residual = [&](double e) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += std::exp(log_a[i] + log_b[j] + (f[i] + g[j] - c[i * m + j]) / e);
      r += std::abs(s - a[i]);
    }
    return r;
  };

  while (true) {
    const bool last = eps <= opt.epsilon;
    const double stage_tol = last ? opt.tolerance : std::max(opt.tolerance, 1e-6);
    while (true) {
      update(eps);
      ++st.iterations;
      if (st.iterations % 10 == 0 || st.iterations >= opt.max_iter) {
        st.residual = row_residual(eps);
        if (st.residual <= stage_tol) break;
        if (st.iterations >= opt.max_iter) {
          throw ConvergenceFailure("w1_sinkhorn did not converge within " + std::to_string(opt.max_iter) +
                                       " iterations (marginal residual " + std::to_string(st.residual) + ")",
                                   st.residual);
        }
      }
    }
    if (last) break;
    eps = std::max(opt.epsilon, eps * 0.5);
  }

  // Transport cost of the entropic plan; the entropy term is left out.
  double transport = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = std::exp(log_a[i] + log_b[j] + (f[i] + g[j] - c[i * m + j]) / eps);
      transport += p * c[i * m + j];
    }
  }
  st.value = std::max(0.0, transport);
  return st;
}

std::vector<double> costs(const DiscreteMeasure& x, const DiscreteMeasure& y) {
  std::vector<double> c(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) c[i * y.size() + j] = distance(x.point(i), y.point(j));
  }
  return c;
}

std::vector<double> unit(const DiscreteMeasure& x) {
  const double total = mass(x);
  std::vector<double> w(x.weights());
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

SinkhornResult w1_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const SinkhornOptions& options) {
  if (mu.dim() != nu.dim()) throw DimensionMismatch("w1_sinkhorn: measures live in different dimensions");
  if (mu.empty() || nu.empty()) throw InvariantViolation("w1_sinkhorn: empty measure");
  if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) {
    throw InvariantViolation("w1_sinkhorn: epsilon must be positive");
  }
  if (options.max_iter <= 0) throw InvariantViolation("w1_sinkhorn: max_iter must be positive");
  const double m_mu = mass(mu);
  const double m_nu = mass(nu);
  if (std::abs(m_mu - m_nu) > kTransportTolerance * std::max(m_mu, m_nu)) {
    throw MassMismatch("w1_sinkhorn: masses differ; normalize the inputs first");
  }

  const auto a = unit(mu);
  const auto b = unit(nu);
  EntropicState cross = entropic_transport(a, b, costs(mu, nu), options);
  SinkhornResult out{cross.value, cross.residual, cross.iterations};
  if (options.debiased) {
    const EntropicState self_a = entropic_transport(a, a, costs(mu, mu), options);
    const EntropicState self_b = entropic_transport(b, b, costs(nu, nu), options);
    out.value = std::max(0.0, cross.value - 0.5 * (self_a.value + self_b.value));
    out.residual = std::max({cross.residual, self_a.residual, self_b.residual});
    out.iterations += self_a.iterations + self_b.iterations;
  }
  out.value *= m_mu;
  return out;
}

double w1_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double epsilon, int max_iter) {
  SinkhornOptions opt;
  opt.epsilon = epsilon;
  opt.max_iter = max_iter;
  return w1_sinkhorn(mu, nu, opt).value;
}

}  // namespace mixop
