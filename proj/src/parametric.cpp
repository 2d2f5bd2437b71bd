#include <cmath>
#include <numeric>
#include <string>

#include "mixop/error.hpp"
#include "mixop/parametric.hpp"

namespace mixop {
namespace {

std::vector<double> quantile_grid(std::size_t n) {
  if (n == 0) throw InvariantViolation("n_quantiles must be at least 1");
  std::vector<double> z(n, 0.0);
  const double count = static_cast<double>(n);
  for (std::size_t i = 0; i < n / 2; ++i) {
    z[i] = normal_quantile((static_cast<double>(i) + 0.5) / count);
    z[n - 1 - i] = -z[i];
  }
  return z;
}

}  // namespace

ThetaPoint::ThetaPoint(double mean, double sd) : mean_(mean), sd_(sd) {
  if (!std::isfinite(mean)) throw InvariantViolation("theta mean must be finite");
  if (!std::isfinite(sd) || sd <= 0.0) {
    throw InvariantViolation("theta sd must be positive and finite, got " + std::to_string(sd));
  }
}

ThetaMeasure::ThetaMeasure(std::vector<ThetaPoint> t, std::vector<double> w)
    : thetas(std::move(t)), weights(std::move(w)) {
  if (thetas.size() != weights.size()) {
    throw InvariantViolation("theta measure has " + std::to_string(thetas.size()) + " thetas but " +
                             std::to_string(weights.size()) + " weights");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw InvariantViolation("theta weight " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

double theta_mass(const ThetaMeasure& lambda) {
  return std::accumulate(lambda.weights.begin(), lambda.weights.end(), 0.0);
}

DiscreteMeasure psi_normal(const ThetaPoint& theta, std::size_t n_quantiles) {
  const auto z = quantile_grid(n_quantiles);
  std::vector<Point> points;
  points.reserve(z.size());
  for (double zi : z) points.push_back(Point{theta.mean() + theta.sd() * zi});
  return DiscreteMeasure(1, std::move(points),
                         std::vector<double>(z.size(), 1.0 / static_cast<double>(z.size())));
}

MetaMeasure pushforward(const ThetaMeasure& lambda, std::size_t n_quantiles) {
  std::vector<DiscreteMeasure> atoms;
  atoms.reserve(lambda.thetas.size());
  for (std::size_t i = 0; i < lambda.thetas.size(); ++i) {
    try {
      atoms.push_back(psi_normal(lambda.thetas[i], n_quantiles));
    } catch (const Error& e) {
      throw InvariantViolation("pushforward: theta " + std::to_string(i) + ": " + e.what());
    }
  }
  return MetaMeasure(1, std::move(atoms), lambda.weights);
}

DiscreteMeasure mix_theta(const ThetaMeasure& lambda, std::size_t n_quantiles) {
  return mix(pushforward(lambda, n_quantiles));
}

double mean_abs_quantile(std::size_t n_quantiles) {
  const auto z = quantile_grid(n_quantiles);
  double s = 0.0;
  for (double zi : z) s += std::abs(zi);
  return s / static_cast<double>(z.size());
}

}  // namespace mixop
