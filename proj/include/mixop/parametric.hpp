#pragma once

#include <cstddef>
#include <vector>

#include "mixop/measures.hpp"
#include "mixop/mixing.hpp"

namespace mixop {

inline constexpr std::size_t kDefaultQuantiles = 64;

/// Standard normal quantile function (Wichura's AS241, about 1e-16 relative).
/// p must lie in (0, 1).
double normal_quantile(double p);

/// Standard normal distribution function via erfc.
double normal_cdf(double x);

/// Location-scale parameter of the normal family.
class ThetaPoint {
 public:
  ThetaPoint(double mean, double sd);
  double mean() const noexcept { return mean_; }
  double sd() const noexcept { return sd_; }
  friend bool operator==(const ThetaPoint&, const ThetaPoint&) = default;

 private:
  double mean_;
  double sd_;
};

/// Finitely supported non-negative measure on the parameter half-plane.
struct ThetaMeasure {
  std::vector<ThetaPoint> thetas;
  std::vector<double> weights;

  ThetaMeasure() = default;
  ThetaMeasure(std::vector<ThetaPoint> thetas, std::vector<double> weights);
};

double theta_mass(const ThetaMeasure& lambda);

/// Quantized normal N(mean, sd^2): n equally weighted atoms at mean + sd * z_i,
/// z_i the standard normal quantile of (i - 0.5) / n. The quantiles are
/// mirrored so the atom profile is exactly symmetric about the mean.
DiscreteMeasure psi_normal(const ThetaPoint& theta, std::size_t n_quantiles = kDefaultQuantiles);

/// Image of lambda under psi: same weights, atoms psi_normal(theta_i).
MetaMeasure pushforward(const ThetaMeasure& lambda, std::size_t n_quantiles = kDefaultQuantiles);

/// Mix composed with the pushforward.
DiscreteMeasure mix_theta(const ThetaMeasure& lambda, std::size_t n_quantiles = kDefaultQuantiles);

/// Mean of |z_i| over the quantization grid; the W1 cost of changing sd by one unit.
double mean_abs_quantile(std::size_t n_quantiles = kDefaultQuantiles);

}  // namespace mixop
