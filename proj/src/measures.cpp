#include "mixop/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mixop/error.hpp"

namespace mixop {
namespace {

void check_coefficient(double c) {
  if (!std::isfinite(c) || c < 0.0) {
    throw InvariantViolation("linear combinations are restricted to the positive cone: "
                             "coefficient " + std::to_string(c) + " is negative or non-finite");
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvariantViolation("measure dimension must be at least 1");
}

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<Point> points,
                                 std::vector<double> weights)
    : dim_(dim) {
  if (dim == 0) throw InvariantViolation("measure dimension must be at least 1");
  if (points.size() != weights.size()) {
    throw InvariantViolation("measure has " + std::to_string(points.size()) + " points but " +
                             std::to_string(weights.size()) + " weights");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != dim) {
      throw DimensionMismatch("atom " + std::to_string(i) + " has dimension " +
                              std::to_string(points[i].dim()) + ", measure has " +
                              std::to_string(dim));
    }
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw InvariantViolation("atom " + std::to_string(i) +
                               " has a negative or non-finite weight");
    }
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  points_.reserve(points.size());
  weights_.reserve(points.size());
  for (std::size_t idx : order) {
    const Point& p = points[idx];
    bool merged = false;
    // Representatives are sorted by first coordinate; only a window can be in range.
    for (std::size_t r = points_.size(); r-- > 0;) {
      if (points_[r][0] < p[0] - kMergeTolerance) break;
      if (distance(points_[r], p) <= kMergeTolerance) {
        weights_[r] += weights[idx];
        merged = true;
        break;
      }
    }
    if (!merged) {
      points_.push_back(p);
      weights_.push_back(weights[idx]);
    }
  }

  std::size_t kept = 0;
  for (std::size_t r = 0; r < points_.size(); ++r) {
    if (weights_[r] > 0.0) {
      if (kept != r) points_[kept] = std::move(points_[r]);
      weights_[kept] = weights_[r];
      ++kept;
    }
  }
  points_.resize(kept);
  weights_.resize(kept);

  if (!std::isfinite(std::accumulate(weights_.begin(), weights_.end(), 0.0))) {
    throw InvariantViolation("measure total mass is not finite");
  }
}

DiscreteMeasure DiscreteMeasure::dirac(Point p, double weight) {
  const std::size_t d = p.dim();
  return DiscreteMeasure(d, {std::move(p)}, {weight});
}

double mass(const DiscreteMeasure& mu) {
  return std::accumulate(mu.weights().begin(), mu.weights().end(), 0.0);
}

double integrate(const DiscreteMeasure& mu, const std::function<double(const Point&)>& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double v = f(mu.point(i));
    if (!std::isfinite(v)) {
      throw InvariantViolation("integrand is not finite at atom " + std::to_string(i));
    }
    total += mu.weight(i) * v;
  }
  return total;
}

double measure_of_set(const DiscreteMeasure& mu, const TestSet& a) {
  if (a.dim() != mu.dim()) throw DimensionMismatch("test set and measure dimensions differ");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (a.contains(mu.point(i))) total += mu.weight(i);
  }
  return total;
}

double boundary_mass(const DiscreteMeasure& mu, const TestSet& a) {
  if (a.dim() != mu.dim()) throw DimensionMismatch("test set and measure dimensions differ");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (a.boundary_distance(mu.point(i)) <= kBoundaryTolerance) total += mu.weight(i);
  }
  return total;
}

double min_boundary_distance(const DiscreteMeasure& mu, const TestSet& a) {
  if (a.dim() != mu.dim()) throw DimensionMismatch("test set and measure dimensions differ");
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : mu.points()) best = std::min(best, a.boundary_distance(p));
  return best;
}

DiscreteMeasure linear_combination(std::span<const double> coeffs,
                                   std::span<const DiscreteMeasure> measures) {
  if (coeffs.size() != measures.size()) {
    throw InvariantViolation("linear_combination: coefficient and measure counts differ");
  }
  if (measures.empty()) throw InvariantViolation("linear_combination: no measures given");
  const std::size_t d = measures.front().dim();
  std::vector<Point> points;
  std::vector<double> weights;
  for (std::size_t k = 0; k < measures.size(); ++k) {
    check_coefficient(coeffs[k]);
    if (measures[k].dim() != d) throw DimensionMismatch("linear_combination: mixed dimensions");
    for (std::size_t i = 0; i < measures[k].size(); ++i) {
      points.push_back(measures[k].point(i));
      weights.push_back(coeffs[k] * measures[k].weight(i));
    }
  }
  return DiscreteMeasure(d, std::move(points), std::move(weights));
}

DiscreteMeasure translate(const DiscreteMeasure& mu, std::span<const double> offset) {
  if (offset.size() != mu.dim()) throw DimensionMismatch("translate: offset dimension");
  std::vector<Point> points;
  points.reserve(mu.size());
  for (const Point& p : mu.points()) {
    std::vector<double> c(p.coords().begin(), p.coords().end());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += offset[i];
    points.emplace_back(std::move(c));
  }
  return DiscreteMeasure(mu.dim(), std::move(points), mu.weights());
}

DiscreteMeasure scale(const DiscreteMeasure& mu, double factor) {
  check_coefficient(factor);
  std::vector<double> w(mu.weights());
  for (double& x : w) x *= factor;
  return DiscreteMeasure(mu.dim(), mu.points(), std::move(w));
}

}  // namespace mixop
