#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mixop/ground.hpp"

namespace mixop {

/// Atoms closer than this are one atom after canonicalization.
inline constexpr double kMergeTolerance = 1e-12;
/// An atom whose boundary distance is at most this lies on the boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Finitely supported non-negative measure on R^d.
///
/// Construction canonicalizes: atoms are sorted lexicographically, atoms within
/// kMergeTolerance of an earlier atom are merged into it (weights summed in
/// sorted order) and zero-weight atoms are dropped. The zero measure is the
/// empty atom list.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::size_t dim);
  DiscreteMeasure(std::size_t dim, std::vector<Point> points, std::vector<double> weights);

  static DiscreteMeasure dirac(Point p, double weight = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::size_t dim_;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

double mass(const DiscreteMeasure& mu);

/// Sum of weight_i * f(point_i) in atom order. Throws InvariantViolation
/// naming the atom when f returns a non-finite value.
double integrate(const DiscreteMeasure& mu, const std::function<double(const Point&)>& f);

/// mu(A): total weight of atoms inside the closed set A.
double measure_of_set(const DiscreteMeasure& mu, const TestSet& a);

/// mu(boundary of A): total weight of atoms within kBoundaryTolerance of the boundary.
double boundary_mass(const DiscreteMeasure& mu, const TestSet& a);

/// Smallest distance from an atom of mu to the boundary of A (+inf for the zero measure).
double min_boundary_distance(const DiscreteMeasure& mu, const TestSet& a);

/// sum_i coeffs_i * measures_i over the positive cone.
DiscreteMeasure linear_combination(std::span<const double> coeffs,
                                   std::span<const DiscreteMeasure> measures);

/// Returns mu with every atom moved by `offset`.
DiscreteMeasure translate(const DiscreteMeasure& mu, std::span<const double> offset);

/// Returns mu with all weights multiplied by factor >= 0.
DiscreteMeasure scale(const DiscreteMeasure& mu, double factor);

}  // namespace mixop
