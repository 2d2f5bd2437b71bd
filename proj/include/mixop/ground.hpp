#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mixop {

/// A point of the ground space R^d. Coordinates are always finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Euclidean distance. Throws DimensionMismatch for points of different dimension.
double distance(const Point& p, const Point& q);

/// Closed axis-aligned box, lo_i <= x_i <= hi_i.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Closed ball {x : |x - center| <= radius}.
struct Ball {
  Point center;
  double radius = 0.0;
};

/// Closed half-space {x : normal . x <= offset}.
struct HalfSpace {
  std::vector<double> normal;
  double offset = 0.0;
};

/// A representable Borel test set. Every kind is closed, so boundary
/// points are members.
class TestSet {
 public:
  using Shape = std::variant<Box, Ball, HalfSpace>;

  static TestSet box(std::vector<double> lo, std::vector<double> hi);
  static TestSet ball(Point center, double radius);
  static TestSet half_space(std::vector<double> normal, double offset);

  std::size_t dim() const noexcept;
  const Shape& shape() const noexcept { return shape_; }
  std::string kind_name() const;

  bool contains(const Point& p) const;

  /// Exact Euclidean distance from p to the topological boundary of the set.
  double boundary_distance(const Point& p) const;

 private:
  explicit TestSet(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

inline bool contains(const TestSet& a, const Point& p) { return a.contains(p); }
inline double boundary_distance(const TestSet& a, const Point& p) {
  return a.boundary_distance(p);
}

}  // namespace mixop
