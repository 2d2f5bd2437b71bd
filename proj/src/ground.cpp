#include "mixop/ground.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixop/error.hpp"

namespace mixop {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvariantViolation(std::string(what) + " has a non-finite coordinate");
    }
  }
}

void require_dim(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw DimensionMismatch("dimension mismatch: expected " + std::to_string(expected) +
                            ", got " + std::to_string(actual));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  require_finite(coords_, "point");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

double distance(const Point& p, const Point& q) {
  require_dim(p.dim(), q.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double d = p[i] - q[i];
    s += d * d;
  }
  return std::sqrt(s);
}

TestSet TestSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) {
    throw DimensionMismatch("box bounds have different lengths");
  }
  require_finite(lo, "box lower bound");
  require_finite(hi, "box upper bound");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) {
      throw InvariantViolation("box axis " + std::to_string(i) + " has lo > hi");
    }
  }
  return TestSet(Box{std::move(lo), std::move(hi)});
}

TestSet TestSet::ball(Point center, double radius) {
  if (!std::isfinite(radius) || radius < 0.0) {
    throw InvariantViolation("ball radius must be finite and >= 0");
  }
  return TestSet(Ball{std::move(center), radius});
}

TestSet TestSet::half_space(std::vector<double> normal, double offset) {
  require_finite(normal, "half-space normal");
  if (!std::isfinite(offset)) throw InvariantViolation("half-space offset must be finite");
  if (dot(normal, normal) <= 0.0) {
    throw InvariantViolation("half-space normal must be nonzero");
  }
  return TestSet(HalfSpace{std::move(normal), offset});
}

std::size_t TestSet::dim() const noexcept {
  struct {
    std::size_t operator()(const Box& b) const { return b.lo.size(); }
    std::size_t operator()(const Ball& b) const { return b.center.dim(); }
    std::size_t operator()(const HalfSpace& h) const { return h.normal.size(); }
  } visitor;
  return std::visit(visitor, shape_);
}

std::string TestSet::kind_name() const {
  switch (shape_.index()) {
    case 0: return "box";
    case 1: return "ball";
    default: return "halfspace";
  }
}

bool TestSet::contains(const Point& p) const {
  require_dim(dim(), p.dim());
  if (const auto* b = std::get_if<Box>(&shape_)) {
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (p[i] < b->lo[i] || p[i] > b->hi[i]) return false;
    }
    return true;
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return distance(p, b->center) <= b->radius;
  }
  const auto& h = std::get<HalfSpace>(shape_);
  return dot(h.normal, p.coords()) <= h.offset;
}

double TestSet::boundary_distance(const Point& p) const {
  require_dim(dim(), p.dim());
  if (const auto* b = std::get_if<Box>(&shape_)) {
    bool inside = true;
    double outside_sq = 0.0;
    double inside_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double below = b->lo[i] - p[i];
      const double above = p[i] - b->hi[i];
      const double excess = std::max({below, above, 0.0});
      if (excess > 0.0) inside = false;
      outside_sq += excess * excess;
      inside_min = std::min({inside_min, p[i] - b->lo[i], b->hi[i] - p[i]});
    }
    if (!inside) return std::sqrt(outside_sq);
    // zero-dimensional box: the single point is its own boundary
    return p.dim() == 0 ? 0.0 : inside_min;
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return std::abs(distance(p, b->center) - b->radius);
  }
  const auto& h = std::get<HalfSpace>(shape_);
  return std::abs(dot(h.normal, p.coords()) - h.offset) / std::sqrt(dot(h.normal, h.normal));
}

}  // namespace mixop
