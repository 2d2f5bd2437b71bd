#include "mixop/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mixop/error.hpp"

namespace mixop {

MetaMeasure::MetaMeasure(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvariantViolation("meta-measure dimension must be at least 1");
}

MetaMeasure::MetaMeasure(std::size_t dim, std::vector<DiscreteMeasure> atoms,
                         std::vector<double> weights)
    : dim_(dim) {
  if (dim == 0) throw InvariantViolation("meta-measure dimension must be at least 1");
  if (atoms.size() != weights.size()) {
    throw InvariantViolation("meta-measure has " + std::to_string(atoms.size()) +
                             " atoms but " + std::to_string(weights.size()) + " weights");
  }
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].dim() != dim) {
      throw DimensionMismatch("meta atom " + std::to_string(j) + " has ground dimension " +
                              std::to_string(atoms[j].dim()) + ", expected " +
                              std::to_string(dim));
    }
    if (!std::isfinite(weights[j]) || weights[j] < 0.0) {
      throw InvariantViolation("meta atom " + std::to_string(j) +
                               " has a negative or non-finite weight");
    }
  }
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    auto it = std::find(atoms_.begin(), atoms_.end(), atoms[j]);
    if (it != atoms_.end()) {
      weights_[static_cast<std::size_t>(it - atoms_.begin())] += weights[j];
    } else {
      atoms_.push_back(std::move(atoms[j]));
      weights_.push_back(weights[j]);
    }
  }
  std::size_t kept = 0;
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    if (weights_[j] > 0.0) {
      if (kept != j) atoms_[kept] = std::move(atoms_[j]);
      weights_[kept] = weights_[j];
      ++kept;
    }
  }
  atoms_.erase(atoms_.begin() + static_cast<std::ptrdiff_t>(kept), atoms_.end());
  weights_.resize(kept);
  for (const auto& mu : atoms_) mass_bound_ = std::max(mass_bound_, mass(mu));
  if (!std::isfinite(mass_bound_)) throw InvariantViolation("meta-measure mass bound is infinite");
}

MetaMeasure MetaMeasure::dirac(DiscreteMeasure mu, double weight) {
  const std::size_t d = mu.dim();
  std::vector<DiscreteMeasure> atoms;
  atoms.push_back(std::move(mu));
  return MetaMeasure(d, std::move(atoms), {weight});
}

double meta_mass(const MetaMeasure& nu) {
  return std::accumulate(nu.weights().begin(), nu.weights().end(), 0.0);
}

DiscreteMeasure mix(const MetaMeasure& nu) {
  std::vector<Point> points;
  std::vector<double> weights;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const DiscreteMeasure& mu = nu.atom(j);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      points.push_back(mu.point(i));
      weights.push_back(nu.weight(j) * mu.weight(i));
    }
  }
  return DiscreteMeasure(nu.dim(), std::move(points), std::move(weights));
}

double mix_mass(const MetaMeasure& nu) {
  double total = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) total += nu.weight(j) * mass(nu.atom(j));
  return total;
}

MetaMeasure meta_linear_combination(std::span<const double> coeffs,
                                    std::span<const MetaMeasure> metas) {
  if (coeffs.size() != metas.size()) {
    throw InvariantViolation("meta_linear_combination: coefficient and measure counts differ");
  }
  if (metas.empty()) throw InvariantViolation("meta_linear_combination: no measures given");
  const std::size_t d = metas.front().dim();
  std::vector<DiscreteMeasure> atoms;
  std::vector<double> weights;
  for (std::size_t k = 0; k < metas.size(); ++k) {
    if (!std::isfinite(coeffs[k]) || coeffs[k] < 0.0) {
      throw InvariantViolation("meta_linear_combination: coefficient " + std::to_string(k) +
                               " is negative; only the positive cone is supported");
    }
    if (metas[k].dim() != d) throw DimensionMismatch("meta_linear_combination: mixed dimensions");
    for (std::size_t j = 0; j < metas[k].size(); ++j) {
      atoms.push_back(metas[k].atom(j));
      weights.push_back(coeffs[k] * metas[k].weight(j));
    }
  }
  return MetaMeasure(d, std::move(atoms), std::move(weights));
}

bool is_probability_ensemble(const MetaMeasure& nu, double tol) {
  if (std::abs(meta_mass(nu) - 1.0) > tol) return false;
  return std::all_of(nu.atoms().begin(), nu.atoms().end(),
                     [tol](const DiscreteMeasure& mu) { return std::abs(mass(mu) - 1.0) <= tol; });
}

}  // namespace mixop
