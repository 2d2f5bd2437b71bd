#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixop/measures.hpp"

namespace mixop {

/// Finitely supported non-negative measure over first-level measures.
///
/// Canonical form: atoms that are identical (atom-for-atom) are merged with
/// their weights summed, zero-weight atoms are dropped, and first-occurrence
/// order is kept.
class MetaMeasure {
 public:
  explicit MetaMeasure(std::size_t dim);
  MetaMeasure(std::size_t dim, std::vector<DiscreteMeasure> atoms, std::vector<double> weights);

  static MetaMeasure dirac(DiscreteMeasure mu, double weight = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<DiscreteMeasure>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const DiscreteMeasure& atom(std::size_t j) const { return atoms_[j]; }
  double weight(std::size_t j) const { return weights_[j]; }

  /// Largest first-level mass among the atoms; the norm bound of the ensemble.
  double mass_bound() const noexcept { return mass_bound_; }

  friend bool operator==(const MetaMeasure& a, const MetaMeasure& b) {
    return a.dim_ == b.dim_ && a.atoms_ == b.atoms_ && a.weights_ == b.weights_;
  }

 private:
  std::size_t dim_;
  std::vector<DiscreteMeasure> atoms_;
  std::vector<double> weights_;
  double mass_bound_ = 0.0;
};

/// Total weight of the meta-measure itself (nu of the whole class).
double meta_mass(const MetaMeasure& nu);

/// The mixed measure A -> sum_j b_j mu_j(A), flattened eagerly.
DiscreteMeasure mix(const MetaMeasure& nu);

/// sum_j b_j mass(mu_j), i.e. the mass of mix(nu).
double mix_mass(const MetaMeasure& nu);

MetaMeasure meta_linear_combination(std::span<const double> coeffs,
                                    std::span<const MetaMeasure> metas);

/// True when nu and every atom have unit mass within `tol`.
bool is_probability_ensemble(const MetaMeasure& nu, double tol = 1e-9);

}  // namespace mixop
