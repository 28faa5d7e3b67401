#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "biharm/lattice.hpp"

namespace biharm {

/// Real values on Ω̃^h in the grid's flat order.
class LatticeField {
 public:
  explicit LatticeField(GridSpec grid);
  LatticeField(GridSpec grid, std::vector<double> values);

  /// Samples fn(x) at x = h * idx for every point of Ω̃^h.
  static LatticeField sample(GridSpec grid, const std::function<double(std::span<const double>)>& fn);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

  /// Value at a multi-index; DomainError if the point is not in Ω̃^h.
  double at(const MultiIndex& idx) const;
  /// Value at a multi-index, zero outside Ω̃^h.
  double value_or_zero(const MultiIndex& idx) const;
  void set(const MultiIndex& idx, double value);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Discrete boundary condition. CenteredMirror: U = 0 and D_{0,ν}U = 0 on Γ^h.
/// OneSidedZero: U = 0 on Ω̃^h \ Ω^h.
enum class BcScheme { CenteredMirror, OneSidedZero };

enum class DiffKind { Forward, Backward, Centered };

/// D^h_i, D^h_{-i} or D^h_{0,i} at a point. DomainError if a stencil point
/// falls outside Ω̃^h.
double diff(const LatticeField& field, int axis, DiffKind kind, const MultiIndex& point);

/// Row-major n×n tuple of a discrete Hessian.
struct HessianValue {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> entries{};
  double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
  double& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * n + j)]; }
};

/// Entry (i, j) is D^h_i D^h_{-j} v at the point.
HessianValue discrete_hessian(const LatticeField& field, const MultiIndex& point);

/// Σ_i D^h_i D^h_{-i} v.
double discrete_laplacian(const LatticeField& field, const MultiIndex& point);

/// Δ_h ∘ Δ_h; needs the full width-2 stencil inside Ω̃^h.
double discrete_bilaplacian(const LatticeField& field, const MultiIndex& point);

/// Completes a field given on Ω^h ∪ Γ^h (boundary values must be exactly
/// zero) with ghost values for the scheme. Mirror ghosts copy the value
/// across the face, which is zero for ghosts next to singular boundary
/// points; ghosts with two or more out-of-cube coordinates are set to zero.
LatticeField fill_ghosts(const LatticeField& interior_and_boundary, BcScheme scheme);

const char* to_string(BcScheme scheme);

}  // namespace biharm
