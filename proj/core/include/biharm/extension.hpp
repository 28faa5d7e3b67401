#pragma once

// Reflection extension, face Fourier analysis, inverse-trace lifts, cutoff
// and the discrete restriction operators used to build Ê and Ê*.
//
// Conventions: "face" data live on a lattice hyperplane normal to some axis;
// block data (BoxField) are dense rectangular lattice blocks addressed by
// multi-indices in units of h, with inclusive per-axis bounds.

#include <complex>
#include <functional>
#include <vector>

#include "biharm/difference_ops.hpp"
#include "biharm/discrete_norms.hpp"
#include "biharm/lattice.hpp"
#include "biharm/smooth_function.hpp"

namespace biharm {

enum class ExtensionRole {
  Extend,    ///< λ₋₁ + λ₋₂ 2^k = (-1)^k for k ∈ {2, 3}
  Restrict,  ///< λ₋₁ + λ₋₂ 2^k = (-1)^{k+1} for k ∈ {0, 1}
};

struct ExtensionCoefficients {
  ExtensionRole role = ExtensionRole::Extend;
  double lambda_1 = 1.0;
  double lambda_m1 = 0.0;
  double lambda_m2 = 0.0;
  /// λ_ε for ε ∈ {1, -1, -2}.
  double lambda(int eps) const;
};

/// Solves the 2×2 moment system of the given role.
ExtensionCoefficients extension_coefficients(ExtensionRole role);

/// ũ(x) = Σ λ_{ε₁}···λ_{εₙ} u(ε₁x₁, ..., εₙxₙ), ε_a = 1 where x_a >= 0 and
/// ε_a ∈ {-1, -2} where x_a < 0. u must be supported in [0, 2/3)^n; the
/// result is zero outside (-2/3, 2/3)^n and reflected reads beyond 1 are
/// taken as zero without evaluating u.
SourceFunction extend_even(SourceFunction u, int n);

/// Univariate form of the same extension, derivatives included.
Univariate extend_even(const Univariate& g);

/// Factor-wise extension of a tensor product (equal to the generic sum).
TensorProduct extend_even(const TensorProduct& u);

/// Dense values on the lattice block Π_a [lo_a, hi_a] (indices in units of h).
class BoxField {
 public:
  BoxField() = default;
  BoxField(int dim, double h, const MultiIndex& lo, const MultiIndex& hi);

  int dim() const noexcept { return dim_; }
  double h() const noexcept { return h_; }
  const MultiIndex& lo() const noexcept { return lo_; }
  const MultiIndex& hi() const noexcept { return hi_; }
  int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }
  std::size_t size() const noexcept { return values_.size(); }

  bool contains(const MultiIndex& idx) const;
  /// DomainError outside the block.
  double at(const MultiIndex& idx) const;
  double& ref(const MultiIndex& idx);
  /// Zero outside the block.
  double value_or_zero(const MultiIndex& idx) const;

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t offset(const MultiIndex& idx) const;
  MultiIndex index(std::size_t offset) const;

 private:
  int dim_ = 0;
  double h_ = 0.0;
  MultiIndex lo_{};
  MultiIndex hi_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::vector<double> values_;
};

/// γ_k for k ∈ {-m+1, ..., m}^{d}, stored lexicographically with
/// offset k_a + m - 1 along axis a (axis 0 most significant).
struct FourierCoeffs {
  int face_dim = 1;
  int m = 4;
  std::vector<std::complex<double>> gamma;

  double h() const { return 1.0 / m; }
  int modes_per_axis() const { return 2 * m; }
  std::complex<double> at(const std::array<int, kMaxDim>& k) const;
};

/// γ_k = (h/2)^d Σ_{ξ ∈ [-1, 1)^d ∩ (hZ)^d} g(ξ) e^{-iπ k·ξ} for face data
/// viewed as a function on the period-2 torus. Support points outside
/// [-1, 1)^d are rejected with ValidationError.
FourierCoeffs fourier_coeffs(const FaceField& g, int m);

/// Σ_k γ_k e^{iπ k·x} at the lattice points of [-1, 1)^d, real part, as a
/// BoxField of dimension d over indices [-m, m-1].
BoxField inverse_fourier(const FourierCoeffs& c);

enum class TraceVariant {
  Centered,  ///< a: normalizer cosh(|k|h), reproduces D_{0,n} data
  OneSided,  ///< a*: normalizer e^{|k|h}, reproduces D_{-n} data
};

/// a(x', x_n) = Re Σ_k γ_k / N(|k|) · x_n e^{-|k| x_n} e^{iπ k·x'} on the
/// block [-m, m-1]^{d} × [normal_lo, normal_hi], with the normal direction
/// inserted at position normal_axis of a (d+1)-dimensional BoxField.
BoxField inverse_trace(const FourierCoeffs& c, TraceVariant variant, int normal_axis,
                       int normal_lo, int normal_hi);

/// Univariate cutoff η with η = 1 on [-3/4, 3/4] and η = 0 outside (-1, 1).
struct CutoffProfile {
  std::function<double(double)> eta;
  /// Quintic smoothstep on 3/4 <= |t| <= 1 (C² joins).
  static CutoffProfile smoothstep();
};

/// Multiplies by η(x₀)···η(x_{d-1}).
BoxField apply_cutoff(const BoxField& field, const CutoffProfile& profile);
LatticeField apply_cutoff(const LatticeField& field, const CutoffProfile& profile);

enum class RestrictVariant {
  Mirror,  ///< R_h: layer x_a = -h receives Ru(x + 2he_a)
  Star,    ///< R*_h: zero outside the closed orthant
};

/// Tensorized restriction Ru(x) = Σ λ_ε u(εx) with restrict-role
/// coefficients along each of `axes`, followed by the variant's rule off the
/// orthant. Other axes are carried along unchanged (slice-wise application).
/// Each restricted axis must satisfy lo <= -2·hi so that every reflected
/// read lies in the block; DomainError otherwise.
BoxField project_Rh(const BoxField& w, RestrictVariant variant, const std::vector<int>& axes);
/// All axes of w.
BoxField project_Rh(const BoxField& w, RestrictVariant variant);

/// g_{h,i} (Centered, from D_{0,i}ũ) or g*_{h,i} (OneSided, from D_{-i}ũ)
/// on the face x_axis = 0: the difference quotient at in-plane points with
/// coordinates > 0 before `axis` and >= 0 after it, within [0, 1).
FaceField face_data(const SourceFunction& u_tilde, const GridSpec& grid, int axis,
                    TraceVariant variant);

/// Ê (Centered) or Ê* (OneSided) on Ω̃^h: sum over faces x_i = 0 of
/// R_h(η a_i) (R*_h for OneSided); Centered also mirrors the far-face ghosts.
/// Throws ConstructionError when Ê ≠ 0 on Γ^h or the boundary differences
/// fail to match those of u_tilde (1e-8).
LatticeField build_E_hat(const SourceFunction& u_tilde, const GridSpec& grid, TraceVariant variant,
                         const CutoffProfile& profile = CutoffProfile::smoothstep());

struct BoundaryMatch {
  double max_value = 0.0;       ///< max |Ê| on Γ^h
  double max_difference = 0.0;  ///< max boundary-difference mismatch
};

/// The two post-conditions of build_E_hat, evaluated on a candidate field.
BoundaryMatch boundary_match(const LatticeField& e_hat, const SourceFunction& u_tilde,
                             TraceVariant variant);

}  // namespace biharm
