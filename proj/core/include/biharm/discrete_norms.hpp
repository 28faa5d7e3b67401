#pragma once

#include <array>
#include <optional>
#include <vector>

#include "biharm/difference_ops.hpp"
#include "biharm/lattice.hpp"

namespace biharm {

/// (v, w)_{L²_h(A)} = Σ_{x∈A} h^n v(x) w(x) over one of the grid's sets.
double l2h_inner(const LatticeField& v, const LatticeField& w, PointSet region);
double l2h_norm(const LatticeField& v, PointSet region);

/// Squared discrete Sobolev norm: values over Ω̃^h, first differences
/// D_i v(x) wherever x + he_i ∈ Ω̃^h, and D_i D_{-j} v(x) wherever all four
/// stencil points lie in Ω̃^h, each weighted by h^n.
double h2h_norm_squared(const LatticeField& v);
double h2h_norm(const LatticeField& v);

/// The discrete Hessian ∇²_h v at every point of Ω^h ∪ Γ^h, with v extended
/// by zero outside Ω̃^h. Entries at ghost points are zero and unused.
class HessianField {
 public:
  explicit HessianField(GridSpec grid);

  const GridSpec& grid() const noexcept { return grid_; }
  double operator()(std::size_t flat, int i, int j) const {
    return data_[flat * nn_ + static_cast<std::size_t>(i * grid_.dim() + j)];
  }
  double& operator()(std::size_t flat, int i, int j) {
    return data_[flat * nn_ + static_cast<std::size_t>(i * grid_.dim() + j)];
  }

 private:
  GridSpec grid_;
  std::size_t nn_;
  std::vector<double> data_;
};

HessianField hessian_field(const LatticeField& v);

enum class HessianFlavor {
  Star,   ///< Σ_{Ω^h ∪ Γ^h} Σ_{ij} h^n f_ij g_ij
  Tilde,  ///< Σ_{Ω^h} Σ_{ij} + ½ Σ_{Γ^h} Σ_i f_ii g_ii + Σ_{i≠j} Σ_{Γ^h_ij} f_ij g_ij
};

double hessian_inner(const HessianField& f, const HessianField& g, HessianFlavor flavor);
double hessian_norm(const HessianField& f, HessianFlavor flavor);

/// Multi-index inside a lattice hyperplane, in units of h (n-1 entries used).
using FacePoint = std::array<int, kMaxDim - 1>;

/// Values on finitely many points of a lattice hyperplane of (hZ)^n, with
/// an implicit zero everywhere else.
struct FaceField {
  int dim = 2;      ///< ambient dimension n; points have n-1 coordinates
  double h = 0.25;
  int axis = 0;     ///< normal axis of the hyperplane (informational)
  std::vector<FacePoint> points;
  std::vector<double> values;

  int face_dim() const noexcept { return dim - 1; }
  /// Throws ValidationError on size mismatch or duplicate points.
  void validate() const;
};

/// Σ h^{n-1} v(x) w(x) over the union of both supports.
double l2h_inner(const FaceField& v, const FaceField& w);
double l2h_norm(const FaceField& w);

/// Lattice points of [lo, hi]^{n-1} (bounds in physical units).
std::vector<FacePoint> face_box(int face_dim, double h, double lo, double hi);

/// [w]² = Σ_{x≠y} |w(x) - w(y)|² |x - y|^{-n} h^{2n-2} over ordered pairs of
/// the support united with `collar` (points where w is taken as zero). When
/// collar is nullopt the lattice points of [-2, 2]^{n-1} are used; pass an
/// empty vector to sum over the support alone.
double h_half_seminorm_squared(const FaceField& w,
                               const std::optional<std::vector<FacePoint>>& collar = std::nullopt);
double h_half_seminorm(const FaceField& w,
                       const std::optional<std::vector<FacePoint>>& collar = std::nullopt);
/// ‖w‖² = [w]² + ‖w‖²_{L²_h}.
double h_half_norm(const FaceField& w,
                   const std::optional<std::vector<FacePoint>>& collar = std::nullopt);

}  // namespace biharm
