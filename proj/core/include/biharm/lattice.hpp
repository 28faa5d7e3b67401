#pragma once

// Discrete geometry of the unit cube at spacing h = 1/m.
//
// Points are addressed by integer multi-indices in units of h. Each axis
// covers -1..m+1, i.e. [-h, 1+h]. The working set is
//
//   tilde = ([-h, 1+h]^n ∩ (hZ)^n) \ {-h, 1+h}^n
//
// split into Interior (every coordinate in 1..m-1), Boundary (inside the
// closed cube, at least one coordinate 0 or m) and Ghost (at least one
// coordinate -1 or m+1). For n = 1 the extreme-corner exclusion would remove
// both ghosts, so it only applies when n >= 2.
//
// Axes are 0-based throughout the C++ API.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace biharm {

inline constexpr int kMaxDim = 7;

using MultiIndex = std::array<int, kMaxDim>;

enum class PointTag : std::uint8_t { Interior, Boundary, Ghost, Outside };

enum class Side : std::uint8_t { Low, High };

/// A face of the cube: the hyperplane x_axis = 0 (Low) or x_axis = 1 (High).
struct Face {
  int axis = 0;
  Side side = Side::Low;
  friend bool operator==(const Face&, const Face&) = default;
};

struct PointClass {
  PointTag tag = PointTag::Outside;
  /// Faces containing the point (Boundary only).
  std::vector<Face> faces;
  /// Boundary point on an edge or vertex of the cube (two or more faces).
  bool singular = false;
  /// Ghost point at distance h from a singular boundary point.
  bool near_singular = false;
};

enum class PointSet : std::uint8_t {
  Interior,  ///< Ω^h
  Boundary,  ///< Γ^h
  Ghost,     ///< Ω̃^h \ (Ω^h ∪ Γ^h)
  Closure,   ///< Ω^h ∪ Γ^h
  Tilde,     ///< Ω̃^h
};

/// Immutable description of the grid and its index sets. Copies share the
/// materialized tables, so passing by value is cheap.
class GridSpec {
 public:
  static constexpr std::int64_t kNone = -1;

  int dim() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / m_; }

  /// Points of a set as indices into the Ω̃ flat order, lexicographic in
  /// the multi-index with axis 0 most significant.
  std::span<const std::int32_t> points(PointSet set) const;
  std::size_t size(PointSet set) const { return points(set).size(); }

  /// Flat Ω̃ index of a multi-index, or nullopt if it is not in Ω̃.
  std::optional<std::size_t> index_of(const MultiIndex& idx) const;
  MultiIndex multi_index(std::size_t flat) const;
  /// Coordinate of a flat point along one axis, in units of h.
  int coord(std::size_t flat, int axis) const;

  /// Flat index of the point `steps` lattice steps along `axis`, or kNone.
  std::int64_t shift(std::size_t flat, int axis, int steps) const;

  PointTag tag(std::size_t flat) const { return static_cast<PointTag>(t_->tag[flat]); }
  PointClass classify(const MultiIndex& idx) const;

  /// For ghosts with a single out-of-cube coordinate: the flat index of the
  /// mirror point across the face. kNone for ghosts with two or more such
  /// coordinates (which no discrete boundary condition constrains).
  std::int64_t mirror_source(std::size_t flat) const { return t_->mirror[flat]; }

  /// Γ^h_{ij}: boundary points z with z + h{0, e_i, -e_j, e_i - e_j} in [0,1]^n.
  std::vector<MultiIndex> gamma_ij(int i, int j) const;
  /// Membership test for Γ^h_{ij} on a flat index.
  bool in_gamma_ij(std::size_t flat, int i, int j) const;

  /// Whether the multi-index is in the closed cube [0, 1]^n.
  bool in_closure(const MultiIndex& idx) const;

 private:
  friend GridSpec build_grid(int n, int m);

  struct Tables {
    std::array<std::int64_t, kMaxDim> stride{};
    std::int64_t box_size = 0;
    std::vector<std::int32_t> box_to_flat;
    std::vector<std::int64_t> flat_to_box;
    std::vector<std::uint8_t> tag;
    std::vector<std::int64_t> mirror;
    std::vector<std::int32_t> interior, boundary, ghost, closure, tilde;
  };

  GridSpec(int n, int m, std::shared_ptr<const Tables> t) : n_(n), m_(m), t_(std::move(t)) {}
  std::int64_t box_of(const MultiIndex& idx) const;

  int n_ = 0;
  int m_ = 0;
  std::shared_ptr<const Tables> t_;
};

/// Builds the grid for Ω = (0,1)^n with h = 1/m. Throws SizingError unless
/// 1 <= n <= kMaxDim and m >= 4.
GridSpec build_grid(int n, int m);

/// Convenience wrapper around GridSpec::classify.
PointClass classify_point(const GridSpec& grid, const MultiIndex& idx);

/// Γ^h_{ij} with 0-based axes; throws DomainError for i == j or bad axes.
std::vector<MultiIndex> gamma_ij(const GridSpec& grid, int i, int j);

/// Builds a MultiIndex from a short coordinate list (remaining entries zero).
MultiIndex make_index(std::initializer_list<int> coords);

}  // namespace biharm
