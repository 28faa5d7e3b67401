#pragma once

#include <cstddef>
#include <vector>

#include "biharm/difference_ops.hpp"
#include "biharm/lattice.hpp"
#include "biharm/smooth_function.hpp"

namespace biharm {

/// The scheme posed on the interior unknowns: v ↦ Δ²_h(fill_ghosts(v)) on
/// Ω^h, applied matrix-free. Vectors are indexed like grid.points(Interior).
class LinearSystem {
 public:
  LinearSystem(GridSpec grid, BcScheme scheme);

  const GridSpec& grid() const noexcept { return grid_; }
  BcScheme scheme() const noexcept { return scheme_; }
  std::size_t unknowns() const noexcept { return interior_.size(); }

  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> v) const;

  /// Diagonal of the operator, by probing with unit vectors on residue
  /// classes mod 5 (5^n applications).
  std::vector<double> diagonal() const;

  /// Interior values completed with zero boundary values and scheme ghosts.
  LatticeField complete(std::span<const double> v) const;
  /// Restriction of a lattice field to the interior unknowns.
  std::vector<double> restrict(const LatticeField& field) const;

 private:
  GridSpec grid_;
  BcScheme scheme_;
  std::vector<std::int32_t> interior_;
  std::vector<std::int32_t> closure_;
  // Interior position feeding each ghost, or -1 for a zero ghost.
  std::vector<std::int32_t> ghost_flat_;
  std::vector<std::int32_t> ghost_src_;
  // 2n neighbor flats of every closure point and of every interior point.
  std::vector<std::int32_t> closure_nb_;
  std::vector<std::int32_t> interior_nb_;
  mutable std::vector<double> work_full_;
  mutable std::vector<double> work_lap_;
};

/// T^{h,2,...,2} f on Ω^h as an interior vector.
std::vector<double> assemble_rhs(const SourceFunction& f, const GridSpec& grid);

struct SolveOptions {
  double tol = 1e-10;
  /// 0 selects default_maxit(grid).
  int maxit = 0;
  bool jacobi = false;
};

/// 50·(m+1)^{n/2} · (m+1): CG needs O(√κ) = O(h⁻²) steps on this operator.
int default_maxit(const GridSpec& grid);

struct SolveResult {
  LatticeField solution;  ///< completed field on Ω̃^h
  int iterations = 0;
  double residual = 0.0;  ///< final ‖r‖ / ‖rhs‖
  std::vector<double> history;
};

/// Conjugate gradients from a zero initial guess on rhs (interior vector).
/// ConvergenceError with the residual history if maxit is exhausted.
SolveResult solve_system(const LinearSystem& system, std::span<const double> rhs,
                         const SolveOptions& options = {});

/// assemble_rhs + solve_system.
SolveResult solve(const SourceFunction& f, const GridSpec& grid, BcScheme scheme,
                  const SolveOptions& options = {});

}  // namespace biharm
