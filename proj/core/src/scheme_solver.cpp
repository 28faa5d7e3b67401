#include "biharm/scheme_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "biharm/errors.hpp"
#include "biharm/mollifier.hpp"

namespace biharm {

LinearSystem::LinearSystem(GridSpec grid, BcScheme scheme)
    : grid_(std::move(grid)), scheme_(scheme) {
  const int n = grid_.dim();
  const auto interior = grid_.points(PointSet::Interior);
  const auto closure = grid_.points(PointSet::Closure);
  interior_.assign(interior.begin(), interior.end());
  closure_.assign(closure.begin(), closure.end());

  std::vector<std::int32_t> position(grid_.size(PointSet::Tilde), -1);
  for (std::size_t k = 0; k < interior_.size(); ++k)
    position[static_cast<std::size_t>(interior_[k])] = static_cast<std::int32_t>(k);

  for (std::int32_t g : grid_.points(PointSet::Ghost)) {
    std::int32_t src = -1;
    if (scheme_ == BcScheme::CenteredMirror) {
      const std::int64_t m = grid_.mirror_source(static_cast<std::size_t>(g));
      if (m != GridSpec::kNone) src = position[static_cast<std::size_t>(m)];
    }
    ghost_flat_.push_back(g);
    ghost_src_.push_back(src);
  }

  auto neighbors = [&](const std::vector<std::int32_t>& pts, std::vector<std::int32_t>& out) {
    out.reserve(pts.size() * 2 * static_cast<std::size_t>(n));
    for (std::int32_t p : pts)
      for (int a = 0; a < n; ++a)
        for (int s : {-1, 1}) {
          const std::int64_t q = grid_.shift(static_cast<std::size_t>(p), a, s);
          if (q == GridSpec::kNone) throw DomainError("LinearSystem: stencil leaves the grid");
          out.push_back(static_cast<std::int32_t>(q));
        }
  };
  neighbors(closure_, closure_nb_);
  neighbors(interior_, interior_nb_);
  work_full_.assign(grid_.size(PointSet::Tilde), 0.0);
  work_lap_.assign(grid_.size(PointSet::Tilde), 0.0);
}

void LinearSystem::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != interior_.size() || out.size() != interior_.size())
    throw ValidationError("LinearSystem::apply: vector length mismatch");
  const std::size_t deg = 2 * static_cast<std::size_t>(grid_.dim());
  const double inv_h2 = 1.0 / (grid_.h() * grid_.h());
  const double centre = -static_cast<double>(deg);

  std::fill(work_full_.begin(), work_full_.end(), 0.0);
  for (std::size_t k = 0; k < interior_.size(); ++k) work_full_[static_cast<std::size_t>(interior_[k])] = v[k];
  for (std::size_t k = 0; k < ghost_flat_.size(); ++k)
    if (ghost_src_[k] >= 0) work_full_[static_cast<std::size_t>(ghost_flat_[k])] = v[static_cast<std::size_t>(ghost_src_[k])];

  for (std::size_t k = 0; k < closure_.size(); ++k) {
    const auto z = static_cast<std::size_t>(closure_[k]);
    double s = centre * work_full_[z];
    for (std::size_t q = 0; q < deg; ++q) s += work_full_[static_cast<std::size_t>(closure_nb_[k * deg + q])];
    work_lap_[z] = s * inv_h2;
  }
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    const auto z = static_cast<std::size_t>(interior_[k]);
    double s = centre * work_lap_[z];
    for (std::size_t q = 0; q < deg; ++q) s += work_lap_[static_cast<std::size_t>(interior_nb_[k * deg + q])];
    out[k] = s * inv_h2;
  }
}

std::vector<double> LinearSystem::apply(std::span<const double> v) const {
  std::vector<double> out(interior_.size());
  apply(v, out);
  return out;
}

std::vector<double> LinearSystem::diagonal() const {
  const int n = grid_.dim();
  constexpr int kSpacing = 5;
  std::vector<double> diag(interior_.size(), 0.0), probe(interior_.size()), image(interior_.size());
  std::array<int, kMaxDim> cls{};
  while (true) {
    for (std::size_t k = 0; k < interior_.size(); ++k) {
      bool hit = true;
      for (int a = 0; a < n && hit; ++a)
        hit = grid_.coord(static_cast<std::size_t>(interior_[k]), a) % kSpacing == cls[a];
      probe[k] = hit ? 1.0 : 0.0;
    }
    apply(probe, image);
    for (std::size_t k = 0; k < interior_.size(); ++k)
      if (probe[k] != 0.0) diag[k] = image[k];
    int a = n - 1;
    while (a >= 0 && cls[a] == kSpacing - 1) {
      cls[a] = 0;
      --a;
    }
    if (a < 0) break;
    ++cls[a];
  }
  return diag;
}

LatticeField LinearSystem::complete(std::span<const double> v) const {
  if (v.size() != interior_.size()) throw ValidationError("LinearSystem::complete: length mismatch");
  LatticeField out(grid_);
  for (std::size_t k = 0; k < interior_.size(); ++k) out[static_cast<std::size_t>(interior_[k])] = v[k];
  for (std::size_t k = 0; k < ghost_flat_.size(); ++k)
    if (ghost_src_[k] >= 0) out[static_cast<std::size_t>(ghost_flat_[k])] = v[static_cast<std::size_t>(ghost_src_[k])];
  return out;
}

std::vector<double> LinearSystem::restrict(const LatticeField& field) const {
  std::vector<double> out(interior_.size());
  for (std::size_t k = 0; k < interior_.size(); ++k) out[k] = field[static_cast<std::size_t>(interior_[k])];
  return out;
}

std::vector<double> assemble_rhs(const SourceFunction& f, const GridSpec& grid) {
  const LatticeField smoothed = smooth_source(f, grid);
  const auto interior = grid.points(PointSet::Interior);
  std::vector<double> out(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) out[k] = smoothed[static_cast<std::size_t>(interior[k])];
  return out;
}

int default_maxit(const GridSpec& grid) {
  const double side = grid.m() + 1.0;
  return static_cast<int>(std::ceil(50.0 * std::pow(side, 0.5 * grid.dim()) * side));
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

SolveResult solve_system(const LinearSystem& system, std::span<const double> rhs,
                         const SolveOptions& options) {
  if (!(options.tol > 0.0 && options.tol < 1.0)) throw ValidationError("solve: tol must be in (0, 1)");
  if (options.maxit < 0) throw ValidationError("solve: maxit must be >= 1");
  const std::size_t N = system.unknowns();
  if (rhs.size() != N) throw ValidationError("solve: rhs length mismatch");
  const int maxit = options.maxit > 0 ? options.maxit : default_maxit(system.grid());

  std::vector<double> x(N, 0.0), r(rhs.begin(), rhs.end()), z(N), p(N), q(N);
  std::vector<double> inv_diag;
  if (options.jacobi) {
    inv_diag = system.diagonal();
    for (double& d : inv_diag) {
      if (!(d > 0.0)) throw ConvergenceError("solve: non-positive diagonal entry", {});
      d = 1.0 / d;
    }
  }
  auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (inv_diag.empty()) out = in;
    else
      for (std::size_t k = 0; k < N; ++k) out[k] = inv_diag[k] * in[k];
  };

  SolveResult result{system.complete(x), 0, 0.0, {}};
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    result.history.push_back(0.0);
    return result;
  }
  result.history.push_back(1.0);

  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  int it = 0;
  double rel = 1.0;
  while (rel > options.tol) {
    if (it >= maxit)
      throw ConvergenceError("solve: no convergence in " + std::to_string(maxit) +
                                 " iterations (relative residual " + std::to_string(rel) + ")",
                             result.history);
    system.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw ConvergenceError("solve: operator lost definiteness", result.history);
    const double alpha = rz / pq;
    for (std::size_t k = 0; k < N; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    ++it;
    rel = std::sqrt(dot(r, r)) / rhs_norm;
    result.history.push_back(rel);
    if (!std::isfinite(rel)) throw ConvergenceError("solve: residual is not finite", result.history);
    precondition(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < N; ++k) p[k] = z[k] + beta * p[k];
  }
  result.solution = system.complete(x);
  result.iterations = it;
  result.residual = rel;
  return result;
}

SolveResult solve(const SourceFunction& f, const GridSpec& grid, BcScheme scheme,
                  const SolveOptions& options) {
  const LinearSystem system(grid, scheme);
  const std::vector<double> rhs = assemble_rhs(f, grid);
  return solve_system(system, rhs, options);
}

}  // namespace biharm
