#include "biharm/mollifier.hpp"

#include <array>
#include <cmath>
#include <string>

#include "biharm/errors.hpp"

namespace biharm {

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {-0.8611363115940526, -0.3399810435848563,
                                            0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGlWeights = {0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538};

}  // namespace

double bspline_eval(int j, double t) {
  const double a = std::abs(t);
  switch (j) {
    case 1:
      return a <= 0.5 ? 1.0 : 0.0;
    case 2:
      return a < 1.0 ? 1.0 - a : 0.0;
    case 3:
      if (a <= 0.5) return 0.75 - a * a;
      if (a < 1.5) return 0.5 * (1.5 - a) * (1.5 - a);
      return 0.0;
    case 4:
      if (a <= 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
      if (a < 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
      return 0.0;
    default:
      throw DomainError("bspline_eval: degree index must be in {1, 2, 3, 4}, got " +
                        std::to_string(j));
  }
}

SourceFunction mollify_axis(SourceFunction f, int axis, double h) {
  return [f = std::move(f), axis, h](std::span<const double> x) {
    std::array<double, kMaxDim> y{};
    std::copy(x.begin(), x.end(), y.begin());
    const std::span<const double> ys(y.data(), x.size());
    const double x0 = x[static_cast<std::size_t>(axis)];
    double sum = 0.0;
    // Panels t ∈ [-1, 0] and [0, 1], each mapped from [-1, 1] by t = c + s/2.
    for (double center : {-0.5, 0.5}) {
      for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
        const double t = center + 0.5 * kGlNodes[q];
        y[static_cast<std::size_t>(axis)] = x0 + h * t;
        const double v = f(ys);
        if (!std::isfinite(v)) throw QuadratureError("mollify_axis: non-finite integrand");
        sum += 0.5 * kGlWeights[q] * (1.0 - std::abs(t)) * v;
      }
    }
    return sum;
  };
}

LatticeField smooth_source(const SourceFunction& f, const GridSpec& grid,
                           std::optional<int> skip_axis, PointSet region) {
  const int n = grid.dim();
  if (skip_axis && (*skip_axis < 0 || *skip_axis >= n))
    throw DomainError("smooth_source: skip axis out of range");

  SourceFunction smoothed = f;
  for (int a = n - 1; a >= 0; --a) {
    if (skip_axis && *skip_axis == a) continue;
    smoothed = mollify_axis(std::move(smoothed), a, grid.h());
  }

  LatticeField out(grid);
  const double h = grid.h();
  std::array<double, kMaxDim> x{};
  for (std::int32_t p : grid.points(region)) {
    const auto k = static_cast<std::size_t>(p);
    for (int a = 0; a < n; ++a) x[a] = h * grid.coord(k, a);
    const double v = smoothed(std::span<const double>(x.data(), static_cast<std::size_t>(n)));
    if (!std::isfinite(v)) throw QuadratureError("smooth_source: non-finite result");
    out[k] = v;
  }
  return out;
}

CommutationCheck commutation_residual(const SourceFunction& f, const SourceFunction& d2f,
                                      const GridSpec& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) throw DomainError("commutation_residual: bad axis");
  const SourceFunction smoothed = mollify_axis(d2f, axis, grid.h());
  const int n = grid.dim();
  const double h = grid.h();

  CommutationCheck out;
  std::array<double, kMaxDim> x{};
  const auto xs = std::span<const double>(x.data(), static_cast<std::size_t>(n));
  for (std::int32_t p : grid.points(PointSet::Interior)) {
    const auto k = static_cast<std::size_t>(p);
    for (int a = 0; a < n; ++a) x[a] = h * grid.coord(k, a);
    const double t = smoothed(xs);
    const double xa = x[axis];
    const double centre = f(xs);
    x[axis] = xa + h;
    const double plus = f(xs);
    x[axis] = xa - h;
    const double minus = f(xs);
    x[axis] = xa;
    const double second = (plus - 2.0 * centre + minus) / (h * h);
    out.max_abs = std::max(out.max_abs, std::abs(t - second));
    out.scale = std::max(out.scale, std::abs(second));
  }
  return out;
}

}  // namespace biharm
