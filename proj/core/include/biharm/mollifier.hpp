#pragma once

#include <optional>

#include "biharm/difference_ops.hpp"
#include "biharm/lattice.hpp"
#include "biharm/smooth_function.hpp"

namespace biharm {

/// Centered B-spline θ_j, j ∈ {1, 2, 3, 4}: θ_1 is the indicator of
/// [-1/2, 1/2] and θ_{j+1} = θ_j * θ_1. Support [-j/2, j/2], unit mass.
double bspline_eval(int j, double t);

/// T^{h,2}_axis f(x) = ∫ f(x + h t e_axis) θ_2(t) dt, by 4-point
/// Gauss-Legendre on each of the panels [-1, 0] and [0, 1]. The result is
/// exact for integrands that are polynomials of degree <= 7 along the axis.
SourceFunction mollify_axis(SourceFunction f, int axis, double h);

/// (T^{h,2}_1 ∘ ... ∘ T^{h,2}_n f) with the factor along skip_axis omitted,
/// sampled on `region` (other points of the returned field are zero).
/// QuadratureError if the integrand is non-finite anywhere.
LatticeField smooth_source(const SourceFunction& f, const GridSpec& grid,
                           std::optional<int> skip_axis = std::nullopt,
                           PointSet region = PointSet::Interior);

struct CommutationCheck {
  double max_abs = 0.0;  ///< max |T^{h,2}_i ∂_i² f - D_i D_{-i} f| over Ω^h
  double scale = 0.0;    ///< max |D_i D_{-i} f| over the same nodes
  double relative() const { return scale > 0.0 ? max_abs / scale : max_abs; }
};

/// Checks D_i D_{-i} f = T^{h,2}_i ∂_i² f at the nodes of Ω^h, with the exact
/// second derivative supplied by the caller.
CommutationCheck commutation_residual(const SourceFunction& f, const SourceFunction& d2f,
                                      const GridSpec& grid, int axis);

}  // namespace biharm
