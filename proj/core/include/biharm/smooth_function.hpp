#pragma once

// Closed-form test functions with exact derivatives.
//
// Manufactured solutions in this library are tensor products of univariate
// factors, which makes every mixed partial derivative (and hence Δ and Δ²)
// available in closed form.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace biharm {

/// A real-valued function on R^n, evaluable at arbitrary points. Must be
/// re-entrant: smoothing and extension evaluate it from several call sites.
using SourceFunction = std::function<double(std::span<const double>)>;

/// Univariate function with derivatives of any order up to max_order().
class Univariate {
 public:
  using Derivatives = std::function<double(int order, double t)>;

  Univariate() = default;
  Univariate(Derivatives d, int max_order) : d_(std::move(d)), max_order_(max_order) {}

  double operator()(double t) const { return d_(0, t); }
  /// k-th derivative; DomainError for k > max_order().
  double derivative(int k, double t) const;
  int max_order() const noexcept { return max_order_; }

  /// sin^2(pi t).
  static Univariate sine_squared();
  /// Polynomial with coefficients c[0] + c[1] t + c[2] t^2 + ...
  static Univariate polynomial(std::vector<double> coeffs);
  /// Constant zero.
  static Univariate zero();
  /// (1 - t / width)^power for t < width, 0 beyond. C^{power-1} at t = width.
  static Univariate truncated_ramp(double width, int power);
  /// exp(-rate t).
  static Univariate exponential(double rate);
  /// 1 for t <= a, 0 for t >= b, degree-9 smoothstep between (C^4).
  static Univariate plateau(double a, double b);

  /// Pointwise product, derivatives by the Leibniz rule.
  friend Univariate operator*(const Univariate& a, const Univariate& b);

 private:
  Derivatives d_;
  int max_order_ = 0;
};

/// u(x) = Π_a g_a(x_a).
class TensorProduct {
 public:
  TensorProduct() = default;
  explicit TensorProduct(std::vector<Univariate> factors) : factors_(std::move(factors)) {}
  /// The same factor along every axis.
  TensorProduct(int n, const Univariate& factor) : factors_(static_cast<std::size_t>(n), factor) {}

  int dim() const noexcept { return static_cast<int>(factors_.size()); }
  const std::vector<Univariate>& factors() const noexcept { return factors_; }

  double value(std::span<const double> x) const;
  /// ∂^α u(x) with α = orders (one entry per axis).
  double partial(std::span<const int> orders, std::span<const double> x) const;
  double laplacian(std::span<const double> x) const;
  double bilaplacian(std::span<const double> x) const;

  SourceFunction as_source() const;
  SourceFunction laplacian_source() const;
  SourceFunction bilaplacian_source() const;

 private:
  std::vector<Univariate> factors_;
};

}  // namespace biharm
