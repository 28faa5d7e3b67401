#include "biharm/smooth_function.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "biharm/errors.hpp"
#include "biharm/lattice.hpp"

namespace biharm {

double Univariate::derivative(int k, double t) const {
  if (k < 0 || k > max_order_)
    throw DomainError("Univariate: derivative order " + std::to_string(k) + " not available");
  return d_(k, t);
}

Univariate Univariate::sine_squared() {
  // sin^2(pi t) = (1 - cos(2 pi t)) / 2.
  return Univariate(
      [](int k, double t) {
        constexpr double w = 2.0 * std::numbers::pi;
        const double arg = w * t;
        if (k == 0) return 0.5 - 0.5 * std::cos(arg);
        // d^k/dt^k cos(w t) = w^k cos(w t + k pi / 2).
        return -0.5 * std::pow(w, k) * std::cos(arg + k * std::numbers::pi / 2.0);
      },
      16);
}

Univariate Univariate::polynomial(std::vector<double> coeffs) {
  return Univariate(
      [c = std::move(coeffs)](int k, double t) {
        double sum = 0.0;
        for (int p = static_cast<int>(c.size()) - 1; p >= k; --p) {
          double falling = 1.0;
          for (int q = 0; q < k; ++q) falling *= p - q;
          sum = sum * t + c[static_cast<std::size_t>(p)] * falling;
        }
        return sum;
      },
      16);
}

Univariate Univariate::zero() {
  return Univariate([](int, double) { return 0.0; }, 16);
}

Univariate Univariate::truncated_ramp(double width, int power) {
  return Univariate(
      [width, power](int k, double t) {
        if (t >= width || k > power) return 0.0;
        const double s = 1.0 - t / width;
        double coef = 1.0;
        for (int q = 0; q < k; ++q) coef *= -(power - q) / width;
        return coef * std::pow(s, power - k);
      },
      16);
}

Univariate Univariate::exponential(double rate) {
  return Univariate([rate](int k, double t) { return std::pow(-rate, k) * std::exp(-rate * t); }, 16);
}

Univariate Univariate::plateau(double a, double b) {
  if (!(a < b)) throw DomainError("Univariate::plateau: need a < b");
  // S(s) = s^5 (126 - 420 s + 540 s^2 - 315 s^3 + 70 s^4), S(0) = 0, S(1) = 1.
  const Univariate step = polynomial({0.0, 0.0, 0.0, 0.0, 0.0, 126.0, -420.0, 540.0, -315.0, 70.0});
  return Univariate(
      [step, a, b](int k, double t) {
        if (t <= a) return k == 0 ? 1.0 : 0.0;
        if (t >= b) return 0.0;
        const double w = b - a;
        const double v = -step.derivative(k, (t - a) / w) / std::pow(w, k);
        return k == 0 ? 1.0 + v : v;
      },
      16);
}

Univariate operator*(const Univariate& a, const Univariate& b) {
  const int order = std::min(a.max_order(), b.max_order());
  return Univariate(
      [a, b](int k, double t) {
        double sum = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
          sum += binom * a.derivative(j, t) * b.derivative(k - j, t);
          binom = binom * (k - j) / (j + 1);
        }
        return sum;
      },
      order);
}

double TensorProduct::value(std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t a = 0; a < factors_.size(); ++a) v *= factors_[a](x[a]);
  return v;
}

double TensorProduct::partial(std::span<const int> orders, std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t a = 0; a < factors_.size(); ++a) v *= factors_[a].derivative(orders[a], x[a]);
  return v;
}

double TensorProduct::laplacian(std::span<const double> x) const {
  const std::size_t n = factors_.size();
  std::array<double, kMaxDim> g0{}, g2{};
  for (std::size_t a = 0; a < n; ++a) {
    g0[a] = factors_[a](x[a]);
    g2[a] = factors_[a].derivative(2, x[a]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double term = g2[i];
    for (std::size_t a = 0; a < n; ++a)
      if (a != i) term *= g0[a];
    sum += term;
  }
  return sum;
}

double TensorProduct::bilaplacian(std::span<const double> x) const {
  // Δ² u = Σ_i ∂_i^4 u + 2 Σ_{i<j} ∂_i^2 ∂_j^2 u.
  const std::size_t n = factors_.size();
  std::array<double, kMaxDim> g0{}, g2{}, g4{};
  for (std::size_t a = 0; a < n; ++a) {
    g0[a] = factors_[a](x[a]);
    g2[a] = factors_[a].derivative(2, x[a]);
    g4[a] = factors_[a].derivative(4, x[a]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double term = g4[i];
    for (std::size_t a = 0; a < n; ++a)
      if (a != i) term *= g0[a];
    sum += term;
    for (std::size_t j = i + 1; j < n; ++j) {
      double mixed = 2.0 * g2[i] * g2[j];
      for (std::size_t a = 0; a < n; ++a)
        if (a != i && a != j) mixed *= g0[a];
      sum += mixed;
    }
  }
  return sum;
}

SourceFunction TensorProduct::as_source() const {
  return [self = *this](std::span<const double> x) { return self.value(x); };
}

SourceFunction TensorProduct::laplacian_source() const {
  return [self = *this](std::span<const double> x) { return self.laplacian(x); };
}

SourceFunction TensorProduct::bilaplacian_source() const {
  return [self = *this](std::span<const double> x) { return self.bilaplacian(x); };
}

}  // namespace biharm
