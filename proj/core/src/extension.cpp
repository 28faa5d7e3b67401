#include "biharm/extension.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "biharm/errors.hpp"

namespace biharm {

namespace {

constexpr double kSupport = 2.0 / 3.0;

// λ₋₁ + λ₋₂ 2^k = rhs_k for k ∈ {k0, k0 + 1}, by Cramer's rule.
ExtensionCoefficients solve_moments(ExtensionRole role, int k0, int sign_shift) {
  const double a0 = std::pow(2.0, k0), a1 = std::pow(2.0, k0 + 1);
  const double r0 = ((k0 + sign_shift) % 2 == 0) ? 1.0 : -1.0;
  const double r1 = -r0;
  const double det = a1 - a0;
  ExtensionCoefficients c;
  c.role = role;
  c.lambda_m1 = (r0 * a1 - r1 * a0) / det;
  c.lambda_m2 = (r1 - r0) / det;
  return c;
}

}  // namespace

double ExtensionCoefficients::lambda(int eps) const {
  switch (eps) {
    case 1: return lambda_1;
    case -1: return lambda_m1;
    case -2: return lambda_m2;
    default: throw DomainError("ExtensionCoefficients: ε must be 1, -1 or -2");
  }
}

ExtensionCoefficients extension_coefficients(ExtensionRole role) {
  return role == ExtensionRole::Extend ? solve_moments(role, 2, 0) : solve_moments(role, 0, 1);
}

SourceFunction extend_even(SourceFunction u, int n) {
  if (n < 1 || n > kMaxDim) throw SizingError("extend_even: dimension out of range");
  const ExtensionCoefficients c = extension_coefficients(ExtensionRole::Extend);
  return [u = std::move(u), n, c](std::span<const double> x) {
    for (int a = 0; a < n; ++a)
      if (std::abs(x[a]) >= kSupport) return 0.0;
    // Enumerate ε over {1} for x_a >= 0 and {-1, -2} for x_a < 0.
    std::array<int, kMaxDim> choice{};
    std::array<double, kMaxDim> y{};
    const std::span<const double> ys(y.data(), static_cast<std::size_t>(n));
    double sum = 0.0;
    while (true) {
      double weight = 1.0;
      bool inside = true;
      for (int a = 0; a < n; ++a) {
        const int eps = x[a] >= 0.0 ? 1 : (choice[a] == 0 ? -1 : -2);
        weight *= c.lambda(eps);
        y[a] = eps * x[a];
        if (y[a] > 1.0) inside = false;
      }
      if (inside) sum += weight * u(ys);
      int a = n - 1;
      while (a >= 0 && (x[a] >= 0.0 || choice[a] == 1)) {
        choice[a] = 0;
        --a;
      }
      if (a < 0) break;
      ++choice[a];
    }
    return sum;
  };
}

Univariate extend_even(const Univariate& g) {
  const ExtensionCoefficients c = extension_coefficients(ExtensionRole::Extend);
  return Univariate(
      [g, c](int k, double t) {
        if (std::abs(t) >= kSupport) return 0.0;
        if (t >= 0.0) return g.derivative(k, t);
        // d^k/dt^k g(εt) = ε^k g^{(k)}(εt).
        double sum = 0.0;
        for (int eps : {-1, -2}) {
          const double arg = eps * t;
          if (arg > 1.0) continue;
          sum += c.lambda(eps) * std::pow(static_cast<double>(eps), k) * g.derivative(k, arg);
        }
        return sum;
      },
      g.max_order());
}

TensorProduct extend_even(const TensorProduct& u) {
  std::vector<Univariate> factors;
  factors.reserve(u.factors().size());
  for (const Univariate& g : u.factors()) factors.push_back(extend_even(g));
  return TensorProduct(std::move(factors));
}

BoxField::BoxField(int dim, double h, const MultiIndex& lo, const MultiIndex& hi)
    : dim_(dim), h_(h), lo_(lo), hi_(hi) {
  if (dim < 1 || dim > kMaxDim) throw SizingError("BoxField: dimension out of range");
  std::size_t s = 1;
  for (int a = dim - 1; a >= 0; --a) {
    if (hi[a] < lo[a]) throw ValidationError("BoxField: empty extent");
    stride_[a] = s;
    s *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
  }
  values_.assign(s, 0.0);
}

bool BoxField::contains(const MultiIndex& idx) const {
  for (int a = 0; a < dim_; ++a)
    if (idx[a] < lo_[a] || idx[a] > hi_[a]) return false;
  return true;
}

std::size_t BoxField::offset(const MultiIndex& idx) const {
  std::size_t off = 0;
  for (int a = 0; a < dim_; ++a) off += static_cast<std::size_t>(idx[a] - lo_[a]) * stride_[a];
  return off;
}

MultiIndex BoxField::index(std::size_t off) const {
  MultiIndex idx{};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = lo_[a] + static_cast<int>(off / stride_[a]);
    off %= stride_[a];
  }
  return idx;
}

double BoxField::at(const MultiIndex& idx) const {
  if (!contains(idx)) throw DomainError("BoxField: index outside the block");
  return values_[offset(idx)];
}

double& BoxField::ref(const MultiIndex& idx) {
  if (!contains(idx)) throw DomainError("BoxField: index outside the block");
  return values_[offset(idx)];
}

double BoxField::value_or_zero(const MultiIndex& idx) const {
  return contains(idx) ? values_[offset(idx)] : 0.0;
}

std::complex<double> FourierCoeffs::at(const std::array<int, kMaxDim>& k) const {
  std::size_t off = 0;
  for (int a = 0; a < face_dim; ++a) {
    if (k[a] < -m + 1 || k[a] > m) throw DomainError("FourierCoeffs: mode out of range");
    off = off * static_cast<std::size_t>(2 * m) + static_cast<std::size_t>(k[a] + m - 1);
  }
  return gamma[off];
}

namespace {

// In-place 1D transform along `axis` of a dense (2m)^d complex array:
// out[q] = Σ_p in[p] · table[q][p].
void transform_axis(std::vector<std::complex<double>>& data, int d, int m, int axis,
                    const std::vector<std::complex<double>>& table) {
  const std::size_t len = static_cast<std::size_t>(2 * m);
  std::size_t stride = 1;
  for (int a = d - 1; a > axis; --a) stride *= len;
  const std::size_t block = stride * len;
  std::vector<std::complex<double>> line(len), out(len);
  for (std::size_t base = 0; base < data.size(); base += block)
    for (std::size_t inner = 0; inner < stride; ++inner) {
      for (std::size_t p = 0; p < len; ++p) line[p] = data[base + inner + p * stride];
      for (std::size_t q = 0; q < len; ++q) {
        std::complex<double> s = 0.0;
        for (std::size_t p = 0; p < len; ++p) s += table[q * len + p] * line[p];
        out[q] = s;
      }
      for (std::size_t q = 0; q < len; ++q) data[base + inner + q * stride] = out[q];
    }
}

// table[q][p] = e^{sign·iπ k_q ξ_p / m}, k_q = q - m + 1, ξ_p = p - m.
std::vector<std::complex<double>> dft_table(int m, double sign, bool modes_out) {
  const std::size_t len = static_cast<std::size_t>(2 * m);
  std::vector<std::complex<double>> t(len * len);
  for (std::size_t q = 0; q < len; ++q)
    for (std::size_t p = 0; p < len; ++p) {
      const long k = modes_out ? static_cast<long>(q) - m + 1 : static_cast<long>(p) - m + 1;
      const long xi = modes_out ? static_cast<long>(p) - m : static_cast<long>(q) - m;
      // Reduce k·ξ mod 2m before scaling keeps the phase exact.
      const long r = ((k * xi) % (2L * m) + 2L * m) % (2L * m);
      const double phase = sign * std::numbers::pi * static_cast<double>(r) / m;
      t[q * len + p] = std::polar(1.0, phase);
    }
  return t;
}

}  // namespace

FourierCoeffs fourier_coeffs(const FaceField& g, int m) {
  g.validate();
  if (m < 4) throw SizingError("fourier_coeffs: m must be >= 4");
  const int d = g.face_dim();
  const std::size_t len = static_cast<std::size_t>(2 * m);
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= len;

  std::vector<std::complex<double>> data(total, 0.0);
  for (std::size_t k = 0; k < g.points.size(); ++k) {
    std::size_t off = 0;
    for (int a = 0; a < d; ++a) {
      const int xi = g.points[k][a];
      if (xi < -m || xi > m - 1)
        throw ValidationError("fourier_coeffs: support point outside [-1, 1)^d");
      off = off * len + static_cast<std::size_t>(xi + m);
    }
    data[off] = g.values[k];
  }
  const auto table = dft_table(m, -1.0, true);
  for (int a = 0; a < d; ++a) transform_axis(data, d, m, a, table);
  const double scale = std::pow(0.5 / m, d);
  for (auto& z : data) z *= scale;
  return FourierCoeffs{d, m, std::move(data)};
}

namespace {

MultiIndex face_lo(int d, int m) {
  MultiIndex lo{};
  for (int a = 0; a < d; ++a) lo[a] = -m;
  return lo;
}

MultiIndex face_hi(int d, int m) {
  MultiIndex hi{};
  for (int a = 0; a < d; ++a) hi[a] = m - 1;
  return hi;
}

std::vector<double> mode_norms(const FourierCoeffs& c) {
  const std::size_t len = static_cast<std::size_t>(2 * c.m);
  std::vector<double> out(c.gamma.size());
  for (std::size_t off = 0; off < out.size(); ++off) {
    std::size_t rem = off;
    double r2 = 0.0;
    for (int a = c.face_dim - 1; a >= 0; --a) {
      const double k = static_cast<double>(rem % len) - c.m + 1;
      rem /= len;
      r2 += k * k;
    }
    out[off] = std::sqrt(r2);
  }
  return out;
}

}  // namespace

BoxField inverse_fourier(const FourierCoeffs& c) {
  const int d = c.face_dim;
  std::vector<std::complex<double>> data = c.gamma;
  const auto table = dft_table(c.m, 1.0, false);
  for (int a = 0; a < d; ++a) transform_axis(data, d, c.m, a, table);
  BoxField out(d, c.h(), face_lo(d, c.m), face_hi(d, c.m));
  for (std::size_t k = 0; k < data.size(); ++k) out.values()[k] = data[k].real();
  return out;
}

BoxField inverse_trace(const FourierCoeffs& c, TraceVariant variant, int normal_axis,
                       int normal_lo, int normal_hi) {
  const int d = c.face_dim;
  if (normal_axis < 0 || normal_axis > d) throw DomainError("inverse_trace: normal axis out of range");
  if (normal_hi < normal_lo) throw ValidationError("inverse_trace: empty normal range");
  const double h = c.h();
  const std::vector<double> kn = mode_norms(c);
  std::vector<std::complex<double>> scaled(c.gamma.size());
  for (std::size_t k = 0; k < scaled.size(); ++k) {
    const double norm = variant == TraceVariant::Centered ? std::cosh(kn[k] * h) : std::exp(kn[k] * h);
    scaled[k] = c.gamma[k] / norm;
  }

  MultiIndex lo{}, hi{};
  for (int a = 0; a <= d; ++a) {
    lo[a] = a == normal_axis ? normal_lo : -c.m;
    hi[a] = a == normal_axis ? normal_hi : c.m - 1;
  }
  BoxField out(d + 1, h, lo, hi);
  const auto table = dft_table(c.m, 1.0, false);
  std::vector<std::complex<double>> layer(scaled.size());
  for (int j = normal_lo; j <= normal_hi; ++j) {
    const double xn = j * h;
    for (std::size_t k = 0; k < layer.size(); ++k) layer[k] = scaled[k] * (xn * std::exp(-kn[k] * xn));
    for (int a = 0; a < d; ++a) transform_axis(layer, d, c.m, a, table);
    // Scatter the layer into the block, in-plane offsets in face order.
    const std::size_t len = static_cast<std::size_t>(2 * c.m);
    for (std::size_t off = 0; off < layer.size(); ++off) {
      MultiIndex idx{};
      std::size_t rem = off;
      for (int f = d - 1; f >= 0; --f) {
        const int a = f < normal_axis ? f : f + 1;
        idx[a] = static_cast<int>(rem % len) - c.m;
        rem /= len;
      }
      idx[normal_axis] = j;
      out.values()[out.offset(idx)] = layer[off].real();
    }
  }
  return out;
}

CutoffProfile CutoffProfile::smoothstep() {
  return CutoffProfile{[](double t) {
    const double a = std::abs(t);
    if (a <= 0.75) return 1.0;
    if (a >= 1.0) return 0.0;
    const double s = (a - 0.75) / 0.25;
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  }};
}

BoxField apply_cutoff(const BoxField& field, const CutoffProfile& profile) {
  BoxField out = field;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const MultiIndex idx = out.index(k);
    double w = 1.0;
    for (int a = 0; a < out.dim(); ++a) w *= profile.eta(idx[a] * out.h());
    out.values()[k] *= w;
  }
  return out;
}

LatticeField apply_cutoff(const LatticeField& field, const CutoffProfile& profile) {
  LatticeField out = field;
  const GridSpec& g = field.grid();
  for (std::int32_t p : g.points(PointSet::Tilde)) {
    const auto k = static_cast<std::size_t>(p);
    double w = 1.0;
    for (int a = 0; a < g.dim(); ++a) w *= profile.eta(g.coord(k, a) * g.h());
    out[k] *= w;
  }
  return out;
}

namespace {

// One-axis restriction: orthant part Σ λ_ε w(εx) for x_axis >= 0, then the
// mirror layer at x_axis = -1 (Mirror only); zero further out.
BoxField restrict_axis(const BoxField& w, int axis, RestrictVariant variant,
                       const ExtensionCoefficients& c) {
  if (w.lo()[axis] > -2 * w.hi()[axis])
    throw DomainError("project_Rh: block does not contain the reflected reads along axis " +
                      std::to_string(axis));
  BoxField out(w.dim(), w.h(), w.lo(), w.hi());
  for (std::size_t k = 0; k < out.size(); ++k) {
    MultiIndex idx = out.index(k);
    const int x = idx[axis];
    int src = x;
    if (x == -1 && variant == RestrictVariant::Mirror) src = x + 2;
    else if (x < 0) continue;
    double sum = 0.0;
    for (int eps : {1, -1, -2}) {
      idx[axis] = eps * src;
      sum += c.lambda(eps) * w.at(idx);
    }
    out.values()[k] = sum;
  }
  return out;
}

}  // namespace

BoxField project_Rh(const BoxField& w, RestrictVariant variant, const std::vector<int>& axes) {
  const ExtensionCoefficients c = extension_coefficients(ExtensionRole::Restrict);
  for (int a : axes)
    if (a < 0 || a >= w.dim()) throw DomainError("project_Rh: axis out of range");
  BoxField out = w;
  for (int a : axes) out = restrict_axis(out, a, variant, c);
  if (variant == RestrictVariant::Mirror && axes.size() > 1) {
    // Sequential 1D passes would also fill points with several coordinates
    // at -1; the operator is zero there.
    for (std::size_t k = 0; k < out.size(); ++k) {
      const MultiIndex idx = out.index(k);
      int negative = 0;
      for (int a : axes) negative += idx[a] < 0 ? 1 : 0;
      if (negative > 1) out.values()[k] = 0.0;
    }
  }
  return out;
}

BoxField project_Rh(const BoxField& w, RestrictVariant variant) {
  std::vector<int> axes(static_cast<std::size_t>(w.dim()));
  for (int a = 0; a < w.dim(); ++a) axes[static_cast<std::size_t>(a)] = a;
  return project_Rh(w, variant, axes);
}

FaceField face_data(const SourceFunction& u_tilde, const GridSpec& grid, int axis,
                    TraceVariant variant) {
  const int n = grid.dim();
  if (n < 2) throw SizingError("face_data: needs n >= 2");
  if (axis < 0 || axis >= n) throw DomainError("face_data: axis out of range");
  const int m = grid.m();
  const double h = grid.h();
  FaceField g;
  g.dim = n;
  g.h = h;
  g.axis = axis;

  std::array<double, kMaxDim> x{};
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
  FacePoint p{};
  const int d = n - 1;
  // Lower bound per in-plane coordinate: 1 for axes before `axis`, 0 after.
  std::array<int, kMaxDim> lower{};
  for (int f = 0; f < d; ++f) lower[f] = f < axis ? 1 : 0;
  for (int f = 0; f < d; ++f) p[f] = lower[f];
  while (true) {
    for (int f = 0; f < d; ++f) x[f < axis ? f : f + 1] = p[f] * h;
    double value;
    if (variant == TraceVariant::Centered) {
      x[axis] = h;
      const double up = u_tilde(xs);
      x[axis] = -h;
      value = (up - u_tilde(xs)) / (2.0 * h);
    } else {
      x[axis] = 0.0;
      const double mid = u_tilde(xs);
      x[axis] = -h;
      value = (mid - u_tilde(xs)) / h;
    }
    g.points.push_back(p);
    g.values.push_back(value);
    int f = d - 1;
    while (f >= 0 && p[f] == m - 1) {
      p[f] = lower[f];
      --f;
    }
    if (f < 0) break;
    ++p[f];
  }
  return g;
}

BoundaryMatch boundary_match(const LatticeField& e_hat, const SourceFunction& u_tilde,
                             TraceVariant variant) {
  const GridSpec& g = e_hat.grid();
  const int n = g.dim();
  const double h = g.h();
  const LatticeField u = LatticeField::sample(g, u_tilde);
  BoundaryMatch r;
  for (std::int32_t p : g.points(PointSet::Boundary)) {
    const auto z = static_cast<std::size_t>(p);
    r.max_value = std::max(r.max_value, std::abs(e_hat[z]));
    for (int a = 0; a < n; ++a) {
      const int c = g.coord(z, a);
      if (c != 0 && c != g.m()) continue;
      const int out = c == 0 ? -1 : 1;
      const auto outer = static_cast<std::size_t>(g.shift(z, a, out));
      double de, du;
      if (variant == TraceVariant::Centered) {
        const auto inner = static_cast<std::size_t>(g.shift(z, a, -out));
        de = (e_hat[inner] - e_hat[outer]) / (2.0 * h);
        du = (u[inner] - u[outer]) / (2.0 * h);
      } else {
        de = (e_hat[outer] - e_hat[z]) / h;
        du = (u[outer] - u[z]) / h;
      }
      r.max_difference = std::max(r.max_difference, std::abs(de - du));
    }
  }
  return r;
}

LatticeField build_E_hat(const SourceFunction& u_tilde, const GridSpec& grid, TraceVariant variant,
                         const CutoffProfile& profile) {
  const int n = grid.dim();
  if (n < 2) throw SizingError("build_E_hat: needs n >= 2");
  const int m = grid.m();
  const double h = grid.h();
  const RestrictVariant rv =
      variant == TraceVariant::Centered ? RestrictVariant::Mirror : RestrictVariant::Star;
  LatticeField total(grid);

  for (int i = 0; i < n; ++i) {
    const FaceField g = face_data(u_tilde, grid, i, variant);
    const FourierCoeffs gamma = fourier_coeffs(g, m);
    const BoxField a = apply_cutoff(inverse_trace(gamma, variant, i, -1, m + 1), profile);

    // Embed into a block wide enough for every reflected read of R_h.
    MultiIndex lo{}, hi{};
    std::vector<int> in_plane;
    for (int b = 0; b < n; ++b) {
      if (b == i) {
        lo[b] = -1;
        hi[b] = m + 1;
      } else {
        lo[b] = -2 * (m + 1);
        hi[b] = m + 1;
        in_plane.push_back(b);
      }
    }
    BoxField block(n, h, lo, hi);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const MultiIndex idx = a.index(k);
      if (block.contains(idx)) block.ref(idx) = a.values()[k];
    }
    const BoxField b = project_Rh(block, rv, in_plane);

    for (std::int32_t p : grid.points(PointSet::Tilde)) {
      const auto z = static_cast<std::size_t>(p);
      total[z] += b.at(grid.multi_index(z));
    }
  }

  if (variant == TraceVariant::Centered) {
    // η(1 - h) != 0, so the far-face ghosts (coordinate m + 1) mirror the
    // first interior layer; D_{0,ν}Ê then vanishes there as D_{0,ν}ũ does.
    for (std::int32_t p : grid.points(PointSet::Ghost)) {
      const auto z = static_cast<std::size_t>(p);
      bool far = false;
      for (int a = 0; a < n; ++a) far = far || grid.coord(z, a) == m + 1;
      const std::int64_t src = grid.mirror_source(z);
      if (far && src != GridSpec::kNone) total[z] = total[static_cast<std::size_t>(src)];
    }
  }

  const BoundaryMatch check = boundary_match(total, u_tilde, variant);
  if (check.max_value > 1e-8 || check.max_difference > 1e-8)
    throw ConstructionError("build_E_hat: boundary post-conditions violated (|E| = " +
                            std::to_string(check.max_value) + ", derivative mismatch " +
                            std::to_string(check.max_difference) + ")");
  return total;
}

}  // namespace biharm
