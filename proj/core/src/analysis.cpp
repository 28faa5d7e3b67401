#include "biharm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "biharm/errors.hpp"
#include "biharm/mollifier.hpp"

namespace biharm {

LatticeField random_field(const GridSpec& grid, ProbeRng& rng) {
  LatticeField out(grid);
  for (double& v : out.values()) v = rng.uniform(-1.0, 1.0);
  return out;
}

double clamped_defect(const TensorProduct& u, std::uint64_t seed, int samples) {
  const int n = u.dim();
  ProbeRng rng(seed);
  double worst = 0.0;
  std::array<double, kMaxDim> x{};
  std::array<int, kMaxDim> orders{};
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
  const std::span<const int> os(orders.data(), static_cast<std::size_t>(n));
  for (int s = 0; s < samples; ++s) {
    for (int a = 0; a < n; ++a) x[a] = rng.uniform();
    const int face = std::min(n - 1, static_cast<int>(rng.uniform() * n));
    x[face] = rng.uniform() < 0.5 ? 0.0 : 1.0;
    worst = std::max(worst, std::abs(u.value(xs)));
    for (int a = 0; a < n; ++a) {
      orders.fill(0);
      orders[a] = 1;
      worst = std::max(worst, std::abs(u.partial(os, xs)));
    }
  }
  return worst;
}

TensorProduct localize(const TensorProduct& u) {
  const Univariate ramp = Univariate::exponential(3.0) * Univariate::plateau(0.0, 0.65);
  std::vector<Univariate> factors;
  for (const Univariate& g : u.factors()) factors.push_back(g * ramp);
  return TensorProduct(std::move(factors));
}

std::vector<std::string> manufactured_names() { return {"sine4", "poly-clamped", "zero", "sine4-local"}; }

ManufacturedCase manufactured_pair(const std::string& name, int n) {
  if (n < 1 || n > kMaxDim) throw SizingError("manufactured_pair: dimension out of range");
  Univariate factor;
  int s = 4;
  if (name == "sine4") {
    factor = Univariate::sine_squared();
  } else if (name == "poly-clamped") {
    factor = Univariate::polynomial({0.0, 0.0, 1.0, -2.0, 1.0});
  } else if (name == "zero") {
    factor = Univariate::zero();
  } else if (name == "sine4-local") {
    factor = localize(TensorProduct(1, Univariate::sine_squared())).factors().front();
  } else {
    throw ValidationError("manufactured_pair: unknown case '" + name + "'");
  }
  ManufacturedCase c;
  c.name = name;
  c.u = TensorProduct(n, factor);
  c.u_exact = c.u.as_source();
  c.f = c.u.bilaplacian_source();
  c.s = s;
  c.clamped = true;
  if (clamped_defect(c.u) > 1e-12)
    throw ValidationError("manufactured_pair: case '" + name + "' is not clamped");
  return c;
}

namespace {

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double cell(const GridSpec& g) { return std::pow(g.h(), g.dim()); }

// Δ_h and D_aD_{-a} of the zero extension of v, at any multi-index.
double second0(const LatticeField& v, const MultiIndex& x, int a) {
  MultiIndex p = x, q = x;
  p[a] += 1;
  q[a] -= 1;
  const double h = v.grid().h();
  return (v.value_or_zero(p) - 2.0 * v.value_or_zero(x) + v.value_or_zero(q)) / (h * h);
}

double lap0(const LatticeField& v, const MultiIndex& x) {
  double s = 0.0;
  for (int a = 0; a < v.grid().dim(); ++a) s += second0(v, x, a);
  return s;
}

double bilap0(const LatticeField& v, const MultiIndex& x) {
  const int n = v.grid().dim();
  const double h = v.grid().h();
  double s = -2.0 * n * lap0(v, x);
  for (int a = 0; a < n; ++a) {
    MultiIndex p = x, q = x;
    p[a] += 1;
    q[a] -= 1;
    s += lap0(v, p) + lap0(v, q);
  }
  return s / (h * h);
}

LatticeField projected(const LatticeField& phi, HessianFlavor flavor, bool strict) {
  LatticeField p = project_hypothesis(phi, flavor);
  if (strict && !std::equal(p.values().begin(), p.values().end(), phi.values().begin()))
    throw ValidationError("input violates the boundary hypotheses of the identity");
  return p;
}

void require_same_grid(const LatticeField& a, const LatticeField& b) {
  if (a.grid().dim() != b.grid().dim() || a.grid().m() != b.grid().m())
    throw ValidationError("fields live on different grids");
}

}  // namespace

LatticeField project_hypothesis(const LatticeField& phi, HessianFlavor flavor) {
  const GridSpec& g = phi.grid();
  LatticeField out = phi;
  for (std::int32_t p : g.points(PointSet::Boundary)) out[static_cast<std::size_t>(p)] = 0.0;
  for (std::int32_t p : g.points(PointSet::Ghost)) {
    const auto k = static_cast<std::size_t>(p);
    if (flavor == HessianFlavor::Star) {
      out[k] = 0.0;
    } else {
      const std::int64_t src = g.mirror_source(k);
      out[k] = src == GridSpec::kNone ? 0.0 : out[static_cast<std::size_t>(src)];
    }
  }
  return out;
}

double sbp_residual(const LatticeField& v, const LatticeField& phi, HessianFlavor flavor, bool strict) {
  require_same_grid(v, phi);
  const GridSpec& g = v.grid();
  const LatticeField p = projected(phi, flavor, strict);
  double lhs = 0.0;
  for (std::int32_t z : g.points(PointSet::Closure)) {
    const auto k = static_cast<std::size_t>(z);
    if (p[k] != 0.0) lhs += bilap0(v, g.multi_index(k)) * p[k];
  }
  lhs *= cell(g);
  const double rhs = hessian_inner(hessian_field(v), hessian_field(p), flavor);
  return rel_gap(lhs, rhs);
}

double transfer_residual(const LatticeField& v, const LatticeField& phi, HessianFlavor flavor, int axis,
                         bool strict) {
  require_same_grid(v, phi);
  const GridSpec& g = v.grid();
  if (axis < 0 || axis >= g.dim()) throw DomainError("transfer_residual: bad axis");
  const LatticeField p = projected(phi, flavor, strict);
  double plain = 0.0, adjoint = 0.0, weighted = 0.0, weighted_adjoint = 0.0;
  for (std::int32_t z : g.points(PointSet::Closure)) {
    const auto k = static_cast<std::size_t>(z);
    const MultiIndex x = g.multi_index(k);
    const double dv = second0(v, x, axis) * p[k];
    const double dp = v[k] * second0(p, x, axis);
    const double w = g.tag(k) == PointTag::Boundary ? 0.5 : 1.0;
    plain += dv;
    adjoint += dp;
    weighted += w * dv;
    weighted_adjoint += w * dp;
  }
  if (flavor == HessianFlavor::Star) return rel_gap(plain, adjoint);
  return std::max(rel_gap(plain, weighted), rel_gap(plain, weighted_adjoint));
}

double poincare_ratio(const LatticeField& v, HessianFlavor flavor) {
  const LatticeField p = project_hypothesis(v, flavor);
  const double denom = hessian_norm(hessian_field(p), flavor);
  if (!(denom > 0.0)) throw ValidationError("poincare_ratio: field vanishes after projection");
  return h2h_norm(p) / denom;
}

LatticeField phi_residual(const SourceFunction& u_tilde, const SourceFunction& lap_u_tilde,
                          const GridSpec& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) throw DomainError("phi_residual: bad axis");
  const LatticeField u = LatticeField::sample(grid, u_tilde);
  const LatticeField t = smooth_source(lap_u_tilde, grid, axis, PointSet::Closure);
  const int n = grid.dim();
  const double h2 = grid.h() * grid.h();
  LatticeField out(grid);
  for (std::int32_t z : grid.points(PointSet::Closure)) {
    const auto k = static_cast<std::size_t>(z);
    double lap = -2.0 * n * u[k];
    for (int a = 0; a < n; ++a)
      for (int s : {-1, 1}) lap += u[static_cast<std::size_t>(grid.shift(k, a, s))];
    out[k] = lap / h2 - t[k];
  }
  return out;
}

std::vector<TensorProduct> cubic_basis_2d() {
  std::vector<TensorProduct> out;
  for (int total = 0; total <= 3; ++total)
    for (int b = 0; b <= total; ++b) {
      const int a = total - b;
      std::vector<double> cx(static_cast<std::size_t>(a + 1), 0.0), cy(static_cast<std::size_t>(b + 1), 0.0);
      cx.back() = 1.0;
      cy.back() = 1.0;
      out.emplace_back(std::vector<Univariate>{Univariate::polynomial(cx), Univariate::polynomial(cy)});
    }
  return out;
}

double fit_rate(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size()) throw ValidationError("fit_rate: length mismatch");
  if (errors.size() < 2) throw ValidationError("fit_rate: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !(hs[k] > 0.0)) throw ValidationError("fit_rate: values must be positive");
    sx += std::log(hs[k]);
    sy += std::log(errors[k]);
  }
  const double mx = sx / static_cast<double>(errors.size());
  const double my = sy / static_cast<double>(errors.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double dx = std::log(hs[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[k]) - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_rate: all h are equal");
  return sxy / sxx;
}

std::vector<double> pairwise_rates(const std::vector<double>& errors, const std::vector<double>& hs) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    if (errors[k] > 0.0 && errors[k + 1] > 0.0)
      out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(hs[k] / hs[k + 1]));
    else
      out.push_back(0.0);
  }
  return out;
}

namespace {

double fitted_or_zero(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() < 2) return 0.0;
  for (double e : errors)
    if (!(e > 0.0)) return 0.0;
  return fit_rate(errors, hs);
}

void check_ladder(const std::vector<int>& ms) {
  if (ms.empty()) throw ValidationError("ladder is empty");
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms[k] < 4) throw SizingError("ladder entries must be >= 4");
    if (k > 0 && ms[k] <= ms[k - 1]) throw ValidationError("ladder must be strictly increasing");
  }
}

}  // namespace

BoundaryScalingReport boundary_scaling_study(const SourceFunction& u_tilde, int n,
                                             const std::vector<int>& ms, TraceVariant variant,
                                             int axis) {
  check_ladder(ms);
  BoundaryScalingReport r;
  r.variant = variant;
  r.axis = axis;
  std::vector<double> norms, hs;
  for (int m : ms) {
    const GridSpec grid = build_grid(n, m);
    const FaceField g = face_data(u_tilde, grid, axis, variant);
    BoundaryScalingRow row;
    row.m = m;
    row.h = grid.h();
    row.seminorm = h_half_seminorm(g);
    row.l2 = l2h_norm(g);
    row.norm = std::sqrt(row.seminorm * row.seminorm + row.l2 * row.l2);
    r.rows.push_back(row);
    norms.push_back(row.norm);
    hs.push_back(row.h);
  }
  r.pairwise_rates = pairwise_rates(norms, hs);
  r.fitted_rate = fitted_or_zero(norms, hs);
  return r;
}

ConvergenceReport convergence_study(const ManufacturedCase& c, BcScheme scheme,
                                    const std::vector<int>& ms, const StudyOptions& options) {
  check_ladder(ms);
  ConvergenceReport r;
  r.case_name = c.name;
  r.scheme = to_string(scheme);
  r.dim = c.u.dim();
  r.tol = options.solver.tol;

  auto run = [&](int m) {
    const GridSpec grid = build_grid(r.dim, m);
    const SolveResult s = solve(c.f, grid, scheme, options.solver);
    LatticeField e = LatticeField::sample(grid, c.u_exact);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] -= s.solution[k];
    return LadderEntry{m, grid.h(), h2h_norm(e), s.iterations, s.residual};
  };

  const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  for (std::size_t start = 0; start < ms.size() && r.complete; start += jobs) {
    std::vector<std::future<LadderEntry>> batch;
    const std::size_t stop = std::min(ms.size(), start + jobs);
    for (std::size_t k = start; k < stop; ++k)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run, ms[k]));
    for (auto& f : batch) {
      try {
        LadderEntry e = f.get();
        if (r.complete) r.entries.push_back(e);
      } catch (const ConvergenceError& err) {
        if (r.complete) r.failure = err.what();
        r.complete = false;
      }
    }
  }

  std::vector<double> errors, hs;
  for (const LadderEntry& e : r.entries) {
    errors.push_back(e.error_h2h);
    hs.push_back(e.h);
  }
  r.pairwise_rates = pairwise_rates(errors, hs);
  r.fitted_rate = fitted_or_zero(errors, hs);
  return r;
}

DecompositionCheck error_decomposition(const TensorProduct& u_local, const GridSpec& grid,
                                       BcScheme scheme, const SolveOptions& options) {
  const TensorProduct ut = extend_even(u_local);
  const SourceFunction u_src = ut.as_source();
  const SolveResult s = solve(ut.bilaplacian_source(), grid, scheme, options);
  LatticeField e = LatticeField::sample(grid, u_src);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] -= s.solution[k];

  const bool centered = scheme == BcScheme::CenteredMirror;
  DecompositionCheck d;
  d.lhs = hessian_norm(hessian_field(e), centered ? HessianFlavor::Tilde : HessianFlavor::Star);
  const LatticeField e_hat =
      build_E_hat(u_src, grid, centered ? TraceVariant::Centered : TraceVariant::OneSided);
  d.e_hat_term = hessian_norm(hessian_field(e_hat), HessianFlavor::Star);
  const SourceFunction lap = ut.laplacian_source();
  for (int i = 0; i < grid.dim(); ++i)
    d.phi_term += l2h_norm(phi_residual(u_src, lap, grid, i), PointSet::Closure);
  return d;
}

OperatorProbe operator_probe(const GridSpec& grid, BcScheme scheme, int count, std::uint64_t seed) {
  const LinearSystem sys(grid, scheme);
  const HessianFlavor flavor =
      scheme == BcScheme::CenteredMirror ? HessianFlavor::Tilde : HessianFlavor::Star;
  ProbeRng rng(seed);
  const std::size_t N = sys.unknowns();
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  };
  OperatorProbe out;
  out.min_rayleigh = std::numeric_limits<double>::infinity();
  std::vector<double> v(N), w(N);
  for (int c = 0; c < count; ++c) {
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    const std::vector<double> av = sys.apply(v), aw = sys.apply(w);
    const double scale = std::sqrt(dot(av, av) * dot(w, w)) + std::sqrt(dot(v, v) * dot(aw, aw));
    out.symmetry = std::max(out.symmetry, std::abs(dot(av, w) - dot(v, aw)) / scale);
    const double energy = cell(grid) * dot(av, v);
    const double form = std::pow(hessian_norm(hessian_field(sys.complete(v)), flavor), 2);
    out.energy = std::max(out.energy, rel_gap(energy, form));
    out.min_rayleigh = std::min(out.min_rayleigh, dot(av, v) / dot(v, v));
  }
  return out;
}

TraceReproduction inverse_trace_reproduction(int n, int m, TraceVariant variant, std::uint64_t seed) {
  if (n < 2) throw SizingError("inverse_trace_reproduction: needs n >= 2");
  const int d = n - 1;
  const int top = (2 * m) / 3;
  ProbeRng rng(seed);
  FaceField g;
  g.dim = n;
  g.h = 1.0 / m;
  g.axis = d;
  g.points = face_box(d, 1.0, 0.0, top);
  for (std::size_t k = 0; k < g.points.size(); ++k) g.values.push_back(rng.uniform(-1.0, 1.0));

  const FourierCoeffs c = fourier_coeffs(g, m);
  const BoxField a = inverse_trace(c, variant, d, -1, 1);
  const double h = 1.0 / m;
  TraceReproduction r;
  for (const FacePoint& p : face_box(d, 1.0, -m, m - 1)) {
    MultiIndex x{};
    for (int f = 0; f < d; ++f) x[f] = p[f];
    bool in_support = true;
    for (int f = 0; f < d; ++f) in_support = in_support && p[f] >= 0 && p[f] <= top;
    double target = 0.0;
    if (in_support) {
      // face_box enumerates lexicographically, so the offset is computable.
      std::size_t off = 0;
      for (int f = 0; f < d; ++f) off = off * static_cast<std::size_t>(top + 1) + static_cast<std::size_t>(p[f]);
      target = g.values[off];
    }
    x[d] = 0;
    const double a0 = a.at(x);
    x[d] = -1;
    const double am = a.at(x);
    x[d] = 1;
    const double ap = a.at(x);
    const double diff = variant == TraceVariant::Centered ? (ap - am) / (2.0 * h) : (a0 - am) / h;
    r.max_value = std::max(r.max_value, std::abs(a0));
    r.max_mismatch = std::max(r.max_mismatch, std::abs(diff - target));
  }
  return r;
}

double rh_identity_residual(int face_dim, int m, std::uint64_t seed) {
  if (face_dim < 1 || face_dim > kMaxDim - 1) throw SizingError("rh_identity_residual: bad dimension");
  MultiIndex lo{}, hi{};
  for (int a = 0; a < face_dim; ++a) {
    lo[a] = -2 * m;
    hi[a] = m;
  }
  const double h = 1.0 / m;
  BoxField u(face_dim, h, lo, hi);
  ProbeRng rng(seed);
  for (double& v : u.values()) v = rng.uniform(-1.0, 1.0);
  const BoxField r = project_Rh(u, RestrictVariant::Mirror);

  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < face_dim; ++i) {
    std::vector<int> others;
    for (int a = 0; a < face_dim; ++a)
      if (a != i) others.push_back(a);
    const BoxField w = others.empty() ? u : project_Rh(u, RestrictVariant::Mirror, others);
    for (std::size_t k = 0; k < r.size(); ++k) {
      MultiIndex x = r.index(k);
      if (x[i] != 0) continue;
      bool orthant = true;
      for (int a : others) orthant = orthant && x[a] >= 0 && x[a] < m;
      if (!orthant) continue;
      auto at = [](const BoxField& f, MultiIndex p, int axis, int step) {
        p[axis] += step;
        return f.at(p);
      };
      const double lhs = (at(r, x, i, 1) - 2.0 * at(r, x, i, 0) + at(r, x, i, -1)) / (h * h);
      const double w0 = (at(w, x, i, 1) - 2.0 * at(w, x, i, 0) + at(w, x, i, -1)) / (h * h);
      const double w1 = (at(w, x, i, 0) - 2.0 * at(w, x, i, -1) + at(w, x, i, -2)) / (h * h);
      worst = std::max(worst, std::abs(lhs - (2.0 * w0 + 4.0 * w1)));
      scale = std::max(scale, std::abs(lhs));
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

std::vector<ProbeResult> verify_suite(int n, int m, std::uint64_t seed, int pairs) {
  const GridSpec grid = build_grid(n, m);
  ProbeRng rng(seed);
  std::vector<ProbeResult> out;
  auto add = [&](std::string name, double value, double tol) {
    out.push_back(ProbeResult{std::move(name), value, tol, std::isfinite(value) && value <= tol});
  };

  for (HessianFlavor fl : {HessianFlavor::Star, HessianFlavor::Tilde}) {
    const std::string tag = fl == HessianFlavor::Star ? "star" : "tilde";
    double sbp = 0.0, transfer = 0.0, ratio = 0.0;
    for (int k = 0; k < pairs; ++k) {
      const LatticeField v = random_field(grid, rng);
      const LatticeField phi = random_field(grid, rng);
      sbp = std::max(sbp, sbp_residual(v, phi, fl));
      for (int a = 0; a < n; ++a) transfer = std::max(transfer, transfer_residual(v, phi, fl, a));
      ratio = std::max(ratio, poincare_ratio(v, fl));
    }
    add("sbp_" + tag, sbp, 1e-12);
    add("transfer_" + tag, transfer, 1e-12);
    add("poincare_ratio_" + tag, ratio, std::numeric_limits<double>::infinity());
  }

  double comm = 0.0;
  for (int k = 0; k < pairs; ++k) {
    std::vector<Univariate> factors;
    for (int a = 0; a < n; ++a) {
      std::vector<double> coeffs(5);
      for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
      factors.push_back(Univariate::polynomial(coeffs));
    }
    const TensorProduct f(factors);
    for (int a = 0; a < n; ++a) {
      const SourceFunction d2 = [f, a](std::span<const double> x) {
        std::array<int, kMaxDim> o{};
        o[a] = 2;
        return f.partial(std::span<const int>(o.data(), x.size()), x);
      };
      comm = std::max(comm, commutation_residual(f.as_source(), d2, grid, a).relative());
    }
  }
  add("commutation", comm, 1e-9);

  if (n >= 2) {
    for (TraceVariant tv : {TraceVariant::Centered, TraceVariant::OneSided}) {
      const std::string tag = tv == TraceVariant::Centered ? "centered" : "one_sided";
      const TraceReproduction t = inverse_trace_reproduction(n, m, tv, seed + 1);
      add("inverse_trace_zero_" + tag, t.max_value, 0.0);
      add("inverse_trace_data_" + tag, t.max_mismatch, 1e-10);
    }
    add("rh_identity", rh_identity_residual(n - 1, m, seed + 2), 1e-12);
  }
  return out;
}

}  // namespace biharm
