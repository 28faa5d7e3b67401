#include "biharm/discrete_norms.hpp"

#include <algorithm>
#include <cmath>

#include "biharm/errors.hpp"

namespace biharm {

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.dim() != b.dim() || a.m() != b.m()) throw ValidationError("fields live on different grids");
}

double cell_volume(const GridSpec& g) { return std::pow(g.h(), g.dim()); }

}  // namespace

double l2h_inner(const LatticeField& v, const LatticeField& w, PointSet region) {
  require_same_grid(v.grid(), w.grid());
  double sum = 0.0;
  for (std::int32_t p : v.grid().points(region)) {
    const auto k = static_cast<std::size_t>(p);
    sum += v[k] * w[k];
  }
  return cell_volume(v.grid()) * sum;
}

double l2h_norm(const LatticeField& v, PointSet region) {
  return std::sqrt(l2h_inner(v, v, region));
}

double h2h_norm_squared(const LatticeField& v) {
  const GridSpec& g = v.grid();
  const int n = g.dim();
  const double h = g.h();
  double values = 0.0, first = 0.0, second = 0.0;
  for (std::int32_t p : g.points(PointSet::Tilde)) {
    const auto x = static_cast<std::size_t>(p);
    values += v[x] * v[x];
    for (int i = 0; i < n; ++i) {
      const std::int64_t xi = g.shift(x, i, 1);
      if (xi == GridSpec::kNone) continue;
      const double d = (v[static_cast<std::size_t>(xi)] - v[x]) / h;
      first += d * d;
      for (int j = 0; j < n; ++j) {
        const std::int64_t xj = g.shift(x, j, -1);
        if (xj == GridSpec::kNone) continue;
        const std::int64_t xij = g.shift(static_cast<std::size_t>(xi), j, -1);
        if (xij == GridSpec::kNone) continue;
        const double dd = (v[static_cast<std::size_t>(xi)] - v[x] -
                           v[static_cast<std::size_t>(xij)] + v[static_cast<std::size_t>(xj)]) /
                          (h * h);
        second += dd * dd;
      }
    }
  }
  return cell_volume(g) * (values + first + second);
}

double h2h_norm(const LatticeField& v) { return std::sqrt(h2h_norm_squared(v)); }

HessianField::HessianField(GridSpec grid)
    : grid_(std::move(grid)),
      nn_(static_cast<std::size_t>(grid_.dim() * grid_.dim())),
      data_(grid_.size(PointSet::Tilde) * nn_, 0.0) {}

HessianField hessian_field(const LatticeField& v) {
  const GridSpec& g = v.grid();
  const int n = g.dim();
  const double h2 = g.h() * g.h();
  HessianField H(g);
  for (std::int32_t p : g.points(PointSet::Closure)) {
    const auto z = static_cast<std::size_t>(p);
    const MultiIndex zi = g.multi_index(z);
    for (int i = 0; i < n; ++i) {
      MultiIndex a = zi;
      a[i] += 1;
      const auto ai = g.index_of(a);
      for (int j = 0; j < n; ++j) {
        MultiIndex b = zi, c = a;
        b[j] -= 1;
        c[j] -= 1;
        const auto bi = g.index_of(b);
        const auto ci = g.index_of(c);
        const double va = ai ? v[*ai] : 0.0;
        const double vb = bi ? v[*bi] : 0.0;
        const double vc = ci ? v[*ci] : 0.0;
        H(z, i, j) = (va - v[z] - vc + vb) / h2;
      }
    }
  }
  return H;
}

double hessian_inner(const HessianField& f, const HessianField& g, HessianFlavor flavor) {
  require_same_grid(f.grid(), g.grid());
  const GridSpec& grid = f.grid();
  const int n = grid.dim();
  double bulk = 0.0;
  const PointSet bulk_set = flavor == HessianFlavor::Star ? PointSet::Closure : PointSet::Interior;
  for (std::int32_t p : grid.points(bulk_set)) {
    const auto z = static_cast<std::size_t>(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bulk += f(z, i, j) * g(z, i, j);
  }
  if (flavor == HessianFlavor::Star) return cell_volume(grid) * bulk;

  double diagonal = 0.0, off = 0.0;
  for (std::int32_t p : grid.points(PointSet::Boundary)) {
    const auto z = static_cast<std::size_t>(p);
    for (int i = 0; i < n; ++i) {
      diagonal += f(z, i, i) * g(z, i, i);
      for (int j = 0; j < n; ++j)
        if (i != j && grid.in_gamma_ij(z, i, j)) off += f(z, i, j) * g(z, i, j);
    }
  }
  return cell_volume(grid) * (bulk + 0.5 * diagonal + off);
}

double hessian_norm(const HessianField& f, HessianFlavor flavor) {
  return std::sqrt(hessian_inner(f, f, flavor));
}

void FaceField::validate() const {
  if (dim < 2 || dim > kMaxDim) throw ValidationError("FaceField: ambient dimension out of range");
  if (points.size() != values.size()) throw ValidationError("FaceField: points/values size mismatch");
  std::vector<FacePoint> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("FaceField: duplicate support point");
}

double l2h_inner(const FaceField& v, const FaceField& w) {
  v.validate();
  w.validate();
  if (v.dim != w.dim || v.h != w.h) throw ValidationError("FaceField: incompatible faces");
  std::vector<std::pair<FacePoint, double>> wv;
  for (std::size_t k = 0; k < w.points.size(); ++k) wv.emplace_back(w.points[k], w.values[k]);
  std::sort(wv.begin(), wv.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < v.points.size(); ++k) {
    auto it = std::lower_bound(wv.begin(), wv.end(), std::make_pair(v.points[k], -HUGE_VAL));
    if (it != wv.end() && it->first == v.points[k]) sum += v.values[k] * it->second;
  }
  return std::pow(v.h, v.dim - 1) * sum;
}

double l2h_norm(const FaceField& w) { return std::sqrt(l2h_inner(w, w)); }

std::vector<FacePoint> face_box(int face_dim, double h, double lo, double hi) {
  const int a = static_cast<int>(std::ceil(lo / h - 1e-9));
  const int b = static_cast<int>(std::floor(hi / h + 1e-9));
  std::vector<FacePoint> out;
  if (b < a || face_dim < 1) return out;
  FacePoint p{};
  for (int d = 0; d < face_dim; ++d) p[d] = a;
  while (true) {
    out.push_back(p);
    int d = face_dim - 1;
    while (d >= 0 && p[d] == b) {
      p[d] = a;
      --d;
    }
    if (d < 0) break;
    ++p[d];
  }
  return out;
}

double h_half_seminorm_squared(const FaceField& w, const std::optional<std::vector<FacePoint>>& collar) {
  w.validate();
  const int fd = w.face_dim();
  const int n = w.dim;
  const std::vector<FacePoint> zeros = collar ? *collar : face_box(fd, w.h, -2.0, 2.0);

  std::vector<FacePoint> support = w.points;
  std::sort(support.begin(), support.end());
  std::vector<FacePoint> extra;
  for (const FacePoint& c : zeros)
    if (!std::binary_search(support.begin(), support.end(), c)) extra.push_back(c);
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());

  auto inv_dist = [&](const FacePoint& x, const FacePoint& y) {
    double r2 = 0.0;
    for (int d = 0; d < fd; ++d) {
      const double dx = x[d] - y[d];
      r2 += dx * dx;
    }
    return std::pow(r2, -0.5 * n);
  };

  // Distances are taken in units of h; |x-y|^{-n} h^{2n-2} = |Δ|^{-n} h^{n-2}.
  double within = 0.0;
  for (std::size_t a = 0; a < w.points.size(); ++a)
    for (std::size_t b = 0; b < w.points.size(); ++b) {
      if (a == b) continue;
      const double d = w.values[a] - w.values[b];
      if (d != 0.0) within += d * d * inv_dist(w.points[a], w.points[b]);
    }
  double against = 0.0;
  for (std::size_t a = 0; a < w.points.size(); ++a) {
    const double v2 = w.values[a] * w.values[a];
    if (v2 == 0.0) continue;
    double kernel = 0.0;
    for (const FacePoint& y : extra) kernel += inv_dist(w.points[a], y);
    against += v2 * kernel;
  }
  return std::pow(w.h, n - 2) * (within + 2.0 * against);
}

double h_half_seminorm(const FaceField& w, const std::optional<std::vector<FacePoint>>& collar) {
  return std::sqrt(h_half_seminorm_squared(w, collar));
}

double h_half_norm(const FaceField& w, const std::optional<std::vector<FacePoint>>& collar) {
  const double l2 = l2h_norm(w);
  return std::sqrt(h_half_seminorm_squared(w, collar) + l2 * l2);
}

}  // namespace biharm
