#include "biharm/difference_ops.hpp"

#include <string>

#include "biharm/errors.hpp"

namespace biharm {

LatticeField::LatticeField(GridSpec grid)
    : grid_(std::move(grid)), values_(grid_.size(PointSet::Tilde), 0.0) {}

LatticeField::LatticeField(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size(PointSet::Tilde))
    throw ValidationError("LatticeField: value count does not match |Ω̃^h|");
}

LatticeField LatticeField::sample(GridSpec grid,
                                  const std::function<double(std::span<const double>)>& fn) {
  LatticeField out(std::move(grid));
  const GridSpec& g = out.grid();
  const int n = g.dim();
  const double h = g.h();
  std::array<double, kMaxDim> x{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (int a = 0; a < n; ++a) x[a] = h * g.coord(k, a);
    out.values_[k] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(n)));
  }
  return out;
}

double LatticeField::at(const MultiIndex& idx) const {
  const auto flat = grid_.index_of(idx);
  if (!flat) throw DomainError("LatticeField::at: point outside Ω̃^h");
  return values_[*flat];
}

double LatticeField::value_or_zero(const MultiIndex& idx) const {
  const auto flat = grid_.index_of(idx);
  return flat ? values_[*flat] : 0.0;
}

void LatticeField::set(const MultiIndex& idx, double value) {
  const auto flat = grid_.index_of(idx);
  if (!flat) throw DomainError("LatticeField::set: point outside Ω̃^h");
  values_[*flat] = value;
}

namespace {

MultiIndex offset(MultiIndex p, int axis, int step) {
  p[axis] += step;
  return p;
}

void check_axis(const GridSpec& g, int axis) {
  if (axis < 0 || axis >= g.dim()) throw DomainError("axis out of range");
}

// D_i D_{-j} v(x) = (v(x+e_i) - v(x) - v(x+e_i-e_j) + v(x-e_j)) / h^2.
double mixed(const LatticeField& f, int i, int j, const MultiIndex& x) {
  const double h = f.grid().h();
  const MultiIndex xi = offset(x, i, 1);
  const MultiIndex xj = offset(x, j, -1);
  const MultiIndex xij = offset(xi, j, -1);
  return (f.at(xi) - f.at(x) - f.at(xij) + f.at(xj)) / (h * h);
}

}  // namespace

double diff(const LatticeField& field, int axis, DiffKind kind, const MultiIndex& point) {
  check_axis(field.grid(), axis);
  const double h = field.grid().h();
  switch (kind) {
    case DiffKind::Forward:
      return (field.at(offset(point, axis, 1)) - field.at(point)) / h;
    case DiffKind::Backward:
      return (field.at(point) - field.at(offset(point, axis, -1))) / h;
    case DiffKind::Centered:
      return (field.at(offset(point, axis, 1)) - field.at(offset(point, axis, -1))) / (2.0 * h);
  }
  return 0.0;
}

HessianValue discrete_hessian(const LatticeField& field, const MultiIndex& point) {
  const int n = field.grid().dim();
  HessianValue H;
  H.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = mixed(field, i, j, point);
  return H;
}

double discrete_laplacian(const LatticeField& field, const MultiIndex& point) {
  const int n = field.grid().dim();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += mixed(field, i, i, point);
  return sum;
}

double discrete_bilaplacian(const LatticeField& field, const MultiIndex& point) {
  const int n = field.grid().dim();
  const double h2 = field.grid().h() * field.grid().h();
  double sum = -2.0 * n * discrete_laplacian(field, point);
  for (int i = 0; i < n; ++i) {
    sum += discrete_laplacian(field, offset(point, i, 1));
    sum += discrete_laplacian(field, offset(point, i, -1));
  }
  return sum / h2;
}

LatticeField fill_ghosts(const LatticeField& in, BcScheme scheme) {
  const GridSpec& g = in.grid();
  for (std::int32_t b : g.points(PointSet::Boundary))
    if (in[static_cast<std::size_t>(b)] != 0.0)
      throw ValidationError("fill_ghosts: boundary values must be zero");

  LatticeField out = in;
  for (std::int32_t gh : g.points(PointSet::Ghost)) {
    const auto k = static_cast<std::size_t>(gh);
    if (scheme == BcScheme::OneSidedZero) {
      out[k] = 0.0;
      continue;
    }
    const std::int64_t src = g.mirror_source(k);
    out[k] = src == GridSpec::kNone ? 0.0 : in[static_cast<std::size_t>(src)];
  }
  return out;
}

const char* to_string(BcScheme scheme) {
  return scheme == BcScheme::CenteredMirror ? "centered" : "one-sided";
}

}  // namespace biharm
