#include "biharm/lattice.hpp"

#include <string>

#include "biharm/errors.hpp"

namespace biharm {

namespace {

// Number of coordinates equal to -1 or m+1.
int ghost_coords(const MultiIndex& idx, int n, int m) {
  int count = 0;
  for (int a = 0; a < n; ++a)
    if (idx[a] == -1 || idx[a] == m + 1) ++count;
  return count;
}

bool in_box(const MultiIndex& idx, int n, int m) {
  for (int a = 0; a < n; ++a)
    if (idx[a] < -1 || idx[a] > m + 1) return false;
  return true;
}

PointTag tag_of(const MultiIndex& idx, int n, int m) {
  if (!in_box(idx, n, m)) return PointTag::Outside;
  const int ghosts = ghost_coords(idx, n, m);
  if (n >= 2 && ghosts == n) return PointTag::Outside;
  if (ghosts > 0) return PointTag::Ghost;
  for (int a = 0; a < n; ++a)
    if (idx[a] == 0 || idx[a] == m) return PointTag::Boundary;
  return PointTag::Interior;
}

std::vector<Face> faces_of(const MultiIndex& idx, int n, int m) {
  std::vector<Face> faces;
  for (int a = 0; a < n; ++a) {
    if (idx[a] == 0) faces.push_back({a, Side::Low});
    if (idx[a] == m) faces.push_back({a, Side::High});
  }
  return faces;
}

}  // namespace

MultiIndex make_index(std::initializer_list<int> coords) {
  MultiIndex idx{};
  int a = 0;
  for (int c : coords) {
    if (a >= kMaxDim) throw DomainError("make_index: more than kMaxDim coordinates");
    idx[a++] = c;
  }
  return idx;
}

GridSpec build_grid(int n, int m) {
  if (n < 1 || n > kMaxDim)
    throw SizingError("build_grid: dimension must be in [1, " + std::to_string(kMaxDim) +
                      "], got " + std::to_string(n));
  if (m < 4) throw SizingError("build_grid: m must be >= 4, got " + std::to_string(m));

  auto t = std::make_shared<GridSpec::Tables>();
  const std::int64_t side = m + 3;
  std::int64_t s = 1;
  for (int a = n - 1; a >= 0; --a) {
    t->stride[a] = s;
    s *= side;
  }
  t->box_size = s;
  t->box_to_flat.assign(static_cast<std::size_t>(s), -1);

  MultiIndex idx{};
  for (std::int64_t box = 0; box < s; ++box) {
    std::int64_t rem = box;
    for (int a = 0; a < n; ++a) {
      idx[a] = static_cast<int>(rem / t->stride[a]) - 1;
      rem %= t->stride[a];
    }
    const PointTag tg = tag_of(idx, n, m);
    if (tg == PointTag::Outside) continue;
    const auto flat = static_cast<std::int32_t>(t->flat_to_box.size());
    t->box_to_flat[static_cast<std::size_t>(box)] = flat;
    t->flat_to_box.push_back(box);
    t->tag.push_back(static_cast<std::uint8_t>(tg));
    t->tilde.push_back(flat);
    switch (tg) {
      case PointTag::Interior:
        t->interior.push_back(flat);
        t->closure.push_back(flat);
        break;
      case PointTag::Boundary:
        t->boundary.push_back(flat);
        t->closure.push_back(flat);
        break;
      default:
        t->ghost.push_back(flat);
        break;
    }
  }

  // Mirror sources: reflect the single out-of-cube coordinate back inside.
  t->mirror.assign(t->flat_to_box.size(), GridSpec::kNone);
  for (std::int32_t g : t->ghost) {
    std::int64_t box = t->flat_to_box[static_cast<std::size_t>(g)];
    std::int64_t rem = box;
    int out_axis = -1;
    int out_count = 0;
    for (int a = 0; a < n; ++a) {
      idx[a] = static_cast<int>(rem / t->stride[a]) - 1;
      rem %= t->stride[a];
      if (idx[a] == -1 || idx[a] == m + 1) {
        out_axis = a;
        ++out_count;
      }
    }
    if (out_count != 1) continue;
    const int step = idx[out_axis] == -1 ? 2 : -2;
    t->mirror[static_cast<std::size_t>(g)] =
        t->box_to_flat[static_cast<std::size_t>(box + step * t->stride[out_axis])];
  }

  return GridSpec(n, m, std::move(t));
}

std::span<const std::int32_t> GridSpec::points(PointSet set) const {
  switch (set) {
    case PointSet::Interior: return t_->interior;
    case PointSet::Boundary: return t_->boundary;
    case PointSet::Ghost: return t_->ghost;
    case PointSet::Closure: return t_->closure;
    case PointSet::Tilde: return t_->tilde;
  }
  return {};
}

std::int64_t GridSpec::box_of(const MultiIndex& idx) const {
  std::int64_t box = 0;
  for (int a = 0; a < n_; ++a) box += (idx[a] + 1) * t_->stride[a];
  return box;
}

std::optional<std::size_t> GridSpec::index_of(const MultiIndex& idx) const {
  if (!in_box(idx, n_, m_)) return std::nullopt;
  const std::int32_t flat = t_->box_to_flat[static_cast<std::size_t>(box_of(idx))];
  if (flat < 0) return std::nullopt;
  return static_cast<std::size_t>(flat);
}

MultiIndex GridSpec::multi_index(std::size_t flat) const {
  MultiIndex idx{};
  std::int64_t rem = t_->flat_to_box.at(flat);
  for (int a = 0; a < n_; ++a) {
    idx[a] = static_cast<int>(rem / t_->stride[a]) - 1;
    rem %= t_->stride[a];
  }
  return idx;
}

int GridSpec::coord(std::size_t flat, int axis) const {
  const std::int64_t box = t_->flat_to_box[flat];
  return static_cast<int>((box / t_->stride[axis]) % (m_ + 3)) - 1;
}

std::int64_t GridSpec::shift(std::size_t flat, int axis, int steps) const {
  const int c = coord(flat, axis) + steps;
  if (c < -1 || c > m_ + 1) return kNone;
  const std::int64_t box = t_->flat_to_box[flat] + steps * t_->stride[axis];
  return t_->box_to_flat[static_cast<std::size_t>(box)];
}

bool GridSpec::in_closure(const MultiIndex& idx) const {
  for (int a = 0; a < n_; ++a)
    if (idx[a] < 0 || idx[a] > m_) return false;
  return true;
}

PointClass GridSpec::classify(const MultiIndex& idx) const {
  PointClass pc;
  pc.tag = tag_of(idx, n_, m_);
  if (pc.tag == PointTag::Boundary) {
    pc.faces = faces_of(idx, n_, m_);
    pc.singular = pc.faces.size() >= 2;
  } else if (pc.tag == PointTag::Ghost && ghost_coords(idx, n_, m_) == 1) {
    // The only boundary point at distance h is the foot across the face.
    MultiIndex foot = idx;
    for (int a = 0; a < n_; ++a) {
      if (foot[a] == -1) foot[a] = 0;
      if (foot[a] == m_ + 1) foot[a] = m_;
    }
    pc.near_singular = faces_of(foot, n_, m_).size() >= 2;
  }
  return pc;
}

bool GridSpec::in_gamma_ij(std::size_t flat, int i, int j) const {
  if (tag(flat) != PointTag::Boundary) return false;
  MultiIndex z = multi_index(flat);
  MultiIndex a = z, b = z, c = z;
  a[i] += 1;
  b[j] -= 1;
  c[i] += 1;
  c[j] -= 1;
  return in_closure(a) && in_closure(b) && in_closure(c);
}

std::vector<MultiIndex> GridSpec::gamma_ij(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw DomainError("gamma_ij: axis out of range");
  if (i == j) throw DomainError("gamma_ij: defined only for i != j");
  std::vector<MultiIndex> out;
  for (std::int32_t z : t_->boundary)
    if (in_gamma_ij(static_cast<std::size_t>(z), i, j))
      out.push_back(multi_index(static_cast<std::size_t>(z)));
  return out;
}

PointClass classify_point(const GridSpec& grid, const MultiIndex& idx) {
  return grid.classify(idx);
}

std::vector<MultiIndex> gamma_ij(const GridSpec& grid, int i, int j) {
  return grid.gamma_ij(i, j);
}

}  // namespace biharm
