#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "biharm/discrete_norms.hpp"
#include "biharm/errors.hpp"
#include "oracles.hpp"

using namespace biharm;

namespace {

LatticeField random_values(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeField v(g);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = u(gen);
  return v;
}

FaceField face(int n, double h, std::vector<FacePoint> pts, std::vector<double> vals) {
  FaceField f;
  f.dim = n;
  f.h = h;
  f.points = std::move(pts);
  f.values = std::move(vals);
  return f;
}

}  // namespace

TEST(L2h, Examples) {
  const GridSpec g = build_grid(2, 4);
  LatticeField one(g);
  for (std::int32_t p : g.points(PointSet::Interior)) one[static_cast<std::size_t>(p)] = 1.0;
  EXPECT_DOUBLE_EQ(l2h_norm(one, PointSet::Interior) * l2h_norm(one, PointSet::Interior), 9.0 / 16.0);
  LatticeField spike(g);
  spike.set(make_index({2, 1}), 2.0);
  EXPECT_DOUBLE_EQ(l2h_inner(spike, spike, PointSet::Interior), 0.25);
  LatticeField other(g);
  other.set(make_index({1, 1}), 5.0);
  EXPECT_EQ(l2h_inner(spike, other, PointSet::Tilde), 0.0);
}

TEST(H2h, SpikeAndZero) {
  EXPECT_EQ(h2h_norm(LatticeField(build_grid(2, 5))), 0.0);
  LatticeField v(build_grid(1, 4));
  v.set(make_index({2}), 1.0);
  EXPECT_NEAR(h2h_norm_squared(v), oracle::h2h_parts(v).total(), 1e-12);
  // Hand count for the 1D spike at 2h with h = 1/4: one value term, two
  // first differences and three second differences (1, -2, 1)/h².
  const double h = 0.25;
  EXPECT_NEAR(h2h_norm_squared(v), h * (1.0 + 2.0 / (h * h) + 6.0 / std::pow(h, 4)), 1e-9);
}

TEST(H2h, MatchesBruteForceOnRandomFields) {
  for (auto [n, m] : {std::pair{1, 4}, {2, 4}, {2, 9}, {2, 16}, {3, 5}}) {
    const LatticeField v = random_values(build_grid(n, m), 1000 + n * 31 + m);
    const double ref = oracle::h2h_parts(v).total();
    EXPECT_NEAR(h2h_norm_squared(v), ref, 1e-12 * ref) << n << "," << m;
    EXPECT_NEAR(h2h_norm(v), std::sqrt(ref), 1e-12 * std::sqrt(ref));
  }
}

TEST(H2h, AffineHasNoSecondDifferenceBlock) {
  const LatticeField v = LatticeField::sample(build_grid(2, 6), [](auto x) { return 1.0 - 2.0 * x[0] + 0.5 * x[1]; });
  const oracle::H2hParts parts = oracle::h2h_parts(v);
  EXPECT_NEAR(parts.second, 0.0, 1e-18 + 1e-12 * parts.total());
  EXPECT_NEAR(h2h_norm_squared(v), parts.zero + parts.first, 1e-12 * parts.total());
}

TEST(H2h, NormAxioms) {
  const GridSpec g = build_grid(2, 8);
  const LatticeField a = random_values(g, 5), b = random_values(g, 6);
  LatticeField s(g), t(g);
  for (std::size_t k = 0; k < a.size(); ++k) {
    s[k] = a[k] + b[k];
    t[k] = -3.0 * a[k];
  }
  EXPECT_LE(h2h_norm(s), (h2h_norm(a) + h2h_norm(b)) * (1 + 1e-12));
  EXPECT_NEAR(h2h_norm(t), 3.0 * h2h_norm(a), 1e-12 * h2h_norm(t));
}

TEST(HessianInner, SingleEntryWeights) {
  const GridSpec g = build_grid(2, 4);
  const double cell = std::pow(g.h(), 2);
  const std::size_t inner = *g.index_of(make_index({2, 2}));
  const std::size_t bnd = *g.index_of(make_index({0, 2}));
  HessianField f(g);
  f(inner, 1, 1) = 3.0;
  EXPECT_DOUBLE_EQ(hessian_inner(f, f, HessianFlavor::Star), cell * 9.0);
  EXPECT_DOUBLE_EQ(hessian_inner(f, f, HessianFlavor::Tilde), cell * 9.0);
  HessianField b(g);
  b(bnd, 0, 0) = 3.0;
  EXPECT_DOUBLE_EQ(hessian_inner(b, b, HessianFlavor::Star), cell * 9.0);
  EXPECT_DOUBLE_EQ(hessian_inner(b, b, HessianFlavor::Tilde), 0.5 * cell * 9.0);
  // (0, 2) ∈ Γ_01 but (0, 0) is not.
  HessianField o(g);
  o(bnd, 0, 1) = 2.0;
  o(*g.index_of(make_index({0, 0})), 0, 1) = 7.0;
  EXPECT_DOUBLE_EQ(hessian_inner(o, o, HessianFlavor::Tilde), cell * 4.0);
  EXPECT_DOUBLE_EQ(hessian_inner(o, o, HessianFlavor::Star), cell * 53.0);
  EXPECT_EQ(hessian_inner(f, b, HessianFlavor::Star), 0.0);
  EXPECT_EQ(hessian_inner(f, b, HessianFlavor::Tilde), 0.0);
}

TEST(HessianInner, SymmetricBilinear) {
  const GridSpec g = build_grid(3, 5);
  const HessianField a = hessian_field(random_values(g, 1)), b = hessian_field(random_values(g, 2));
  for (HessianFlavor fl : {HessianFlavor::Star, HessianFlavor::Tilde}) {
    const double ab = hessian_inner(a, b, fl), ba = hessian_inner(b, a, fl);
    EXPECT_NEAR(ab, ba, 1e-12 * std::abs(ab));
    EXPECT_NEAR(hessian_norm(a, fl), std::sqrt(hessian_inner(a, a, fl)), 0.0);
  }
}

TEST(HessianField, ZeroExtensionOutsideTilde) {
  const GridSpec g = build_grid(2, 4);
  LatticeField v(g);
  v.set(make_index({-1, 0}), 1.0);
  const HessianField H = hessian_field(v);
  const double h2 = g.h() * g.h();
  // D_0 D_{-0} at (0, 0) sees v(-1, 0) = 1 as the backward neighbor.
  EXPECT_DOUBLE_EQ(H(*g.index_of(make_index({0, 0})), 0, 0), 1.0 / h2);
  // D_1 D_{-0} at (0, 0) reads v(x - e_0) = v(-1, 0); D_0 D_{-1} does not.
  EXPECT_DOUBLE_EQ(H(*g.index_of(make_index({0, 0})), 1, 0), 1.0 / h2);
  EXPECT_DOUBLE_EQ(H(*g.index_of(make_index({0, 0})), 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(H(*g.index_of(make_index({1, 0})), 0, 0), 0.0);
}

TEST(FaceNorms, SeminormExample) {
  const double h = 0.125;
  const FaceField w = face(2, h, {{0}, {1}, {2}}, {1.0, 0.0, 0.0});
  EXPECT_NEAR(h_half_seminorm_squared(w, std::vector<FacePoint>{}), 2.5, 1e-14);
  const FaceField c = face(2, h, {{0}, {1}, {2}}, {4.0, 4.0, 4.0});
  EXPECT_EQ(h_half_seminorm(c, std::vector<FacePoint>{}), 0.0);
  const FaceField w2 = face(2, h, {{0}, {1}, {2}}, {2.0, 0.0, 0.0});
  EXPECT_NEAR(h_half_seminorm(w2), 2.0 * h_half_seminorm(w), 1e-14);
  EXPECT_EQ(h_half_seminorm(face(3, h, {}, {})), 0.0);
}

TEST(FaceNorms, MatchesPairSumOracle) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {2, 3}) {
    const double h = 1.0 / 8;
    const std::vector<FacePoint> support = face_box(n - 1, h, 0.0, 0.5);
    std::vector<double> vals;
    for (std::size_t k = 0; k < support.size(); ++k) vals.push_back(u(gen));
    const FaceField w = face(n, h, support, vals);
    const std::vector<FacePoint> collar = face_box(n - 1, h, -0.5, 1.0);
    // Oracle over the union, with zeros on collar points outside the support.
    std::vector<FacePoint> pts = support;
    std::vector<double> all = vals;
    for (const FacePoint& c : collar)
      if (std::find(support.begin(), support.end(), c) == support.end()) {
        pts.push_back(c);
        all.push_back(0.0);
      }
    const double ref = oracle::half_seminorm_squared(pts, all, n, h);
    EXPECT_NEAR(h_half_seminorm_squared(w, collar), ref, 1e-12 * ref) << n;
    const double l2 = l2h_norm(w);
    EXPECT_NEAR(h_half_norm(w, collar), std::sqrt(ref + l2 * l2), 1e-12 * std::sqrt(ref));
  }
}

TEST(FaceNorms, TranslationInvariance) {
  const double h = 1.0 / 6;
  std::vector<FacePoint> pts = face_box(2, h, 0.0, 0.5), moved = pts;
  std::vector<double> vals;
  for (std::size_t k = 0; k < pts.size(); ++k) vals.push_back(std::sin(1.0 + 3.0 * k));
  for (FacePoint& p : moved) {
    p[0] += 3;
    p[1] -= 2;
  }
  std::vector<FacePoint> collar = face_box(2, h, -0.5, 1.0), moved_collar = collar;
  for (FacePoint& p : moved_collar) {
    p[0] += 3;
    p[1] -= 2;
  }
  const double a = h_half_seminorm_squared(face(3, h, pts, vals), collar);
  const double b = h_half_seminorm_squared(face(3, h, moved, vals), moved_collar);
  EXPECT_NEAR(a, b, 1e-13 * a);
}

TEST(FaceNorms, PoincareLowerBound) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {2, 3})
    for (int m : {6, 9}) {
      const double h = 1.0 / m;
      const std::vector<FacePoint> support = face_box(n - 1, h, 0.0, 2.0 / 3.0);
      const std::vector<FacePoint> collar = face_box(n - 1, h, -2.0, -1.0 - 0.5 * h);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> vals;
        for (std::size_t k = 0; k < support.size(); ++k) vals.push_back(u(gen));
        const FaceField w = face(n, h, support, vals);
        const double l2 = l2h_norm(w);
        EXPECT_GE(h_half_seminorm_squared(w, collar), std::pow(3.0 * std::sqrt(n), -n) * l2 * l2);
      }
    }
}

TEST(FaceNorms, ValidationAndInner) {
  FaceField dup = face(2, 0.25, {{1}, {1}}, {1.0, 2.0});
  EXPECT_THROW(dup.validate(), ValidationError);
  FaceField mismatch = face(2, 0.25, {{1}}, {1.0, 2.0});
  EXPECT_THROW(mismatch.validate(), ValidationError);
  const FaceField a = face(3, 0.25, {{0, 0}, {1, 0}}, {1.0, 2.0});
  const FaceField b = face(3, 0.25, {{1, 0}, {2, 2}}, {3.0, 9.0});
  EXPECT_DOUBLE_EQ(l2h_inner(a, b), 0.25 * 0.25 * 6.0);
  EXPECT_EQ(face_box(2, 0.25, 0.0, 0.5).size(), 9u);
}
