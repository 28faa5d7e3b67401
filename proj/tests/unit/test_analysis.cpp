#include <gtest/gtest.h>

#include <cmath>

#include "biharm/analysis.hpp"
#include "biharm/errors.hpp"
#include "oracles.hpp"

using namespace biharm;

namespace {

LatticeField random_lattice(const GridSpec& g, std::uint64_t seed) {
  ProbeRng rng(seed);
  return random_field(g, rng);
}

const HessianFlavor kFlavors[] = {HessianFlavor::Star, HessianFlavor::Tilde};

}  // namespace

TEST(Manufactured, Catalogue) {
  const ManufacturedCase s = manufactured_pair("sine4", 2);
  const double mid[2] = {0.5, 0.5};
  EXPECT_NEAR(s.u_exact(std::span<const double>(mid, 2)), 1.0, 1e-15);
  EXPECT_LE(clamped_defect(s.u), 1e-12);
  EXPECT_EQ(s.s, 4);
  EXPECT_TRUE(s.clamped);
  const ManufacturedCase p = manufactured_pair("poly-clamped", 1);
  for (double t : {0.2, 0.6}) EXPECT_NEAR(p.f(std::span<const double>(&t, 1)), 24.0, 1e-12);
  EXPECT_THROW(manufactured_pair("nope", 2), ValidationError);
  EXPECT_THROW(manufactured_pair("sine4", 0), SizingError);
  for (const std::string& name : manufactured_names()) EXPECT_NO_THROW(manufactured_pair(name, 3));
  // Localized factor: support inside [0, 0.65], nonzero third derivative at 0.
  const TensorProduct loc = manufactured_pair("sine4-local", 1).u;
  const double far = 0.66;
  EXPECT_EQ(loc.value(std::span<const double>(&far, 1)), 0.0);
  EXPECT_GT(std::abs(loc.factors()[0].derivative(3, 0.0)), 1.0);
}

TEST(Manufactured, ClampedDefectDetectsViolations) {
  const TensorProduct bad(2, Univariate::polynomial({0, 0, 1}));
  EXPECT_GT(clamped_defect(bad), 0.1);
}

TEST(ProbeRng, DeterministicUnitInterval) {
  ProbeRng a(42), b(42);
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  ProbeRng c(43);
  EXPECT_NE(ProbeRng(42).uniform(), c.uniform());
}

TEST(Sbp, IdentitiesOnRandomFields) {
  for (auto [n, m] : {std::pair{2, 8}, {2, 16}, {3, 8}}) {
    const GridSpec g = build_grid(n, m);
    for (HessianFlavor fl : kFlavors)
      for (int t = 0; t < 5; ++t) {
        const LatticeField v = random_lattice(g, 10 * t + 1), phi = random_lattice(g, 10 * t + 2);
        EXPECT_LE(sbp_residual(v, phi, fl), 1e-12);
        for (int a = 0; a < n; ++a) EXPECT_LE(transfer_residual(v, phi, fl, a), 1e-12);
      }
  }
}

TEST(Sbp, ZeroTestFunctionAndStrictMode) {
  const GridSpec g = build_grid(2, 8);
  const LatticeField v = random_lattice(g, 3);
  EXPECT_EQ(sbp_residual(v, LatticeField(g), HessianFlavor::Star), 0.0);
  const LatticeField phi = random_lattice(g, 4);
  EXPECT_THROW(sbp_residual(v, phi, HessianFlavor::Tilde, true), ValidationError);
  const LatticeField ok = project_hypothesis(phi, HessianFlavor::Tilde);
  EXPECT_NO_THROW(sbp_residual(v, ok, HessianFlavor::Tilde, true));
  EXPECT_THROW(sbp_residual(v, random_lattice(build_grid(2, 9), 1), HessianFlavor::Star), ValidationError);
}

TEST(Sbp, HypothesisProjection) {
  const GridSpec g = build_grid(2, 6);
  const LatticeField phi = random_lattice(g, 9);
  const LatticeField s = project_hypothesis(phi, HessianFlavor::Star);
  const LatticeField t = project_hypothesis(phi, HessianFlavor::Tilde);
  for (std::int32_t b : g.points(PointSet::Boundary)) {
    EXPECT_EQ(s[static_cast<std::size_t>(b)], 0.0);
    EXPECT_EQ(t[static_cast<std::size_t>(b)], 0.0);
  }
  for (std::int32_t gh : g.points(PointSet::Ghost)) EXPECT_EQ(s[static_cast<std::size_t>(gh)], 0.0);
  EXPECT_EQ(t.at(make_index({-1, 3})), t.at(make_index({1, 3})));
  EXPECT_EQ(t.at(make_index({-1, 0})), 0.0);
  for (std::int32_t p : g.points(PointSet::Interior)) EXPECT_EQ(t[static_cast<std::size_t>(p)], phi[static_cast<std::size_t>(p)]);
}

TEST(Poincare, FinitePositiveAndKernelTrivial) {
  const GridSpec g = build_grid(2, 8);
  for (HessianFlavor fl : kFlavors) {
    const double r = poincare_ratio(random_lattice(g, 5), fl);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GT(r, 0.0);
    EXPECT_THROW(poincare_ratio(LatticeField(g), fl), ValidationError);

    // Gram matrix of the Hessian form over admissible fields is positive
    // definite, so ∇²_h v = 0 forces v = 0.
    const auto in = g.points(PointSet::Interior);
    std::vector<HessianField> basis;
    for (std::int32_t p : in) {
      LatticeField e(g);
      e[static_cast<std::size_t>(p)] = 1.0;
      basis.push_back(hessian_field(project_hypothesis(e, fl)));
    }
    const std::size_t N = in.size();
    std::vector<double> gram(N * N);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b <= a; ++b) gram[a * N + b] = gram[b * N + a] = hessian_inner(basis[a], basis[b], fl);
    double pivot = 0.0;
    EXPECT_TRUE(oracle::cholesky(gram, N, &pivot));
    EXPECT_GT(pivot, 0.0);
  }
}

TEST(Poincare, RatioStableAcrossRefinement) {
  for (HessianFlavor fl : kFlavors) {
    std::vector<double> worst;
    for (int m : {8, 16, 32}) {
      const GridSpec g = build_grid(2, m);
      double mx = 0.0;
      for (int t = 0; t < 50; ++t) mx = std::max(mx, poincare_ratio(random_lattice(g, 7000 + t), fl));
      worst.push_back(mx);
    }
    const double hi = *std::max_element(worst.begin(), worst.end());
    const double lo = *std::min_element(worst.begin(), worst.end());
    EXPECT_LT(hi / lo, 3.0);
  }
}

TEST(PhiResidual, VanishesOnCubics) {
  const GridSpec g = build_grid(2, 8);
  const std::vector<TensorProduct> basis = cubic_basis_2d();
  ASSERT_EQ(basis.size(), 10u);
  for (const TensorProduct& u : basis)
    for (int axis : {0, 1}) {
      const LatticeField phi = phi_residual(u.as_source(), u.laplacian_source(), g, axis);
      for (double x : phi.values()) EXPECT_LE(std::abs(x), 1e-10);
    }
  const SourceFunction zero = [](std::span<const double>) { return 0.0; };
  const LatticeField z = phi_residual(zero, zero, g, 0);
  for (double x : z.values()) EXPECT_EQ(x, 0.0);
}

TEST(PhiResidual, SecondOrderForSmoothExtension) {
  const TensorProduct ut = extend_even(localize(TensorProduct(2, Univariate::sine_squared())));
  std::vector<double> norms;
  for (int m : {8, 16, 32})
    norms.push_back(l2h_norm(phi_residual(ut.as_source(), ut.laplacian_source(), build_grid(2, m), 1), PointSet::Closure));
  for (std::size_t k = 1; k < norms.size(); ++k) {
    EXPECT_GT(norms[k - 1] / norms[k], 3.4);
    EXPECT_LT(norms[k - 1] / norms[k], 4.6);
  }
}

TEST(Rates, FitAndPairwise) {
  EXPECT_NEAR(fit_rate({1, 0.25, 1.0 / 16}, {1, 0.5, 0.25}), 2.0, 1e-14);
  EXPECT_NEAR(fit_rate({1, 0.5}, {1, 0.5}), 1.0, 1e-14);
  EXPECT_NEAR(fit_rate({3, 3, 3}, {1, 0.5, 0.25}), 0.0, 1e-14);
  EXPECT_THROW(fit_rate({1}, {1}), ValidationError);
  EXPECT_THROW(fit_rate({1, 0}, {1, 0.5}), ValidationError);
  EXPECT_THROW(fit_rate({1, 2}, {0.5, 0.5}), ValidationError);
  const std::vector<double> p = pairwise_rates({1, 0.25, 0.125, 0}, {1, 0.5, 0.25, 0.125});
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0], 2.0, 1e-14);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
  EXPECT_EQ(p[2], 0.0);
}

TEST(ConvergenceStudy, ZeroCaseAndLadderChecks) {
  const ManufacturedCase z = manufactured_pair("zero", 2);
  const ConvergenceReport r = convergence_study(z, BcScheme::CenteredMirror, {4, 8});
  ASSERT_EQ(r.entries.size(), 2u);
  for (const LadderEntry& e : r.entries) EXPECT_LE(e.error_h2h, 1e-10);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.fitted_rate, 0.0);
  EXPECT_THROW(convergence_study(z, BcScheme::CenteredMirror, {3, 8}), SizingError);
  EXPECT_THROW(convergence_study(z, BcScheme::CenteredMirror, {8, 8}), ValidationError);
  EXPECT_THROW(convergence_study(z, BcScheme::CenteredMirror, {}), ValidationError);
}

TEST(ConvergenceStudy, MonotoneAndJobIndependent) {
  const ManufacturedCase c = manufactured_pair("sine4", 2);
  StudyOptions serial, wide;
  wide.jobs = 3;
  const ConvergenceReport a = convergence_study(c, BcScheme::OneSidedZero, {8, 12, 16}, serial);
  const ConvergenceReport b = convergence_study(c, BcScheme::OneSidedZero, {8, 12, 16}, wide);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.scheme, "one-sided");
  for (std::size_t k = 1; k < a.entries.size(); ++k) EXPECT_LT(a.entries[k].error_h2h, a.entries[k - 1].error_h2h);
}

TEST(ConvergenceStudy, FailureAbortsWithPartialReport) {
  const ManufacturedCase c = manufactured_pair("sine4", 2);
  StudyOptions o;
  o.solver.maxit = 20;  // enough for m = 4 only
  const ConvergenceReport r = convergence_study(c, BcScheme::CenteredMirror, {4, 16, 32}, o);
  EXPECT_FALSE(r.complete);
  EXPECT_FALSE(r.failure.empty());
  EXPECT_EQ(r.entries.size(), 1u);
}

TEST(BoundaryScaling, ZeroAndShape) {
  const SourceFunction zero = [](std::span<const double>) { return 0.0; };
  const BoundaryScalingReport r = boundary_scaling_study(zero, 2, {8, 16}, TraceVariant::Centered, 1);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const BoundaryScalingRow& row : r.rows) EXPECT_EQ(row.norm, 0.0);
  EXPECT_EQ(r.pairwise_rates.size(), 1u);
}

TEST(ErrorDecomposition, InequalityHolds) {
  const TensorProduct u = localize(TensorProduct(2, Univariate::sine_squared()));
  for (BcScheme s : {BcScheme::CenteredMirror, BcScheme::OneSidedZero})
    for (int m : {8, 16}) {
      const DecompositionCheck d = error_decomposition(u, build_grid(2, m), s);
      EXPECT_TRUE(d.holds()) << d.lhs << " vs " << d.e_hat_term << " + " << d.phi_term;
      EXPECT_GT(d.lhs, 0.0);
    }
}

TEST(OperatorProbe, SymmetricPositive) {
  for (BcScheme s : {BcScheme::CenteredMirror, BcScheme::OneSidedZero}) {
    const OperatorProbe p = operator_probe(build_grid(2, 8), s, 20, 11);
    EXPECT_LE(p.symmetry, 1e-12);
    EXPECT_LE(p.energy, 1e-12);
    EXPECT_GT(p.min_rayleigh, 0.0);
  }
}

TEST(VerifySuite, AllProbesPass) {
  const std::vector<ProbeResult> r = verify_suite(2, 8, 7, 5);
  EXPECT_GE(r.size(), 10u);
  for (const ProbeResult& p : r) EXPECT_TRUE(p.passed) << p.name << " " << p.value;
}
