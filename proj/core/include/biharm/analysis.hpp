#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "biharm/difference_ops.hpp"
#include "biharm/discrete_norms.hpp"
#include "biharm/extension.hpp"
#include "biharm/lattice.hpp"
#include "biharm/scheme_solver.hpp"
#include "biharm/smooth_function.hpp"

namespace biharm {

/// Deterministic uniform generator for probes.
class ProbeRng {
 public:
  explicit ProbeRng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

/// Uniform [-1, 1) values on every point of Ω̃^h.
LatticeField random_field(const GridSpec& grid, ProbeRng& rng);

struct ManufacturedCase {
  std::string name;
  TensorProduct u;
  SourceFunction u_exact;
  SourceFunction f;  ///< Δ² u_exact
  int s = 4;
  bool clamped = true;
};

/// Catalogue: "sine4" (Π sin²(πx_a)), "poly-clamped" (Π x_a²(1-x_a)²),
/// "zero", and "sine4-local" (sine4 localized as below, used where a
/// reflection extension is needed).
/// ValidationError for an unknown name or a failed clamped check.
ManufacturedCase manufactured_pair(const std::string& name, int n);
std::vector<std::string> manufactured_names();

/// Multiplies every factor by exp(-3t) plateau(0, 0.65). The support lands in
/// [0, 0.65]^n, inside the window extend_even requires, and the factor keeps a
/// nonzero third derivative at t = 0.
TensorProduct localize(const TensorProduct& u);

/// max(|u|, |∇u|) over `samples` random boundary points.
double clamped_defect(const TensorProduct& u, std::uint64_t seed = 1, int samples = 100);

/// Boundary hypotheses of the identities: Star zeroes φ on Γ^h and every
/// ghost (φ = D_ν φ = 0); Tilde zeroes φ on Γ^h and mirrors the ghosts
/// (φ = D_{0,ν} φ = 0), edge ghosts set to zero.
LatticeField project_hypothesis(const LatticeField& phi, HessianFlavor flavor);

/// |⟨Δ²_h v, φ⟩_{L²_h(Ω^h∪Γ^h)} - (∇²_h v, ∇²_h φ)_{flavor}| / max(|LHS|, |RHS|)
/// after projecting φ. With strict set, a projection that changes φ raises
/// ValidationError instead.
double sbp_residual(const LatticeField& v, const LatticeField& phi, HessianFlavor flavor,
                    bool strict = false);

/// Second-difference transfer identity along `axis`: Star compares
/// (D_iD_{-i}v, φ) with (v, D_iD_{-i}φ) over Ω^h ∪ Γ^h; Tilde compares the
/// plain pairing with the weighted one and with (v, D_iD_{-i}φ)_∼ (largest
/// relative gap returned).
double transfer_residual(const LatticeField& v, const LatticeField& phi, HessianFlavor flavor, int axis,
                         bool strict = false);

/// ‖v‖_{H²_h} / ‖∇²_h v‖_{flavor} after projecting v onto the hypotheses.
/// ValidationError if the projected v vanishes.
double poincare_ratio(const LatticeField& v, HessianFlavor flavor);

/// φ_i = Δ_h ũ - T_{≠i} Δũ on Ω^h ∪ Γ^h (zero elsewhere).
LatticeField phi_residual(const SourceFunction& u_tilde, const SourceFunction& lap_u_tilde,
                          const GridSpec& grid, int axis);

/// The ten monomials x^a y^b with a + b <= 3.
std::vector<TensorProduct> cubic_basis_2d();

/// Least-squares slope of log(error) against log(h). ValidationError for
/// fewer than two points, non-positive values or a single distinct h.
double fit_rate(const std::vector<double>& errors, const std::vector<double>& hs);

/// log(e_k / e_{k+1}) / log(h_k / h_{k+1}); zero where an error vanishes.
std::vector<double> pairwise_rates(const std::vector<double>& errors, const std::vector<double>& hs);

struct BoundaryScalingRow {
  int m = 0;
  double h = 0.0;
  double norm = 0.0;
  double seminorm = 0.0;
  double l2 = 0.0;
};

struct BoundaryScalingReport {
  TraceVariant variant = TraceVariant::Centered;
  int axis = 0;
  std::vector<BoundaryScalingRow> rows;
  std::vector<double> pairwise_rates;
  double fitted_rate = 0.0;
};

/// H^{1/2}_h norm of g_{h,axis} (Centered) or g*_{h,axis} (OneSided) across
/// a ladder of m values.
BoundaryScalingReport boundary_scaling_study(const SourceFunction& u_tilde, int n,
                                             const std::vector<int>& ms, TraceVariant variant,
                                             int axis);

struct LadderEntry {
  int m = 0;
  double h = 0.0;
  double error_h2h = 0.0;
  int cg_iters = 0;
  double cg_residual = 0.0;
  friend bool operator==(const LadderEntry&, const LadderEntry&) = default;
};

struct ConvergenceReport {
  std::string case_name;
  std::string scheme;
  int dim = 2;
  double tol = 1e-10;
  std::vector<LadderEntry> entries;
  std::vector<double> pairwise_rates;
  double fitted_rate = 0.0;
  bool complete = true;
  std::string failure;
  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

struct StudyOptions {
  SolveOptions solver;
  /// Ladder entries solved concurrently; results are assembled in order.
  int jobs = 1;
};

/// ‖u - U‖_{H²_h} with u sampled on Ω̃^h and U the completed solution.
ConvergenceReport convergence_study(const ManufacturedCase& c, BcScheme scheme,
                                    const std::vector<int>& ms, const StudyOptions& options = {});

/// Terms of ‖∇²_h E‖ <= ‖∇²_h Ê‖ + Σ_i ‖φ_i‖ for E = ũ - U, with ũ the
/// reflection extension of a u supported in [0, 2/3)^n.
struct DecompositionCheck {
  double lhs = 0.0;
  double e_hat_term = 0.0;
  double phi_term = 0.0;
  bool holds() const { return lhs <= e_hat_term + phi_term; }
};

DecompositionCheck error_decomposition(const TensorProduct& u_local, const GridSpec& grid,
                                       BcScheme scheme, const SolveOptions& options = {});

struct OperatorProbe {
  double symmetry = 0.0;    ///< max |⟨Av,w⟩ - ⟨v,Aw⟩| / (‖Av‖‖w‖ + ‖v‖‖Aw‖)
  double energy = 0.0;      ///< max |⟨Av,v⟩ - ‖∇²_h v̂‖²_flavor| / ‖∇²_h v̂‖²_flavor
  double min_rayleigh = 0.0;  ///< min ⟨Av,v⟩ / ⟨v,v⟩
};

/// Symmetry and positivity of the folded operator on fixed-seed vectors.
OperatorProbe operator_probe(const GridSpec& grid, BcScheme scheme, int count, std::uint64_t seed);

struct TraceReproduction {
  double max_value = 0.0;     ///< max |a(x', 0)|
  double max_mismatch = 0.0;  ///< max |D a(x', 0) - g(x')|
};

/// Random face data supported in [0, 2/3]^{n-1} pushed through
/// fourier_coeffs and inverse_trace; checks a(·, 0) = 0 and the reproduced
/// normal difference.
TraceReproduction inverse_trace_reproduction(int n, int m, TraceVariant variant, std::uint64_t seed);

/// Relative defect of D_iD_{-i}(R_h u)(x') = 2D_iD_{-i}w(x') + 4D_iD_{-i}w(x' - he_i)
/// at every x' with x'_i = 0 (other coordinates >= 0), w being R applied
/// along the remaining axes. Random u on a block of dimension face_dim.
double rh_identity_residual(int face_dim, int m, std::uint64_t seed);

struct ProbeResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;  ///< pass threshold; infinity for finiteness-only probes
  bool passed = false;
};

/// SBP (both flavors), transfer identities, Poincaré ratio, commutation and
/// inverse-trace probes on grid (n, m).
std::vector<ProbeResult> verify_suite(int n, int m, std::uint64_t seed, int pairs = 20);

}  // namespace biharm
