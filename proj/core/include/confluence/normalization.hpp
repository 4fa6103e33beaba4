#pragma once

#include <string>
#include <vector>

#include "confluence/geometry.hpp"
#include "confluence/series.hpp"

namespace confluence {

struct PicardOptions {
  double tol = 1e-12;         // stop when the sup-norm update falls below this
  int max_sweeps = 200;
  double ratio_limit = 0.75;  // ContractionViolated above this observed ratio
};

// Solution p_i of dp/ds = 4 s^2 / (x^2 - eps) p + (1 - p^2) / (2 s) + (1 + p)^2 r(x),
// x = s^2 - mu, vanishing at the forward limit of the trajectory.
struct PSolution {
  TrajectoryRecord trajectory;  // uniform xi grid actually used
  std::vector<cplx> p_values;
  std::vector<double> contraction_history;  // sup-norm update per sweep
  double max_contraction_ratio = 0.0;
  double sup_abs_p = 0.0;
  double ode_residual = 0.0;   // max |dp/dxi - omega p - omega chi G| at interior samples
  cplx terminal_value{};       // p(s) extrapolated to the limit point
  int sweeps = 0;
};

// Picard iteration of the integral form on the trajectory's uniform xi grid
// (ordered by increasing xi, limit point at the end).
// Throws ContractionViolated, NoConvergence, std::invalid_argument (bad grid or no endpoint).
PSolution solve_p(const TrajectoryRecord& trajectory, const CSeries& r, const RamifiedPoint& rp,
                  const PicardOptions& options = {});

// The same trajectory seen through s -> -s: samples (-xi, -s) in increasing xi.
TrajectoryRecord reflect(const TrajectoryRecord& record, const RamifiedPoint& rp);

struct AssembledF {
  std::vector<double> xi;
  std::vector<cplx> s;
  std::vector<Mat2> f;
  std::vector<cplx> det;
  cplx kappa_estimate{};          // mean of det F
  double det_relative_stdev = 0.0;
  double diagonal_residual = 0.0;  // sup of |F* Delta^s - diagonal form| at interior samples
  double sup_abs_p = 0.0;
};

// F = [[1, p_i], [p_j(-s), 1]] diag(E1, E2) with E1 = exp(int 2 beta_j^P), E2 = exp(-int 2 beta_i).
// p_j_sol must live on the reflected trajectory of p_i_sol. Throws NoOverlap.
AssembledF assemble_F(const PSolution& p_i_sol, const PSolution& p_j_sol, const CSeries& r,
                      const RamifiedPoint& rp);

struct KappaValues {
  cplx kappa_i{};
  cplx kappa_o{};
  cplx kappa{};
};

// Gamma-function closed forms with the free germ set to zero. Throws GammaPole.
KappaValues kappa_formulas(const RamifiedPoint& rp, cplx q);

// Q = arccos(gamma / 2) / (2 pi), principal branch.
cplx q_from_gamma(cplx gamma);

struct ConnectionData {
  cplx a{}, b{};
  cplx s1{}, s2{};
  cplx q{}, gamma{};
  KappaValues kappas;
  Mat2 c0, c1, c2, c3, c4;
  Mat2 n, n1, n2;
  double c3c1_residual = 0.0;  // |C3 C1 - C0 C4| relative to the factor sizes
};

// The connection matrices C0..C4 and the formal monodromies N1, N2, N = N1 N2.
ConnectionData connection_matrices(const RamifiedPoint& rp, cplx kappa, cplx gamma);

struct CocycleReport {
  double kappa_ratio = 0.0;     // |kappa - kappa_O / kappa_I| / |kappa|
  double sigma_relation = 0.0;  // kappa_O = kappa (kappa o sigma) e^{u2 pi i} / (2 i sin u2 pi)
  double sigma_invariance = 0.0;  // kappa_O o sigma = kappa_O
  double rho_invariance = 0.0;  // kappa_I o rho = kappa_I
  double gamma_relation = 0.0;  // gamma = 2 cos 2 pi a - e^{-2 a pi i} kappa (kappa o rho)
  double gamma_q = 0.0;         // |2 cos 2 pi Q - gamma|
  double trace_identity = 0.0;  // gamma = e^{2 a pi i} + e^{-2 a pi i} + e^{-2 a pi i} c1 c2
  double monodromy_identity = 0.0;  // C3 C1 N C2 C3^-1 = -i C0 swap
  double c2c3 = 0.0;            // c2 c3 = 1
  double c3c1 = 0.0;            // C3 C1 = C0 C4
  double a_rho = 0.0;           // a o rho = -a
  double s_sigma = 0.0;         // s1 o sigma = s1, s2 o sigma = -s2

  double max() const;
};

// Residuals are normalized by the magnitude of the terms involved.
CocycleReport verify_cocycles(const RamifiedPoint& rp, cplx gamma);

// JSON: one residual object per sample plus max/mean summary.
std::string cocycle_report_json(const std::vector<CocycleReport>& reports);

}  // namespace confluence
