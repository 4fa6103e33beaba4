#include "confluence/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace confluence {

namespace {

std::vector<cplx> to_vector(const CSeries& s) { return {s.coeffs().begin(), s.coeffs().end()}; }

double scale_of(std::span<const cplx> p) {
  double out = 1.0;
  for (const auto& c : p) out = std::max(out, std::abs(c));
  return out;
}

// Quotient of p by x^2 - eps, with the remainder checked against tol.
CSeries exact_quotient(const CSeries& p, cplx eps, double tol, const char* what,
                       double& residual) {
  const auto division = divide_by_monic_quadratic(p.coeffs(), -eps, 0.0);
  const double rem = std::max(std::abs(division.remainder[0]), std::abs(division.remainder[1]));
  const double rel = rem / scale_of(p.coeffs());
  residual = std::max(residual, rel);
  if (rel > tol) {
    throw InvariantMismatch(std::string(what) + " is not divisible by x^2 - eps");
  }
  return CSeries(division.quotient, p.order());
}

}  // namespace

cplx FormalInvariants::epsilon() const {
  if (alpha1 == cplx{}) throw NonGeneric("alpha1 vanishes");
  const cplx half = 0.5 * h1;
  return (half * half - h0) / (alpha1 * alpha1);
}

cplx FormalInvariants::mu() const {
  if (alpha1 == cplx{}) throw NonGeneric("alpha1 vanishes");
  return alpha0 / (alpha1 * alpha1) - h1 / (2.0 * alpha1);
}

double FormalInvariants::distance(const FormalInvariants& o) const {
  return std::max({std::abs(h0 - o.h0), std::abs(h1 - o.h1), std::abs(lambda0 - o.lambda0),
                   std::abs(lambda1 - o.lambda1), std::abs(alpha0 - o.alpha0),
                   std::abs(alpha1 - o.alpha1)});
}

FormalInvariants extract_formal(const ParametricSystem& system) {
  const auto& h = system.h();
  const auto& a = system.a();
  FormalInvariants out;
  out.h0 = h.h0;
  out.h1 = h.h1;

  const auto half_trace = divide_by_monic_quadratic(to_vector(0.5 * a.trace()), h.h0, h.h1);
  out.lambda0 = half_trace.remainder[0];
  out.lambda1 = half_trace.remainder[1];

  // Entries of A - lambda I as exact polynomials; the determinant is kept to full degree.
  auto d00 = to_vector(a(0, 0));
  auto d11 = to_vector(a(1, 1));
  d00[0] -= out.lambda0;
  d11[0] -= out.lambda0;
  if (d00.size() > 1) {
    d00[1] -= out.lambda1;
    d11[1] -= out.lambda1;
  }
  const auto diag = poly_mul(d00, d11);
  const auto off = poly_mul(a(0, 1).coeffs(), a(1, 0).coeffs());
  std::vector<cplx> minus_det(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) minus_det[i] = off[i] - diag[i];
  const auto alpha = divide_by_monic_quadratic(minus_det, h.h0, h.h1);
  out.alpha0 = alpha.remainder[0];
  out.alpha1 = alpha.remainder[1];
  return out;
}

Reduction reduce(const ParametricSystem& system, const FormalInvariants& inv, double tol) {
  if (std::abs(inv.alpha1) <= tol) throw NonGeneric("alpha1 below tolerance");
  ReducedParams params{inv.epsilon(), inv.mu(), inv.alpha1, inv.h1};

  const int order = system.order();
  const cplx shift = -0.5 * inv.h1;
  CSeriesMat2 a = system.a().substitute_affine(inv.alpha1, shift);
  // lambda(z(x)) = lambda1 alpha1 x + lambda1 shift + lambda0.
  const CSeries lambda({inv.lambda1 * shift + inv.lambda0, inv.lambda1 * inv.alpha1}, order);
  a(0, 0) -= lambda;
  a(1, 1) -= lambda;
  a = (1.0 / inv.alpha1) * a;
  return {params, ParametricSystem(MonicQuadratic{-params.epsilon, 0.0}, std::move(a))};
}

ParametricSystem ReducedSystem::as_system() const {
  const int k = order();
  const CSeries h({-epsilon, 0.0, 1.0}, k);
  const CSeries lower = CSeries({mu, 1.0}, k) + h * r;
  return {MonicQuadratic{-epsilon, 0.0},
          CSeriesMat2(CSeries(k), CSeries::constant(1.0, k), lower, CSeries(k))};
}

PrenormalReport prenormalize(const ParametricSystem& reduced, double tol) {
  const FormalInvariants inv = extract_formal(reduced);
  const cplx eps = -inv.h0;
  const cplx mu = inv.alpha0;
  const double inv_gap = std::max({std::abs(inv.h1), std::abs(inv.lambda0),
                                   std::abs(inv.lambda1), std::abs(inv.alpha1 - 1.0)});
  if (inv_gap > 1e-8) {
    throw InvariantMismatch("input does not have invariants (x^2 - eps, 0, mu + x)");
  }

  const int order = reduced.order();
  PrenormalReport report;

  // Step 1: cyclic-vector conjugation to A(0) = [[0, 1], [a21, a22]].
  const Mat2 a0 = reduced.a().coeff(0);
  const cplx tr0 = a0.trace();
  const Mat2 shifted = a0 - Mat2::diag(tr0, tr0);
  // Cyclic vector e2, which is C = I on inputs already in the target form; e1 only
  // when e2 is (numerically) an eigenvector.
  const double scale = std::max(1.0, a0.max_abs());
  const Mat2 c_e2{shifted(0, 1), 0.0, shifted(1, 1), 1.0};
  const Mat2 c_e1{shifted(0, 0), 1.0, shifted(1, 0), 0.0};
  const Mat2 c = std::abs(c_e2.det()) > 1e-6 * scale ? c_e2 : c_e1;
  if (std::abs(c.det()) <= 1e-12 * scale * scale) {
    throw Step1Failure("A(0) has no cyclic vector");
  }
  report.conjugation = c;
  ParametricSystem current =
      gauge_apply(GaugeTransform(CSeriesMat2::constant(c, order)), reduced);

  // Step 2: lower-row corrections making the top row (0, 1) in every order.
  {
    const CSeriesMat2& a = current.a();
    double k_a = 0.0;
    for (int l = 1; l < order; ++l) {
      const double m = a.coeff(l).max_abs();
      if (m > 0.0) k_a = std::max(k_a, std::pow(m, 1.0 / l));
    }
    report.growth_constant = k_a;

    std::vector<std::array<cplx, 2>> t(static_cast<std::size_t>(order));
    report.t_magnitudes.assign(static_cast<std::size_t>(order), 0.0);
    CSeriesMat2 gauge = CSeriesMat2::identity(order);
    for (int l = 1; l < order; ++l) {
      for (int i = 0; i < 2; ++i) {
        cplx acc = -a(0, i)[l];
        for (int j = 1; j < l; ++j) acc -= a(0, 1)[j] * t[l - j][i];
        t[l][i] = acc;
      }
      gauge(1, 0).set(l, t[l][0]);
      gauge(1, 1).set(l, t[l][1]);
      const double mag = std::max(std::abs(t[l][0]), std::abs(t[l][1]));
      report.t_magnitudes[l] = mag;
      if (mag > 0.0) {
        const double ratio = mag / std::pow(2.0 * k_a, l);
        report.max_growth_ratio = std::max(report.max_growth_ratio, ratio);
      }
    }
    current = gauge_apply(GaugeTransform(gauge), current);
  }

  // Step 3: shear equalizing the diagonal.
  {
    const CSeries half_b22 = 0.5 * current.a()(1, 1);
    const CSeries zero(order);
    CSeriesMat2 shear(CSeries::constant(1.0, order), zero, half_b22,
                      CSeries::constant(1.0, order));
    current = gauge_apply(GaugeTransform(shear), current);
  }

  // Step 4: scalar gauge exp(int g/2) removing the diagonal (x^2 - eps) g / 2.
  const CSeries h({-eps, 0.0, 1.0}, order);
  CSeriesMat2 a = current.a();
  {
    const CSeries g = exact_quotient(a(1, 1) + a(0, 0), eps, tol, "trace",
                                     report.divisibility_residual);
    const CSeries diag = 0.5 * (h * g);
    a(0, 0) -= diag;
    a(1, 1) -= diag;
  }

  CSeries lower = a(1, 0) - CSeries({mu, 1.0}, order);
  CSeries r = exact_quotient(lower, eps, tol, "lower-left entry", report.divisibility_residual);

  double structure = 0.0;
  for (int l = 0; l < order; ++l) {
    structure = std::max({structure, std::abs(a(0, 0)[l]), std::abs(a(1, 1)[l]),
                          std::abs(a(0, 1)[l] - (l == 0 ? 1.0 : 0.0))});
  }
  report.structure_residual = structure;
  report.result = ReducedSystem{eps, mu, std::move(r)};
  return report;
}

}  // namespace confluence
