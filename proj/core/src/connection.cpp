#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "confluence/errors.hpp"
#include "confluence/normalization.hpp"

namespace confluence {

namespace {

cplx lgamma_or_pole(cplx z) {
  try {
    return log_gamma(z);
  } catch (const PoleAtNonPositiveInteger&) {
    throw GammaPole("Gamma pole in the connection coefficients");
  }
}

// u log u on the sheet carried by `u`.
cplx xlogx(const BranchedLog& u) { return u.value() * u.log(); }

struct Ratios {
  BranchedLog u1, u2;
};

// u_i = s_i / sqrt(eps) with sheets inherited from s_i and eps.
Ratios ratios(const RamifiedPoint& rp) {
  const BranchedLog se = rp.sqrt_eps();
  const BranchedLog s1 = rp.s1_log();
  const BranchedLog s2 = rp.s2_log();
  if (s1.is_zero() || s2.is_zero()) throw GammaPole("s_i / sqrt(eps) vanishes: Gamma pole at 0");
  return {s1 / se, s2 / se};
}

double rel(cplx lhs, cplx rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

cplx q_from_gamma(cplx gamma) { return std::acos(0.5 * gamma) / two_pi; }

KappaValues kappa_formulas(const RamifiedPoint& rp, cplx q) {
  const auto [u1, u2] = ratios(rp);
  const BranchedLog a = rp.a_log();
  const BranchedLog b = rp.b_log();
  const cplx av = a.value();
  const cplx bv = b.value();
  const cplx lu1 = u1.log();
  const cplx lu2 = u2.log();
  const cplx g1 = lgamma_or_pole(u1.value());
  const cplx g2 = lgamma_or_pole(u2.value());
  const cplx g1p = lgamma_or_pole(1.0 + u1.value());
  const cplx ga_minus = lgamma_or_pole(1.0 + av - q);
  const cplx ga_plus = lgamma_or_pole(av + q);
  const cplx gb_minus = lgamma_or_pole(1.0 + bv - q);
  const cplx gb_plus = lgamma_or_pole(bv + q);
  const cplx log_2pi = std::log(two_pi);

  KappaValues k;
  k.kappa_i = std::exp(0.5 * (lu1 + lu2) + g1 + g2 - gb_minus - gb_plus + 2.0 * xlogx(b) -
                       xlogx(u1) - xlogx(u2));
  k.kappa_o = std::exp(log_2pi + g1 + g1p - ga_minus - gb_minus - ga_plus - gb_plus +
                       2.0 * xlogx(a) + 2.0 * xlogx(b) - 2.0 * xlogx(u1));
  k.kappa = std::exp(log_2pi + 0.5 * (lu1 - lu2) + g1 - g2 - ga_minus - ga_plus + 2.0 * xlogx(a) -
                     xlogx(u1) + xlogx(u2));
  return k;
}

ConnectionData connection_matrices(const RamifiedPoint& rp, cplx kappa, cplx gamma) {
  ConnectionData d;
  d.a = rp.a();
  d.s1 = rp.s1();
  d.s2 = rp.s2();
  d.gamma = gamma;
  d.q = q_from_gamma(gamma);
  d.kappas.kappa = kappa;
  const cplx e_plus = std::exp(two_pi * imag_unit * d.a);
  const cplx e_minus = std::exp(-two_pi * imag_unit * d.a);
  const cplx i = imag_unit;
  d.c0 = {1.0, i * gamma, 0.0, 1.0};
  d.c1 = {1.0, i / kappa * (gamma - e_plus - e_minus), 0.0, 1.0};
  d.c2 = {1.0, 0.0, -i * kappa * e_plus, 1.0};
  d.c3 = {1.0, i / kappa * e_minus, 0.0, 1.0 / kappa};
  d.c4 = {1.0, -i / kappa * e_plus, 0.0, 1.0 / kappa};
  d.n = Mat2::diag(e_plus, e_minus);
  if (!rp.eps_zero()) {
    d.b = rp.b();
    const auto [u1, u2] = ratios(rp);
    const cplx z1 = std::exp(pi * i * u1.value());
    const cplx z2 = std::exp(pi * i * u2.value());
    d.n1 = Mat2::diag(z1, 1.0 / z1);
    d.n2 = Mat2::diag(1.0 / z2, z2);
    try {
      const KappaValues k = kappa_formulas(rp, d.q);
      d.kappas.kappa_i = k.kappa_i;
      d.kappas.kappa_o = k.kappa_o;
    } catch (const GammaPole&) {
      // closed forms unavailable; the matrices only need kappa
    }
  } else {
    // Confluent limit: only the product N survives.
    d.n1 = d.n;
    d.n2 = Mat2::identity();
  }
  const Mat2 lhs = d.c3 * d.c1;
  const Mat2 rhs = d.c0 * d.c4;
  // Relative to the factor sizes: the entries cancel when |e^{2 a pi i}| is large.
  const double scale = std::max({d.c3.max_abs() * d.c1.max_abs(), d.c0.max_abs() * d.c4.max_abs(), 1.0});
  d.c3c1_residual = (lhs - rhs).max_abs() / scale;
  return d;
}

double CocycleReport::max() const {
  return std::max({kappa_ratio, sigma_relation, sigma_invariance, rho_invariance, gamma_relation,
                   gamma_q, trace_identity, monodromy_identity, c2c3, c3c1, a_rho, s_sigma});
}

CocycleReport verify_cocycles(const RamifiedPoint& rp, cplx gamma) {
  CocycleReport out;
  const cplx q = q_from_gamma(gamma);
  const RamifiedPoint rs = rp.sigma();
  const RamifiedPoint rr = rp.rho();
  const KappaValues k = kappa_formulas(rp, q);
  const KappaValues ks = kappa_formulas(rs, q);
  const KappaValues kr = kappa_formulas(rr, q);
  const cplx a = rp.a();
  const cplx i = imag_unit;

  out.kappa_ratio = std::abs(k.kappa - k.kappa_o / k.kappa_i) / std::abs(k.kappa);

  const cplx u2 = ratios(rp).u2.value();
  const cplx sigma_rhs = k.kappa * ks.kappa * std::exp(i * pi * u2) / (2.0 * i * std::sin(pi * u2));
  out.sigma_relation = rel(k.kappa_o, sigma_rhs);
  out.sigma_invariance = rel(ks.kappa_o, k.kappa_o);
  out.rho_invariance = rel(kr.kappa_i, k.kappa_i);

  const cplx cos_term = 2.0 * std::cos(two_pi * a);
  const cplx product = std::exp(-two_pi * i * a) * k.kappa * kr.kappa;
  const double scale12 = std::max({std::abs(cos_term), std::abs(product), std::abs(gamma), 1.0});
  out.gamma_relation = std::abs(cos_term - product - gamma) / scale12;
  out.gamma_q = std::abs(2.0 * std::cos(two_pi * q) - gamma) / std::max(1.0, std::abs(gamma));

  const ConnectionData d = connection_matrices(rp, k.kappa, gamma);
  const cplx e_plus = d.n(0, 0);
  const cplx e_minus = d.n(1, 1);
  const cplx c1c2 = d.c1(0, 1) * d.c2(1, 0);
  const cplx via_c = e_plus + e_minus + e_minus * c1c2;
  out.trace_identity = std::abs(via_c - gamma) /
                       std::max({std::abs(e_plus), std::abs(e_minus), std::abs(e_minus * c1c2),
                                 std::abs(gamma), 1.0});
  // Relative to the size of the factors: the product cancels heavily when kappa is far from 1.
  const Mat2 c3_inv = d.c3.inverse();
  const Mat2 m = d.c3 * d.c1 * d.n * d.c2 * c3_inv;
  const Mat2 expected = -i * (d.c0 * Mat2::swap());
  const double mscale = std::max(d.c3.max_abs() * d.c1.max_abs() * d.n.max_abs() *
                                     d.c2.max_abs() * c3_inv.max_abs(),
                                 1.0);
  out.monodromy_identity = (m - expected).max_abs() / mscale;
  out.c2c3 = std::abs(d.c2(1, 0) * d.c3(0, 1) - 1.0);
  out.c3c1 = d.c3c1_residual;

  out.a_rho = std::abs(rr.a() + a) / std::abs(a);
  out.s_sigma = std::max(rel(rs.s1(), rp.s1()), rel(rs.s2(), -rp.s2()));
  return out;
}

std::string cocycle_report_json(const std::vector<CocycleReport>& reports) {
  using nlohmann::json;
  const auto fields = [](const CocycleReport& r) {
    return std::vector<std::pair<const char*, double>>{
        {"kappa_ratio", r.kappa_ratio},       {"sigma_relation", r.sigma_relation},
        {"sigma_invariance", r.sigma_invariance}, {"rho_invariance", r.rho_invariance},
        {"gamma_relation", r.gamma_relation}, {"gamma_q", r.gamma_q},
        {"trace_identity", r.trace_identity}, {"monodromy_identity", r.monodromy_identity},
        {"c2c3", r.c2c3},                     {"c3c1", r.c3c1},
        {"a_rho", r.a_rho},                   {"s_sigma", r.s_sigma}};
  };
  json samples = json::array();
  json max_obj = json::object();
  json mean_obj = json::object();
  for (const auto& r : reports) {
    json obj = json::object();
    for (const auto& [name, value] : fields(r)) {
      obj[name] = value;
      const double prev = max_obj.contains(name) ? max_obj[name].get<double>() : 0.0;
      max_obj[name] = std::max(prev, value);
      const double acc = mean_obj.contains(name) ? mean_obj[name].get<double>() : 0.0;
      mean_obj[name] = acc + value / static_cast<double>(reports.size());
    }
    samples.push_back(std::move(obj));
  }
  json doc = {{"samples", samples}, {"max", max_obj}, {"mean", mean_obj}};
  return doc.dump(2);
}

}  // namespace confluence
