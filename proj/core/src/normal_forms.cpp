#include "confluence/normal_forms.hpp"

#include <algorithm>
#include <cmath>

namespace confluence {

namespace {

constexpr int newton_iterations = 100;

bool converged(cplx residual, cplx target) {
  return std::abs(residual) < 1e-12 * std::max(1.0, std::abs(target));
}

template <class F, class DF>
cplx newton(cplx seed, cplx target, F f, DF df, const char* what) {
  cplx x = seed;
  for (int it = 0; it < newton_iterations; ++it) {
    const cplx fx = f(x);
    if (converged(fx, target)) return x;
    const cplx d = df(x);
    if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(fx))) {
      // Critical point of the map (e.g. gamma = +-2): step off it and keep going.
      x += 1e-3 * std::max(1.0, std::abs(x));
      continue;
    }
    x -= fx / d;
  }
  if (converged(f(x), target)) return x;
  throw NoConvergence(std::string(what) + ": Newton did not converge");
}

}  // namespace

ParametricSystem build_q_form(const FormalInvariants& f, cplx q, int order) {
  const CSeries lambda({f.lambda0, f.lambda1}, order);
  const CSeries lower({f.alpha0 + q * f.h0, f.alpha1 + q * f.h1, q}, order);
  return {f.h(), CSeriesMat2(lambda, CSeries::constant(1.0, order), lower, lambda)};
}

BFormCoefficients b_form_coefficients(const FormalInvariants& f, cplx b) {
  const cplx den = 1.0 - b * f.h1 + b * b * f.h0;
  if (std::abs(den) < 1e-12) throw DegenerateDenominator("1 - b h1 + b^2 h0 vanishes");
  BFormCoefficients out;
  out.beta1 = (f.alpha1 - b * f.alpha0) / den;
  out.beta0 = f.alpha0 + b * f.h0 * out.beta1;
  return out;
}

ParametricSystem build_b_form(const FormalInvariants& f, cplx b, int order) {
  const auto beta = b_form_coefficients(f, b);
  const CSeries lambda({f.lambda0, f.lambda1}, order);
  return {f.h(), CSeriesMat2(lambda, CSeries({1.0, b}, order),
                             CSeries({beta.beta0, beta.beta1}, order), lambda)};
}

cplx gamma_of_q(cplx q) { return -2.0 * cos_pi_sqrt(1.0 + 4.0 * q); }

cplx gamma_of_b(const FormalInvariants& f, cplx b) {
  const auto beta = b_form_coefficients(f, b);
  return 2.0 * cos_pi_sqrt(4.0 * b * beta.beta1);
}

cplx solve_q(cplx gamma_target, cplx q_seed) {
  return newton(
      q_seed, gamma_target, [&](cplx q) { return gamma_of_q(q) - gamma_target; },
      [](cplx q) { return 4.0 * pi * pi * sinc_pi_sqrt(1.0 + 4.0 * q); }, "solve_q");
}

cplx solve_b(const FormalInvariants& f, cplx gamma_target, cplx b_seed) {
  auto value = [&](cplx b) { return gamma_of_b(f, b) - gamma_target; };
  auto slope = [&](cplx b) {
    const cplx den = 1.0 - b * f.h1 + b * b * f.h0;
    const cplx num = f.alpha1 - b * f.alpha0;
    const cplx beta1 = num / den;
    const cplx dbeta1 = (-f.alpha0 * den - num * (-f.h1 + 2.0 * b * f.h0)) / (den * den);
    const cplx w = 4.0 * b * beta1;
    const cplx dw = 4.0 * (beta1 + b * dbeta1);
    return -pi * pi * sinc_pi_sqrt(w) * dw;
  };
  return newton(b_seed, gamma_target, value, slope, "solve_b");
}

EquivalenceReport decide_equivalence(const ParametricSystem& first,
                                     const ParametricSystem& second, double tol,
                                     const MonodromyOptions& options) {
  EquivalenceReport rep;
  rep.first = extract_formal(first);
  rep.second = extract_formal(second);
  if (std::abs(rep.first.alpha1) <= alpha1_tolerance ||
      std::abs(rep.second.alpha1) <= alpha1_tolerance) {
    throw NonGeneric("alpha1 vanishes; the invariants do not classify this system");
  }
  rep.first_monodromy = gamma_numeric(first, rep.first, options);
  rep.second_monodromy = gamma_numeric(second, rep.second, options);
  rep.formal_gap = rep.first.distance(rep.second);
  rep.gamma_gap = std::abs(rep.first_monodromy.gamma - rep.second_monodromy.gamma);
  rep.combined_error = rep.first_monodromy.est_error + rep.second_monodromy.est_error;

  if (rep.formal_gap >= tol) {
    rep.verdict = Verdict::not_equivalent;
  } else if (rep.gamma_gap < tol || rep.gamma_gap <= rep.combined_error) {
    rep.verdict = Verdict::equivalent;
  } else if (rep.gamma_gap <= 10.0 * rep.combined_error) {
    rep.verdict = Verdict::indeterminate;
  } else {
    rep.verdict = Verdict::not_equivalent;
  }
  return rep;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::equivalent: return "Equivalent";
    case Verdict::not_equivalent: return "NotEquivalent";
    case Verdict::indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

}  // namespace confluence
