#pragma once

#include "confluence/invariants.hpp"
#include "confluence/monodromy.hpp"
#include "confluence/system.hpp"

namespace confluence {

enum class NormalFormVariant { q_form, b_form };

struct NormalFormParams {
  NormalFormVariant variant = NormalFormVariant::q_form;
  cplx q{};
  cplx b{};
  cplx beta0{}, beta1{};
  FormalInvariants invariants;
};

// h d/dz - [[lambda, 1], [alpha + q h, lambda]].
ParametricSystem build_q_form(const FormalInvariants& f, cplx q, int order = default_order);

struct BFormCoefficients {
  cplx beta0{};
  cplx beta1{};
};

// beta1 = (alpha1 - b alpha0) / (1 - b h1 + b^2 h0), beta0 = alpha0 + b h0 beta1.
// Throws DegenerateDenominator.
BFormCoefficients b_form_coefficients(const FormalInvariants& f, cplx b);

// h d/dz - [[lambda, 1 + b z], [beta0 + beta1 z, lambda]].
ParametricSystem build_b_form(const FormalInvariants& f, cplx b, int order = default_order);

// -2 cos(pi sqrt(1 + 4q)).
cplx gamma_of_q(cplx q);
// 2 cos(2 pi sqrt(b beta1)).
cplx gamma_of_b(const FormalInvariants& f, cplx b);

// Newton from the seed; converges when the residual is below 1e-12 (relative to max(1, |gamma|)).
// Throws NoConvergence after 100 iterations.
cplx solve_q(cplx gamma_target, cplx q_seed);
cplx solve_b(const FormalInvariants& f, cplx gamma_target, cplx b_seed);

enum class Verdict { equivalent, not_equivalent, indeterminate };

struct EquivalenceReport {
  Verdict verdict = Verdict::indeterminate;
  FormalInvariants first, second;
  MonodromyResult first_monodromy, second_monodromy;
  double formal_gap = 0.0;
  double gamma_gap = 0.0;
  double combined_error = 0.0;
};

// Equivalent when the formal gap is below tol and the gamma gap is below tol or
// within the combined error estimate; indeterminate when the gamma gap lies in
// (error, 10 error] and above tol; otherwise not equivalent.
// Throws NonGeneric when alpha1 vanishes for either system.
EquivalenceReport decide_equivalence(const ParametricSystem& first,
                                     const ParametricSystem& second, double tol,
                                     const MonodromyOptions& options = {});

const char* to_string(Verdict v);

}  // namespace confluence
