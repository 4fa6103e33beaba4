#pragma once

#include <vector>

#include "confluence/system.hpp"

namespace confluence {

// h(z) = z^2 + h1 z + h0, lambda(z) = lambda1 z + lambda0, alpha(z) = alpha1 z + alpha0.
struct FormalInvariants {
  cplx h0{}, h1{};
  cplx lambda0{}, lambda1{};
  cplx alpha0{}, alpha1{};

  MonicQuadratic h() const { return {h0, h1}; }
  // Reduced parameters; both require alpha1 != 0.
  cplx epsilon() const;
  cplx mu() const;
  // Largest coefficient difference.
  double distance(const FormalInvariants& other) const;
};

// lambda = tr A / 2 mod h, alpha = -det(A - lambda I) mod h, with A taken as an exact polynomial.
FormalInvariants extract_formal(const ParametricSystem& system);

// x = (z + h1/2) / alpha1, so that h(z) = alpha1^2 (x^2 - epsilon).
struct ReducedParams {
  cplx epsilon{};
  cplx mu{};
  cplx alpha1{};
  cplx h1{};

  cplx x_of_z(cplx z) const { return (z + 0.5 * h1) / alpha1; }
  cplx z_of_x(cplx x) const { return alpha1 * x - 0.5 * h1; }
};

struct Reduction {
  ReducedParams params;
  ParametricSystem system;  // (x^2 - eps) d/dx - (A(z(x)) - lambda(z(x)) I) / alpha1
};

inline constexpr double alpha1_tolerance = 1e-8;

// Throws NonGeneric when |alpha1| <= tol.
Reduction reduce(const ParametricSystem& system, const FormalInvariants& invariants,
                 double tol = alpha1_tolerance);

// (x^2 - eps) d/dx - [[0, 1], [mu + x + (x^2 - eps) r(x), 0]].
struct ReducedSystem {
  cplx epsilon{};
  cplx mu{};
  CSeries r;

  int order() const { return r.order(); }
  ParametricSystem as_system() const;
};

struct PrenormalReport {
  ReducedSystem result;
  Mat2 conjugation;                  // step 1 constant C
  std::vector<double> t_magnitudes;  // max_i |t^(l)_{2i}|, index l (entry 0 unused)
  double growth_constant = 0.0;      // K_A
  double max_growth_ratio = 0.0;     // max_l |t^(l)| / (2 K_A)^l
  double divisibility_residual = 0.0;
  double structure_residual = 0.0;
};

inline constexpr double divisibility_tolerance = 1e-9;

// Four-step reduction to the prenormal form. Input must have invariants
// (x^2 - eps, 0, mu + x); throws InvariantMismatch otherwise, or when a
// division by x^2 - eps leaves a remainder above `tol`.
// Throws Step1Failure when A(0) is scalar.
PrenormalReport prenormalize(const ParametricSystem& reduced,
                             double tol = divisibility_tolerance);

}  // namespace confluence
