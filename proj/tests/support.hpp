#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "confluence/geometry.hpp"
#include "confluence/invariants.hpp"
#include "confluence/system.hpp"

namespace confluence::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  // Uniform in the closed disc of the given radius.
  cplx disc(double radius) {
    const double rad = radius * std::sqrt(uniform(0.0, 1.0));
    return std::polar(rad, uniform(-pi, pi));
  }
  Mat2 matrix(double radius) { return {disc(radius), disc(radius), disc(radius), disc(radius)}; }

 private:
  std::mt19937_64 engine_;
};

inline MonicQuadratic quadratic_with_roots(cplx r1, cplx r2) { return {r1 * r2, -(r1 + r2)}; }

// h d/dz - (A0 + z A1).
inline ParametricSystem linear_system(const MonicQuadratic& h, const Mat2& a0, const Mat2& a1,
                                      int order) {
  const Mat2 coeffs[] = {a0, a1};
  return {h, CSeriesMat2::from_coefficients(coeffs, order)};
}

inline Mat2 linear_part(const ParametricSystem& s) { return s.a().coeff(1); }
inline Mat2 constant_part(const ParametricSystem& s) { return s.a().coeff(0); }

// Degree-3 polynomial gauge T0 + z T1 + z^2 T2 + z^3 T3 whose determinant stays
// away from zero on |z| <= radius, so the gauge is holomorphic and invertible there.
inline GaugeTransform polynomial_gauge(Sampler& rng, int order, double radius = 0.6,
                                      double spread = 0.25, double base_spread = 0.3) {
  for (;;) {
    Mat2 coeffs[4];
    coeffs[0] = Mat2::identity() + rng.matrix(base_spread);
    for (int l = 1; l < 4; ++l) coeffs[l] = rng.matrix(spread);
    double min_det = std::abs(coeffs[0].det());
    for (int k = 0; k < 64; ++k) {
      for (double rad : {0.25 * radius, 0.5 * radius, 0.75 * radius, radius}) {
        const cplx z = std::polar(rad, two_pi * k / 64.0);
        const Mat2 t = coeffs[0] + z * (coeffs[1] + z * (coeffs[2] + z * coeffs[3]));
        min_det = std::min(min_det, std::abs(t.det()));
      }
    }
    if (min_det > 0.3) return GaugeTransform(CSeriesMat2::from_coefficients(coeffs, order));
  }
}

// Formal invariants with small h roots and alpha1 bounded away from zero.
inline FormalInvariants small_invariants(Sampler& rng) {
  FormalInvariants f;
  const MonicQuadratic h = quadratic_with_roots(rng.disc(0.08), rng.disc(0.08));
  f.h0 = h.h0;
  f.h1 = h.h1;
  f.lambda0 = rng.disc(0.3);
  f.lambda1 = rng.disc(0.3);
  f.alpha0 = rng.disc(0.1);
  f.alpha1 = std::polar(rng.uniform(0.6, 1.4), rng.uniform(-pi, pi));
  return f;
}

// Ramified point with mu in a box, |eps| log-uniform and arg eps spread around `eps_arg`.
inline RamifiedPoint ramified_sample(Sampler& rng, double mu_max, double eps_min, double eps_max,
                                     double eps_arg, double spread) {
  const cplx mu{rng.uniform(-mu_max, mu_max), rng.uniform(-mu_max, mu_max)};
  const double modulus = std::exp(rng.uniform(std::log(eps_min), std::log(eps_max)));
  const double arg = eps_arg + rng.uniform(-spread, spread);
  const cplx root = std::polar(std::sqrt(modulus), 0.5 * arg);
  return RamifiedPoint::from_branches(BranchedLog(modulus, arg), BranchedLog::principal(mu + root),
                                      BranchedLog::principal(mu - root));
}

}  // namespace confluence::testing
