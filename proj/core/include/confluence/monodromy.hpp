#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "confluence/invariants.hpp"
#include "confluence/system.hpp"

namespace confluence {

struct CircleContour {
  cplx center{};
  double radius = 1.0;
  double start_angle = 0.0;
  int orientation = +1;  // +1 counterclockwise
};

struct PolylineContour {
  std::vector<cplx> points;
};

using Contour = std::variant<CircleContour, PolylineContour>;

// Transport Phi(end) Phi(start)^-1 of y' = (A/h) y along the contour.
// Requires tol in [1e-13, 1e-6] and every contour point at least
// 10 tol^(1/5) times the contour size away from the zeros of h.
// Throws SingularityTooClose or StepUnderflow.
Mat2 propagate(const ParametricSystem& system, const Contour& contour, double tol);

struct MonodromyOptions {
  double tol = 1e-10;
  double validity_radius = std::numeric_limits<double>::infinity();
  double start_angle = 0.0;
  double radius_scale = 1.0;  // multiplies the default radius; used for radius-independence checks
};

struct MonodromyResult {
  Mat2 monodromy;
  cplx gamma{};
  double est_error = 0.0;
  CircleContour contour;
};

// Circle centered at -h1/2, radius 3 max(|root - c|, 0.05), capped at 0.8 validity radius.
CircleContour default_contour(const MonicQuadratic& h, const MonodromyOptions& options = {});

// gamma = exp(-2 pi i lambda1) tr M for the counterclockwise loop around both zeros of h.
// est_error compares runs at tol and tol / 10.
MonodromyResult gamma_numeric(const ParametricSystem& system, const FormalInvariants& invariants,
                              const MonodromyOptions& options = {});

// 2 cos(2 pi sqrt(((a11 - a22)/2)^2 + a12 a21)) using the entries of A1.
cplx gamma_closed_form(const Mat2& a0, const Mat2& a1);

// Contour integral of tr A / h around both zeros of h (residue sum).
cplx trace_loop_integral(const ParametricSystem& system);

}  // namespace confluence
