#include "confluence/monodromy.hpp"

#include <algorithm>
#include <cmath>

#include "confluence/ode.hpp"

namespace confluence {

namespace {

using MatState = std::array<cplx, 4>;

// dPhi/dt = (A(z) / h(z)) Phi dz/dt along z(t).
template <class Path>
MatState transport(const ParametricSystem& system, const Path& path, double length, double tol) {
  const CSeriesMat2& a = system.a();
  const MonicQuadratic& h = system.h();
  auto field = [&](double t, const MatState& y) {
    const auto [z, dz] = path(t);
    const Mat2 coef = (dz / h.eval(z)) * a.eval(z);
    return MatState{coef(0, 0) * y[0] + coef(0, 1) * y[2], coef(0, 0) * y[1] + coef(0, 1) * y[3],
                    coef(1, 0) * y[0] + coef(1, 1) * y[2], coef(1, 0) * y[1] + coef(1, 1) * y[3]};
  };
  StepOptions opt;
  opt.tol = tol;
  opt.h_init = std::min(0.05 * length, 0.1);
  opt.h_max = std::max(length / 16.0, 1e-6);
  opt.h_min = 1e-12 * std::max(length, 1.0);
  DormandPrince<4, decltype(field)> solver(field, 0.0, MatState{1.0, 0.0, 0.0, 1.0}, opt);
  solver.advance_to(length);
  return solver.y();
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw std::invalid_argument("propagate: tol must lie in [1e-13, 1e-6]");
  }
}

double min_root_distance_circle(const CircleContour& c, const std::array<cplx, 2>& roots) {
  double d = std::numeric_limits<double>::infinity();
  for (const cplx& r : roots) d = std::min(d, std::abs(std::abs(r - c.center) - c.radius));
  return d;
}

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

Mat2 to_mat(const MatState& s) { return {s[0], s[1], s[2], s[3]}; }

}  // namespace

Mat2 propagate(const ParametricSystem& system, const Contour& contour, double tol) {
  check_tolerance(tol);
  const auto roots = system.h().roots();
  const double margin = 10.0 * std::pow(tol, 0.2);

  if (const auto* circle = std::get_if<CircleContour>(&contour)) {
    if (circle->radius <= 0.0) throw std::invalid_argument("propagate: radius must be positive");
    if (min_root_distance_circle(*circle, roots) < margin * circle->radius) {
      throw SingularityTooClose("contour passes too close to a zero of h");
    }
    const double r = circle->radius;
    const double sign = circle->orientation >= 0 ? 1.0 : -1.0;
    const cplx c = circle->center;
    const double phi0 = circle->start_angle;
    // Arclength parameterization.
    auto path = [=](double t) {
      const cplx e = std::polar(1.0, phi0 + sign * t / r);
      return std::pair<cplx, cplx>{c + r * e, sign * imag_unit * e};
    };
    return to_mat(transport(system, path, two_pi * r, tol));
  }

  const auto& pts = std::get<PolylineContour>(contour).points;
  if (pts.size() < 2) return Mat2::identity();
  double size = 0.0;
  for (const cplx& p : pts) size = std::max(size, std::abs(p - pts.front()));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (const cplx& r : roots) {
      if (segment_distance(r, pts[i], pts[i + 1]) < margin * std::max(size, 1e-3)) {
        throw SingularityTooClose("polyline passes too close to a zero of h");
      }
    }
  }
  Mat2 total = Mat2::identity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const cplx a = pts[i];
    const cplx b = pts[i + 1];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    const cplx dir = (b - a) / len;
    auto path = [=](double t) { return std::pair<cplx, cplx>{a + t * dir, dir}; };
    total = to_mat(transport(system, path, len, tol)) * total;
  }
  return total;
}

CircleContour default_contour(const MonicQuadratic& h, const MonodromyOptions& options) {
  const cplx c = h.center();
  const auto roots = h.roots();
  const double spread = std::max({std::abs(roots[0] - c), std::abs(roots[1] - c), 0.05});
  double radius = 3.0 * spread * options.radius_scale;
  radius = std::min(radius, 0.8 * options.validity_radius);
  return {c, radius, options.start_angle, +1};
}

MonodromyResult gamma_numeric(const ParametricSystem& system, const FormalInvariants& invariants,
                              const MonodromyOptions& options) {
  const CircleContour contour = default_contour(system.h(), options);
  const auto roots = system.h().roots();
  for (const cplx& r : roots) {
    if (std::abs(r - contour.center) >= contour.radius) {
      throw SingularityTooClose("validity radius too small to enclose the zeros of h");
    }
  }
  const cplx phase = std::exp(-two_pi * imag_unit * invariants.lambda1);
  const Mat2 coarse = propagate(system, contour, options.tol);
  const Mat2 fine = propagate(system, contour, std::max(options.tol / 10.0, 1e-13));
  MonodromyResult out;
  out.monodromy = fine;
  out.gamma = phase * fine.trace();
  out.est_error = std::abs(phase * (fine.trace() - coarse.trace()));
  out.contour = contour;
  return out;
}

cplx gamma_closed_form(const Mat2& /*a0*/, const Mat2& a1) {
  const cplx half = 0.5 * (a1(0, 0) - a1(1, 1));
  const cplx d = half * half + a1(0, 1) * a1(1, 0);
  return 2.0 * cos_pi_sqrt(4.0 * d);
}

cplx trace_loop_integral(const ParametricSystem& system) {
  // Sum of residues of p/h equals the divided difference p[r1, r2].
  const CSeries tr = system.a().trace();
  const auto roots = system.h().roots();
  cplx acc{};
  for (int l = 1; l < tr.order(); ++l) {
    cplx sym{};
    cplx p1 = 1.0;
    for (int k = 0; k < l; ++k) {
      cplx p2 = 1.0;
      for (int j = 0; j < l - 1 - k; ++j) p2 *= roots[1];
      sym += p1 * p2;
      p1 *= roots[0];
    }
    acc += tr[l] * sym;
  }
  return two_pi * imag_unit * acc;
}

}  // namespace confluence
