#include <gtest/gtest.h>

#include <functional>

#include "confluence/invariants.hpp"
#include "confluence/monodromy.hpp"
#include "confluence/normal_forms.hpp"
#include "support.hpp"

namespace confluence {
namespace {

using testing::Sampler;

// Residue sum of a(z)/h(z) for a polynomial a and simple zeros of h.
cplx residue_loop(const std::function<cplx(cplx)>& a, const MonicQuadratic& h) {
  const auto roots = h.roots();
  const cplx d = roots[0] - roots[1];
  return two_pi * imag_unit * (a(roots[0]) / d - a(roots[1]) / d);
}

// Composite Simpson rule for the integral of f(z) dz along a straight segment.
cplx segment_integral(const std::function<cplx(cplx)>& f, cplx from, cplx to, int panels = 2000) {
  const cplx step = (to - from) / static_cast<double>(panels);
  cplx sum = f(from) + f(to);
  for (int k = 1; k < panels; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(from + step * static_cast<double>(k));
  return sum * step / 3.0;
}

ParametricSystem diagonal_linear(const MonicQuadratic& h, cplx a0, cplx a1, cplx b0, cplx b1) {
  return testing::linear_system(h, Mat2::diag(a0, b0), Mat2::diag(a1, b1), 8);
}

TEST(Propagate, ZeroFieldIsIdentity) {
  const ParametricSystem s(MonicQuadratic{-0.04, 0.0}, CSeriesMat2(8));
  const Mat2 m = propagate(s, CircleContour{0.0, 0.5}, 1e-10);
  EXPECT_LT((m - Mat2::identity()).max_abs(), 1e-14);
}

TEST(Propagate, ScalarFieldWithCancellingResidues) {
  const ParametricSystem s(MonicQuadratic{-1.0, 0.0}, CSeriesMat2::constant(Mat2::diag(0.7, 0.7), 8));
  const Mat2 m = propagate(s, CircleContour{0.0, 2.0}, 1e-11);
  EXPECT_LT((m - Mat2::identity()).max_abs(), 1e-9);
}

TEST(Propagate, DiagonalFieldWithIntegerResidues) {
  // diag(z, -z) / z^2 = diag(1/z, -1/z): residues +-1.
  const ParametricSystem s =
      diagonal_linear(MonicQuadratic{0.0, 0.0}, 0.0, 1.0, 0.0, -1.0);
  const Mat2 m = propagate(s, CircleContour{0.0, 1.0}, 1e-11);
  EXPECT_LT((m - Mat2::identity()).max_abs(), 1e-9);
}

TEST(Propagate, DiagonalLoopMatchesResidues) {
  Sampler rng(51);
  for (int i = 0; i < 10; ++i) {
    const MonicQuadratic h = testing::quadratic_with_roots(rng.disc(0.3), rng.disc(0.3));
    const cplx a0 = rng.disc(1.0), a1 = rng.disc(1.0), b0 = rng.disc(1.0), b1 = rng.disc(1.0);
    const Mat2 m = propagate(diagonal_linear(h, a0, a1, b0, b1), CircleContour{h.center(), 0.9}, 1e-11);
    const cplx first = std::exp(residue_loop([&](cplx z) { return a0 + a1 * z; }, h));
    const cplx second = std::exp(residue_loop([&](cplx z) { return b0 + b1 * z; }, h));
    EXPECT_LT(std::abs(m(0, 0) - first), 1e-8 * std::abs(first));
    EXPECT_LT(std::abs(m(1, 1) - second), 1e-8 * std::abs(second));
    EXPECT_LT(std::abs(m(0, 1)) + std::abs(m(1, 0)), 1e-12);
  }
}

TEST(Propagate, OpenPolylineMatchesQuadrature) {
  const MonicQuadratic h = testing::quadratic_with_roots({0.1, 0.05}, {-0.2, 0.0});
  const cplx a0{0.3, -0.2}, a1{1.1, 0.4};
  const ParametricSystem s = diagonal_linear(h, a0, a1, 0.0, 0.0);
  const PolylineContour path{{cplx(0.6, -0.4), cplx(0.5, 0.5), cplx(-0.4, 0.6)}};
  const Mat2 m = propagate(s, path, 1e-11);
  auto f = [&](cplx z) { return (a0 + a1 * z) / h.eval(z); };
  const cplx expected =
      std::exp(segment_integral(f, path.points[0], path.points[1]) +
               segment_integral(f, path.points[1], path.points[2]));
  EXPECT_LT(std::abs(m(0, 0) - expected), 1e-9 * std::abs(expected));
  EXPECT_LT(std::abs(m(1, 1) - 1.0), 1e-12);
}

TEST(Propagate, ClosedLoopsAgreeUpToConjugation) {
  Sampler rng(52);
  const ParametricSystem s = testing::linear_system(
      testing::quadratic_with_roots(rng.disc(0.2), rng.disc(0.2)), rng.matrix(1.0), rng.matrix(1.0), 8);
  const Mat2 circle = propagate(s, CircleContour{0.0, 0.5}, 1e-11);
  const PolylineContour square{{cplx(0.5, -0.5), cplx(0.5, 0.5), cplx(-0.5, 0.5), cplx(-0.5, -0.5),
                                cplx(0.5, -0.5)}};
  const Mat2 other = propagate(s, square, 1e-11);
  EXPECT_LT(std::abs(circle.trace() - other.trace()), 1e-8 * std::max(1.0, std::abs(circle.trace())));
  EXPECT_LT(std::abs(circle.det() - other.det()), 1e-8 * std::max(1.0, std::abs(circle.det())));
}

TEST(Propagate, ReversedOrientationInverts) {
  Sampler rng(53);
  const ParametricSystem s = testing::linear_system(
      testing::quadratic_with_roots(rng.disc(0.2), rng.disc(0.2)), rng.matrix(1.0), rng.matrix(1.0), 8);
  const Mat2 forward = propagate(s, CircleContour{0.0, 0.5, 0.3, +1}, 1e-11);
  const Mat2 backward = propagate(s, CircleContour{0.0, 0.5, 0.3, -1}, 1e-11);
  EXPECT_LT((forward * backward - Mat2::identity()).max_abs(), 1e-8 * forward.max_abs() * backward.max_abs());
}

TEST(Propagate, RejectsBadInput) {
  const ParametricSystem s(MonicQuadratic{-0.04, 0.0}, CSeriesMat2::constant(Mat2::identity(), 4));
  EXPECT_THROW(propagate(s, CircleContour{0.0, 0.5}, 1e-5), std::invalid_argument);
  EXPECT_THROW(propagate(s, CircleContour{0.0, 0.5}, 1e-14), std::invalid_argument);
  EXPECT_THROW(propagate(s, CircleContour{0.0, 0.0}, 1e-10), std::invalid_argument);
  EXPECT_THROW(propagate(s, CircleContour{0.0, 0.2001}, 1e-10), SingularityTooClose);
  EXPECT_THROW(propagate(s, PolylineContour{{cplx(0.2, -1.0), cplx(0.2, 1.0)}}, 1e-10),
               SingularityTooClose);
}

TEST(TraceLoopIntegral, EqualsTheResidueSum) {
  Sampler rng(54);
  for (int i = 0; i < 20; ++i) {
    const MonicQuadratic h = testing::quadratic_with_roots(rng.disc(0.3), rng.disc(0.3));
    const Mat2 a0 = rng.matrix(1.0), a1 = rng.matrix(1.0);
    const ParametricSystem s = testing::linear_system(h, a0, a1, 8);
    const cplx expected = residue_loop([&](cplx z) { return (a0 + z * a1).trace(); }, h);
    EXPECT_LT(std::abs(trace_loop_integral(s) - expected), 1e-10 * std::max(1.0, std::abs(expected)));
    const FormalInvariants f = extract_formal(s);
    EXPECT_LT(std::abs(trace_loop_integral(s) - two_pi * imag_unit * 2.0 * f.lambda1), 1e-10);
  }
}

TEST(GammaNumeric, LiouvilleDeterminant) {
  Sampler rng(55);
  for (int i = 0; i < 10; ++i) {
    const ParametricSystem s = testing::linear_system(
        testing::quadratic_with_roots(rng.disc(0.3), rng.disc(0.3)), rng.matrix(1.0), rng.matrix(1.0), 8);
    const MonodromyResult res = gamma_numeric(s, extract_formal(s));
    const cplx expected = std::exp(trace_loop_integral(s));
    // The determinant cancels between entries of size |M|^2.
    const double scale = std::max(std::abs(expected), std::norm(res.monodromy.max_abs()));
    EXPECT_LT(std::abs(res.monodromy.det() - expected), 1e-8 * scale);
  }
}

TEST(GammaNumeric, QFormValues) {
  Sampler rng(56);
  for (cplx q : {cplx(-0.25), cplx(0.75), cplx(0.0)}) {
    const FormalInvariants f = testing::small_invariants(rng);
    const MonodromyResult res = gamma_numeric(build_q_form(f, q, 24), f);
    EXPECT_LT(std::abs(res.gamma - gamma_of_q(q)), 1e-6) << q;
  }
  EXPECT_LT(std::abs(gamma_of_q(0.75) + 2.0), 1e-15);
  EXPECT_LT(std::abs(gamma_of_q(-0.25) + 2.0), 1e-15);
}

TEST(GammaNumeric, ModelIsTwo) {
  for (cplx mu : {cplx(0.1), cplx(0.0, 0.05)}) {
    const ReducedSystem model{0.01, mu, CSeries(24)};
    const ParametricSystem s = model.as_system();
    EXPECT_LT(std::abs(gamma_numeric(s, extract_formal(s)).gamma - 2.0), 1e-7);
  }
}

TEST(GammaNumeric, IndependentOfBasepointAndRadius) {
  Sampler rng(57);
  for (int i = 0; i < 5; ++i) {
    const ParametricSystem s = testing::linear_system(
        testing::quadratic_with_roots(rng.disc(0.3), rng.disc(0.3)), rng.matrix(1.0), rng.matrix(1.0), 8);
    const FormalInvariants f = extract_formal(s);
    const MonodromyResult base = gamma_numeric(s, f);
    MonodromyOptions turned;
    turned.start_angle = 2.1;
    MonodromyOptions wider;
    wider.radius_scale = 1.3;
    const MonodromyResult a = gamma_numeric(s, f, turned);
    const MonodromyResult b = gamma_numeric(s, f, wider);
    const double bound = 10.0 * std::max(1e-9, base.est_error + a.est_error + b.est_error);
    EXPECT_LT(std::abs(a.gamma - base.gamma), bound);
    EXPECT_LT(std::abs(b.gamma - base.gamma), bound);
    EXPECT_NEAR(b.contour.radius, 1.3 * base.contour.radius, 1e-15);
  }
}

TEST(GammaNumeric, ValidityRadiusCapsTheContour) {
  const ParametricSystem s = testing::linear_system(MonicQuadratic{-0.01, 0.0}, Mat2::identity(),
                                                    Mat2::identity(), 8);
  MonodromyOptions opts;
  opts.validity_radius = 0.25;
  EXPECT_NEAR(default_contour(s.h(), opts).radius, 0.2, 1e-15);
  opts.validity_radius = 0.1;
  EXPECT_THROW(gamma_numeric(s, extract_formal(s), opts), SingularityTooClose);
}

TEST(GammaClosedForm, SimpleMatrices) {
  EXPECT_LT(std::abs(gamma_closed_form(Mat2{}, Mat2(0, 0, 1, 0)) - 2.0), 1e-15);
  EXPECT_LT(std::abs(gamma_closed_form(Mat2{}, Mat2::diag(0.5, -0.5)) + 2.0), 1e-15);
}

TEST(GammaClosedForm, ConjugationInvariant) {
  Sampler rng(58);
  for (int i = 0; i < 50; ++i) {
    const Mat2 a1 = rng.matrix(1.0);
    const Mat2 p = Mat2::identity() + rng.matrix(0.5);
    if (std::abs(p.det()) < 0.2) continue;
    const cplx g = gamma_closed_form(Mat2{}, a1);
    EXPECT_LT(std::abs(gamma_closed_form(Mat2{}, p.inverse() * a1 * p) - g), 1e-12 * std::max(1.0, std::abs(g)));
  }
}

}  // namespace
}  // namespace confluence
