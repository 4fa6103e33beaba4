#include "confluence/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace confluence {

std::array<cplx, 2> MonicQuadratic::roots() const {
  const cplx c = center();
  const cplx d = std::sqrt(c * c - h0);
  return {c + d, c - d};
}

CSeries MonicQuadratic::as_series(int order) const {
  return CSeries({h0, h1, 1.0}, order);
}

ParametricSystem::ParametricSystem(MonicQuadratic h, CSeriesMat2 a)
    : h_(h), a_(std::move(a)) {
  if (!std::isfinite(std::abs(h_.h0)) || !std::isfinite(std::abs(h_.h1))) {
    throw std::invalid_argument("ParametricSystem: non-finite h");
  }
}

GaugeTransform::GaugeTransform(CSeriesMat2 t) : t_(std::move(t)) {
  const Mat2 t0 = t_.coeff(0);
  const double scale = t0.max_abs();
  if (scale == 0.0 || std::abs(t0.det()) <= 1e-14 * scale * scale) {
    throw SingularGauge("gauge transform with singular constant term");
  }
}

GaugeTransform GaugeTransform::inverse() const { return GaugeTransform(t_.inverse()); }

GaugeTransform operator*(const GaugeTransform& a, const GaugeTransform& b) {
  return GaugeTransform(a.t_ * b.t_);
}

ParametricSystem gauge_apply(const GaugeTransform& t, const ParametricSystem& system) {
  if (t.order() != system.order()) {
    throw std::invalid_argument("gauge_apply: truncation orders differ");
  }
  const int order = system.order();
  const CSeriesMat2& tm = t.matrix();
  const CSeriesMat2 t_inv = tm.inverse();
  const CSeries h = system.h().as_series(order);
  CSeriesMat2 a = t_inv * (system.a() * tm) - h * (t_inv * tm.derivative());
  return {system.h(), std::move(a)};
}

GenericityReport genericity_check(const ParametricSystem& system, double tol) {
  const double h_size = std::abs(system.h().h0) + std::abs(system.h().h1);
  if (h_size > tol) throw NotAnUnfoldingBase("h is not z^2 at the base point");

  const Mat2 a0 = system.a().coeff(0);
  const cplx lambda0 = 0.5 * a0.trace();
  const Mat2 nil = a0 - Mat2::diag(lambda0, lambda0);
  const double scale = std::max(1.0, a0.max_abs());
  if (nil.max_abs() <= tol * scale || std::abs(nil.det()) > tol * scale * scale) {
    throw NotAnUnfoldingBase("A(0) is not a resonant Jordan block");
  }

  // det(A(z) - lambda0 I) at first order in z.
  const Mat2 a1 = system.a().coeff(1);
  const cplx d1 = nil(0, 0) * a1(1, 1) + a1(0, 0) * nil(1, 1) - nil(0, 1) * a1(1, 0) -
                  a1(0, 1) * nil(1, 0);
  GenericityReport out;
  out.slope = -d1;
  out.generic = std::abs(out.slope) > tol;
  return out;
}

}  // namespace confluence
