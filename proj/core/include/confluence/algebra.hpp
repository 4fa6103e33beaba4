#pragma once

#include <array>
#include <complex>
#include <numbers>

#include "confluence/errors.hpp"

namespace confluence {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx imag_unit{0.0, 1.0};

// Dense 2x2 complex matrix, row-major.
class Mat2 {
 public:
  constexpr Mat2() = default;
  constexpr Mat2(cplx m00, cplx m01, cplx m10, cplx m11) : m_{m00, m01, m10, m11} {}

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }
  static constexpr Mat2 swap() { return {0.0, 1.0, 1.0, 0.0}; }

  constexpr cplx operator()(int row, int col) const { return m_[2 * row + col]; }
  constexpr cplx& operator()(int row, int col) { return m_[2 * row + col]; }

  constexpr cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  constexpr cplx trace() const { return m_[0] + m_[3]; }
  // Throws std::domain_error when the determinant is exactly zero.
  Mat2 inverse() const;
  // Largest entry modulus.
  double max_abs() const;

  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m_[0] + b.m_[0], a.m_[1] + b.m_[1], a.m_[2] + b.m_[2], a.m_[3] + b.m_[3]};
  }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m_[0] - b.m_[0], a.m_[1] - b.m_[1], a.m_[2] - b.m_[2], a.m_[3] - b.m_[3]};
  }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
            a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
  }
  friend constexpr Mat2 operator*(cplx c, const Mat2& a) {
    return {c * a.m_[0], c * a.m_[1], c * a.m_[2], c * a.m_[3]};
  }

 private:
  std::array<cplx, 4> m_{};
};

// A point on the Riemann surface of log: modulus plus an unreduced argument.
// The argument encodes the sheet, so arg and arg + 2*pi project to the same
// complex number but are different points.
class BranchedLog {
 public:
  BranchedLog() = default;
  // Throws std::invalid_argument for negative or non-finite modulus.
  BranchedLog(double modulus, double arg);

  // Principal sheet, arg in (-pi, pi].
  static BranchedLog principal(cplx z);
  // Sheet whose arg is nearest to `reference.arg()`; used for continuation.
  static BranchedLog nearest(cplx z, const BranchedLog& reference);

  double modulus() const { return modulus_; }
  double arg() const { return arg_; }
  bool is_zero() const { return modulus_ == 0.0; }

  cplx value() const { return std::polar(modulus_, arg_); }
  // log(modulus) + i*arg; throws ZeroModulus at the origin.
  cplx log() const;

  BranchedLog turned(double turns) const { return {modulus_, arg_ + two_pi * turns}; }
  BranchedLog with_arg(double arg) const { return {modulus_, arg}; }

  friend BranchedLog operator*(const BranchedLog& a, const BranchedLog& b) {
    return {a.modulus_ * b.modulus_, a.arg_ + b.arg_};
  }
  // Throws ZeroModulus when dividing by the origin.
  friend BranchedLog operator/(const BranchedLog& a, const BranchedLog& b);

 private:
  double modulus_ = 1.0;
  double arg_ = 0.0;
};

// Sheet-tracking square root: modulus -> sqrt(modulus), arg -> arg / 2.
// Throws ZeroModulus at the branch point.
BranchedLog ramified_sqrt(const BranchedLog& x);

// Principal log Gamma(z). Throws PoleAtNonPositiveInteger.
cplx log_gamma(cplx z);

// Gamma(z) = exp(log_gamma(z)).
cplx gamma_fn(cplx z);

// cos(pi * sqrt(w)), an entire function of w (independent of the root's sign).
cplx cos_pi_sqrt(cplx w);

// sin(pi * sqrt(w)) / (pi * sqrt(w)), entire, equal to 1 at w = 0.
cplx sinc_pi_sqrt(cplx w);

}  // namespace confluence
