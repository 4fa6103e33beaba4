#include "confluence/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace confluence {

Mat2 Mat2::inverse() const {
  const cplx d = det();
  if (d == cplx{}) throw std::domain_error("Mat2::inverse: singular matrix");
  const cplx inv = 1.0 / d;
  return {inv * m_[3], -inv * m_[1], -inv * m_[2], inv * m_[0]};
}

double Mat2::max_abs() const {
  double out = 0.0;
  for (const cplx& v : m_) out = std::max(out, std::abs(v));
  return out;
}

BranchedLog::BranchedLog(double modulus, double arg) : modulus_(modulus), arg_(arg) {
  if (!(modulus >= 0.0) || !std::isfinite(modulus) || !std::isfinite(arg)) {
    throw std::invalid_argument("BranchedLog: modulus must be finite and non-negative");
  }
}

BranchedLog BranchedLog::principal(cplx z) { return {std::abs(z), std::arg(z)}; }

BranchedLog BranchedLog::nearest(cplx z, const BranchedLog& reference) {
  const double a = std::arg(z);
  const double k = std::round((reference.arg() - a) / two_pi);
  return {std::abs(z), a + two_pi * k};
}

cplx BranchedLog::log() const {
  if (is_zero()) throw ZeroModulus("log of a zero-modulus point");
  return {std::log(modulus_), arg_};
}

BranchedLog operator/(const BranchedLog& a, const BranchedLog& b) {
  if (b.is_zero()) throw ZeroModulus("division by a zero-modulus point");
  return {a.modulus_ / b.modulus_, a.arg_ - b.arg_};
}

BranchedLog ramified_sqrt(const BranchedLog& x) {
  if (x.is_zero()) throw ZeroModulus("ramified_sqrt at the branch point");
  return {std::sqrt(x.modulus()), 0.5 * x.arg()};
}

namespace {

// Lanczos coefficients for g = 607/128, n = 15 (Godfrey).
constexpr double lanczos_g = 607.0 / 128.0;
constexpr std::array<double, 15> lanczos_c{
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

cplx log_gamma_right(cplx z) {
  z -= 1.0;
  cplx series = lanczos_c[0];
  for (std::size_t k = 1; k < lanczos_c.size(); ++k) {
    series += lanczos_c[k] / (z + static_cast<double>(k));
  }
  const cplx t = z + lanczos_g + 0.5;
  return 0.5 * std::log(two_pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// sin(pi z) with exact zeros at integers on the real axis.
cplx sin_pi(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double r = std::remainder(x, 2.0);
  const double s = (r == std::round(r)) ? 0.0 : std::sin(pi * r);
  const double c = (std::abs(r) == 0.5) ? 0.0 : std::cos(pi * r);
  return {s * std::cosh(pi * y), c * std::sinh(pi * y)};
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw PoleAtNonPositiveInteger("log_gamma at a non-positive integer");
  }
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Reflection, with the imaginary part kept on the branch continuous from the positive axis.
  const double turn = std::copysign(two_pi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
  return cplx{std::log(pi), turn} - std::log(sin_pi(z)) - log_gamma_right(1.0 - z);
}

cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

cplx cos_pi_sqrt(cplx w) { return std::cos(pi * std::sqrt(w)); }

cplx sinc_pi_sqrt(cplx w) {
  if (std::abs(w) < 1e-6) {
    const double p2 = pi * pi;
    return 1.0 - p2 * w / 6.0 + p2 * p2 * w * w / 120.0;
  }
  const cplx x = pi * std::sqrt(w);
  return std::sin(x) / x;
}

}  // namespace confluence
