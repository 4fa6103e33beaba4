#include "confluence/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace confluence {

CSeries::CSeries(int order) {
  if (order < 1) throw std::invalid_argument("CSeries: order must be at least 1");
  coeffs_.assign(static_cast<std::size_t>(order), cplx{});
}

CSeries::CSeries(std::vector<cplx> coeffs, int order) : coeffs_(std::move(coeffs)) {
  if (order < 1) throw std::invalid_argument("CSeries: order must be at least 1");
  coeffs_.resize(static_cast<std::size_t>(order));
}

CSeries CSeries::constant(cplx c, int order) {
  CSeries s(order);
  s.coeffs_[0] = c;
  return s;
}

CSeries CSeries::monomial(cplx c, int power, int order) {
  CSeries s(order);
  if (power >= 0 && power < order) s.coeffs_[static_cast<std::size_t>(power)] = c;
  return s;
}

cplx CSeries::eval(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

CSeries CSeries::derivative() const {
  CSeries out(order());
  for (int l = 1; l < order(); ++l) out.coeffs_[l - 1] = static_cast<double>(l) * coeffs_[l];
  return out;
}

CSeries CSeries::antiderivative() const {
  CSeries out(order());
  for (int l = 1; l < order(); ++l) out.coeffs_[l] = coeffs_[l - 1] / static_cast<double>(l);
  return out;
}

CSeries CSeries::truncated(int order) const { return CSeries(coeffs_, order); }

CSeries CSeries::substitute_affine(cplx scale, cplx shift) const {
  std::vector<cplx> c = coeffs_;
  const std::size_t n = c.size();
  // Taylor shift p(y + shift).
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += shift * c[j];
  }
  cplx power = 1.0;
  for (auto& v : c) {
    v *= power;
    power *= scale;
  }
  return CSeries(std::move(c), order());
}

double CSeries::max_abs() const {
  double out = 0.0;
  for (const auto& v : coeffs_) out = std::max(out, std::abs(v));
  return out;
}

CSeries& CSeries::operator+=(const CSeries& b) {
  if (b.order() < order()) coeffs_.resize(b.coeffs_.size());
  for (std::size_t l = 0; l < coeffs_.size(); ++l) coeffs_[l] += b.coeffs_[l];
  return *this;
}

CSeries& CSeries::operator-=(const CSeries& b) {
  if (b.order() < order()) coeffs_.resize(b.coeffs_.size());
  for (std::size_t l = 0; l < coeffs_.size(); ++l) coeffs_[l] -= b.coeffs_[l];
  return *this;
}

CSeries& CSeries::operator*=(cplx c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

CSeries operator*(const CSeries& a, const CSeries& b) {
  const int order = std::min(a.order(), b.order());
  CSeries out(order);
  for (int i = 0; i < order; ++i) {
    if (a.coeffs_[i] == cplx{}) continue;
    for (int j = 0; i + j < order; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return out;
}

CSeries reciprocal(const CSeries& a) {
  if (a[0] == cplx{}) throw DivisionByNonUnit("series reciprocal: zero constant term");
  const int order = a.order();
  std::vector<cplx> b(static_cast<std::size_t>(order));
  const cplx inv0 = 1.0 / a[0];
  b[0] = inv0;
  for (int n = 1; n < order; ++n) {
    cplx acc{};
    for (int k = 1; k <= n; ++k) acc += a[k] * b[n - k];
    b[n] = -inv0 * acc;
  }
  return CSeries(std::move(b), order);
}

CSeries operator/(const CSeries& a, const CSeries& b) {
  if (b[0] == cplx{}) throw DivisionByNonUnit("series division by a non-unit");
  const int order = std::min(a.order(), b.order());
  return a.truncated(order) * reciprocal(b.truncated(order));
}

CSeries compose(const CSeries& outer, const CSeries& inner) {
  if (inner[0] != cplx{}) throw std::invalid_argument("compose: inner series must vanish at 0");
  const int order = std::min(outer.order(), inner.order());
  const CSeries in = inner.truncated(order);
  CSeries acc = CSeries::constant(outer[order - 1], order);
  for (int l = order - 2; l >= 0; --l) acc = acc * in + CSeries::constant(outer[l], order);
  return acc;
}

CSeries exp_series(const CSeries& a) {
  const int order = a.order();
  std::vector<cplx> e(static_cast<std::size_t>(order));
  e[0] = 1.0;
  for (int n = 1; n < order; ++n) {
    cplx acc{};
    for (int k = 1; k <= n; ++k) acc += static_cast<double>(k) * a[k] * e[n - k];
    e[n] = acc / static_cast<double>(n);
  }
  return CSeries(std::move(e), order) * std::exp(a[0]);
}

CSeries series_arith(const CSeries& a, const CSeries& b, SeriesOp op) {
  const int order = std::min(a.order(), b.order());
  switch (op) {
    case SeriesOp::add: return a.truncated(order) + b.truncated(order);
    case SeriesOp::sub: return a.truncated(order) - b.truncated(order);
    case SeriesOp::mul: return a * b;
    case SeriesOp::div: return a / b;
    case SeriesOp::compose: return compose(a, b);
  }
  throw std::invalid_argument("series_arith: unknown op");
}

std::vector<cplx> poly_mul(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

QuadraticDivision divide_by_monic_quadratic(std::span<const cplx> p, cplx h0, cplx h1) {
  std::vector<cplx> r(p.begin(), p.end());
  r.resize(std::max<std::size_t>(r.size(), 2));
  QuadraticDivision out;
  const std::size_t n = r.size();
  out.quotient.assign(n > 2 ? n - 2 : 0, cplx{});
  for (std::size_t k = n - 1; k >= 2; --k) {
    const cplx q = r[k];
    out.quotient[k - 2] = q;
    r[k] = 0.0;
    r[k - 1] -= h1 * q;
    r[k - 2] -= h0 * q;
  }
  out.remainder = {r[0], r[1]};
  return out;
}

CSeriesMat2::CSeriesMat2(int order)
    : entries_{CSeries(order), CSeries(order), CSeries(order), CSeries(order)} {}

CSeriesMat2::CSeriesMat2(CSeries m00, CSeries m01, CSeries m10, CSeries m11)
    : entries_{std::move(m00), std::move(m01), std::move(m10), std::move(m11)} {
  const int order = std::min({entries_[0].order(), entries_[1].order(), entries_[2].order(),
                              entries_[3].order()});
  for (auto& e : entries_) {
    if (e.order() != order) e = e.truncated(order);
  }
}

CSeriesMat2 CSeriesMat2::identity(int order) { return constant(Mat2::identity(), order); }

CSeriesMat2 CSeriesMat2::constant(const Mat2& m, int order) {
  return {CSeries::constant(m(0, 0), order), CSeries::constant(m(0, 1), order),
          CSeries::constant(m(1, 0), order), CSeries::constant(m(1, 1), order)};
}

CSeriesMat2 CSeriesMat2::scalar(const CSeries& s) {
  const CSeries zero(s.order());
  return {s, zero, zero, s};
}

CSeriesMat2 CSeriesMat2::from_coefficients(std::span<const Mat2> coeffs, int order) {
  CSeriesMat2 out(order);
  for (std::size_t l = 0; l < coeffs.size() && static_cast<int>(l) < order; ++l) {
    out.set_coeff(static_cast<int>(l), coeffs[l]);
  }
  return out;
}

Mat2 CSeriesMat2::coeff(int l) const {
  return {entries_[0][l], entries_[1][l], entries_[2][l], entries_[3][l]};
}

void CSeriesMat2::set_coeff(int l, const Mat2& m) {
  entries_[0].set(l, m(0, 0));
  entries_[1].set(l, m(0, 1));
  entries_[2].set(l, m(1, 0));
  entries_[3].set(l, m(1, 1));
}

Mat2 CSeriesMat2::eval(cplx z) const {
  return {entries_[0].eval(z), entries_[1].eval(z), entries_[2].eval(z), entries_[3].eval(z)};
}

CSeries CSeriesMat2::det() const { return entries_[0] * entries_[3] - entries_[1] * entries_[2]; }

CSeries CSeriesMat2::trace() const { return entries_[0] + entries_[3]; }

CSeriesMat2 CSeriesMat2::derivative() const {
  return {entries_[0].derivative(), entries_[1].derivative(), entries_[2].derivative(),
          entries_[3].derivative()};
}

CSeriesMat2 CSeriesMat2::truncated(int order) const {
  return {entries_[0].truncated(order), entries_[1].truncated(order),
          entries_[2].truncated(order), entries_[3].truncated(order)};
}

CSeriesMat2 CSeriesMat2::substitute_affine(cplx scale, cplx shift) const {
  return {entries_[0].substitute_affine(scale, shift), entries_[1].substitute_affine(scale, shift),
          entries_[2].substitute_affine(scale, shift), entries_[3].substitute_affine(scale, shift)};
}

CSeriesMat2 CSeriesMat2::inverse() const {
  const CSeries inv_det = reciprocal(det());
  return {inv_det * entries_[3], -(inv_det * entries_[1]), -(inv_det * entries_[2]),
          inv_det * entries_[0]};
}

double CSeriesMat2::max_abs() const {
  double out = 0.0;
  for (const auto& e : entries_) out = std::max(out, e.max_abs());
  return out;
}

CSeriesMat2 operator+(const CSeriesMat2& a, const CSeriesMat2& b) {
  return {a(0, 0) + b(0, 0), a(0, 1) + b(0, 1), a(1, 0) + b(1, 0), a(1, 1) + b(1, 1)};
}

CSeriesMat2 operator-(const CSeriesMat2& a, const CSeriesMat2& b) {
  return {a(0, 0) - b(0, 0), a(0, 1) - b(0, 1), a(1, 0) - b(1, 0), a(1, 1) - b(1, 1)};
}

CSeriesMat2 operator*(const CSeriesMat2& a, const CSeriesMat2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

CSeriesMat2 operator*(const CSeries& s, const CSeriesMat2& a) {
  return {s * a(0, 0), s * a(0, 1), s * a(1, 0), s * a(1, 1)};
}

CSeriesMat2 operator*(cplx c, const CSeriesMat2& a) {
  return {c * a(0, 0), c * a(0, 1), c * a(1, 0), c * a(1, 1)};
}

}  // namespace confluence
