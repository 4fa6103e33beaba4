#pragma once

#include <array>
#include <span>
#include <vector>

#include "confluence/algebra.hpp"

namespace confluence {

inline constexpr int default_order = 24;

// Complex power series truncated modulo z^order.
class CSeries {
 public:
  // Zero series. Throws std::invalid_argument for order < 1.
  explicit CSeries(int order = default_order);
  // Copies `coeffs` (index l holds the z^l coefficient), padding or truncating to `order`.
  CSeries(std::vector<cplx> coeffs, int order);

  static CSeries constant(cplx c, int order);
  static CSeries monomial(cplx c, int power, int order);
  // The identity series z.
  static CSeries variable(int order) { return monomial(1.0, 1, order); }

  int order() const { return static_cast<int>(coeffs_.size()); }
  std::span<const cplx> coeffs() const { return coeffs_; }
  // Zero past the truncation order.
  cplx operator[](int l) const { return l >= 0 && l < order() ? coeffs_[l] : cplx{}; }
  void set(int l, cplx value) { coeffs_.at(static_cast<std::size_t>(l)) = value; }

  // Horner evaluation of the stored polynomial.
  cplx eval(cplx z) const;
  CSeries derivative() const;
  // Antiderivative with zero constant term.
  CSeries antiderivative() const;
  CSeries truncated(int order) const;
  // p(scale * z + shift) re-expanded as a polynomial of the same length.
  CSeries substitute_affine(cplx scale, cplx shift) const;
  double max_abs() const;

  CSeries& operator+=(const CSeries& b);
  CSeries& operator-=(const CSeries& b);
  CSeries& operator*=(cplx c);

  friend CSeries operator+(CSeries a, const CSeries& b) { return a += b; }
  friend CSeries operator-(CSeries a, const CSeries& b) { return a -= b; }
  friend CSeries operator-(CSeries a) { return a *= -1.0; }
  friend CSeries operator*(CSeries a, cplx c) { return a *= c; }
  friend CSeries operator*(cplx c, CSeries a) { return a *= c; }
  friend CSeries operator*(const CSeries& a, const CSeries& b);
  // Throws DivisionByNonUnit when b[0] == 0.
  friend CSeries operator/(const CSeries& a, const CSeries& b);

 private:
  std::vector<cplx> coeffs_;
};

enum class SeriesOp { add, sub, mul, div, compose };

// Result has the smaller of the two orders.
// div throws DivisionByNonUnit; compose requires b[0] == 0 (std::invalid_argument otherwise).
CSeries series_arith(const CSeries& a, const CSeries& b, SeriesOp op);
CSeries compose(const CSeries& outer, const CSeries& inner);
CSeries reciprocal(const CSeries& a);
CSeries exp_series(const CSeries& a);

// Exact polynomial helpers (no truncation).
std::vector<cplx> poly_mul(std::span<const cplx> a, std::span<const cplx> b);

struct QuadraticDivision {
  std::vector<cplx> quotient;
  std::array<cplx, 2> remainder{};  // r0 + r1 z
};

// Long division by z^2 + h1 z + h0, eliminating from the top degree down.
QuadraticDivision divide_by_monic_quadratic(std::span<const cplx> p, cplx h0, cplx h1);

// 2x2 matrix of series sharing one truncation order.
class CSeriesMat2 {
 public:
  explicit CSeriesMat2(int order = default_order);
  CSeriesMat2(CSeries m00, CSeries m01, CSeries m10, CSeries m11);

  static CSeriesMat2 identity(int order);
  static CSeriesMat2 constant(const Mat2& m, int order);
  static CSeriesMat2 scalar(const CSeries& s);
  // Sum_l coeffs[l] z^l.
  static CSeriesMat2 from_coefficients(std::span<const Mat2> coeffs, int order);

  int order() const { return entries_[0].order(); }
  const CSeries& operator()(int row, int col) const { return entries_[2 * row + col]; }
  CSeries& operator()(int row, int col) { return entries_[2 * row + col]; }

  Mat2 coeff(int l) const;
  void set_coeff(int l, const Mat2& m);
  Mat2 eval(cplx z) const;
  CSeries det() const;
  CSeries trace() const;
  CSeriesMat2 derivative() const;
  CSeriesMat2 truncated(int order) const;
  CSeriesMat2 substitute_affine(cplx scale, cplx shift) const;
  // Throws DivisionByNonUnit when the constant term is singular.
  CSeriesMat2 inverse() const;
  double max_abs() const;

  friend CSeriesMat2 operator+(const CSeriesMat2& a, const CSeriesMat2& b);
  friend CSeriesMat2 operator-(const CSeriesMat2& a, const CSeriesMat2& b);
  friend CSeriesMat2 operator*(const CSeriesMat2& a, const CSeriesMat2& b);
  friend CSeriesMat2 operator*(const CSeries& s, const CSeriesMat2& a);
  friend CSeriesMat2 operator*(cplx c, const CSeriesMat2& a);

 private:
  std::array<CSeries, 4> entries_;
};

}  // namespace confluence
