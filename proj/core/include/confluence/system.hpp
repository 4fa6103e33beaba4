#pragma once

#include <array>
#include <string>
#include <string_view>

#include "confluence/series.hpp"

namespace confluence {

// z^2 + h1 z + h0.
struct MonicQuadratic {
  cplx h0{};
  cplx h1{};

  cplx eval(cplx z) const { return (z + h1) * z + h0; }
  cplx center() const { return -0.5 * h1; }
  std::array<cplx, 2> roots() const;
  CSeries as_series(int order) const;
};

// The operator h(z) d/dz - A(z) at one parameter point.
class ParametricSystem {
 public:
  ParametricSystem(MonicQuadratic h, CSeriesMat2 a);

  const MonicQuadratic& h() const { return h_; }
  const CSeriesMat2& a() const { return a_; }
  int order() const { return a_.order(); }

 private:
  MonicQuadratic h_;
  CSeriesMat2 a_;
};

// Series matrix T with invertible T(0).
class GaugeTransform {
 public:
  // Throws SingularGauge when det T(0) vanishes (relative to the size of T(0)).
  explicit GaugeTransform(CSeriesMat2 t);

  const CSeriesMat2& matrix() const { return t_; }
  int order() const { return t_.order(); }
  // Series inverse as a gauge.
  GaugeTransform inverse() const;
  friend GaugeTransform operator*(const GaugeTransform& a, const GaugeTransform& b);

 private:
  CSeriesMat2 t_;
};

// A' = T^-1 A T - h T^-1 dT/dz with the same h.
// Throws std::invalid_argument on mismatched orders.
ParametricSystem gauge_apply(const GaugeTransform& t, const ParametricSystem& system);

struct GenericityReport {
  cplx slope{};  // -d/dz det(A(z) - lambda0 I) at z = 0
  bool generic = false;
};

inline constexpr double genericity_tolerance = 1e-8;

// Expects h = z^2 and A(0) = lambda0 I + nonzero nilpotent.
// Throws NotAnUnfoldingBase otherwise.
GenericityReport genericity_check(const ParametricSystem& system,
                                  double tol = genericity_tolerance);

// {"order": K, "h": [h0re, h0im, h1re, h1im], "A": [[a00, a01], [a10, a11]]}
// where each aij is a list of [re, im] coefficient pairs. Throws ParseError.
ParametricSystem system_from_json(std::string_view text);
std::string system_to_json(const ParametricSystem& system);

}  // namespace confluence
