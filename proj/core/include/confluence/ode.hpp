#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "confluence/algebra.hpp"

namespace confluence {

struct StepOptions {
  double tol = 1e-10;
  double h_init = 1e-2;
  double h_min = 1e-14;
  double h_max = 1.0;
  // Control the local error per unit of the independent variable instead of per step.
  bool per_unit_length = true;
};

// Embedded Dormand-Prince 5(4) pair on a complex state over a real parameter.
template <std::size_t N, class Field>
class DormandPrince {
 public:
  using State = std::array<cplx, N>;

  DormandPrince(Field field, double t0, const State& y0, StepOptions options)
      : field_(std::move(field)), t_(t0), y_(y0), opt_(options), h_(options.h_init) {}

  double t() const { return t_; }
  const State& y() const { return y_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }

  // Advances to exactly `target` (which must not lie behind t()). Throws StepUnderflow.
  void advance_to(double target) {
    advance_to(target, [](double, const State&) { return false; });
  }

  // As above, but stops after the first accepted step where stop(t, y) holds.
  // Returns false when stopped early.
  template <class Stop>
  bool advance_to(double target, Stop stop) {
    while (target - t_ > 0.0) {
      const double remaining = target - t_;
      double h = std::min({h_, opt_.h_max, remaining});
      const bool last = h >= remaining;
      if (last) h = remaining;
      State y_new;
      const double err = attempt(h, y_new);
      if (err <= 1.0) {
        t_ = last ? target : t_ + h;
        y_ = y_new;
        ++accepted_;
        // A step shortened to land on the target says nothing about the next one.
        h_ = last ? std::max(h_, h * grow_factor(err)) : h * grow_factor(err);
        if (stop(t_, y_)) return false;
      } else {
        ++rejected_;
        h_ = h * std::max(0.1, 0.9 * std::pow(err, -exponent()));
        if (h_ < opt_.h_min) throw StepUnderflow("adaptive step fell below the minimum");
      }
    }
    return true;
  }

 private:
  double exponent() const { return opt_.per_unit_length ? 0.25 : 0.2; }
  double grow_factor(double err) const {
    if (err == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err, -exponent()), 0.2, 5.0);
  }

  // One trial step; returns the scaled error norm.
  double attempt(double h, State& y_new) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State tmp;
    const State k1 = field_(t_, y_);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k1[i];
    const State k2 = field_(t_ + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State k3 = field_(t_ + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    }
    const State k4 = field_(t_ + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    const State k5 = field_(t_ + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const State k6 = field_(t_ + h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      y_new[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    const State k7 = field_(t_ + h, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
      const double scale = opt_.tol * (1.0 + std::max(std::abs(y_[i]), std::abs(y_new[i])));
      err = std::max(err, std::abs(e) / scale);
    }
    if (opt_.per_unit_length) err /= std::max(h, 1e-300);
    if (!std::isfinite(err)) return 1e10;
    return err;
  }

  Field field_;
  double t_;
  State y_;
  StepOptions opt_;
  double h_;
  long accepted_ = 0;
  long rejected_ = 0;
};

}  // namespace confluence
