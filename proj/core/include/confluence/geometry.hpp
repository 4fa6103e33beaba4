#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "confluence/algebra.hpp"
#include "confluence/series.hpp"

namespace confluence {

// Annulus { |s| < delta_s, |((s^2 - mu)^2 - eps) / s^4| < L } and direction cone |arg omega| < eta.
struct DomainConfig {
  double eta = pi / 6.0;
  double delta_s = 0.5;
  double delta_mu = 0.1;
  double delta_eps = 0.01;
  double L = 2.0;

  double xi_max() const { return 200.0 / std::cos(eta); }
  // L delta_s (1 + 4 sup|s r|) <= 2 cos eta.
  bool feasible(double sup_s_r) const;
  bool in_annulus(cplx s, cplx mu, cplx eps) const;
};

// Throws std::invalid_argument for out-of-range fields and InfeasibleConfig when
// the feasibility bound fails for the given sup|s r|.
void validate(const DomainConfig& cfg, double sup_s_r = 0.0);

// sup over |s| <= delta_s of |s r(s^2 - mu)|.
double sup_s_r(const CSeries& r, cplx mu, double delta_s);

// A point (mu, eps) of the ramified parameter space. Stored as the sheets of
// eps and of w1 = mu + sqrt(eps), w2 = mu - sqrt(eps); then s_i = sqrt(w_i).
class RamifiedPoint {
 public:
  // Principal sheets. Values of w_i within 1e-14 of zero are snapped to zero.
  static RamifiedPoint principal(cplx mu, cplx eps);
  static RamifiedPoint from_branches(const BranchedLog& eps, const BranchedLog& w1,
                                     const BranchedLog& w2);

  const BranchedLog& eps_log() const { return eps_; }
  const BranchedLog& w1_log() const { return w1_; }
  const BranchedLog& w2_log() const { return w2_; }

  cplx mu() const { return 0.5 * (w1_.value() + w2_.value()); }
  cplx eps() const { return eps_.value(); }
  bool eps_zero() const { return eps_.is_zero(); }
  bool mu_eps_zero() const { return eps_zero() && w1_.is_zero(); }

  // Throws ZeroModulus when eps = 0.
  BranchedLog sqrt_eps() const { return ramified_sqrt(eps_); }
  // Zero-modulus point when w_i = 0.
  BranchedLog s1_log() const;
  BranchedLog s2_log() const;
  cplx s1() const { return s1_log().value(); }
  cplx s2() const { return s2_log().value(); }
  // {s1, s2, -s1, -s2}
  std::array<cplx, 4> zeros() const;

  // a = (s1 - s2) / (2 sqrt eps), or 1 / (2 sqrt mu) when eps = 0.
  BranchedLog a_log() const;
  // b = (s1 + s2) / (2 sqrt eps). Throws ZeroModulus when eps = 0.
  BranchedLog b_log() const;
  cplx a() const { return a_log().value(); }
  cplx b() const { return b_log().value(); }

  // One turn of mu around sqrt(eps): s2 -> e^{i pi} s2, a and b exchange.
  RamifiedPoint sigma() const;
  // Simultaneous turn of mu and eps: s1 -> e^{i pi} s2, s2 -> e^{i pi} s1, a -> -a.
  RamifiedPoint rho() const;

 private:
  RamifiedPoint(BranchedLog eps, BranchedLog w1, BranchedLog w2)
      : eps_(eps), w1_(w1), w2_(w2) {}

  BranchedLog eps_, w1_, w2_;
  std::optional<double> a_arg_, b_arg_;
};

// ((s^2 - mu)^2 - eps) / (4 s^2). Throws PoleAtZero at s = 0.
cplx chi(cplx s, cplx mu, cplx eps);
cplx chi_derivative(cplx s, cplx mu, cplx eps);

// Closed-form primitive of 2 s^2 / ((s^2 - mu)^2 - eps) vanishing at infinity,
// with cuts on the segments [0, s_i]. Throws OnCut within 1e-9 of a cut.
cplx theta(cplx s, const RamifiedPoint& rp);
cplx theta_derivative(cplx s, cplx mu, cplx eps);

enum class Direction : int { forward = 1, backward = -1 };
enum class Terminal { converged, left_annulus, max_length };

struct TrajectorySample {
  double xi = 0.0;
  cplx s{};
};

struct TrajectoryRecord {
  cplx omega{1.0, 0.0};
  std::vector<TrajectorySample> samples;
  Terminal terminal = Terminal::max_length;
  // Index into RamifiedPoint::zeros() of the limit point, when identified.
  std::optional<int> endpoint;
};

struct TraceOptions {
  double sample_step = 0.01;     // uniform xi spacing of the recorded samples
  double tol = 1e-11;            // integrator tolerance
  double capture_radius = 1e-9;  // convergence radius around a sink
};

// Integrates ds/dxi = omega chi(s) (xi decreasing for the backward direction).
// Requires s0 inside the annulus (std::invalid_argument otherwise). Throws StepUnderflow.
TrajectoryRecord trace_trajectory(cplx s0, cplx omega, const RamifiedPoint& rp,
                                  const DomainConfig& cfg, Direction direction,
                                  const TraceOptions& options = {});

// Backward and forward halves joined into one record ordered by increasing xi,
// with xi = 0 at s0. The endpoint of the result is the forward limit.
struct FullTrajectory {
  TrajectoryRecord record;
  std::optional<int> backward_endpoint;
  std::optional<int> forward_endpoint;
  Terminal backward_terminal = Terminal::max_length;
  Terminal forward_terminal = Terminal::max_length;
};
FullTrajectory trace_full(cplx s0, cplx omega, const RamifiedPoint& rp, const DomainConfig& cfg,
                          const TraceOptions& options = {});

enum class RegionLabel : int { none = 0, inner = 1, inner_p = 2, outer = 3, outer_p = 4 };

struct GridSpec {
  double re_min = -0.5, re_max = 0.5;
  double im_min = -0.5, im_max = 0.5;
  int nx = 81, ny = 81;
  int threads = 1;

  cplx point(int ix, int iy) const;
};

struct RegionMap {
  GridSpec grid;
  std::vector<RegionLabel> labels;   // row-major, iy * nx + ix
  std::vector<bool> inside_annulus;  // same layout

  RegionLabel at(int ix, int iy) const { return labels[static_cast<std::size_t>(iy * grid.nx + ix)]; }
  int count(RegionLabel label) const;
  // 4-neighbour connected components of the cells carrying `label`.
  int components(RegionLabel label) const;
  // Whether a cell with `label` borders a grid cell outside the annulus or the grid edge.
  bool touches_boundary(RegionLabel label) const;
};

RegionMap classify_regions(const RamifiedPoint& rp, cplx omega, const DomainConfig& cfg,
                           const GridSpec& grid);

const char* to_string(RegionLabel label);

struct BifurcationCurves {
  std::vector<cplx> sigma_o;               // -(1/a + eps a) / 2, a > 0
  std::array<std::vector<cplx>, 2> sigma_i;  // -+ sqrt(eps) - eps t, t >= 0
};

BifurcationCurves bifurcation_sets(cplx eps, int resolution);
// Point of the outer curve at a = 1 / sqrt(eps); -sqrt(eps) on the principal sheet.
cplx sigma_o_vertex(cplx eps);

struct StabilitySample {
  cplx mu{};
  cplx s2{};
  double multiplier_real = 0.0;  // Re(sqrt(eps) / s2)
};

// Samples mu along the straight path from mu_begin to mu_end, following s2 continuously.
std::vector<StabilitySample> s2_stability_sweep(cplx eps, cplx mu_begin, cplx mu_end, int samples);
int count_sign_changes(const std::vector<StabilitySample>& sweep);

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);
void write_regions_csv(std::ostream& out, const RegionMap& map);
void write_bifurcations_csv(std::ostream& out, const BifurcationCurves& curves);

}  // namespace confluence
