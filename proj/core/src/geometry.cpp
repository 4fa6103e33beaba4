#include "confluence/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "confluence/ode.hpp"

namespace confluence {

bool DomainConfig::feasible(double sup_s_r) const {
  return L * delta_s * (1.0 + 4.0 * sup_s_r) <= 2.0 * std::cos(eta);
}

bool DomainConfig::in_annulus(cplx s, cplx mu, cplx eps) const {
  if (!(std::abs(s) < delta_s) || s == cplx{}) return false;
  const cplx s2 = s * s;
  const cplx x = s2 - mu;
  return std::abs((x * x - eps) / (s2 * s2)) < L;
}

void validate(const DomainConfig& cfg, double sup_s_r) {
  if (!(cfg.eta > 0.0 && cfg.eta < 0.5 * pi)) throw std::invalid_argument("eta must lie in (0, pi/2)");
  if (!(cfg.delta_s > 0.0 && cfg.delta_mu > 0.0 && cfg.delta_eps > 0.0)) {
    throw std::invalid_argument("delta_s, delta_mu and delta_eps must be positive");
  }
  if (!(cfg.L >= 2.0)) throw std::invalid_argument("L must be at least 2");
  if (!cfg.feasible(sup_s_r)) {
    throw InfeasibleConfig("L delta_s (1 + 4 sup|s r|) exceeds 2 cos eta");
  }
}

double sup_s_r(const CSeries& r, cplx mu, double delta_s) {
  // Maximum modulus principle: the supremum over the disc is attained on its boundary.
  constexpr int samples = 512;
  double out = 0.0;
  for (int k = 0; k < samples; ++k) {
    const cplx s = std::polar(delta_s, two_pi * k / samples);
    out = std::max(out, std::abs(s * r.eval(s * s - mu)));
  }
  return out;
}

namespace {

constexpr double snap_tolerance = 1e-14;

BranchedLog snapped(cplx w, double scale) {
  if (std::abs(w) <= snap_tolerance * scale) return {0.0, 0.0};
  return BranchedLog::principal(w);
}

BranchedLog root_or_zero(const BranchedLog& w) {
  if (w.is_zero()) return {0.0, 0.5 * w.arg()};
  return ramified_sqrt(w);
}

}  // namespace

RamifiedPoint RamifiedPoint::principal(cplx mu, cplx eps) {
  const BranchedLog e = snapped(eps, 1.0);
  if (e.is_zero()) {
    const BranchedLog m = snapped(mu, 1.0);
    return {e, m, m};
  }
  const cplx se = ramified_sqrt(e).value();
  const double scale = std::max({1.0, std::abs(mu), std::abs(se)});
  return {e, snapped(mu + se, scale), snapped(mu - se, scale)};
}

RamifiedPoint RamifiedPoint::from_branches(const BranchedLog& eps, const BranchedLog& w1,
                                           const BranchedLog& w2) {
  return {eps, w1, w2};
}

BranchedLog RamifiedPoint::s1_log() const { return root_or_zero(w1_); }
BranchedLog RamifiedPoint::s2_log() const { return root_or_zero(w2_); }

std::array<cplx, 4> RamifiedPoint::zeros() const {
  const cplx a = s1();
  const cplx b = s2();
  return {a, b, -a, -b};
}

BranchedLog RamifiedPoint::a_log() const {
  if (eps_zero()) {
    const BranchedLog root = s1_log();
    if (root.is_zero()) throw ZeroModulus("a is undefined at mu = eps = 0");
    const BranchedLog out{0.5 / root.modulus(), -root.arg()};
    return a_arg_ ? out.with_arg(*a_arg_) : out;
  }
  const cplx v = (s1() - s2()) / (2.0 * sqrt_eps().value());
  return a_arg_ ? BranchedLog(std::abs(v), *a_arg_) : BranchedLog::principal(v);
}

BranchedLog RamifiedPoint::b_log() const {
  if (eps_zero()) throw ZeroModulus("b is undefined at eps = 0");
  const cplx v = (s1() + s2()) / (2.0 * sqrt_eps().value());
  return b_arg_ ? BranchedLog(std::abs(v), *b_arg_) : BranchedLog::principal(v);
}

RamifiedPoint RamifiedPoint::sigma() const {
  RamifiedPoint out{eps_, w1_, w2_.turned(1.0)};
  out.a_arg_ = b_log().arg();
  out.b_arg_ = a_log().arg();
  return out;
}

RamifiedPoint RamifiedPoint::rho() const {
  RamifiedPoint out{eps_.turned(1.0), w2_.turned(1.0), w1_.turned(1.0)};
  out.a_arg_ = a_log().arg() - pi;
  out.b_arg_ = b_log().arg();
  return out;
}

cplx chi(cplx s, cplx mu, cplx eps) {
  if (s == cplx{}) throw PoleAtZero("chi has a pole at s = 0");
  const cplx s2 = s * s;
  const cplx x = s2 - mu;
  return (x * x - eps) / (4.0 * s2);
}

cplx chi_derivative(cplx s, cplx mu, cplx eps) {
  if (s == cplx{}) throw PoleAtZero("chi has a pole at s = 0");
  const cplx s2 = s * s;
  const cplx x = s2 - mu;
  return x / s - (x * x - eps) / (2.0 * s2 * s);
}

namespace {

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

cplx log_ratio(cplx s, cplx c) { return std::log((s - c) / (s + c)); }

}  // namespace

cplx theta(cplx s, const RamifiedPoint& rp) {
  for (const cplx& z : rp.zeros()) {
    if (segment_distance(s, 0.0, z) < 1e-9) throw OnCut("theta evaluated on a cut");
  }
  if (rp.mu_eps_zero()) return -2.0 / s;
  const cplx mu = rp.mu();
  if (rp.eps_zero()) {
    const cplx c = rp.s1();
    return -s / (s * s - mu) - std::log((s + c) / (s - c)) / (2.0 * c);
  }
  if (rp.w1_log().is_zero() || rp.w2_log().is_zero()) {
    const cplx c = rp.w1_log().is_zero() ? rp.s2() : rp.s1();
    return log_ratio(s, c) / c;
  }
  const cplx se = rp.sqrt_eps().value();
  const cplx s1 = rp.s1();
  const cplx s2 = rp.s2();
  return (s1 * log_ratio(s, s1) - s2 * log_ratio(s, s2)) / (2.0 * se);
}

cplx theta_derivative(cplx s, cplx mu, cplx eps) {
  const cplx x = s * s - mu;
  return 2.0 * s * s / (x * x - eps);
}

namespace {

// Index of the zero nearest to s, and its distance.
std::pair<int, double> nearest_zero(cplx s, const std::array<cplx, 4>& zeros) {
  int best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const double d = std::abs(s - zeros[i]);
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return {best, dist};
}

// Distance from zero i to the pole and to the other distinct zeros.
double isolation(int i, const std::array<cplx, 4>& zeros) {
  double out = std::abs(zeros[i]);
  for (int j = 0; j < 4; ++j) {
    const double d = std::abs(zeros[i] - zeros[j]);
    if (d > 1e-12) out = std::min(out, d);
  }
  return out;
}

}  // namespace

TrajectoryRecord trace_trajectory(cplx s0, cplx omega, const RamifiedPoint& rp,
                                  const DomainConfig& cfg, Direction direction,
                                  const TraceOptions& options) {
  const cplx mu = rp.mu();
  const cplx eps = rp.eps();
  if (!cfg.in_annulus(s0, mu, eps)) {
    throw std::invalid_argument("trace_trajectory: start point outside the annulus");
  }
  const auto zeros = rp.zeros();
  const double sign = direction == Direction::forward ? 1.0 : -1.0;
  const cplx flow = sign * omega;

  TrajectoryRecord rec;
  rec.omega = omega;
  rec.samples.push_back({0.0, s0});

  auto sink_at = [&](cplx s) -> std::optional<int> {
    const auto [i, d] = nearest_zero(s, zeros);
    if (d < options.capture_radius && (flow * chi_derivative(zeros[i], mu, eps)).real() < 0.0) {
      return i;
    }
    return std::nullopt;
  };

  // Starting on an equilibrium (up to rounding in the zeros themselves).
  if (const auto [i, d] = nearest_zero(s0, zeros);
      d <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(s0) || chi(s0, mu, eps) == cplx{}) {
    rec.terminal = Terminal::converged;
    rec.endpoint = i;
    return rec;
  }

  using State = std::array<cplx, 1>;
  auto field = [&](double, const State& y) { return State{flow * chi(y[0], mu, eps)}; };
  StepOptions opt;
  opt.tol = options.tol;
  opt.h_init = std::min(options.sample_step, 0.01);
  opt.h_max = options.sample_step;
  opt.h_min = 1e-12;
  DormandPrince<1, decltype(field)> solver(field, 0.0, State{s0}, opt);

  const double xi_max = cfg.xi_max();
  const auto outside = [&](double, const State& y) { return !cfg.in_annulus(y[0], mu, eps); };
  double max_dist = std::abs(s0);
  for (long k = 1;; ++k) {
    const double target = std::min(xi_max, static_cast<double>(k) * options.sample_step);
    const bool reached = solver.advance_to(target, outside);
    const cplx s = solver.y()[0];
    rec.samples.push_back({sign * solver.t(), s});
    max_dist = std::max(max_dist, std::abs(s));
    if (!reached) {
      rec.terminal = Terminal::left_annulus;
      return rec;
    }
    if (const auto i = sink_at(s)) {
      rec.terminal = Terminal::converged;
      rec.endpoint = *i;
      return rec;
    }
    if (target >= xi_max) break;
  }

  // Slow (non-hyperbolic) approach: accept the nearest zero when clearly inside its basin.
  rec.terminal = Terminal::max_length;
  const cplx last = rec.samples.back().s;
  const auto [i, d] = nearest_zero(last, zeros);
  const double scale = isolation(i, zeros);
  const double reach = scale > 1e-12 ? 0.25 * scale : 0.1 * max_dist;
  if (d < reach) rec.endpoint = i;
  return rec;
}

FullTrajectory trace_full(cplx s0, cplx omega, const RamifiedPoint& rp, const DomainConfig& cfg,
                          const TraceOptions& options) {
  const TrajectoryRecord back = trace_trajectory(s0, omega, rp, cfg, Direction::backward, options);
  const TrajectoryRecord fwd = trace_trajectory(s0, omega, rp, cfg, Direction::forward, options);
  FullTrajectory out;
  out.record.omega = omega;
  out.record.samples.reserve(back.samples.size() + fwd.samples.size() - 1);
  for (auto it = back.samples.rbegin(); it != back.samples.rend(); ++it) {
    out.record.samples.push_back(*it);
  }
  out.record.samples.insert(out.record.samples.end(), fwd.samples.begin() + 1, fwd.samples.end());
  out.record.terminal = fwd.terminal;
  out.record.endpoint = fwd.endpoint;
  out.backward_endpoint = back.endpoint;
  out.forward_endpoint = fwd.endpoint;
  out.backward_terminal = back.terminal;
  out.forward_terminal = fwd.terminal;
  return out;
}

BifurcationCurves bifurcation_sets(cplx eps, int resolution) {
  if (resolution < 2) throw std::invalid_argument("bifurcation_sets: resolution must be >= 2");
  BifurcationCurves out;
  out.sigma_o.reserve(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k) {
    const double a = std::pow(10.0, -3.0 + 6.0 * k / (resolution - 1));
    out.sigma_o.push_back(-0.5 * (1.0 / a + eps * a));
  }
  const cplx se = std::sqrt(eps);
  const double t_max = 1.0 / std::max(std::abs(eps), 1e-3);
  for (int branch = 0; branch < 2; ++branch) {
    const cplx start = branch == 0 ? -se : se;
    auto& ray = out.sigma_i[static_cast<std::size_t>(branch)];
    ray.reserve(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) {
      const double t = t_max * k / (resolution - 1);
      ray.push_back(start - eps * t);
    }
  }
  return out;
}

cplx sigma_o_vertex(cplx eps) { return -std::sqrt(eps); }

std::vector<StabilitySample> s2_stability_sweep(cplx eps, cplx mu_begin, cplx mu_end,
                                                int samples) {
  if (samples < 2) throw std::invalid_argument("s2_stability_sweep: need at least 2 samples");
  const cplx se = std::sqrt(eps);
  std::vector<StabilitySample> out;
  out.reserve(static_cast<std::size_t>(samples));
  BranchedLog w2 = BranchedLog::principal(mu_begin - se);
  for (int k = 0; k < samples; ++k) {
    const cplx mu = mu_begin + (mu_end - mu_begin) * (static_cast<double>(k) / (samples - 1));
    w2 = BranchedLog::nearest(mu - se, w2);
    const cplx s2 = ramified_sqrt(w2).value();
    out.push_back({mu, s2, (se / s2).real()});
  }
  return out;
}

int count_sign_changes(const std::vector<StabilitySample>& sweep) {
  int changes = 0;
  for (std::size_t k = 1; k < sweep.size(); ++k) {
    if ((sweep[k - 1].multiplier_real < 0.0) != (sweep[k].multiplier_real < 0.0)) ++changes;
  }
  return changes;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "xi,re_s,im_s\n";
  out.precision(12);
  for (const auto& p : record.samples) {
    out << p.xi << ',' << p.s.real() << ',' << p.s.imag() << '\n';
  }
}

void write_bifurcations_csv(std::ostream& out, const BifurcationCurves& curves) {
  out << "curve,re_mu,im_mu\n";
  out.precision(12);
  for (const cplx& m : curves.sigma_o) out << "sigma_o," << m.real() << ',' << m.imag() << '\n';
  for (const cplx& m : curves.sigma_i[0]) {
    out << "sigma_i_minus," << m.real() << ',' << m.imag() << '\n';
  }
  for (const cplx& m : curves.sigma_i[1]) {
    out << "sigma_i_plus," << m.real() << ',' << m.imag() << '\n';
  }
}

}  // namespace confluence
