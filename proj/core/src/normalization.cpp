#include "confluence/normalization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "confluence/errors.hpp"

namespace confluence {

namespace {

// Keeps the longest stretch of equally spaced samples; a trajectory leaving the
// annulus or hitting the length cap ends on a shortened step.
TrajectoryRecord uniform_part(const TrajectoryRecord& record) {
  const auto& in = record.samples;
  if (in.size() < 5) throw std::invalid_argument("trajectory too short for quadrature");
  std::size_t first = 0;
  std::size_t last = in.size() - 1;
  const double h = in[in.size() / 2 + 1].xi - in[in.size() / 2].xi;
  if (!(h > 0.0)) throw std::invalid_argument("trajectory samples must increase in xi");
  const auto regular = [h](double d) { return std::abs(d - h) <= 1e-9 * h; };
  if (!regular(in[1].xi - in[0].xi)) first = 1;
  if (!regular(in[last].xi - in[last - 1].xi)) last -= 1;
  for (std::size_t k = first + 1; k <= last; ++k) {
    if (!regular(in[k].xi - in[k - 1].xi)) {
      throw std::invalid_argument("trajectory samples are not equally spaced");
    }
  }
  TrajectoryRecord out = record;
  out.samples.assign(in.begin() + static_cast<std::ptrdiff_t>(first),
                     in.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  if (out.samples.size() < 5) throw std::invalid_argument("trajectory too short for quadrature");
  return out;
}

// Lagrange polynomial through (xs, ys), evaluated at x.
template <std::size_t N>
cplx lagrange_extrapolate(const std::array<cplx, N>& xs, const std::array<cplx, N>& ys, cplx x) {
  cplx out{};
  for (std::size_t i = 0; i < N; ++i) {
    cplx w{1.0, 0.0};
    for (std::size_t j = 0; j < N; ++j) {
      if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
    }
    out += w * ys[i];
  }
  return out;
}

struct Coefficients {
  std::vector<cplx> chi;
  std::vector<cplx> r;
};

Coefficients sample_coefficients(const TrajectoryRecord& rec, const CSeries& r, cplx mu, cplx eps) {
  Coefficients c;
  c.chi.reserve(rec.samples.size());
  c.r.reserve(rec.samples.size());
  for (const auto& smp : rec.samples) {
    c.chi.push_back(chi(smp.s, mu, eps));
    c.r.push_back(r.eval(smp.s * smp.s - mu));
  }
  return c;
}

// (1 - p^2) / (2 s) + (1 + p)^2 r
cplx bracket(cplx p, cplx s, cplx r) { return (1.0 - p * p) / (2.0 * s) + (1.0 + p) * (1.0 + p) * r; }

}  // namespace

PSolution solve_p(const TrajectoryRecord& trajectory, const CSeries& r, const RamifiedPoint& rp,
                  const PicardOptions& options) {
  if (!trajectory.endpoint) throw std::invalid_argument("solve_p: trajectory has no limit point");
  if (!(options.tol > 0.0) || options.max_sweeps < 1) {
    throw std::invalid_argument("solve_p: invalid options");
  }
  PSolution sol;
  sol.trajectory = uniform_part(trajectory);
  const auto& smp = sol.trajectory.samples;
  const std::size_t n = smp.size();
  const std::size_t last = n - 1;
  const double h = smp[1].xi - smp[0].xi;
  const cplx omega = sol.trajectory.omega;
  const cplx mu = rp.mu();
  const cplx eps = rp.eps();
  const cplx limit = rp.zeros()[static_cast<std::size_t>(*sol.trajectory.endpoint)];
  const Coefficients coef = sample_coefficients(sol.trajectory, r, mu, eps);

  const cplx decay = std::exp(-omega * h);
  const cplx decay2 = decay * decay;
  std::vector<cplx> f(n), integral(n);
  std::vector<cplx> p(n, cplx{});
  std::vector<cplx> next(n);
  // Noise floor below which successive update ratios carry no information.
  const double noise = std::max(10.0 * options.tol, 1e-12);

  double prev_delta = 0.0;
  for (int sweep = 1;; ++sweep) {
    for (std::size_t k = 0; k < n; ++k) f[k] = coef.chi[k] * bracket(p[k], smp[k].s, coef.r[k]);

    // Tail beyond the last sample: p = -(1 - d/dxi / omega)^{-1} (chi G) to first order.
    const cplx tail = -(f[last] + (f[last] - f[last - 1]) / (omega * h));

    // int_{xi_k}^{xi_last} e^{-omega (t - xi_k)} f(t) dt by Simpson on two interleaved chains.
    integral[last] = 0.0;
    integral[last - 1] = h / 12.0 * (-f[last - 2] / decay + 8.0 * f[last - 1] + 5.0 * decay * f[last]);
    for (std::size_t k = last - 1; k-- > 0;) {
      integral[k] = h / 3.0 * (f[k] + 4.0 * decay * f[k + 1] + decay2 * f[k + 2]) + decay2 * integral[k + 2];
    }
    cplx carry = tail;
    double delta = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      next[k] = -omega * integral[k] + carry;
      carry *= decay;
      delta = std::max(delta, std::abs(next[k] - p[k]));
    }
    p.swap(next);
    sol.contraction_history.push_back(delta);
    if (sweep >= 2 && prev_delta > noise && delta > noise) {
      const double ratio = delta / prev_delta;
      sol.max_contraction_ratio = std::max(sol.max_contraction_ratio, ratio);
      if (ratio > options.ratio_limit) {
        throw ContractionViolated("Picard update ratio " + std::to_string(ratio) +
                                  " exceeds the contraction limit");
      }
    }
    prev_delta = delta;
    sol.sweeps = sweep;
    if (!std::isfinite(delta)) throw NoConvergence("Picard iteration diverged");
    if (delta < options.tol) break;
    if (sweep >= options.max_sweeps) {
      throw NoConvergence("Picard iteration did not reach the tolerance");
    }
  }

  sol.p_values = std::move(p);
  for (const cplx& v : sol.p_values) sol.sup_abs_p = std::max(sol.sup_abs_p, std::abs(v));

  // 5-point centred derivative against dp/dxi = omega p + omega chi G.
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const auto& q = sol.p_values;
    const cplx dp = (q[k - 2] - 8.0 * q[k - 1] + 8.0 * q[k + 1] - q[k + 2]) / (12.0 * h);
    const cplx rhs = omega * (q[k] + coef.chi[k] * bracket(q[k], smp[k].s, coef.r[k]));
    sol.ode_residual = std::max(sol.ode_residual, std::abs(dp - rhs));
  }

  // Extrapolate in s from nodes at distances d, 2d, 3d, 4d from the limit point, where
  // d is the distance of the last sample.
  const double d = std::abs(smp[last].s - limit);
  std::array<cplx, 4> xs, ys;
  xs[3] = smp[last].s;
  ys[3] = sol.p_values[last];
  sol.terminal_value = ys[3];
  if (d > 1e-12) {
    std::size_t k = last;
    bool found = true;
    for (int m = 2; m <= 4 && found; ++m) {
      while (k > 0 && std::abs(smp[k].s - limit) < m * d) --k;
      found = std::abs(smp[k].s - limit) >= m * d;
      xs[static_cast<std::size_t>(4 - m)] = smp[k].s;
      ys[static_cast<std::size_t>(4 - m)] = sol.p_values[k];
    }
    if (found) sol.terminal_value = lagrange_extrapolate(xs, ys, limit);
  }
  return sol;
}

TrajectoryRecord reflect(const TrajectoryRecord& record, const RamifiedPoint& rp) {
  TrajectoryRecord out;
  out.omega = record.omega;
  out.terminal = record.terminal;
  out.samples.reserve(record.samples.size());
  for (auto it = record.samples.rbegin(); it != record.samples.rend(); ++it) {
    out.samples.push_back({-it->xi, -it->s});
  }
  // The reflected forward limit is -(backward limit); locate it among the zeros.
  const auto zeros = rp.zeros();
  const cplx end = out.samples.back().s;
  std::size_t best = 0;
  for (std::size_t i = 1; i < zeros.size(); ++i) {
    if (std::abs(end - zeros[i]) < std::abs(end - zeros[best])) best = i;
  }
  out.endpoint = static_cast<int>(best);
  return out;
}

AssembledF assemble_F(const PSolution& p_i_sol, const PSolution& p_j_sol, const CSeries& r,
                      const RamifiedPoint& rp) {
  const auto& si = p_i_sol.trajectory.samples;
  const auto& sj = p_j_sol.trajectory.samples;
  if (si.size() < 5 || sj.size() < 5) throw NoOverlap("trajectories too short");
  const double h = si[1].xi - si[0].xi;
  const double hj = sj[1].xi - sj[0].xi;
  if (std::abs(h - hj) > 1e-9 * h) throw NoOverlap("trajectory grids differ");
  const cplx omega = p_i_sol.trajectory.omega;
  const cplx mu = rp.mu();
  const cplx eps = rp.eps();

  // Match sample s on the first arc with sample -s on the reflected arc.
  std::vector<std::size_t> idx_i, idx_j;
  for (std::size_t k = 0; k < si.size(); ++k) {
    const double pos = (-si[k].xi - sj.front().xi) / h;
    const long m = std::lround(pos);
    if (m < 0 || m >= static_cast<long>(sj.size())) continue;
    const auto mm = static_cast<std::size_t>(m);
    const double scale = std::max(1.0, std::abs(si[k].s));
    if (std::abs(sj[mm].s + si[k].s) > 1e-9 * scale) continue;
    if (!idx_i.empty() && k != idx_i.back() + 1) break;  // keep one contiguous arc
    idx_i.push_back(k);
    idx_j.push_back(mm);
  }
  if (idx_i.size() < 5) throw NoOverlap("the two trajectories share no common arc");

  const std::size_t n = idx_i.size();
  AssembledF out;
  out.xi.resize(n);
  out.s.resize(n);
  std::vector<cplx> pi(n), pj(n), gi(n), gj(n), rv(n), nv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx s = si[idx_i[k]].s;
    out.xi[k] = si[idx_i[k]].xi;
    out.s[k] = s;
    pi[k] = p_i_sol.p_values[idx_i[k]];
    pj[k] = p_j_sol.p_values[idx_j[k]];
    const cplx x = s * s - mu;
    nv[k] = x * x - eps;
    rv[k] = r.eval(x);
    const cplx beta_i = -pi[k] / (4.0 * s) + 0.5 * rv[k] * (1.0 + pi[k]);
    const cplx beta_j = pj[k] / (4.0 * s) + 0.5 * rv[k] * (1.0 + pj[k]);
    // integrands in xi: 2 beta ds/dxi
    gi[k] = 2.0 * beta_i * omega * chi(s, mu, eps);
    gj[k] = 2.0 * beta_j * omega * chi(s, mu, eps);
    out.sup_abs_p = std::max({out.sup_abs_p, std::abs(pi[k]), std::abs(pj[k])});
  }

  // Cumulative integrals between neighbours, 4th order where a stencil fits.
  auto panel = [&](const std::vector<cplx>& g, std::size_t k) {
    if (k >= 1 && k + 2 < n) return h / 24.0 * (-g[k - 1] + 13.0 * g[k] + 13.0 * g[k + 1] - g[k + 2]);
    if (k + 3 < n) return h / 24.0 * (9.0 * g[k] + 19.0 * g[k + 1] - 5.0 * g[k + 2] + g[k + 3]);
    return h / 24.0 * (g[k - 2] - 5.0 * g[k - 1] + 19.0 * g[k] + 9.0 * g[k + 1]);
  };

  const auto zeros = rp.zeros();
  const cplx limit_i = zeros[static_cast<std::size_t>(*p_i_sol.trajectory.endpoint)];
  const cplx limit_j = -zeros[static_cast<std::size_t>(*p_j_sol.trajectory.endpoint)];
  const auto beta_j_at = [&](std::size_t k) { return gj[k] / (omega * chi(out.s[k], mu, eps)); };
  const auto beta_i_at = [&](std::size_t k) { return gi[k] / (omega * chi(out.s[k], mu, eps)); };

  std::vector<cplx> log_e1(n), log_e2(n);
  log_e1[0] = beta_j_at(0) * (out.s[0] - limit_j);
  for (std::size_t k = 0; k + 1 < n; ++k) log_e1[k + 1] = log_e1[k] + panel(gj, k);
  log_e2[n - 1] = beta_i_at(n - 1) * (limit_i - out.s[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) log_e2[k] = log_e2[k + 1] + panel(gi, k);

  out.f.resize(n);
  out.det.resize(n);
  cplx mean{};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx e1 = std::exp(log_e1[k]);
    const cplx e2 = std::exp(log_e2[k]);
    out.f[k] = Mat2{e1, pi[k] * e2, pj[k] * e1, e2};
    out.det[k] = (1.0 - pi[k] * pj[k]) * e1 * e2;
    mean += out.det[k];
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const cplx& d : out.det) var += std::norm(d - mean);
  out.kappa_estimate = mean;
  out.det_relative_stdev = std::sqrt(var / static_cast<double>(n)) / std::abs(mean);

  // F^{-1} A_s F - (2 / omega) F^{-1} dF/dxi against diag(1, -1) - N / (4 s^3) I.
  const Mat2 sym{1.0, -1.0, -1.0, 1.0};
  const Mat2 shear{1.0, 1.0, -1.0, -1.0};
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const cplx s = out.s[k];
    const cplx s2 = s * s;
    const Mat2 a_s = Mat2::diag(1.0, -1.0) - (nv[k] / (4.0 * s2 * s)) * sym +
                     (nv[k] / (2.0 * s2) * rv[k]) * shear;
    const Mat2 df = (1.0 / (12.0 * h)) *
                    (out.f[k - 2] - 8.0 * out.f[k - 1] + 8.0 * out.f[k + 1] - out.f[k + 2]);
    const Mat2 finv = out.f[k].inverse();
    const Mat2 lhs = finv * a_s * out.f[k] - (2.0 / omega) * (finv * df);
    const cplx diag_shift = nv[k] / (4.0 * s2 * s);
    const Mat2 target = Mat2::diag(1.0 - diag_shift, -1.0 - diag_shift);
    out.diagonal_residual = std::max(out.diagonal_residual, (lhs - target).max_abs());
  }
  return out;
}

}  // namespace confluence
