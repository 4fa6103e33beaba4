#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "confluence/geometry.hpp"

namespace confluence {

cplx GridSpec::point(int ix, int iy) const {
  const double fx = nx > 1 ? static_cast<double>(ix) / (nx - 1) : 0.5;
  const double fy = ny > 1 ? static_cast<double>(iy) / (ny - 1) : 0.5;
  return {re_min + (re_max - re_min) * fx, im_min + (im_max - im_min) * fy};
}

int RegionMap::count(RegionLabel label) const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), label));
}

int RegionMap::components(RegionLabel label) const {
  const int nx = grid.nx;
  const int ny = grid.ny;
  std::vector<bool> seen(labels.size(), false);
  std::vector<int> stack;
  int out = 0;
  for (int start = 0; start < nx * ny; ++start) {
    if (seen[static_cast<std::size_t>(start)] || labels[static_cast<std::size_t>(start)] != label) continue;
    ++out;
    stack.push_back(start);
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      const int ix = cell % nx;
      const int iy = cell / nx;
      const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[0] >= nx || n[1] < 0 || n[1] >= ny) continue;
        const auto idx = static_cast<std::size_t>(n[1] * nx + n[0]);
        if (!seen[idx] && labels[idx] == label) {
          seen[idx] = true;
          stack.push_back(static_cast<int>(idx));
        }
      }
    }
  }
  return out;
}

bool RegionMap::touches_boundary(RegionLabel label) const {
  const int nx = grid.nx;
  const int ny = grid.ny;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (at(ix, iy) != label) continue;
      if (ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1) return true;
      const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
      for (const auto& n : nbr) {
        if (!inside_annulus[static_cast<std::size_t>(n[1] * nx + n[0])]) return true;
      }
    }
  }
  return false;
}

namespace {

bool same_point(cplx a, cplx b) { return std::abs(a - b) < 1e-12; }

RegionLabel label_point(cplx s, cplx omega, const RamifiedPoint& rp, const DomainConfig& cfg) {
  TraceOptions opt;
  opt.sample_step = 0.25;
  opt.tol = 1e-9;
  opt.capture_radius = 1e-6;
  // Equilibria belong to no connecting trajectory.
  for (const cplx& z : rp.zeros()) {
    if (std::abs(s - z) < opt.capture_radius) return RegionLabel::none;
  }
  const auto full = trace_full(s, omega, rp, cfg, opt);
  if (!full.backward_endpoint || !full.forward_endpoint) return RegionLabel::none;
  const auto zeros = rp.zeros();
  const cplx back = zeros[static_cast<std::size_t>(*full.backward_endpoint)];
  const cplx fwd = zeros[static_cast<std::size_t>(*full.forward_endpoint)];
  const cplx s1 = rp.s1();
  const cplx s2 = rp.s2();

  if (rp.mu_eps_zero()) {
    return s.imag() > 0.0 ? RegionLabel::outer : RegionLabel::outer_p;
  }
  if (same_point(back, s1) && same_point(fwd, s2) && !rp.w2_log().is_zero()) {
    return RegionLabel::inner;
  }
  if (same_point(back, -s2) && same_point(fwd, -s1) && !rp.w2_log().is_zero()) {
    return RegionLabel::inner_p;
  }
  if (same_point(back, s1) && same_point(fwd, -s1)) {
    return (s / s1).imag() > 0.0 ? RegionLabel::outer : RegionLabel::outer_p;
  }
  return RegionLabel::none;
}

}  // namespace

RegionMap classify_regions(const RamifiedPoint& rp, cplx omega, const DomainConfig& cfg,
                           const GridSpec& grid) {
  if (grid.nx < 1 || grid.ny < 1) throw std::invalid_argument("classify_regions: empty grid");
  RegionMap map;
  map.grid = grid;
  const auto cells = static_cast<std::size_t>(grid.nx * grid.ny);
  map.labels.assign(cells, RegionLabel::none);
  std::vector<char> inside(cells, 0);
  const cplx mu = rp.mu();
  const cplx eps = rp.eps();

  auto work = [&](int row_begin, int row_step) {
    for (int iy = row_begin; iy < grid.ny; iy += row_step) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const cplx s = grid.point(ix, iy);
        const auto idx = static_cast<std::size_t>(iy * grid.nx + ix);
        if (!cfg.in_annulus(s, mu, eps)) continue;
        inside[idx] = 1;
        try {
          map.labels[idx] = label_point(s, omega, rp, cfg);
        } catch (const StepUnderflow&) {
          map.labels[idx] = RegionLabel::none;
        }
      }
    }
  };

  const int threads = std::max(1, grid.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  map.inside_annulus.assign(inside.begin(), inside.end());
  return map;
}

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::none: return "none";
    case RegionLabel::inner: return "inner";
    case RegionLabel::inner_p: return "inner_p";
    case RegionLabel::outer: return "outer";
    case RegionLabel::outer_p: return "outer_p";
  }
  return "none";
}

void write_regions_csv(std::ostream& out, const RegionMap& map) {
  out << "re_s,im_s,label\n";
  out.precision(12);
  for (int iy = 0; iy < map.grid.ny; ++iy) {
    for (int ix = 0; ix < map.grid.nx; ++ix) {
      const cplx s = map.grid.point(ix, iy);
      out << s.real() << ',' << s.imag() << ',' << to_string(map.at(ix, iy)) << '\n';
    }
  }
}

}  // namespace confluence
