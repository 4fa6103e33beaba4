#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "confluence/errors.hpp"
#include "confluence/geometry.hpp"
#include "confluence/invariants.hpp"
#include "confluence/monodromy.hpp"
#include "confluence/normal_forms.hpp"
#include "confluence/normalization.hpp"
#include "confluence/system.hpp"
#include "report.hpp"

namespace confluence::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json document(const RunManifest& manifest) {
  return {{"schema_version", schema_version}, {"manifest", manifest.to_json()}};
}

RunManifest manifest_for(const std::string& command, const CommonOptions& common) {
  RunManifest m;
  m.command = command;
  m.output = common.out;
  m.tol = common.tol;
  m.order = common.order;
  m.threads = common.threads;
  m.seed = common.seed;
  return m;
}

DomainConfig make_config(const DomainOverrides& o) {
  DomainConfig cfg;
  if (o.eta > 0.0) cfg.eta = o.eta;
  if (o.delta_s > 0.0) cfg.delta_s = o.delta_s;
  if (o.L > 0.0) cfg.L = o.L;
  return cfg;
}

ParametricSystem load_system(const std::string& path) { return system_from_json(read_text(path)); }

json stats_json(const PSolution& sol) {
  return {{"samples", sol.p_values.size()},
          {"sweeps", sol.sweeps},
          {"max_contraction_ratio", number(sol.max_contraction_ratio)},
          {"sup_abs_p", number(sol.sup_abs_p)},
          {"ode_residual", number(sol.ode_residual)},
          {"terminal_value", complex_json(sol.terminal_value)},
          {"contraction_history", [&] {
             json h = json::array();
             for (double d : sol.contraction_history) h.push_back(number(d));
             return h;
           }()}};
}

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::converged: return "converged";
    case Terminal::left_annulus: return "left_annulus";
    case Terminal::max_length: return "max_length";
  }
  return "max_length";
}

}  // namespace

int cmd_invariants(const std::string& input, const CommonOptions& common) {
  const ParametricSystem system = load_system(input);
  const FormalInvariants f = extract_formal(system);
  const Reduction red = reduce(system, f);
  MonodromyOptions mo;
  mo.tol = common.tol;
  const MonodromyResult mono = gamma_numeric(system, f, mo);

  RunManifest m = manifest_for("invariants", common);
  m.inputs = {input};
  json doc = document(m);
  doc["invariants"] = invariants_json(f);
  doc["epsilon"] = complex_json(red.params.epsilon);
  doc["mu"] = complex_json(red.params.mu);
  doc["gamma"] = complex_json(mono.gamma);
  doc["est_error"] = number(mono.est_error);
  emit(doc.dump(2), common.out);
  return exit_ok;
}

int cmd_equiv(const EquivOptions& options, const CommonOptions& common) {
  const ParametricSystem a = load_system(options.first);
  const ParametricSystem b = load_system(options.second);
  MonodromyOptions mo;
  mo.tol = options.monodromy_tol;
  const EquivalenceReport rep = decide_equivalence(a, b, common.tol, mo);

  RunManifest m = manifest_for("equiv", common);
  m.inputs = {options.first, options.second};
  m.extra["monodromy_tol"] = number(options.monodromy_tol);
  json doc = document(m);
  doc["verdict"] = to_string(rep.verdict);
  doc["first"] = invariants_json(rep.first);
  doc["second"] = invariants_json(rep.second);
  doc["gamma_first"] = complex_json(rep.first_monodromy.gamma);
  doc["gamma_second"] = complex_json(rep.second_monodromy.gamma);
  doc["formal_gap"] = number(rep.formal_gap);
  doc["gamma_gap"] = number(rep.gamma_gap);
  doc["combined_error"] = number(rep.combined_error);
  emit(doc.dump(2), common.out);
  switch (rep.verdict) {
    case Verdict::equivalent: return exit_ok;
    case Verdict::not_equivalent: return exit_not_equivalent;
    case Verdict::indeterminate: return exit_indeterminate;
  }
  return exit_indeterminate;
}

int cmd_normalform(const NormalFormOptions& options, const CommonOptions& common) {
  json in;
  try {
    in = json::parse(read_text(options.input));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  FormalInvariants f;
  cplx gamma{};
  try {
    const json& inv = in.at("invariants");
    f.h0 = complex_from_json(inv.at("h0"));
    f.h1 = complex_from_json(inv.at("h1"));
    f.lambda0 = complex_from_json(inv.at("lambda0"));
    f.lambda1 = complex_from_json(inv.at("lambda1"));
    f.alpha0 = complex_from_json(inv.at("alpha0"));
    f.alpha1 = complex_from_json(inv.at("alpha1"));
    gamma = complex_from_json(in.at("gamma"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed invariants file: ") + e.what());
  }
  if (std::abs(f.alpha1) <= alpha1_tolerance) throw NonGeneric("alpha1 vanishes");
  const cplx seed = parse_complex(options.seed_value);

  RunManifest m = manifest_for("normalform", common);
  m.inputs = {options.input};
  m.extra["variant"] = options.variant;
  m.extra["newton_seed"] = complex_json(seed);
  json doc = document(m);
  ParametricSystem built = [&] {
    if (options.variant == "q") {
      const cplx q = solve_q(gamma, seed);
      doc["q"] = complex_json(q);
      doc["gamma_of_parameter"] = complex_json(gamma_of_q(q));
      return build_q_form(f, q, common.order);
    }
    if (options.variant == "b") {
      const cplx b = solve_b(f, gamma, seed);
      const BFormCoefficients beta = b_form_coefficients(f, b);
      doc["b"] = complex_json(b);
      doc["beta0"] = complex_json(beta.beta0);
      doc["beta1"] = complex_json(beta.beta1);
      doc["gamma_of_parameter"] = complex_json(gamma_of_b(f, b));
      return build_b_form(f, b, common.order);
    }
    throw ParseError("variant must be 'q' or 'b'");
  }();
  doc["gamma_target"] = complex_json(gamma);
  doc["system"] = json::parse(system_to_json(built));
  emit(doc.dump(2), common.out);
  return exit_ok;
}

int cmd_portrait(const PortraitOptions& options, const CommonOptions& common) {
  const DomainConfig cfg = make_config(options.domain);
  validate(cfg, options.domain.sup_s_r);
  if (options.grid < 2) throw ParseError("grid must be at least 2");
  if (std::abs(options.omega_arg) >= cfg.eta) throw ParseError("|arg omega| must be below eta");
  const cplx mu = parse_complex(options.mu);
  const cplx eps = parse_complex(options.eps);
  const cplx omega = std::polar(1.0, options.omega_arg);
  const RamifiedPoint rp = RamifiedPoint::principal(mu, eps);
  const fs::path dir = common.out.empty() ? fs::path("portrait") : fs::path(common.out);
  fs::create_directories(dir);

  GridSpec grid;
  grid.re_min = grid.im_min = -cfg.delta_s;
  grid.re_max = grid.im_max = cfg.delta_s;
  grid.nx = grid.ny = options.grid;
  grid.threads = common.threads;
  const RegionMap regions = classify_regions(rp, omega, cfg, grid);
  {
    std::ofstream out(dir / "regions.csv");
    write_regions_csv(out, regions);
  }
  {
    std::ofstream out(dir / "bifurcations.csv");
    write_bifurcations_csv(out, bifurcation_sets(eps, 200));
  }

  // Separatrices: seeds around each zero, traced away from it.
  TraceOptions topt;
  topt.sample_step = 0.05;
  topt.tol = common.tol;
  int traced = 0;
  {
    std::ofstream out(dir / "trajectories.csv");
    out << "id,xi,re_s,im_s\n";
    out.precision(12);
    const auto zeros = rp.zeros();
    const double delta = 1e-6;
    for (const cplx& z : zeros) {
      if (z == cplx{}) continue;
      const bool sink = (omega * chi_derivative(z, mu, eps)).real() < 0.0;
      for (int k = 0; k < options.seeds_per_zero; ++k) {
        const cplx s0 = z + std::polar(delta, two_pi * k / options.seeds_per_zero);
        if (!cfg.in_annulus(s0, mu, eps)) continue;
        try {
          const TrajectoryRecord rec = trace_trajectory(
              s0, omega, rp, cfg, sink ? Direction::backward : Direction::forward, topt);
          for (const auto& p : rec.samples) {
            out << traced << ',' << p.xi << ',' << p.s.real() << ',' << p.s.imag() << '\n';
          }
          ++traced;
        } catch (const StepUnderflow&) {
          // a seed stuck at a non-hyperbolic point carries no separatrix
        }
      }
    }
  }

  RunManifest m = manifest_for("portrait", common);
  m.extra["mu"] = complex_json(mu);
  m.extra["eps"] = complex_json(eps);
  m.extra["omega_arg"] = number(options.omega_arg);
  m.extra["grid"] = options.grid;
  m.extra["config"] = config_json(cfg);
  json doc = document(m);
  json labels = json::object();
  for (RegionLabel l : {RegionLabel::inner, RegionLabel::inner_p, RegionLabel::outer,
                        RegionLabel::outer_p, RegionLabel::none}) {
    labels[to_string(l)] = {{"cells", regions.count(l)},
                            {"components", regions.components(l)},
                            {"touches_boundary", regions.touches_boundary(l)}};
  }
  doc["regions"] = labels;
  doc["trajectories"] = traced;
  doc["files"] = {"regions.csv", "bifurcations.csv", "trajectories.csv"};
  emit(doc.dump(2), dir / "manifest.json");
  return exit_ok;
}

int cmd_kappa(const KappaOptions& options, const CommonOptions& common) {
  if (options.samples < 1) throw ParseError("samples must be positive");
  if (!(options.eps_min > 0.0) || options.eps_max < options.eps_min) {
    throw ParseError("need 0 < eps-min <= eps-max");
  }
  struct Sample {
    RamifiedPoint rp;
    cplx gamma;
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(options.samples));
  std::mt19937_64 rng(common.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < options.samples; ++k) {
    const cplx mu = cplx(options.mu_max * unit(rng), options.mu_max * unit(rng)) *
                    std::polar(1.0, options.mu_arg);
    const double em = std::pow(10.0, std::log10(options.eps_min) +
                                         (std::log10(options.eps_max) - std::log10(options.eps_min)) *
                                             0.5 * (1.0 + unit(rng)));
    const double ea = options.eps_arg + options.arg_spread * unit(rng);
    const cplx root = std::polar(std::sqrt(em), 0.5 * ea);
    const RamifiedPoint rp = RamifiedPoint::from_branches(
        BranchedLog(em, ea), BranchedLog::principal(mu + root), BranchedLog::principal(mu - root));
    samples.push_back({rp, cplx(2.0 * unit(rng), 0.5 * unit(rng))});
  }

  std::vector<CocycleReport> reports(samples.size());
  std::vector<char> failed(samples.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < samples.size(); k = next++) {
      try {
        reports[k] = verify_cocycles(samples[k].rp, samples[k].gamma);
      } catch (const GammaPole&) {
        failed[k] = 1;
      } catch (const ZeroModulus&) {
        failed[k] = 1;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < std::max(1, common.threads); ++t) pool.emplace_back(work);
    work();
  }
  std::vector<CocycleReport> ok;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (!failed[k]) ok.push_back(reports[k]);
  }
  const auto poles = static_cast<int>(reports.size() - ok.size());

  RunManifest m = manifest_for("kappa", common);
  m.extra["samples"] = options.samples;
  m.extra["mu_max"] = number(options.mu_max);
  m.extra["mu_arg"] = number(options.mu_arg);
  m.extra["eps_min"] = number(options.eps_min);
  m.extra["eps_max"] = number(options.eps_max);
  m.extra["eps_arg"] = number(options.eps_arg);
  json doc = document(m);
  json residuals = json::parse(cocycle_report_json(ok));
  for (auto& obj : residuals["samples"]) {
    for (auto& [key, value] : obj.items()) value = number(value.get<double>());
  }
  for (const char* key : {"max", "mean"}) {
    for (auto& [name, value] : residuals[key].items()) value = number(value.get<double>());
  }
  double worst = 0.0;
  for (const auto& r : ok) worst = std::max(worst, r.max());
  doc["residuals"] = residuals;
  doc["max_residual"] = number(worst);
  doc["gamma_poles"] = poles;

  // Limits of the closed forms as the parameters approach the confluent point.
  const cplx q = q_from_gamma(0.6);
  const KappaValues inner = kappa_formulas(RamifiedPoint::principal(0.05, 1e-6), q);
  const KappaValues outer = kappa_formulas(RamifiedPoint::principal(cplx(0.0, 1e-3), 1e-6), q);
  doc["limits"] = {
      {"kappa_i_eps_1e-6", {{"value", complex_json(inner.kappa_i)},
                            {"distance_from_one", number(std::abs(inner.kappa_i - 1.0))}}},
      {"kappa_o_mu_1e-3", {{"value", complex_json(outer.kappa_o)},
                           {"distance_from_one", number(std::abs(outer.kappa_o - 1.0))}}}};
  emit(doc.dump(2), common.out);
  return 10 * poles > options.samples ? exit_input_error : exit_ok;
}

int cmd_normcheck(const NormcheckOptions& options, const CommonOptions& common) {
  DomainConfig cfg = make_config(options.domain);
  RunManifest m = manifest_for("normcheck", common);
  cplx mu = parse_complex(options.mu);
  cplx eps = parse_complex(options.eps);
  CSeries r(common.order);
  if (!options.system.empty()) {
    const ParametricSystem system = load_system(options.system);
    const FormalInvariants f = extract_formal(system);
    const Reduction red = reduce(system, f);
    const PrenormalReport pre = prenormalize(red.system);
    mu = pre.result.mu;
    eps = pre.result.epsilon;
    r = pre.result.r;
    m.inputs = {options.system};
  }
  const double bound = sup_s_r(r, mu, cfg.delta_s);
  validate(cfg, bound);
  if (std::abs(options.omega_arg) >= cfg.eta) throw ParseError("|arg omega| must be below eta");
  const cplx omega = std::polar(1.0, options.omega_arg);
  const cplx s0 = parse_complex(options.s0);
  const RamifiedPoint rp = RamifiedPoint::principal(mu, eps);

  TraceOptions topt;
  topt.sample_step = options.sample_step;
  const FullTrajectory full = trace_full(s0, omega, rp, cfg, topt);
  if (!full.forward_endpoint || !full.backward_endpoint) {
    throw ParseError("the trajectory through s0 does not join two equilibria");
  }
  PicardOptions popt;
  popt.tol = std::max(common.tol, 1e-14);
  const PSolution pi = solve_p(full.record, r, rp, popt);
  const PSolution pj = solve_p(reflect(full.record, rp), r, rp, popt);
  const AssembledF f = assemble_F(pi, pj, r, rp);

  m.extra["mu"] = complex_json(mu);
  m.extra["eps"] = complex_json(eps);
  m.extra["s0"] = complex_json(s0);
  m.extra["omega_arg"] = number(options.omega_arg);
  m.extra["sample_step"] = number(options.sample_step);
  m.extra["config"] = config_json(cfg);
  json doc = document(m);
  const auto zeros = rp.zeros();
  doc["trajectory"] = {
      {"samples", full.record.samples.size()},
      {"from", complex_json(zeros[static_cast<std::size_t>(*full.backward_endpoint)])},
      {"to", complex_json(zeros[static_cast<std::size_t>(*full.forward_endpoint)])},
      {"backward_terminal", terminal_name(full.backward_terminal)},
      {"forward_terminal", terminal_name(full.forward_terminal)}};
  doc["sup_s_r"] = number(bound);
  doc["p_i"] = stats_json(pi);
  doc["p_j"] = stats_json(pj);
  doc["assembly"] = {{"samples", f.xi.size()},
                     {"kappa_estimate", complex_json(f.kappa_estimate)},
                     {"det_relative_stdev", number(f.det_relative_stdev)},
                     {"diagonal_residual", number(f.diagonal_residual)},
                     {"sup_abs_p", number(f.sup_abs_p)}};
  emit(doc.dump(2), common.out);
  return exit_ok;
}

}  // namespace confluence::cli
