#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "confluence/errors.hpp"
#include "report.hpp"

namespace cli = confluence::cli;

namespace {

void add_domain_flags(CLI::App* cmd, cli::DomainOverrides& d) {
  cmd->add_option("--eta", d.eta, "Direction cone half-angle");
  cmd->add_option("--delta-s", d.delta_s, "Outer radius of the annulus in s");
  cmd->add_option("--L", d.L, "Annulus ratio bound");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants, normal forms and connection data of unfolded rank-1 singularities"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::CommonOptions common;
  std::optional<double> tol;
  app.add_option("--tol", tol, "Tolerance (integration, decision or fixed-point, per command)");
  app.add_option("--order", common.order, "Series truncation order")->check(CLI::Range(2, 256));
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--out", common.out, "Output file (directory for portrait)");

  std::string inv_input;
  auto* inv = app.add_subcommand("invariants", "Formal invariants, reduced parameters and gamma");
  inv->add_option("system", inv_input, "System descriptor (JSON)")->required();

  cli::EquivOptions eq;
  auto* equiv = app.add_subcommand("equiv", "Decide analytic equivalence of two systems");
  equiv->add_option("first", eq.first, "First system (JSON)")->required();
  equiv->add_option("second", eq.second, "Second system (JSON)")->required();
  equiv->add_option("--monodromy-tol", eq.monodromy_tol, "Integration tolerance");

  cli::NormalFormOptions nf;
  auto* normal = app.add_subcommand("normalform", "Build a normal form from an invariants report");
  normal->add_option("invariants", nf.input, "Output of the invariants command")->required();
  normal->add_option("--variant", nf.variant, "q or b")->check(CLI::IsMember({"q", "b"}));
  normal->add_option("--newton-seed", nf.seed_value, "Starting value for the parameter (re[,im])");

  cli::PortraitOptions po;
  auto* portrait = app.add_subcommand("portrait", "Regions, separatrices and bifurcation curves");
  portrait->add_option("--mu", po.mu, "mu as re[,im]");
  portrait->add_option("--eps", po.eps, "eps as re[,im]");
  portrait->add_option("--omega", po.omega_arg, "arg omega in radians");
  portrait->add_option("--grid", po.grid, "Grid points per side");
  portrait->add_option("--sup-s-r", po.domain.sup_s_r, "sup |s r| used in the feasibility check");
  add_domain_flags(portrait, po.domain);

  cli::KappaOptions ko;
  auto* kappa = app.add_subcommand("kappa", "Check the connection-coefficient identities");
  kappa->add_option("--samples", ko.samples, "Random ramified parameter points");
  kappa->add_option("--mu-max", ko.mu_max, "Bound on |Re mu| and |Im mu|");
  kappa->add_option("--mu-arg", ko.mu_arg, "Rotation applied to every sampled mu");
  kappa->add_option("--eps-min", ko.eps_min, "Smallest |eps|");
  kappa->add_option("--eps-max", ko.eps_max, "Largest |eps|");
  kappa->add_option("--eps-arg", ko.eps_arg, "Centre of the arg eps window (sheet)");
  kappa->add_option("--arg-spread", ko.arg_spread, "Half-width of the arg eps window");

  cli::NormcheckOptions nc;
  auto* normcheck = app.add_subcommand("normcheck", "Diagonalizing transformation along a trajectory");
  normcheck->add_option("system", nc.system, "Optional system descriptor; the model system otherwise");
  normcheck->add_option("--mu", nc.mu, "mu for the model system");
  normcheck->add_option("--eps", nc.eps, "eps for the model system");
  normcheck->add_option("--s0", nc.s0, "Start point re[,im]");
  normcheck->add_option("--omega", nc.omega_arg, "arg omega in radians");
  normcheck->add_option("--step", nc.sample_step, "Sample spacing in xi");
  add_domain_flags(normcheck, nc.domain);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::exit_input_error;
  }

  try {
    if (*inv) {
      common.tol = tol.value_or(1e-10);
      return cli::cmd_invariants(inv_input, common);
    }
    if (*equiv) {
      common.tol = tol.value_or(1e-8);
      return cli::cmd_equiv(eq, common);
    }
    if (*normal) {
      common.tol = tol.value_or(1e-12);
      return cli::cmd_normalform(nf, common);
    }
    if (*portrait) {
      common.tol = tol.value_or(1e-9);
      return cli::cmd_portrait(po, common);
    }
    if (*kappa) {
      common.tol = tol.value_or(1e-8);
      return cli::cmd_kappa(ko, common);
    }
    if (*normcheck) {
      common.tol = tol.value_or(1e-12);
      return cli::cmd_normcheck(nc, common);
    }
  } catch (const confluence::NonGeneric& e) {
    std::cerr << "non-generic: " << e.what() << '\n';
    return cli::exit_non_generic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_input_error;
  }
  return cli::exit_input_error;
}
