#pragma once

#include <string>

namespace confluence::cli {

struct CommonOptions {
  double tol = 1e-10;
  int order = 24;
  int threads = 1;
  unsigned long long seed = 1;
  std::string out;
};

struct EquivOptions {
  std::string first, second;
  double monodromy_tol = 1e-10;
};

struct NormalFormOptions {
  std::string input;
  std::string variant = "q";
  std::string seed_value = "0";  // Newton seed for q or b
};

struct DomainOverrides {
  double eta = -1.0;
  double delta_s = -1.0;
  double L = -1.0;
  double sup_s_r = 0.0;
};

struct PortraitOptions {
  std::string mu = "0";
  std::string eps = "0";
  double omega_arg = 0.0;
  int grid = 81;
  int seeds_per_zero = 8;
  DomainOverrides domain;
};

struct KappaOptions {
  int samples = 100;
  double mu_max = 0.1;
  double mu_arg = 0.0;    // rotates every sampled mu
  double eps_min = 1e-4;
  double eps_max = 1e-2;
  double eps_arg = 0.0;   // centre of the sampled arg eps window
  double arg_spread = 0.5;
};

struct NormcheckOptions {
  std::string system;  // optional; the model system when empty
  std::string mu = "0";
  std::string eps = "0";
  std::string s0 = "0,0.3";
  double omega_arg = 0.0;
  double sample_step = 0.01;
  DomainOverrides domain;
};

int cmd_invariants(const std::string& input, const CommonOptions& common);
int cmd_equiv(const EquivOptions& options, const CommonOptions& common);
int cmd_normalform(const NormalFormOptions& options, const CommonOptions& common);
int cmd_portrait(const PortraitOptions& options, const CommonOptions& common);
int cmd_kappa(const KappaOptions& options, const CommonOptions& common);
int cmd_normcheck(const NormcheckOptions& options, const CommonOptions& common);

}  // namespace confluence::cli
