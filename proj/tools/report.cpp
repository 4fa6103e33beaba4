#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "confluence/errors.hpp"

namespace confluence::cli {

using nlohmann::json;

json RunManifest::to_json() const {
  json out = {{"command", command},
              {"inputs", inputs},
              {"output", output},
              {"tol", number(tol)},
              {"order", order},
              {"threads", threads},
              {"seed", seed}};
  for (const auto& [key, value] : extra.items()) out[key] = value;
  return out;
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

json complex_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json invariants_json(const FormalInvariants& f) {
  return {{"h0", complex_json(f.h0)},         {"h1", complex_json(f.h1)},
          {"lambda0", complex_json(f.lambda0)}, {"lambda1", complex_json(f.lambda1)},
          {"alpha0", complex_json(f.alpha0)},   {"alpha1", complex_json(f.alpha1)}};
}

json config_json(const DomainConfig& cfg) {
  return {{"eta", number(cfg.eta)},           {"delta_s", number(cfg.delta_s)},
          {"delta_mu", number(cfg.delta_mu)}, {"delta_eps", number(cfg.delta_eps)},
          {"L", number(cfg.L)},               {"xi_max", number(cfg.xi_max())}};
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

cplx parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw ParseError("cannot parse complex value '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw ParseError("cannot parse complex value '" + text + "'");
  }
  std::string rest;
  if (in >> rest) throw ParseError("trailing characters in complex value '" + text + "'");
  return {re, im};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::filesystem::path& path) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text << '\n';
}

}  // namespace confluence::cli
