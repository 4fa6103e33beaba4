#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "confluence/algebra.hpp"
#include "confluence/geometry.hpp"
#include "confluence/invariants.hpp"

namespace confluence::cli {

inline constexpr int schema_version = 1;

// Exit-code contract shared by every command.
enum ExitCode : int {
  exit_ok = 0,
  exit_not_equivalent = 1,
  exit_input_error = 2,
  exit_non_generic = 3,
  exit_indeterminate = 4,
};

// What was asked for, echoed next to every output.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;
  double tol = 0.0;
  int order = 0;
  int threads = 1;
  unsigned long long seed = 0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// Rounded to 12 significant digits.
double round12(double x);
nlohmann::json number(double x);
nlohmann::json complex_json(cplx z);
nlohmann::json invariants_json(const FormalInvariants& f);
nlohmann::json config_json(const DomainConfig& cfg);

// Throws ParseError when the pair is malformed.
cplx complex_from_json(const nlohmann::json& j);
// "re" or "re,im".
cplx parse_complex(const std::string& text);

std::string read_text(const std::filesystem::path& path);
// Writes to `path`, or stdout when it is empty.
void emit(const std::string& text, const std::filesystem::path& path);

}  // namespace confluence::cli
