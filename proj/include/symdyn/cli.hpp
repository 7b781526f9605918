#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "symdyn/real_constant.hpp"
#include "symdyn/word.hpp"

namespace symdyn::cli {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnalysisSpec {
  std::string name;
  Json params = Json::object();
};

struct ExperimentConfig {
  Json generator;
  std::size_t prefix_len = 0;
  std::size_t max_k = 0;
  std::vector<AnalysisSpec> analyses;
  std::string out_dir = "out";
  int precision_cap = 4096;
  std::uint64_t seed = 0;  // reserved; every generator is deterministic

  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
  /// Throws ConfigError.
  void validate() const;
};

struct Overrides {
  std::optional<std::size_t> prefix_len;
  std::optional<std::size_t> max_k;
  std::optional<int> precision_cap;
  std::optional<std::string> out_dir;

  void apply(ExperimentConfig& config) const;
};

/// Integer, "p/q" string, {"sqrt": d, "num": p, "den": q}, or an array of
/// these summed.
RealConstant parse_real(const Json& j);

/// Builds the word described by a generator spec. Polynomial coefficients are
/// listed highest degree first.
WordStream make_generator(const Json& spec, Precision precision);

struct RunOutcome {
  int exit_code = 0;
  std::string message;
  Json report;
  /// File name (relative to the output directory) -> contents.
  std::map<std::string, std::string> files;
};

/// Computes everything in memory. Exit code 2 outcomes carry no files.
RunOutcome execute(const ExperimentConfig& config);

/// Writes the outcome's files, creating the directory.
void write_outputs(const RunOutcome& outcome, const std::string& dir);

/// Canonical configs behind `verify`. Throws ConfigError for an unknown name.
ExperimentConfig builtin_suite(const std::string& name);
std::vector<std::string> suite_names();

int run_command(const std::string& config_path, const Overrides& overrides, std::ostream& out, std::ostream& err);
int verify_command(const std::string& suite, const Overrides& overrides, std::ostream& out, std::ostream& err);
int graph_command(const std::string& config_path, std::size_t k, const std::string& out_file, bool scheme,
                  const Overrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace symdyn::cli
