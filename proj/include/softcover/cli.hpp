#pragma once

// Command-line runner: config parsing, presets, and CSV/JSON emission for
// the cover, entropy, rd, resolve, idbound and zoo subcommands.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softcover/json_io.hpp"
#include "softcover/qmat.hpp"

namespace softcover::cli {

inline constexpr const char* kToolName = "softcover";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kSolver = 3,
  kResource = 4,
};

struct ExperimentConfig {
  std::string subcommand;
  std::string channel = "identity:2";
  std::string state;
  std::string sigma;
  std::string quantity = "S";
  std::string split = "A|B";
  int n = 1;
  std::vector<int> ranks;
  int rank = 0;
  int trials = 64;
  double delta = 0.05;
  double eta = 0.05;
  double epsilon = 0.1;
  double accuracy = 1e-9;
  int budget = 8;
  int dim = 2;
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double net_delta = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;

  json to_json() const;
};

/// Parses argv (without the program name). Returns nullopt and fills
/// `usage` when help was requested. Throws ValidationError on bad input.
std::optional<ExperimentConfig> parse_config(const std::vector<std::string>& args,
                                             std::string* usage);

/// Named state presets: maxmixed:d, zero:d, plus, bell, diag:p0,p1,...,
/// or a JSON state file.
qmat::DensityOperator state_preset(const std::string& spec);

/// One output row as ordered key/value pairs.
using Record = std::vector<std::pair<std::string, json>>;

/// Header row plus one line per record; '#' lines carry tool, version,
/// seed and the config echo. Throws ValidationError on mixed schemas.
std::string emit_csv(const std::vector<Record>& records, const json& provenance);
/// {"tool","version","seed","config","result"}.
std::string emit_json(const json& result, const json& provenance);

/// Runs a parsed config, writing to `out` unless config.out names a file.
int run(const ExperimentConfig& config, std::ostream& out);

/// Full entry point: parse, run, map errors to exit codes.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace softcover::cli
