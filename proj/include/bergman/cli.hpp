#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/quadrature.hpp"

namespace bergman::cli {

using json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_replay_mismatch = 1;
inline constexpr int exit_validation = 2;
inline constexpr int exit_divergent = 3;

enum class output_format { json, csv };

struct command_request {
  std::string subcommand;
  /// Option name (without dashes) to its literal command-line value.
  std::map<std::string, std::string> parameters;
  output_format output = output_format::json;
  quadrature::quadrature_spec tolerances;
};

struct experiment_record {
  /// Result fields followed by "request", "version", "timestamp", "tolerances".
  json record;
  int exit_code = exit_ok;
};

/// Runs a validated request.  Validation failures throw bergman::invalid_argument.
experiment_record execute(const command_request& request, std::ostream& progress);

/// The result fields of a record, without the metadata.
json results_of(const json& record);

/// CSV rendering of a record's results: equal-length scalar arrays become
/// columns, every other field a repeated column.
std::string to_csv(const json& record);

command_request request_from_json(const json& request_echo);
json request_to_json(const command_request& request);
/// Command-line arguments (subcommand first) reproducing a request.
std::vector<std::string> request_to_args(const command_request& request);

/// Full command-line entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bergman::cli
