#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/cli/config.hpp"

namespace bergman::cli {

/// One thresholded measurement. `criterion` is the acceptance criterion the
/// check belongs to (0 for supporting invariants).
struct Check {
  std::string name;
  int criterion = 0;
  double measured = 0.0;
  std::string relation;  ///< "<=", "<", ">=", "in"
  double threshold = 0.0;
  double threshold_high = 0.0;  ///< upper end for "in"
  bool pass = false;
};

Check at_most(std::string name, int criterion, double measured, double threshold);
Check below(std::string name, int criterion, double measured, double threshold);
Check at_least(std::string name, int criterion, double measured, double threshold);
Check within(std::string name, int criterion, double measured, double low, double high);

struct Table {
  std::string file;  ///< file name inside the output directory
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
};

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

struct CommandOutput {
  std::string name;
  std::vector<Check> checks;
  std::vector<Table> tables;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  bool passed() const;
  const Check* first_failure() const;
};

CommandOutput run_converge(const RunConfig& config);
CommandOutput run_decay(const RunConfig& config);
CommandOutput run_near_diagonal(const RunConfig& config);
CommandOutput run_model_check(const RunConfig& config);
CommandOutput run_heat_check(const RunConfig& config);
CommandOutput run_identities(const RunConfig& config);

/// Dispatches on config.subcommand.
CommandOutput run_command(const RunConfig& config);

nlohmann::ordered_json summary_json(const CommandOutput& out);
/// Writes every table and `<name>_summary.json` into `dir`.
void write_output(const CommandOutput& out, const std::filesystem::path& dir);

/// Exit-code contract.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalidRun = 3;
inline constexpr int kExitAcceptance = 4;

/// Runs the configured subcommand, writes its outputs, and maps the outcome
/// to an exit code. Errors are reported as one JSON line on `err`.
int execute(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace bergman::cli
