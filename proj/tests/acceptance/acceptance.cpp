// Acceptance suite: runs the default configuration of every subcommand and
// prints one pass/fail line per criterion. Arguments select criteria (default
// all); exit status is nonzero iff any selected criterion fails.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bergman/cli/commands.hpp"
#include "bergman/cli/config.hpp"

using namespace bergman::cli;

namespace {

struct Criterion {
  int id;
  const char* command;
  const char* title;
};

constexpr Criterion kCriteria[] = {
    {1, "converge", "operator-norm rate, plain difference"},
    {2, "converge", "operator-norm rate, Laplacian-weighted difference"},
    {3, "identities", "closed forms for dv_X"},
    {4, "identities", "weight-change identities"},
    {5, "near-diagonal", "near-diagonal residual slope"},
    {6, "decay", "off-diagonal decay"},
    {7, "heat-check", "heat trace expansion and semigroup invariants"},
    {8, "model-check", "flat model identities"},
    {9, "converge", "uniformity over the axial family"},
};

// Runtime budget for the full converge sweep.
constexpr double kConvergeBudgetSeconds = 600.0;

std::string describe(const Check& c) {
  std::string s = c.name + " = " + format_number(c.measured) + " " + c.relation + " ";
  if (c.relation == "in")
    s += "[" + format_number(c.threshold) + ", " + format_number(c.threshold_high) + "]";
  else
    s += format_number(c.threshold);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty())
    for (const Criterion& c : kCriteria) selected.insert(c.id);

  const char* out_env = std::getenv("BERGMAN_ACCEPTANCE_OUT");
  const std::filesystem::path out_root = out_env ? out_env : "acceptance_out";

  std::map<std::string, CommandOutput> runs;
  bool all_pass = true;
  for (const Criterion& crit : kCriteria) {
    if (!selected.count(crit.id)) continue;
    if (!runs.count(crit.command)) {
      RunConfig config = default_config();
      config.subcommand = crit.command;
      config.out_dir = out_root / crit.command;
      const auto start = std::chrono::steady_clock::now();
      CommandOutput out;
      try {
        out = run_command(config);
      } catch (const std::exception& e) {
        out.name = crit.command;
        for (const Criterion& c : kCriteria)
          if (std::string(c.command) == crit.command) out.checks.push_back(at_most(std::string("run: ") + e.what(), c.id, 1.0, 0.0));
      }
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (std::string(crit.command) == "converge")
        out.checks.push_back(at_most("runtime_seconds", 1, seconds, kConvergeBudgetSeconds));
      write_output(out, config.out_dir);
      runs.emplace(crit.command, std::move(out));
    }
    const CommandOutput& out = runs.at(crit.command);
    int total = 0, failed = 0;
    const Check* first_fail = nullptr;
    for (const Check& c : out.checks) {
      if (c.criterion != crit.id) continue;
      ++total;
      if (!c.pass) {
        ++failed;
        if (!first_fail) first_fail = &c;
      }
    }
    const bool pass = total > 0 && failed == 0;
    all_pass = all_pass && pass;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << crit.id << " (" << crit.title << "): "
              << (total - failed) << "/" << total << " checks";
    if (first_fail) std::cout << "; first failure " << describe(*first_fail);
    std::cout << std::endl;
    for (const Check& c : out.checks)
      if (c.criterion == crit.id) std::cout << "    " << (c.pass ? "ok   " : "FAIL ") << describe(c) << '\n';
  }
  return all_pass ? 0 : 1;
}
