#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bergman/cli/commands.hpp"
#include "bergman/cli/config.hpp"
#include "bergman/error.hpp"

namespace {

using bergman::cli::RunConfig;

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::vector<int> p_list;
  std::optional<int> l_max;
};

// --p replaces the p list the chosen subcommand iterates over.
void apply(const Overrides& o, RunConfig& c) {
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (o.l_max) c.l_max = *o.l_max;
  if (o.p_list.empty()) return;
  if (c.subcommand == "converge")
    c.p_list = o.p_list;
  else if (c.subcommand == "decay")
    c.decay_p_list = o.p_list;
  else if (c.subcommand == "near-diagonal")
    c.near_p_list = o.p_list;
  else if (c.subcommand == "identities")
    c.identity_p_list = o.p_list;
  else
    throw bergman::InvalidArgument("--p has no effect on " + c.subcommand);
}

int usage_error(const std::string& message) {
  std::cerr << nlohmann::json({{"status", "error"},
                               {"exit_code", bergman::cli::kExitUsage},
                               {"reason", {{"kind", "usage"}, {"message", message}}}})
                   .dump()
            << '\n';
  return bergman::cli::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman kernel and Q-operator bench on CP^1"};
  app.require_subcommand(1, 1);
  Overrides o;
  const char* names[][2] = {
      {"converge", "operator-norm rates of Q_{K_p} against the heat operator"},
      {"decay", "off-diagonal decay of the Bergman kernel"},
      {"near-diagonal", "rescaled kernel against the flat model near the diagonal"},
      {"model-check", "flat Bargmann-Fock model identities"},
      {"heat-check", "heat trace expansion and semigroup invariants"},
      {"identities", "weight-change identities and closed forms for dv_X"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--p", o.p_list, "comma-separated tensor powers")->delimiter(',');
    sub->add_option_function<int>("--lmax", [&](const int& v) { o.l_max = v; }, "harmonic truncation degree");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  RunConfig config;
  try {
    config = o.config_path.empty() ? bergman::cli::default_config() : bergman::cli::load_config(o.config_path);
    config.subcommand = app.get_subcommands().front()->get_name();
    apply(o, config);
    config.validate();
  } catch (const bergman::InvalidArgument& e) {
    return usage_error(e.what());
  }
  return bergman::cli::execute(config, std::cout, std::cerr);
}
