#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bergman/cli/commands.hpp"
#include "bergman/cli/config.hpp"
#include "bergman/error.hpp"

using namespace bergman;
using namespace bergman::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bergman_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json summary(const fs::path& dir, const std::string& base) {
  return nlohmann::json::parse(slurp(dir / (base + "_summary.json")));
}

}  // namespace

TEST_CASE("config parsing overrides defaults and rejects unknown keys") {
  const RunConfig c = parse_config(R"({"p_list": [4, 8, 16, 32], "lmax": 20,
      "forms": [{"id": "u"}, {"id": "a", "coefficients": {"1,0": -0.2}}],
      "decay": {"eps": 0.1}, "tolerances": {"identity": 1e-9}})");
  CHECK(c.p_list == std::vector<int>{4, 8, 16, 32});
  CHECK(c.resolved_l_max() == 20);
  REQUIRE(c.forms.size() == 2);
  CHECK(c.forms[0].build().is_uniform());
  CHECK(c.forms[1].build().degree() == 1);
  CHECK(c.eps == 0.1);
  CHECK(c.tol.identity == 1e-9);
  CHECK(c.tol.closed_form == 1e-8);
  CHECK_THROWS_AS(parse_config(R"({"pee_list": [1]})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"decay": {"epsilon": 1}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("{not json"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"forms": [{"id": "x", "coefficients": {"1;0": 1}}]})"), InvalidArgument);
}

TEST_CASE("config validation enforces ordering and positive tolerances") {
  RunConfig c = default_config();
  CHECK_NOTHROW(c.validate());
  CHECK(c.resolved_l_max() == 46);
  c.p_list = {16, 8};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = default_config();
  c.tol.mass = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = default_config();
  c.forms.push_back(c.forms.front());
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = default_config();
  c.heat_u_min = 1e-6;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("default forms include dv_X and a rotated copy of the t = 1 member") {
  const std::vector<FormSpec> f = default_forms();
  CHECK(f.size() >= 3);
  CHECK(f.front().build().is_uniform());
  CHECK(f[2].build().volume() == doctest::Approx(f[3].build().volume()).epsilon(1e-13));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 4.0 * 3.141592653589793 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(8.0) == "8");
}

TEST_CASE("converge with a single p is a fit failure with exit 2") {
  RunConfig c = default_config();
  c.subcommand = "converge";
  c.p_list = {8};
  c.l_max = 16;
  c.out_dir = scratch("single_p");
  std::ostringstream log, err;
  CHECK(execute(c, log, err) == kExitUsage);
  CHECK(err.str().find("insufficient points") != std::string::npos);
  const nlohmann::json s = summary(c.out_dir, "converge");
  CHECK(s["exit_code"] == kExitUsage);
  CHECK(s["reason"]["kind"] == "fit_failure");
}

TEST_CASE("converge with a tight tail bound at small lmax is an invalid run with exit 3") {
  RunConfig c = default_config();
  c.subcommand = "converge";
  c.p_list = {8, 16, 32, 64};
  c.l_max = 8;
  c.tail_bound = 1e-9;
  c.out_dir = scratch("tail");
  std::ostringstream log, err;
  CHECK(execute(c, log, err) == kExitInvalidRun);
  CHECK(err.str().find("tail residual") != std::string::npos);
  CHECK(summary(c.out_dir, "converge")["reason"]["kind"] == "invalid_run");
}

TEST_CASE("a failed threshold gives exit 4 and names the first violated check") {
  RunConfig c = default_config();
  c.subcommand = "heat-check";
  c.tol.heat_coefficient = 1e-9;
  c.out_dir = scratch("heat_fail");
  std::ostringstream log, err;
  CHECK(execute(c, log, err) == kExitAcceptance);
  const nlohmann::json s = summary(c.out_dir, "heat_check");
  CHECK(s["status"] == "fail");
  CHECK(s["first_failure"] == "heat_trace.linear_coefficient_rel_error");
  CHECK(s["checks"][0]["threshold"] == 1e-9);
  CHECK(s["checks"][0].contains("measured"));
}

TEST_CASE("unknown subcommand is a usage error") {
  RunConfig c = default_config();
  c.subcommand = "plot";
  c.out_dir = scratch("unknown");
  std::ostringstream log, err;
  CHECK(execute(c, log, err) == kExitUsage);
}

TEST_CASE("same config gives byte-identical outputs") {
  RunConfig c = default_config();
  c.subcommand = "converge";
  c.p_list = {4, 6, 8, 10};
  c.l_max = 16;
  c.family_t = {0.0, 1.0};
  for (const std::string sub : {"converge", "identities", "model-check"}) {
    c.subcommand = sub;
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream log, err;
    c.out_dir = a;
    const int ea = execute(c, log, err);
    c.out_dir = b;
    const int eb = execute(c, log, err);
    CHECK(ea == eb);
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path other = b / entry.path().filename();
      REQUIRE(fs::exists(other));
      CHECK_MESSAGE(slurp(entry.path()) == slurp(other), entry.path().filename().string());
    }
  }
}

TEST_CASE("identities writes the frozen CSV columns") {
  RunConfig c = default_config();
  c.subcommand = "identities";
  c.identity_p_list = {4};
  c.closed_form_p_list = {8};
  c.out_dir = scratch("ident");
  std::ostringstream log, err;
  CHECK(execute(c, log, err) == kExitPass);
  std::ifstream in(c.out_dir / "identities.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "p,form_id,modulus_residual,density_residual,factorization_residual");
  std::ifstream cf(c.out_dir / "closed_form.csv");
  std::getline(cf, header);
  CHECK(header == "p,l,computed,closed_form");
}
