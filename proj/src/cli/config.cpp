#include "bergman/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bergman/error.hpp"
#include "bergman/heat.hpp"
#include "bergman/theorem_bench.hpp"

namespace bergman::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument("config: " + where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw InvalidArgument("config: unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

std::pair<int, int> parse_lm(const std::string& key) {
  int l = 0, m = 0;
  char comma = 0;
  std::istringstream is(key);
  if (!(is >> l >> comma >> m) || comma != ',' || !is.eof())
    throw InvalidArgument("config: coefficient key '" + key + "' is not of the form \"l,m\"");
  return {l, m};
}

FormSpec parse_form(const json& j) {
  reject_unknown(j, {"id", "coefficients"}, "form");
  FormSpec f;
  read(j, "id", f.id);
  if (f.id.empty()) throw InvalidArgument("config: every form needs an id");
  if (j.contains("coefficients")) {
    const json& c = j.at("coefficients");
    if (!c.is_object()) throw InvalidArgument("config: coefficients must be an object of \"l,m\": value");
    for (const auto& [k, v] : c.items()) {
      if (!v.is_number()) throw InvalidArgument("config: coefficient '" + k + "' is not a number");
      const double value = v.get<double>();
      if (value != 0.0) f.coefficients[parse_lm(k)] = value;
    }
  }
  return f;
}

void require_ascending(const std::vector<int>& v, const std::string& name, int min_value) {
  if (v.empty()) throw InvalidArgument("config: " + name + " is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < min_value) throw InvalidArgument("config: " + name + " entries must be >= " + std::to_string(min_value));
    if (i > 0 && v[i] <= v[i - 1]) throw InvalidArgument("config: " + name + " must be sorted ascending");
  }
}

}  // namespace

int RunConfig::resolved_l_max() const { return l_max > 0 ? l_max : default_l_max(p_list); }

void RunConfig::validate() const {
  require_ascending(p_list, "p_list", 1);
  require_ascending(decay_p_list, "decay.p_list", 1);
  require_ascending(near_p_list, "near_diagonal.p_list", 1);
  require_ascending(identity_p_list, "identities.p_list", 1);
  require_ascending(closed_form_p_list, "identities.closed_form_p_list", 1);
  if (l_max < 0) throw InvalidArgument("config: lmax must be >= 0");
  if (forms.empty()) throw InvalidArgument("config: at least one volume form is required");
  std::set<std::string> ids;
  for (const FormSpec& f : forms)
    if (!ids.insert(f.id).second) throw InvalidArgument("config: duplicate form id '" + f.id + "'");
  if (grid_n_theta < 2 || grid_n_phi < 2) throw InvalidArgument("config: grid node counts must be >= 2");
  if (!(eps > 0.0 && eps < kInjectivityRadius)) throw InvalidArgument("config: decay.eps outside (0, pi R)");
  if (circle_points < 1) throw InvalidArgument("config: decay.circle_points must be positive");
  if (!(window > 0.0) || window_samples < 2) throw InvalidArgument("config: bad near_diagonal window");
  if (base_points.empty()) throw InvalidArgument("config: near_diagonal.base_points is empty");
  if (!(heat_u_min >= kMinHeatTime && heat_u_max > heat_u_min) || heat_points < 3)
    throw InvalidArgument("config: bad heat fit range");
  if (!(semigroup_u > 0.0) || heat_l_max < 1) throw InvalidArgument("config: bad heat test settings");
  if (hermite_order < 40) throw InvalidArgument("config: model.hermite_order must be >= 40");
  if (model_points < 1 || !(model_radius > 0.0)) throw InvalidArgument("config: bad model sampling");
  if (!(density_floor > 0.0) || !(family_amplitude >= 0.0)) throw InvalidArgument("config: bad family settings");
  const double positive[] = {tail_bound,           tol.boundedness_factor, tol.uniformity_factor, tol.closed_form,
                             tol.identity,          tol.decay_r_squared,    tol.heat_coefficient,  tol.semigroup_derivative,
                             tol.semigroup_law,
                             tol.self_adjoint,      tol.mass,               tol.positivity,        tol.reproducing,
                             tol.annihilation,      tol.finite_difference,  tol.laplacian_identity, tol.modulus_law};
  for (double t : positive)
    if (!(t > 0.0)) throw InvalidArgument("config: tolerances must be positive");
  if (!(tol.near_slope_min < tol.near_slope_max)) throw InvalidArgument("config: near slope window is empty");
}

std::vector<FormSpec> default_forms() {
  // Unit vector (0.48, 0.64, 0.6) in the (Y_1,-1, Y_10, Y_11) coefficient space.
  return {
      {"dvX", {}},
      {"axial_t0.5", {{{1, 0}, -0.15}}},
      {"axial_t1", {{{1, 0}, -0.3}}},
      {"tilted_t1", {{{1, -1}, -0.3 * 0.48}, {{1, 0}, -0.3 * 0.64}, {{1, 1}, -0.3 * 0.6}}},
  };
}

RunConfig default_config() {
  RunConfig c;
  c.forms = default_forms();
  return c;
}

RunConfig parse_config(std::string_view json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: malformed JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"p_list", "lmax", "tail_bound", "forms", "family", "grid", "decay", "near_diagonal", "identities",
                  "heat", "model", "seed", "out", "tolerances"},
                 "config");
  RunConfig c = std::move(base);
  read(j, "p_list", c.p_list);
  read(j, "lmax", c.l_max);
  read(j, "tail_bound", c.tail_bound);
  read(j, "seed", c.seed);
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  if (j.contains("forms")) {
    if (!j.at("forms").is_array()) throw InvalidArgument("config: forms must be an array");
    c.forms.clear();
    for (const json& f : j.at("forms")) c.forms.push_back(parse_form(f));
  }
  if (j.contains("family")) {
    const json& f = j.at("family");
    reject_unknown(f, {"t", "amplitude", "floor"}, "family");
    read(f, "t", c.family_t);
    read(f, "amplitude", c.family_amplitude);
    read(f, "floor", c.density_floor);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"n_theta", "n_phi"}, "grid");
    read(g, "n_theta", c.grid_n_theta);
    read(g, "n_phi", c.grid_n_phi);
  }
  if (j.contains("decay")) {
    const json& d = j.at("decay");
    reject_unknown(d, {"eps", "p_list", "circle_points"}, "decay");
    read(d, "eps", c.eps);
    read(d, "p_list", c.decay_p_list);
    read(d, "circle_points", c.circle_points);
  }
  if (j.contains("near_diagonal")) {
    const json& d = j.at("near_diagonal");
    reject_unknown(d, {"p_list", "window", "samples", "base_points"}, "near_diagonal");
    read(d, "p_list", c.near_p_list);
    read(d, "window", c.window);
    read(d, "samples", c.window_samples);
    if (d.contains("base_points")) {
      c.base_points.clear();
      for (const json& pt : d.at("base_points")) {
        if (!pt.is_array() || pt.size() != 2) throw InvalidArgument("config: base_points entries are [theta, phi]");
        c.base_points.push_back(SpherePoint::make(pt[0].get<double>(), pt[1].get<double>()));
      }
    }
  }
  if (j.contains("identities")) {
    const json& d = j.at("identities");
    reject_unknown(d, {"p_list", "closed_form_p_list"}, "identities");
    read(d, "p_list", c.identity_p_list);
    read(d, "closed_form_p_list", c.closed_form_p_list);
  }
  if (j.contains("heat")) {
    const json& d = j.at("heat");
    reject_unknown(d, {"u_min", "u_max", "points", "semigroup_u", "lmax"}, "heat");
    read(d, "u_min", c.heat_u_min);
    read(d, "u_max", c.heat_u_max);
    read(d, "points", c.heat_points);
    read(d, "semigroup_u", c.semigroup_u);
    read(d, "lmax", c.heat_l_max);
  }
  if (j.contains("model")) {
    const json& d = j.at("model");
    reject_unknown(d, {"hermite_order", "points", "radius"}, "model");
    read(d, "hermite_order", c.hermite_order);
    read(d, "points", c.model_points);
    read(d, "radius", c.model_radius);
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t,
                   {"slope_max", "boundedness_factor", "uniformity_factor", "closed_form", "identity",
                    "near_slope_min", "near_slope_max", "decay_r_squared", "heat_coefficient",
                    "semigroup_derivative", "semigroup_law", "self_adjoint", "mass", "positivity", "reproducing", "annihilation",
                    "finite_difference", "laplacian_identity", "modulus_law"},
                   "tolerances");
    Tolerances& o = c.tol;
    read(t, "slope_max", o.slope_max);
    read(t, "boundedness_factor", o.boundedness_factor);
    read(t, "uniformity_factor", o.uniformity_factor);
    read(t, "closed_form", o.closed_form);
    read(t, "identity", o.identity);
    read(t, "near_slope_min", o.near_slope_min);
    read(t, "near_slope_max", o.near_slope_max);
    read(t, "decay_r_squared", o.decay_r_squared);
    read(t, "heat_coefficient", o.heat_coefficient);
    read(t, "semigroup_derivative", o.semigroup_derivative);
    read(t, "semigroup_law", o.semigroup_law);
    read(t, "self_adjoint", o.self_adjoint);
    read(t, "mass", o.mass);
    read(t, "positivity", o.positivity);
    read(t, "reproducing", o.reproducing);
    read(t, "annihilation", o.annihilation);
    read(t, "finite_difference", o.finite_difference);
    read(t, "laplacian_identity", o.laplacian_identity);
    read(t, "modulus_law", o.modulus_law);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bergman::cli
