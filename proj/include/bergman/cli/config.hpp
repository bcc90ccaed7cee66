#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bergman/sphere.hpp"
#include "bergman/volume_form.hpp"

namespace bergman::cli {

struct FormSpec {
  std::string id;
  LogDensityCoeffs coefficients;

  VolumeForm build() const { return VolumeForm(id, coefficients); }
};

/// Every pass/fail threshold used by the subcommands.
struct Tolerances {
  double slope_max = -0.75;
  double boundedness_factor = 3.0;
  double uniformity_factor = 5.0;
  double closed_form = 1e-8;
  double identity = 1e-8;
  double near_slope_min = -1.4;
  double near_slope_max = -0.75;
  double decay_r_squared = 0.95;
  double heat_coefficient = 0.01;
  double semigroup_derivative = 1e-6;
  double semigroup_law = 1e-14;
  double self_adjoint = 1e-10;
  double mass = 1e-12;
  double positivity = 1e-10;
  double reproducing = 1e-8;
  double annihilation = 1e-8;
  double finite_difference = 1e-6;
  double laplacian_identity = 1e-6;
  double modulus_law = 1e-12;
};

struct RunConfig {
  std::string subcommand;

  // converge
  std::vector<int> p_list{8, 16, 32, 64, 128};
  int l_max = 0;  ///< 0 selects default_l_max(p_list)
  double tail_bound = 1e-3;
  std::vector<FormSpec> forms;
  std::vector<double> family_t{0.0, 0.5, 1.0};
  double family_amplitude = 0.3;
  double density_floor = 0.1;

  // sample grid for decay and identities
  int grid_n_theta = 12;
  int grid_n_phi = 24;

  // decay
  double eps = 0.2;
  std::vector<int> decay_p_list{8, 16, 32, 64, 128};
  int circle_points = 24;

  // near-diagonal
  std::vector<int> near_p_list{16, 32, 64, 128, 256};
  double window = 3.0;
  int window_samples = 17;
  std::vector<SpherePoint> base_points{{1.1, 0.7}, {2.3, 4.0}};

  // identities
  std::vector<int> identity_p_list{4, 8, 16};
  std::vector<int> closed_form_p_list{8, 16, 32, 64};

  // heat-check
  double heat_u_min = 1e-3;
  double heat_u_max = 1e-2;
  int heat_points = 10;
  double semigroup_u = 0.25;
  int heat_l_max = 20;

  // model-check
  int hermite_order = 48;
  int model_points = 20;
  double model_radius = 2.0;

  std::uint32_t seed = 20240601;
  std::filesystem::path out_dir = "out";
  Tolerances tol;

  int resolved_l_max() const;
  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;
};

/// Defaults: dv_X, the axial family at t = 1/2 and t = 1, and a tilted copy
/// of the t = 1 member (same data rotated off the polar axis).
std::vector<FormSpec> default_forms();
RunConfig default_config();

/// Parses a JSON document on top of `base`; unknown keys are rejected.
RunConfig parse_config(std::string_view json_text, RunConfig base = default_config());
RunConfig load_config(const std::filesystem::path& path);

}  // namespace bergman::cli
