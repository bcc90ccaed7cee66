#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bergman/sphere.hpp"

namespace bergman {

/// Coefficients {(l, m): c} of the exponent g in rho = exp(g).
using LogDensityCoeffs = std::map<std::pair<int, int>, double>;

/// Volume form d nu = rho dv_X with rho = exp(sum c_lm Y_lm) > 0, and
/// eta = dv_X / d nu = 1 / rho.
class VolumeForm {
 public:
  /// The metric volume form dv_X itself (rho = 1).
  VolumeForm();
  VolumeForm(std::string id, LogDensityCoeffs coeffs);

  const std::string& id() const { return id_; }
  const LogDensityCoeffs& coefficients() const { return coeffs_; }
  bool is_uniform() const { return coeffs_.empty(); }

  double log_density(const SpherePoint& x) const;
  double density(const SpherePoint& x) const;
  double eta(const SpherePoint& x) const { return 1.0 / density(x); }

  std::vector<double> density_on(const QuadratureGrid& grid) const;
  std::vector<double> eta_on(const QuadratureGrid& grid) const;

  /// Vol(X, nu) = int rho dv_X.
  double volume() const { return volume_; }
  /// Lower bound of rho measured on a fine sampling grid.
  double floor() const { return floor_; }
  /// Upper bounds for sup|Delta^{k/2} rho|, k = 0, 1, 2, from the harmonic
  /// expansion of rho: sum |rho_lm| lambda_l^{k/2} sqrt(2l+1).
  const std::array<double, 3>& c_s_bound() const { return c_s_bound_; }
  /// Largest l and |m| appearing in the exponent.
  int degree() const { return degree_; }
  int azimuthal_order() const { return azimuthal_order_; }

 private:
  std::string id_;
  LogDensityCoeffs coeffs_;
  int degree_ = 0;
  int azimuthal_order_ = 0;
  double volume_ = 1.0;
  double floor_ = 1.0;
  std::array<double, 3> c_s_bound_{1.0, 0.0, 0.0};
};

/// Integral of f against d nu = rho dv_X.
double integrate(std::span<const double> f, const QuadratureGrid& grid, const VolumeForm& form);

/// rho_t = exp(-t * amplitude * Y_10), the one-parameter family used by the
/// uniformity sweep.
VolumeForm axial_family_member(double t, double amplitude = 0.3);

}  // namespace bergman
