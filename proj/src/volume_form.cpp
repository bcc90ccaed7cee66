#include "bergman/volume_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bergman/error.hpp"
#include "bergman/harmonics.hpp"

namespace bergman {

VolumeForm::VolumeForm() : id_("dvX") {}

VolumeForm::VolumeForm(std::string id, LogDensityCoeffs coeffs) : id_(std::move(id)) {
  for (const auto& [lm, c] : coeffs) {
    const auto [l, m] = lm;
    if (l < 0 || std::abs(m) > l) throw InvalidArgument("VolumeForm: coefficient index needs |m| <= l");
    if (!std::isfinite(c)) throw InvalidArgument("VolumeForm: non-finite coefficient");
    if (c == 0.0) continue;
    coeffs_[lm] = c;
    degree_ = std::max(degree_, l);
    azimuthal_order_ = std::max(azimuthal_order_, std::abs(m));
  }
  if (coeffs_.empty()) return;

  // rho is entire in the exponent; a margin of 40 degrees above the exponent
  // degree resolves it far below double precision for moderate amplitudes.
  const int band = degree_ + 40;
  const QuadratureGrid grid = build_grid(band + 2, 2 * band + 4);
  const std::vector<double> rho = density_on(grid);
  volume_ = integrate(rho, grid);
  floor_ = *std::min_element(rho.begin(), rho.end());

  const HarmonicTransform transform(grid, band);
  const HarmonicCoeffs rc = transform.analyze(rho);
  c_s_bound_ = {0.0, 0.0, 0.0};
  for (int l = 0; l <= band; ++l) {
    const double lambda = 4.0 * std::numbers::pi * l * (l + 1);
    double amp = 0.0;
    for (int m = -l; m <= l; ++m) amp += std::abs(rc(l, m));
    amp *= std::sqrt(2.0 * l + 1.0);
    c_s_bound_[0] += amp;
    c_s_bound_[1] += amp * std::sqrt(lambda);
    c_s_bound_[2] += amp * lambda;
  }
}

double VolumeForm::log_density(const SpherePoint& x) const {
  if (coeffs_.empty()) return 0.0;
  const std::vector<double> y = real_harmonics(degree_, x);
  double g = 0.0;
  for (const auto& [lm, c] : coeffs_) g += c * y[sh_index(lm.first, lm.second)];
  return g;
}

double VolumeForm::density(const SpherePoint& x) const { return std::exp(log_density(x)); }

std::vector<double> VolumeForm::density_on(const QuadratureGrid& grid) const {
  std::vector<double> out(grid.size(), 1.0);
  if (coeffs_.empty()) return out;
  for (const auto& [lm, c] : coeffs_) {
    const std::vector<double> y = harmonic_on_grid(lm.first, lm.second, grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(c * y[i]);
  }
  return out;
}

std::vector<double> VolumeForm::eta_on(const QuadratureGrid& grid) const {
  std::vector<double> out = density_on(grid);
  for (double& v : out) v = 1.0 / v;
  return out;
}

double integrate(std::span<const double> f, const QuadratureGrid& grid, const VolumeForm& form) {
  if (f.size() != grid.size()) throw InvalidArgument("integrate: function size does not match grid");
  const std::vector<double> rho = form.density_on(grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += grid.weights[i] * rho[i] * f[i];
  return sum;
}

VolumeForm axial_family_member(double t, double amplitude) {
  std::ostringstream id;
  id << "axial_t" << t;
  return VolumeForm(id.str(), {{{1, 0}, -t * amplitude}});
}

}  // namespace bergman
