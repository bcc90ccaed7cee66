#include "bergman/heat.hpp"

#include <cmath>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman {

double laplacian_eigenvalue(int l) { return 4.0 * std::numbers::pi * l * (l + 1.0); }

HarmonicCoeffs laplacian_apply(const HarmonicCoeffs& c) {
  HarmonicCoeffs out = c;
  for (int l = 0; l <= c.l_max; ++l) {
    const double lambda = laplacian_eigenvalue(l);
    for (int m = -l; m <= l; ++m) out(l, m) *= lambda;
  }
  return out;
}

HarmonicCoeffs heat_apply(const HarmonicCoeffs& c, double u) {
  if (!(u >= 0.0)) throw InvalidArgument("heat_apply: time must be >= 0");
  HarmonicCoeffs out = c;
  for (int l = 0; l <= c.l_max; ++l) {
    const double factor = std::exp(-laplacian_eigenvalue(l) * u);
    for (int m = -l; m <= l; ++m) out(l, m) *= factor;
  }
  return out;
}

double heat_diag(double u) {
  if (!(u > 0.0)) throw InvalidArgument("heat_diag: time must be > 0");
  if (u < kMinHeatTime) throw InvalidArgument("heat_diag: time below supported minimum 1e-4");
  double sum = 0.0;
  for (int l = 0;; ++l) {
    const double term = (2.0 * l + 1.0) * std::exp(-laplacian_eigenvalue(l) * u);
    sum += term;
    // Terms decrease monotonically once past the peak of (2l+1) e^{-lambda u}.
    if (term < 1e-16 * sum && laplacian_eigenvalue(l) * u > 1.0) break;
  }
  return sum;
}

double semigroup_derivative_check(const HarmonicCoeffs& f, double u, double h) {
  if (!(u > 0.0) || !(h > 0.0) || h >= u) throw InvalidArgument("semigroup_derivative_check: need 0 < h < u");
  const HarmonicCoeffs lap = laplacian_apply(heat_apply(f, u));
  const HarmonicCoeffs plus = heat_apply(f, u + h);
  const HarmonicCoeffs minus = heat_apply(f, u - h);
  double sq = 0.0;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    const double r = lap.c[i] + (plus.c[i] - minus.c[i]) / (2.0 * h);
    sq += r * r;
  }
  return std::sqrt(sq);
}

}  // namespace bergman
