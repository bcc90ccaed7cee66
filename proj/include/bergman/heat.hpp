#pragma once

#include "bergman/harmonics.hpp"

namespace bergman {

/// Eigenvalue of the positive Laplacian on Y_lm: l(l+1)/R^2 = 4 pi l(l+1).
double laplacian_eigenvalue(int l);

HarmonicCoeffs laplacian_apply(const HarmonicCoeffs& c);

/// exp(-u Delta), exact in the harmonic basis.
HarmonicCoeffs heat_apply(const HarmonicCoeffs& c, double u);

/// Smallest time for which heat_diag guarantees its truncation.
inline constexpr double kMinHeatTime = 1e-4;

/// Diagonal of the heat kernel, sum_l (2l+1) exp(-4 pi l(l+1) u); constant on
/// the sphere since Vol(X, dv_X) = 1.
double heat_diag(double u);

/// L^2 norm of Delta e^{-u Delta} f + d/du e^{-u Delta} f, with the
/// u-derivative taken by a centered difference of step h.
double semigroup_derivative_check(const HarmonicCoeffs& f, double u, double h = 1e-4);

}  // namespace bergman
