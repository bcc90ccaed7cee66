#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bergman/line_bundle.hpp"
#include "bergman/sphere.hpp"
#include "bergman/volume_form.hpp"

namespace bergman {

/// R_p = dim H^0(X, L^p) / Vol(X, nu) = (p + 1) / Vol(X, nu).
double rank_ratio(int p, const VolumeForm& form);

/// K_p(x, y) = |P_{nu,p}(x, y)|^2.
class DensityKernel {
 public:
  explicit DensityKernel(const BergmanEvaluator& nu_evaluator);

  int p() const { return ev_->p(); }
  const VolumeForm& form() const { return ev_->form(); }
  double operator()(const SpherePoint& x, const SpherePoint& y) const;

 private:
  const BergmanEvaluator* ev_;
};

/// Grid on which Q_{K_p} acts exactly on functions of degree <= l_max.
QuadratureGrid q_operator_grid(int p, const VolumeForm& form, int l_max, int margin = 24);

/// Smoothing operator (Q_{K_p} f)(x) = R_p^{-1} int K_p(x, y) f(y) d nu(y),
/// acting on nodal functions of its grid. Holds both the nu-frame and the
/// omega-frame kernels; the primary application goes through
/// K_p(x, y) d nu(y) = eta(x) K_{omega,p}(x, y) dv_X(y).
class QOperator {
 public:
  QOperator(int p, VolumeForm form, QuadratureGrid grid);

  int p() const { return p_; }
  double rank_ratio() const { return rank_ratio_; }
  const VolumeForm& form() const { return nu_.form(); }
  const QuadratureGrid& grid() const { return grid_; }
  const BergmanEvaluator& nu_evaluator() const { return nu_; }
  const BergmanEvaluator& omega_evaluator() const { return omega_; }
  const std::vector<double>& eta() const { return eta_; }
  const std::vector<double>& rho() const { return rho_; }

  /// R_p^{-1} eta(x) sum_y w_y K_{omega,p}(x, y) f(y).
  std::vector<double> apply(std::span<const double> f) const;
  /// R_p^{-1} sum_y w_y rho_y K_p(x, y) f(y).
  std::vector<double> apply_nu(std::span<const double> f) const;

 private:
  std::vector<double> apply_factored(const Eigen::MatrixXcd& values, std::span<const double> measure,
                                     std::span<const double> f, std::span<const double> prefactor) const;

  int p_;
  QuadratureGrid grid_;
  BergmanEvaluator nu_;
  BergmanEvaluator omega_;
  double rank_ratio_;
  std::vector<double> eta_;
  std::vector<double> rho_;
  std::vector<double> ones_;
  Eigen::MatrixXcd nu_values_;     // (p+1) x nodes
  Eigen::MatrixXcd omega_values_;  // (p+1) x nodes
};

std::vector<double> apply_QK(const QOperator& q, std::span<const double> f);

/// Discrete sup of p^{-n} eta(x) eta(y) K_{omega,p}(x, y)^{1/2} over pairs with
/// d(x, y) >= eps. Sources are the sample nodes; targets are the sample nodes
/// at distance >= eps together with `circle_points` points on the geodesic
/// circle of radius exactly eps around each source.
double offdiag_sup(const BergmanEvaluator& omega_evaluator, double eps, const QuadratureGrid& sample,
                   int circle_points = 24);

struct NearDiagonalResult {
  double sup_residual = 0.0;
  double origin_residual = 0.0;  ///< |p^{-1}|P(0,0)| - 1|
};

inline constexpr double kNearDiagonalWindow = 3.0;
inline constexpr int kNearDiagonalSamples = 17;

/// sup over |Z|, |Z'| <= c / sqrt(p) (polar sample in normal coordinates at x0)
/// of | p^{-n} |P_{omega,p,x0}(Z, Z')| - |P^N(sqrt(p) Z, sqrt(p) Z')| |.
NearDiagonalResult near_diagonal_residual(const BergmanEvaluator& omega_evaluator, const SpherePoint& x0,
                                          double window = kNearDiagonalWindow,
                                          int samples = kNearDiagonalSamples);

}  // namespace bergman
