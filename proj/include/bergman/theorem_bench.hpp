#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bergman/harmonics.hpp"
#include "bergman/sphere.hpp"
#include "bergman/volume_form.hpp"

namespace bergman {

inline constexpr double kDefaultTailBound = 1e-3;

/// Matrix of an operator on span{Y_lm : l <= l_max}, column sh_index(l, m)
/// holding the coefficients of op(Y_lm).
struct OperatorMatrix {
  int l_max = 0;
  Eigen::MatrixXd matrix;
  /// max over columns of (||op Y||^2 - sum of kept coefficients^2), divided by
  /// the largest column energy max ||op Y||^2.
  double tail_residual = 0.0;
  double tail_bound = kDefaultTailBound;
  Eigen::VectorXd column_energy;   ///< ||op Y_j||^2
  Eigen::VectorXd column_leakage;  ///< ||op Y_j||^2 - sum_i M_ij^2, clamped at 0
  bool valid() const { return tail_residual <= tail_bound; }
};

using NodalOperator = std::function<std::vector<double>(std::span<const double>)>;

/// Generic assembly: synthesize Y_lm on `grid`, apply `op`, analyze.
/// Requires grid exactness >= 2 l_max.
OperatorMatrix operator_matrix(const NodalOperator& op, int l_max, const QuadratureGrid& grid,
                               double tail_bound = kDefaultTailBound);

/// Q_{K_p} assembled through the azimuthal Fourier structure:
/// M_ij = R_p^{-1} tr(Phi_i A Phi_j^rho A), where Phi^rho_j is the matrix of
/// multiplication by Y_j rho between sections and A is the inverse Gram matrix.
/// Every phi-integral reduces to a ring Fourier coefficient, so the work is
/// 1-D quadrature in theta.
OperatorMatrix q_operator_matrix(int p, const VolumeForm& form, int l_max, double tail_bound = kDefaultTailBound);

/// Multiplication by eta, independent of p.
OperatorMatrix eta_multiplier_matrix(const VolumeForm& form, int l_max, double tail_bound = kDefaultTailBound);

/// eta * exp(-u Delta) from the eta multiplier: column j scaled by e^{-lambda_j u}.
OperatorMatrix eta_heat_matrix(const OperatorMatrix& eta_matrix, double u);

/// Heat time 1 / (4 pi p) paired with Q_{K_p}.
double heat_time(int p);

struct ComparisonNorms {
  int p = 0;
  double norm1 = 0.0;  ///< || M(Q) - V M(eta e^{-u Delta}) ||
  double norm2 = 0.0;  ///< || diag(lambda_l / p) (M(Q) - V M(eta e^{-u Delta})) ||
  double tail_residual = 0.0;
  bool valid = true;
  DegreeOrder argmax1{0, 0};  ///< dominant harmonic of the top right singular vector
  DegreeOrder argmax2{0, 0};
};

/// Both displays of the comparison from precomputed matrices; `volume_ratio`
/// is Vol(X, nu) / Vol(X, dv_X).
ComparisonNorms comparison_norms(int p, const OperatorMatrix& q, const OperatorMatrix& eta_matrix,
                                 double volume_ratio);
/// Throws InvalidRunError when a tail residual exceeds `tail_bound`.
ComparisonNorms comparison_norms(int p, const VolumeForm& form, int l_max, double tail_bound = kDefaultTailBound);

/// Matrix-free power-iteration estimate of norm1 through QOperator and
/// harmonic transforms (independent of the structured assembly).
double matrix_free_norm1(int p, const VolumeForm& form, int l_max, double tolerance = 1e-12,
                         int max_iterations = 4000);

/// max(40, ceil(4 sqrt(p_max))).
int default_l_max(std::span<const int> p_list);

struct RateFit {
  double slope = 0.0;  ///< least-squares slope of log norm vs log p
  double intercept = 0.0;
  double c_hat = 0.0;   ///< max_p p * norm
  double median = 0.0;  ///< median_p p * norm
};

/// Requires >= 4 distinct p and positive norms.
RateFit rate_fit(std::span<const int> p, std::span<const double> norms);

struct RateEntry {
  int p = 0;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double tail_residual = 0.0;
  DegreeOrder argmax1{0, 0};
  DegreeOrder argmax2{0, 0};
};

struct RateReport {
  std::string form_id;
  int l_max = 0;
  std::vector<RateEntry> entries;
  RateFit line1;
  RateFit line2;
};

/// Sweeps p_list for one form. Throws InvalidRunError on tail violations and
/// InvalidArgument when the fit preconditions fail.
RateReport rate_report(const VolumeForm& form, std::span<const int> p_list, int l_max,
                       double tail_bound = kDefaultTailBound);

struct UniformityRow {
  std::string form_id;
  double c_hat1 = 0.0;
  double c_hat2 = 0.0;
};

struct UniformityResult {
  std::vector<RateReport> reports;
  std::vector<UniformityRow> rows;
  double ratio1 = 0.0;  ///< max / min C_hat over the family
  double ratio2 = 0.0;
};

/// Rejects members whose density floor is below `floor`.
UniformityResult uniformity_sweep(std::span<const VolumeForm> family, std::span<const int> p_list, int l_max,
                                  double floor, double tail_bound = kDefaultTailBound);

/// Closed-form Q_{K_p} eigenvalue on degree-l harmonics for nu = dv_X:
/// prod_{j=1..l} (p+1-j)/(p+1+j).
double fs_q_eigenvalue(int p, int l);

}  // namespace bergman
