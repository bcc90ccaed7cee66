#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bergman {

struct SingularPair {
  double value = 0.0;
  Eigen::VectorXd right;  ///< unit right singular vector
  int iterations = 0;
};

/// Largest singular value by Lanczos on A^T A with full reorthogonalization.
/// Deterministic start vector.
SingularPair largest_singular_value(const Eigen::MatrixXd& a, double tolerance = 1e-13, int max_steps = 200);

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PowerIterationResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Matrix-free power iteration on A^T A.
PowerIterationResult power_iteration_norm(const LinearMap& apply, const LinearMap& apply_transpose,
                                          Eigen::Index dim, double tolerance = 1e-10, int max_iterations = 500);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y ~ slope x + intercept; needs two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares coefficients of y ~ sum_k c_k x^{powers[k]}.
std::vector<double> fit_powers(std::span<const double> x, std::span<const double> y, std::span<const int> powers);

}  // namespace bergman
