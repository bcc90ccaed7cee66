#include "bergman/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bergman/error.hpp"

namespace bergman {

namespace {

Eigen::VectorXd start_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  return v.normalized();
}

}  // namespace

SingularPair largest_singular_value(const Eigen::MatrixXd& a, double tolerance, int max_steps) {
  const Eigen::Index n = a.cols();
  if (n == 0 || a.rows() == 0) throw InvalidArgument("largest_singular_value: empty matrix");
  const int steps = static_cast<int>(std::min<Eigen::Index>(n, max_steps));
  Eigen::MatrixXd basis(n, steps);
  std::vector<double> alpha, beta;
  basis.col(0) = start_vector(n);

  SingularPair out;
  double previous = -1.0;
  for (int j = 0; j < steps; ++j) {
    Eigen::VectorXd w = a.transpose() * (a * basis.col(j));
    alpha.push_back(basis.col(j).dot(w));
    // Full reorthogonalization (twice is enough).
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) {
      t(i, i) = alpha[i];
      if (i > 0) t(i, i - 1) = t(i - 1, i) = beta[i - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const double theta = eig.eigenvalues()(j);
    const double residual = b * std::abs(eig.eigenvectors()(j, j));
    out.iterations = j + 1;
    const bool exhausted = (j + 1 == steps) || b <= 1e-300;
    const bool converged = residual <= tolerance * std::max(theta, 1e-300) ||
                           (previous >= 0.0 && std::abs(theta - previous) <= tolerance * theta && j > 4);
    if (converged || exhausted) {
      out.value = std::sqrt(std::max(theta, 0.0));
      out.right = (basis.leftCols(j + 1) * eig.eigenvectors().col(j)).normalized();
      return out;
    }
    previous = theta;
    beta.push_back(b);
    basis.col(j + 1) = w / b;
  }
  return out;
}

PowerIterationResult power_iteration_norm(const LinearMap& apply, const LinearMap& apply_transpose,
                                          Eigen::Index dim, double tolerance, int max_iterations) {
  Eigen::VectorXd v = start_vector(dim);
  PowerIterationResult out;
  double previous = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::VectorXd av = apply(v);
    const double sigma = av.norm();
    Eigen::VectorXd next = apply_transpose(av);
    const double nn = next.norm();
    out.value = sigma;
    out.iterations = it;
    if (nn == 0.0) {
      out.converged = true;
      return out;
    }
    v = next / nn;
    if (it > 1 && std::abs(sigma - previous) <= tolerance * sigma) {
      out.converged = true;
      return out;
    }
    previous = sigma;
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_line: abscissae are all equal");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return out;
}

std::vector<double> fit_powers(std::span<const double> x, std::span<const double> y, std::span<const int> powers) {
  if (x.size() != y.size() || x.size() < powers.size() || powers.empty())
    throw InvalidArgument("fit_powers: not enough points for the requested terms");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(powers.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    b(i) = y[i];
    for (std::size_t k = 0; k < powers.size(); ++k) a(i, k) = std::pow(x[i], powers[k]);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  return {c.data(), c.data() + c.size()};
}

}  // namespace bergman
