#include "bergman/line_bundle.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "bergman/error.hpp"
#include "bergman/harmonics.hpp"

namespace bergman {

SectionBasis::SectionBasis(int p) : p_(p) {
  if (p < 1) throw InvalidArgument("section_basis: p must be >= 1");
  log_scaling_.resize(p + 1);
  double log_binom = 0.0;
  for (int k = 0; k <= p; ++k) {
    if (k > 0) log_binom += std::log(static_cast<double>(p - k + 1)) - std::log(static_cast<double>(k));
    log_scaling_[k] = 0.5 * (std::log(p + 1.0) + log_binom);
  }
}

double SectionBasis::scaling(int k) const { return std::exp(log_scaling_.at(k)); }

void SectionBasis::moduli(double theta, std::span<double> out) const {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const double log_c = c > 0.0 ? std::log(c) : -std::numeric_limits<double>::infinity();
  const double log_s = s > 0.0 ? std::log(s) : -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= p_; ++k) {
    double arg = log_scaling_[k];
    if (p_ - k > 0) arg += (p_ - k) * log_c;
    if (k > 0) arg += k * log_s;
    out[k] = std::exp(arg);
  }
}

std::vector<double> SectionBasis::moduli(double theta) const {
  std::vector<double> out(p_ + 1);
  moduli(theta, out);
  return out;
}

Eigen::VectorXcd SectionBasis::evaluate(const SpherePoint& x) const {
  std::vector<double> a(p_ + 1);
  moduli(x.theta, a);
  Eigen::VectorXcd v(p_ + 1);
  for (int k = 0; k <= p_; ++k) v(k) = std::polar(a[k], k * x.phi);
  return v;
}

SectionBasis section_basis(int p) { return SectionBasis(p); }

namespace {

// G_jk = sum_r W_r a_j a_k g_{k-j}(r), g_n(r) the ring Fourier coefficient of
// the nodal weight function.
GramMatrix assemble_gram(const SectionBasis& basis, std::span<const double> weight, const QuadratureGrid& grid) {
  const int p = basis.p();
  const int dim = p + 1;
  const int width = 2 * p + 1;
  const std::vector<std::complex<double>> g = ring_fourier(weight, grid, p);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<double> a(dim);
  for (int r = 0; r < grid.n_theta; ++r) {
    basis.moduli(std::acos(grid.ring_x[r]), a);
    const std::complex<double>* gr = g.data() + static_cast<std::size_t>(r) * width + p;
    const double w = grid.ring_weight[r];
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j <= k; ++j) gram(j, k) += w * a[j] * a[k] * gr[k - j];
  }
  for (int k = 0; k < dim; ++k) {
    gram(k, k) = gram(k, k).real();
    for (int j = 0; j < k; ++j) gram(k, j) = std::conj(gram(j, k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  GramMatrix out;
  out.entries = std::move(gram);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.max_eigenvalue = eig.eigenvalues().maxCoeff();
  out.condition_estimate = out.min_eigenvalue > 0.0 ? out.max_eigenvalue / out.min_eigenvalue
                                                    : std::numeric_limits<double>::infinity();
  return out;
}

void require_exactness(const SectionBasis& basis, const VolumeForm& form, const QuadratureGrid& grid) {
  if (grid.exactness_degree < 2 * basis.p() + form.degree())
    throw InvalidArgument("gram_matrix: grid exactness below 2p + density degree");
}

}  // namespace

GramMatrix gram_matrix(const SectionBasis& basis, const VolumeForm& form, const QuadratureGrid& grid) {
  require_exactness(basis, form, grid);
  return assemble_gram(basis, form.density_on(grid), grid);
}

BergmanEvaluator::BergmanEvaluator(SectionBasis basis, VolumeForm form, const QuadratureGrid& grid,
                                   KernelFrame frame)
    : basis_(std::move(basis)), form_(std::move(form)), frame_(frame) {
  require_exactness(basis_, form_, grid);
  if (frame_ == KernelFrame::Nu) {
    gram_ = assemble_gram(basis_, form_.density_on(grid), grid);
  } else {
    // <s_j, s_k>_omega = int h^L(s_j, s_k) |1|^2_{h^E_omega} dv_X, |1|^2 = eta^{-1}.
    std::vector<double> weight = form_.eta_on(grid);
    for (double& w : weight) w = 1.0 / w;
    gram_ = assemble_gram(basis_, weight, grid);
  }
  cholesky_.compute(gram_.entries);
  if (cholesky_.info() != Eigen::Success) throw NumericalError("gram_matrix: Cholesky factorization broke down");
  if (!(gram_.condition_estimate <= kMaxGramCondition))
    throw NumericalError("gram_matrix: condition estimate exceeds 1e12");
}

Eigen::MatrixXcd BergmanEvaluator::inverse_gram() const {
  const int dim = basis_.dimension();
  return cholesky_.solve(Eigen::MatrixXcd::Identity(dim, dim));
}

double BergmanEvaluator::frame_factor(const SpherePoint& x) const {
  return frame_ == KernelFrame::Nu ? 1.0 : std::sqrt(1.0 / form_.eta(x));
}

Eigen::VectorXcd BergmanEvaluator::orthonormal(const SpherePoint& x) const {
  Eigen::VectorXcd v = basis_.evaluate(x) * frame_factor(x);
  cholesky_.matrixL().solveInPlace(v);
  return v;
}

Eigen::MatrixXcd BergmanEvaluator::orthonormal(std::span<const SpherePoint> points) const {
  Eigen::MatrixXcd values(basis_.dimension(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    values.col(static_cast<Eigen::Index>(i)) = basis_.evaluate(points[i]) * frame_factor(points[i]);
  cholesky_.matrixL().solveInPlace(values);
  return values;
}

std::complex<double> BergmanEvaluator::kernel(const SpherePoint& x, const SpherePoint& y) const {
  // sum_a e_a(x) conj(e_a(y)); Eigen's dot conjugates its left argument.
  return std::conj(orthonormal(x).dot(orthonormal(y)));
}

double BergmanEvaluator::kernel_norm(const SpherePoint& x, const SpherePoint& y) const {
  return std::abs(kernel(x, y));
}

KernelValue bergman_eval(const BergmanEvaluator& ev, const SpherePoint& x, const SpherePoint& y) {
  const std::complex<double> v = ev.kernel(x, y);
  return {v, std::abs(v)};
}

void write_kernel_slice_csv(std::ostream& os, const BergmanEvaluator& ev, std::span<const SpherePoint> xs,
                            std::span<const SpherePoint> ys) {
  const Eigen::MatrixXcd ex = ev.orthonormal(xs);
  const Eigen::MatrixXcd ey = ev.orthonormal(ys);
  os << "x_index,y_index,abs_P\n";
  os.precision(17);
  for (Eigen::Index i = 0; i < ex.cols(); ++i)
    for (Eigen::Index j = 0; j < ey.cols(); ++j) os << i << ',' << j << ',' << std::abs(ex.col(i).dot(ey.col(j))) << '\n';
}

}  // namespace bergman
