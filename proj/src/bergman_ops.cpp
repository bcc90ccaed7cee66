#include "bergman/bergman_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman {

double rank_ratio(int p, const VolumeForm& form) { return (p + 1.0) / form.volume(); }

DensityKernel::DensityKernel(const BergmanEvaluator& nu_evaluator) : ev_(&nu_evaluator) {
  if (nu_evaluator.frame() != KernelFrame::Nu) throw InvalidArgument("DensityKernel: needs a nu-frame evaluator");
}

double DensityKernel::operator()(const SpherePoint& x, const SpherePoint& y) const {
  const double n = ev_->kernel_norm(x, y);
  return n * n;
}

QuadratureGrid q_operator_grid(int p, const VolumeForm& form, int l_max, int margin) {
  const int degree = std::max(2 * p + l_max + form.degree(), 2 * l_max) + (form.is_uniform() ? 0 : margin);
  return grid_for_degree(degree);
}

QOperator::QOperator(int p, VolumeForm form, QuadratureGrid grid)
    : p_(p),
      grid_(std::move(grid)),
      nu_(SectionBasis(p), form, grid_, KernelFrame::Nu),
      omega_(SectionBasis(p), form, grid_, KernelFrame::Omega),
      rank_ratio_(bergman::rank_ratio(p, form)),
      eta_(form.eta_on(grid_)),
      rho_(form.density_on(grid_)),
      ones_(grid_.size(), 1.0),
      nu_values_(nu_.orthonormal(grid_.nodes)),
      omega_values_(omega_.orthonormal(grid_.nodes)) {}

std::vector<double> QOperator::apply_factored(const Eigen::MatrixXcd& values, std::span<const double> measure,
                                              std::span<const double> f, std::span<const double> prefactor) const {
  if (f.size() != grid_.size()) throw InvalidArgument("apply_QK: function size does not match grid");
  const Eigen::Index n = values.cols();
  // H_ab = sum_y mu_y f_y conj(E_a(y)) E_b(y); (Qf)(x) = c(x) E(x)^T H conj(E(x)).
  Eigen::MatrixXcd weighted = values;
  for (Eigen::Index y = 0; y < n; ++y) weighted.col(y) *= grid_.weights[y] * measure[y] * f[y];
  const Eigen::MatrixXcd h = values.conjugate() * weighted.transpose();
  const Eigen::MatrixXcd t = h * values.conjugate();
  std::vector<double> out(grid_.size());
  for (Eigen::Index x = 0; x < n; ++x) {
    const double v = (values.col(x).transpose() * t.col(x))(0).real();
    out[x] = prefactor[x] * v / rank_ratio_;
  }
  return out;
}

std::vector<double> QOperator::apply(std::span<const double> f) const {
  return apply_factored(omega_values_, ones_, f, eta_);
}

std::vector<double> QOperator::apply_nu(std::span<const double> f) const {
  return apply_factored(nu_values_, rho_, f, ones_);
}

std::vector<double> apply_QK(const QOperator& q, std::span<const double> f) { return q.apply(f); }

double offdiag_sup(const BergmanEvaluator& omega_evaluator, double eps, const QuadratureGrid& sample,
                   int circle_points) {
  if (omega_evaluator.frame() != KernelFrame::Omega)
    throw InvalidArgument("offdiag_sup: needs an omega-frame evaluator");
  if (!(eps > 0.0 && eps < kInjectivityRadius)) throw InvalidArgument("offdiag_sup: eps outside (0, pi R)");
  if (circle_points < 1) throw InvalidArgument("offdiag_sup: circle_points must be positive");
  const VolumeForm& form = omega_evaluator.form();
  const double inv_p = 1.0 / omega_evaluator.p();
  const std::span<const SpherePoint> nodes(sample.nodes);
  const Eigen::MatrixXcd values = omega_evaluator.orthonormal(nodes);
  std::vector<double> eta(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) eta[i] = form.eta(nodes[i]);

  double sup = 0.0;
  std::vector<SpherePoint> circle(circle_points);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto ex = values.col(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (geodesic_distance(nodes[i], nodes[j]) < eps) continue;
      const double v = eta[i] * eta[j] * std::abs(ex.dot(values.col(static_cast<Eigen::Index>(j)))) * inv_p;
      sup = std::max(sup, v);
    }
    for (int k = 0; k < circle_points; ++k) {
      const double a = 2.0 * std::numbers::pi * k / circle_points;
      circle[k] = normal_coordinates(nodes[i], {eps * std::cos(a), eps * std::sin(a)});
    }
    const Eigen::MatrixXcd cv = omega_evaluator.orthonormal(circle);
    for (int k = 0; k < circle_points; ++k) {
      const double v = eta[i] * form.eta(circle[k]) * std::abs(ex.dot(cv.col(k))) * inv_p;
      sup = std::max(sup, v);
    }
  }
  return sup;
}

NearDiagonalResult near_diagonal_residual(const BergmanEvaluator& omega_evaluator, const SpherePoint& x0,
                                          double window, int samples) {
  if (omega_evaluator.frame() != KernelFrame::Omega)
    throw InvalidArgument("near_diagonal_residual: needs an omega-frame evaluator");
  if (samples < 2) throw InvalidArgument("near_diagonal_residual: need at least 2 samples per direction");
  const int p = omega_evaluator.p();
  const double radius = window / std::sqrt(static_cast<double>(p));
  if (!(radius < kInjectivityRadius)) throw InvalidArgument("near_diagonal_residual: window beyond injectivity radius");

  std::vector<TangentVector> zs;
  zs.push_back({0.0, 0.0});
  for (int i = 1; i < samples; ++i) {
    const double r = radius * i / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double a = 2.0 * std::numbers::pi * j / samples;
      zs.push_back({r * std::cos(a), r * std::sin(a)});
    }
  }
  std::vector<SpherePoint> points(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) points[i] = normal_coordinates(x0, zs[i]);
  const Eigen::MatrixXcd values = omega_evaluator.orthonormal(points);

  NearDiagonalResult out;
  const double inv_p = 1.0 / p;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const auto ei = values.col(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < zs.size(); ++j) {
      const double dz1 = zs[i].z1 - zs[j].z1;
      const double dz2 = zs[i].z2 - zs[j].z2;
      const double model = std::exp(-0.5 * std::numbers::pi * p * (dz1 * dz1 + dz2 * dz2));
      const double scaled = std::abs(ei.dot(values.col(static_cast<Eigen::Index>(j)))) * inv_p;
      const double r = std::abs(scaled - model);
      out.sup_residual = std::max(out.sup_residual, r);
      if (i == 0 && j == 0) out.origin_residual = r;
    }
  }
  return out;
}

}  // namespace bergman
