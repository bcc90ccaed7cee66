#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bergman/sphere.hpp"
#include "bergman/volume_form.hpp"

namespace bergman {

/// Monomial basis of H^0(CP^1, O(p)) in homogeneous form [cos(theta/2) :
/// sin(theta/2) e^{i phi}], pre-scaled to be orthonormal for dv_X under the
/// Fubini-Study metric. Values are expressed in the unit frame of h^{L^p},
/// so |s_k|(x) is the complex modulus and no point needs the singular chart.
class SectionBasis {
 public:
  explicit SectionBasis(int p);

  int p() const { return p_; }
  int dimension() const { return p_ + 1; }
  /// sqrt((p+1) binomial(p, k)).
  double scaling(int k) const;
  double log_scaling(int k) const { return log_scaling_[k]; }

  /// |s_k|(theta) = scaling_k cos^{p-k}(theta/2) sin^k(theta/2).
  void moduli(double theta, std::span<double> out) const;
  std::vector<double> moduli(double theta) const;
  /// s_k(x) = |s_k|(theta) e^{i k phi}.
  Eigen::VectorXcd evaluate(const SpherePoint& x) const;

 private:
  int p_;
  std::vector<double> log_scaling_;
};

SectionBasis section_basis(int p);

/// Hermitian positive-definite L^2 Gram matrix G_jk = <s_j, s_k>.
struct GramMatrix {
  Eigen::MatrixXcd entries;
  double condition_estimate = 1.0;
  double min_eigenvalue = 1.0;
  double max_eigenvalue = 1.0;
};

/// Largest condition number accepted before a run is refused.
inline constexpr double kMaxGramCondition = 1e12;

/// G_jk = sum_nodes w rho s_j conj(s_k), assembled ring by ring.
GramMatrix gram_matrix(const SectionBasis& basis, const VolumeForm& form, const QuadratureGrid& grid);

/// Which Hermitian structure the kernel is expressed in.
///  - Nu: sections in the h^{L^p} unit frame, projection w.r.t. d nu.
///  - Omega: sections in the h^{L^p} x h^E_omega unit frame (|1|^2 = eta^{-1}),
///    projection w.r.t. dv_X. Its squared modulus is K_{omega,p}.
enum class KernelFrame { Nu, Omega };

/// Evaluates the Bergman kernel through a Cholesky factor of the Gram matrix:
/// P(x, y) = sum_a e_a(x) conj(e_a(y)) with e = L^{-1} s orthonormal.
/// Immutable after construction; safe for concurrent evaluation.
class BergmanEvaluator {
 public:
  BergmanEvaluator(SectionBasis basis, VolumeForm form, const QuadratureGrid& grid,
                   KernelFrame frame = KernelFrame::Nu);

  int p() const { return basis_.p(); }
  KernelFrame frame() const { return frame_; }
  const SectionBasis& basis() const { return basis_; }
  const VolumeForm& form() const { return form_; }
  const GramMatrix& gram() const { return gram_; }
  /// G^{-1}, Hermitian.
  Eigen::MatrixXcd inverse_gram() const;

  /// Frame factor applied to raw section values (1 or eta^{-1/2}).
  double frame_factor(const SpherePoint& x) const;
  /// Orthonormalized section values e_a(x).
  Eigen::VectorXcd orthonormal(const SpherePoint& x) const;
  /// Orthonormalized values at many points; column i belongs to points[i].
  Eigen::MatrixXcd orthonormal(std::span<const SpherePoint> points) const;

  std::complex<double> kernel(const SpherePoint& x, const SpherePoint& y) const;
  double kernel_norm(const SpherePoint& x, const SpherePoint& y) const;

 private:
  SectionBasis basis_;
  VolumeForm form_;
  KernelFrame frame_;
  GramMatrix gram_;
  Eigen::LLT<Eigen::MatrixXcd> cholesky_;
};

struct KernelValue {
  std::complex<double> value;
  double norm;
};

KernelValue bergman_eval(const BergmanEvaluator& ev, const SpherePoint& x, const SpherePoint& y);

/// Writes "x_index,y_index,abs_P" rows for all point pairs.
void write_kernel_slice_csv(std::ostream& os, const BergmanEvaluator& ev, std::span<const SpherePoint> xs,
                            std::span<const SpherePoint> ys);

}  // namespace bergman
