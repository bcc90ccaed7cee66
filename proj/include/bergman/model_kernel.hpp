#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace bergman {

/// Point of R^2 = C, z = Z1 + i Z2.
struct FlatPoint {
  double z1 = 0.0;
  double z2 = 0.0;

  std::complex<double> z() const { return {z1, z2}; }
  double norm_squared() const { return z1 * z1 + z2 * z2; }
};

/// Bargmann-Fock Bergman kernel exp(-(pi/2)(|z|^2 + |z'|^2 - 2 z conj(z'))).
std::complex<double> pn_eval(const FlatPoint& z, const FlatPoint& zp);

/// Closed-form functions q(z, zbar) exp(-(pi/2)|z|^2 + a z + b zbar + c) with q
/// a polynomial; the class is closed under d/dz, d/dzbar and multiplication
/// by z, zbar, so the model operator acts on it exactly.
class GaussianPolynomial {
 public:
  /// Monomial z^i zbar^j -> coefficient.
  using Terms = std::map<std::pair<int, int>, std::complex<double>>;

  GaussianPolynomial(Terms terms, std::complex<double> a = 0.0, std::complex<double> b = 0.0,
                     std::complex<double> c = 0.0);

  /// The function W -> P^N(W, Z') for fixed Z'.
  static GaussianPolynomial model_kernel_section(const FlatPoint& zp);

  std::complex<double> operator()(const FlatPoint& w) const;
  GaussianPolynomial d_z() const;
  GaussianPolynomial d_zbar() const;
  GaussianPolynomial times_z(std::complex<double> scale = 1.0) const;
  GaussianPolynomial times_zbar(std::complex<double> scale = 1.0) const;
  GaussianPolynomial scaled(std::complex<double> s) const;
  GaussianPolynomial operator+(const GaussianPolynomial& other) const;

  const Terms& terms() const { return terms_; }

 private:
  Terms terms_;
  std::complex<double> a_, b_, c_;
};

/// L = (-2 d/dz + pi zbar)(2 d/dzbar + pi z), applied symbolically.
GaussianPolynomial model_L_apply(const GaussianPolynomial& f);

/// Tensor Gauss-Hermite nodes on R^2 for the weight exp(-pi |W|^2).
struct FlatGrid {
  std::vector<FlatPoint> nodes;
  std::vector<double> weights;  ///< integrate g(W) exp(-pi|W|^2) dW
};
FlatGrid gauss_hermite_grid(int order, double scale = 1.0);

struct ModelLResult {
  std::vector<std::complex<double>> values;  ///< symbolic L f on the grid nodes
  double fd_residual = 0.0;                  ///< max |symbolic - finite difference| / max(1, max|L f|)
};

/// Evaluates L f on the grid nodes and cross-checks against a fourth-order
/// finite-difference evaluation of the same operator; throws NumericalError
/// if the two disagree by more than `tolerance`.
ModelLResult model_L_apply(const GaussianPolynomial& f, const FlatGrid& grid, double tolerance = 1e-6,
                           double step = 1e-3);

/// |int P^N(Z, W) P^N(W, Z') dW - P^N(Z, Z')| by Gauss-Hermite quadrature.
double reproducing_check(const FlatPoint& z, const FlatPoint& zp, int order = 48);

struct LaplacianIdentity {
  double computed;     ///< fourth-order second differences
  double closed_form;  ///< 4 pi p (n - pi p |Z'|^2) exp(-pi p |Z'|^2)
};

/// (Delta_Z exp(-pi p |Z - Z'|^2))|_{Z=0} with Delta = -sum d^2/dZ_j^2.
LaplacianIdentity gaussian_laplacian_identity(double p, const FlatPoint& zp, double step = 1e-3);

}  // namespace bergman
