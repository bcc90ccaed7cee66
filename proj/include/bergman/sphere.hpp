#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace bergman {

/// Radius of the round sphere carrying the prequantized Fubini-Study form:
/// total area (= Vol(X, dv_X)) is one.
inline constexpr double kSphereRadius = 0.5 * std::numbers::inv_sqrtpi;

/// Dimension of X over C.
inline constexpr int kComplexDim = 1;

using Vec3 = std::array<double, 3>;

/// Tangent vector in the orthonormal frame (e_theta, e_phi) at a base point.
struct TangentVector {
  double z1 = 0.0;
  double z2 = 0.0;

  double norm() const;
};

/// Point of CP^1 in spherical angles.
struct SpherePoint {
  double theta = 0.0;  ///< colatitude in [0, pi]
  double phi = 0.0;    ///< longitude in [0, 2 pi)

  /// Builds a point, wrapping phi into [0, 2 pi) and validating theta.
  static SpherePoint make(double theta, double phi);
  static SpherePoint from_unit_vector(const Vec3& u);
  /// Inverse of affine(); the south pole is not reachable from this chart.
  static SpherePoint from_affine(std::complex<double> z);

  Vec3 unit_vector() const;
  /// z = tan(theta/2) e^{i phi}; undefined at the south pole.
  std::complex<double> affine() const;
  Vec3 e_theta() const;
  Vec3 e_phi() const;
};

/// Product Gauss-Legendre (in cos theta) x uniform-phi rule on the sphere.
/// Node index is ring * n_phi + s. Weights sum to Vol(X, dv_X) = 1.
struct QuadratureGrid {
  int n_theta = 0;
  int n_phi = 0;
  int exactness_degree = 0;
  std::vector<double> ring_x;       ///< cos(theta) per ring
  std::vector<double> ring_weight;  ///< per-ring weight (GL weight / 2)
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double phi(int s) const;
};

QuadratureGrid build_grid(int n_theta, int n_phi);

/// Smallest grid whose declared exactness reaches `degree`.
QuadratureGrid grid_for_degree(int degree);

double central_angle(const SpherePoint& x, const SpherePoint& y);
double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// Injectivity radius pi R.
inline constexpr double kInjectivityRadius = std::numbers::pi * kSphereRadius;

/// Exponential map at x0; Z is expressed in (e_theta, e_phi) at x0.
SpherePoint normal_coordinates(const SpherePoint& x0, const TangentVector& z);
/// Inverse exponential map (x must not be the cut point of x0).
TangentVector log_map(const SpherePoint& x0, const SpherePoint& x);

/// dv_X / dv_{T_{x0}X} in normal coordinates: sin(r/R)/(r/R).
double volume_density_kappa(const SpherePoint& x0, const TangentVector& z);
/// Second-order curvature expansion 1 + <R(Z,e_i)Z,e_i>/6 with sectional
/// curvature 1/R^2, sign fixed so that it agrees with the closed form.
double volume_density_kappa_expansion(const TangentVector& z);

/// Integral against dv_X of a nodal function.
double integrate(std::span<const double> f, const QuadratureGrid& grid);

}  // namespace bergman
