#include "bergman/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/error.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace

double TangentVector::norm() const { return std::hypot(z1, z2); }

SpherePoint SpherePoint::make(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi)) throw InvalidArgument("SpherePoint: theta outside [0, pi]");
  double wrapped = std::fmod(phi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  if (wrapped >= 2.0 * kPi) wrapped = 0.0;
  return SpherePoint{theta, wrapped};
}

SpherePoint SpherePoint::from_unit_vector(const Vec3& u) {
  const double n = length(u);
  const double z = std::clamp(u[2] / n, -1.0, 1.0);
  const double rho = std::hypot(u[0], u[1]) / n;
  const double theta = std::atan2(rho, z);
  const double phi = (rho == 0.0) ? 0.0 : std::atan2(u[1], u[0]);
  return make(theta, phi);
}

SpherePoint SpherePoint::from_affine(std::complex<double> z) {
  return make(2.0 * std::atan(std::abs(z)), std::arg(z));
}

Vec3 SpherePoint::unit_vector() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

std::complex<double> SpherePoint::affine() const {
  return std::polar(std::tan(0.5 * theta), phi);
}

Vec3 SpherePoint::e_theta() const {
  const double ct = std::cos(theta);
  return {ct * std::cos(phi), ct * std::sin(phi), -std::sin(theta)};
}

Vec3 SpherePoint::e_phi() const { return {-std::sin(phi), std::cos(phi), 0.0}; }

double QuadratureGrid::phi(int s) const { return 2.0 * kPi * s / n_phi; }

QuadratureGrid build_grid(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) throw InvalidArgument("build_grid: node counts must be >= 2");
  const QuadratureRule gl = gauss_legendre(n_theta);
  QuadratureGrid grid;
  grid.n_theta = n_theta;
  grid.n_phi = n_phi;
  grid.exactness_degree = std::min(2 * n_theta - 1, n_phi - 1);
  grid.ring_x = gl.nodes;
  grid.ring_weight.resize(n_theta);
  grid.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  grid.weights.reserve(grid.nodes.capacity());
  for (int r = 0; r < n_theta; ++r) {
    // dv_X = dx dphi / (4 pi) on the unit-area sphere.
    grid.ring_weight[r] = 0.5 * gl.weights[r];
    const double theta = std::acos(gl.nodes[r]);
    for (int s = 0; s < n_phi; ++s) {
      grid.nodes.push_back(SpherePoint{theta, grid.phi(s)});
      grid.weights.push_back(grid.ring_weight[r] / n_phi);
    }
  }
  return grid;
}

QuadratureGrid grid_for_degree(int degree) {
  const int d = std::max(degree, 1);
  return build_grid(std::max(2, (d + 2) / 2), d + 1);
}

double central_angle(const SpherePoint& x, const SpherePoint& y) {
  const Vec3 u = x.unit_vector();
  const Vec3 v = y.unit_vector();
  return std::atan2(length(cross(u, v)), dot(u, v));
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  return kSphereRadius * central_angle(x, y);
}

SpherePoint normal_coordinates(const SpherePoint& x0, const TangentVector& z) {
  const double r = z.norm();
  if (!(r < kInjectivityRadius)) throw InvalidArgument("normal_coordinates: |Z| beyond injectivity radius");
  if (r == 0.0) return x0;
  const double angle = r / kSphereRadius;
  const Vec3 u0 = x0.unit_vector();
  const Vec3 et = x0.e_theta();
  const Vec3 ep = x0.e_phi();
  const double c = std::cos(angle);
  const double s = std::sin(angle) / r;
  Vec3 u;
  for (int i = 0; i < 3; ++i) u[i] = c * u0[i] + s * (z.z1 * et[i] + z.z2 * ep[i]);
  return SpherePoint::from_unit_vector(u);
}

TangentVector log_map(const SpherePoint& x0, const SpherePoint& x) {
  const Vec3 u0 = x0.unit_vector();
  const Vec3 u = x.unit_vector();
  const double angle = std::atan2(length(cross(u0, u)), dot(u0, u));
  const double c = dot(u0, u);
  Vec3 tangent;
  for (int i = 0; i < 3; ++i) tangent[i] = u[i] - c * u0[i];
  const double tn = length(tangent);
  if (tn == 0.0) return {};
  const double scale = kSphereRadius * angle / tn;
  return {scale * dot(tangent, x0.e_theta()), scale * dot(tangent, x0.e_phi())};
}

double volume_density_kappa(const SpherePoint& /*x0*/, const TangentVector& z) {
  const double t = z.norm() / kSphereRadius;
  if (t < 1e-4) return 1.0 - t * t / 6.0 + t * t * t * t / 120.0;
  return std::sin(t) / t;
}

double volume_density_kappa_expansion(const TangentVector& z) {
  const double r2 = z.z1 * z.z1 + z.z2 * z.z2;
  return 1.0 - r2 / (6.0 * kSphereRadius * kSphereRadius);
}

double integrate(std::span<const double> f, const QuadratureGrid& grid) {
  if (f.size() != grid.size()) throw InvalidArgument("integrate: function size does not match grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += grid.weights[i] * f[i];
  return sum;
}

}  // namespace bergman
