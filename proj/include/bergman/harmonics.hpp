#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bergman/sphere.hpp"

namespace bergman {

/// Flat index of the real harmonic (l, m), |m| <= l: l^2 + l + m.
constexpr int sh_index(int l, int m) { return l * l + l + m; }
constexpr int sh_count(int l_max) { return (l_max + 1) * (l_max + 1); }
struct DegreeOrder {
  int l;
  int m;
};
DegreeOrder sh_degree_order(int index);

/// Associated Legendre functions normalized so that int_{-1}^{1} P_lm^2 dx = 2
/// (no Condon-Shortley phase), for 0 <= m <= l <= l_max. Layout l(l+1)/2 + m.
void normalized_legendre(int l_max, double x, std::span<double> out);
constexpr int legendre_index(int l, int m) { return l * (l + 1) / 2 + m; }

/// Real spherical harmonics orthonormal for dv_X (unit total mass):
/// m > 0 uses sqrt(2) cos(m phi), m < 0 uses sqrt(2) sin(|m| phi).
double real_harmonic(int l, int m, const SpherePoint& x);
std::vector<double> real_harmonics(int l_max, const SpherePoint& x);
std::vector<double> harmonic_on_grid(int l, int m, const QuadratureGrid& grid);

/// Coefficients c_lm of a function in the real harmonic basis.
struct HarmonicCoeffs {
  int l_max = 0;
  std::vector<double> c;

  HarmonicCoeffs() = default;
  explicit HarmonicCoeffs(int l_max) : l_max(l_max), c(sh_count(l_max), 0.0) {}

  double& operator()(int l, int m) { return c[sh_index(l, m)]; }
  double operator()(int l, int m) const { return c[sh_index(l, m)]; }
  double norm_squared() const;
};

double dot(const HarmonicCoeffs& a, const HarmonicCoeffs& b);

/// Reusable analysis/synthesis between nodal values on a grid and harmonic
/// coefficients up to l_max. Immutable after construction.
class HarmonicTransform {
 public:
  HarmonicTransform(const QuadratureGrid& grid, int l_max);

  int l_max() const { return l_max_; }
  const QuadratureGrid& grid() const { return *grid_; }

  HarmonicCoeffs analyze(std::span<const double> f) const;
  std::vector<double> synthesize(const HarmonicCoeffs& c) const;
  /// Nodal values of a single basis function.
  std::vector<double> basis_function(int l, int m) const;
  /// Normalized Legendre table value at ring r.
  double legendre(int ring, int l, int m) const {
    return legendre_[static_cast<std::size_t>(ring) * tri_ + legendre_index(l, m)];
  }

 private:
  const QuadratureGrid* grid_;
  int l_max_;
  int tri_;
  std::vector<double> legendre_;  // per ring
  std::vector<double> cos_;       // (m, s)
  std::vector<double> sin_;
};

HarmonicCoeffs sh_analyze(std::span<const double> f, const QuadratureGrid& grid, int l_max);
std::vector<double> sh_synthesize(const HarmonicCoeffs& c, const QuadratureGrid& grid);

/// Per-ring discrete Fourier coefficients g_n = (1/n_phi) sum_s f e^{-i n phi_s}
/// for -max_freq <= n <= max_freq; layout ring * (2 max_freq + 1) + (n + max_freq).
std::vector<std::complex<double>> ring_fourier(std::span<const double> f, const QuadratureGrid& grid,
                                               int max_freq);

}  // namespace bergman
