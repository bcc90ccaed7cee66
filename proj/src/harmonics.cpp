#include "bergman/harmonics.hpp"

#include <cmath>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

DegreeOrder sh_degree_order(int index) {
  const int l = static_cast<int>(std::sqrt(static_cast<double>(index)));
  int ll = l;
  while (ll * ll > index) --ll;
  while ((ll + 1) * (ll + 1) <= index) ++ll;
  return {ll, index - ll * ll - ll};
}

void normalized_legendre(int l_max, double x, std::span<double> out) {
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double pmm = 1.0;
  for (int m = 0; m <= l_max; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    out[legendre_index(m, m)] = pmm;
    if (m + 1 > l_max) continue;
    double p_prev = pmm;
    double p_curr = std::sqrt(2.0 * m + 3.0) * x * p_prev;
    out[legendre_index(m + 1, m)] = p_curr;
    for (int l = m + 2; l <= l_max; ++l) {
      const double ll = static_cast<double>(l) * l;
      const double mm = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      const double p_next = a * (x * p_curr - b * p_prev);
      out[legendre_index(l, m)] = p_next;
      p_prev = p_curr;
      p_curr = p_next;
    }
  }
}

std::vector<double> real_harmonics(int l_max, const SpherePoint& x) {
  std::vector<double> leg(legendre_index(l_max, l_max) + 1);
  normalized_legendre(l_max, std::cos(x.theta), leg);
  std::vector<double> out(sh_count(l_max));
  for (int l = 0; l <= l_max; ++l) {
    out[sh_index(l, 0)] = leg[legendre_index(l, 0)];
    for (int m = 1; m <= l; ++m) {
      const double p = kSqrt2 * leg[legendre_index(l, m)];
      out[sh_index(l, m)] = p * std::cos(m * x.phi);
      out[sh_index(l, -m)] = p * std::sin(m * x.phi);
    }
  }
  return out;
}

double real_harmonic(int l, int m, const SpherePoint& x) {
  if (l < 0 || std::abs(m) > l) throw InvalidArgument("real_harmonic: need |m| <= l");
  return real_harmonics(l, x)[sh_index(l, m)];
}

std::vector<double> harmonic_on_grid(int l, int m, const QuadratureGrid& grid) {
  if (l < 0 || std::abs(m) > l) throw InvalidArgument("harmonic_on_grid: need |m| <= l");
  std::vector<double> leg(legendre_index(l, l) + 1);
  std::vector<double> out(grid.size());
  for (int r = 0; r < grid.n_theta; ++r) {
    normalized_legendre(l, grid.ring_x[r], leg);
    const double p = (m == 0 ? 1.0 : kSqrt2) * leg[legendre_index(l, std::abs(m))];
    for (int s = 0; s < grid.n_phi; ++s) {
      const double phi = grid.phi(s);
      const double t = m > 0 ? std::cos(m * phi) : (m < 0 ? std::sin(-m * phi) : 1.0);
      out[static_cast<std::size_t>(r) * grid.n_phi + s] = p * t;
    }
  }
  return out;
}

double HarmonicCoeffs::norm_squared() const {
  double s = 0.0;
  for (double v : c) s += v * v;
  return s;
}

double dot(const HarmonicCoeffs& a, const HarmonicCoeffs& b) {
  if (a.l_max != b.l_max) throw InvalidArgument("dot: band limits differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) s += a.c[i] * b.c[i];
  return s;
}

HarmonicTransform::HarmonicTransform(const QuadratureGrid& grid, int l_max)
    : grid_(&grid), l_max_(l_max), tri_(legendre_index(l_max, l_max) + 1) {
  if (l_max < 0) throw InvalidArgument("HarmonicTransform: l_max must be >= 0");
  if (2 * l_max > grid.exactness_degree)
    throw InvalidArgument("HarmonicTransform: l_max above grid exactness / 2");
  legendre_.resize(static_cast<std::size_t>(grid.n_theta) * tri_);
  for (int r = 0; r < grid.n_theta; ++r)
    normalized_legendre(l_max, grid.ring_x[r],
                        std::span<double>(legendre_.data() + static_cast<std::size_t>(r) * tri_, tri_));
  cos_.resize(static_cast<std::size_t>(l_max + 1) * grid.n_phi);
  sin_.resize(cos_.size());
  for (int m = 0; m <= l_max; ++m)
    for (int s = 0; s < grid.n_phi; ++s) {
      const double phi = grid.phi(s);
      cos_[static_cast<std::size_t>(m) * grid.n_phi + s] = std::cos(m * phi);
      sin_[static_cast<std::size_t>(m) * grid.n_phi + s] = std::sin(m * phi);
    }
}

HarmonicCoeffs HarmonicTransform::analyze(std::span<const double> f) const {
  const QuadratureGrid& g = *grid_;
  if (f.size() != g.size()) throw InvalidArgument("analyze: function size does not match grid");
  HarmonicCoeffs out(l_max_);
  std::vector<double> a(l_max_ + 1), b(l_max_ + 1);
  for (int r = 0; r < g.n_theta; ++r) {
    const double* row = f.data() + static_cast<std::size_t>(r) * g.n_phi;
    for (int m = 0; m <= l_max_; ++m) {
      const double* cm = cos_.data() + static_cast<std::size_t>(m) * g.n_phi;
      const double* sm = sin_.data() + static_cast<std::size_t>(m) * g.n_phi;
      double ca = 0.0, sb = 0.0;
      for (int s = 0; s < g.n_phi; ++s) {
        ca += row[s] * cm[s];
        sb += row[s] * sm[s];
      }
      const double w = g.ring_weight[r] / g.n_phi;
      a[m] = w * ca * (m == 0 ? 1.0 : kSqrt2);
      b[m] = w * sb * kSqrt2;
    }
    const double* leg = legendre_.data() + static_cast<std::size_t>(r) * tri_;
    for (int l = 0; l <= l_max_; ++l) {
      out.c[sh_index(l, 0)] += leg[legendre_index(l, 0)] * a[0];
      for (int m = 1; m <= l; ++m) {
        const double p = leg[legendre_index(l, m)];
        out.c[sh_index(l, m)] += p * a[m];
        out.c[sh_index(l, -m)] += p * b[m];
      }
    }
  }
  return out;
}

std::vector<double> HarmonicTransform::synthesize(const HarmonicCoeffs& c) const {
  const QuadratureGrid& g = *grid_;
  const int lm = std::min(c.l_max, l_max_);
  if (c.l_max > l_max_) throw InvalidArgument("synthesize: coefficients exceed transform band");
  std::vector<double> out(g.size(), 0.0);
  std::vector<double> a(lm + 1), b(lm + 1);
  for (int r = 0; r < g.n_theta; ++r) {
    const double* leg = legendre_.data() + static_cast<std::size_t>(r) * tri_;
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    for (int l = 0; l <= lm; ++l) {
      a[0] += leg[legendre_index(l, 0)] * c.c[sh_index(l, 0)];
      for (int m = 1; m <= l; ++m) {
        const double p = kSqrt2 * leg[legendre_index(l, m)];
        a[m] += p * c.c[sh_index(l, m)];
        b[m] += p * c.c[sh_index(l, -m)];
      }
    }
    double* row = out.data() + static_cast<std::size_t>(r) * g.n_phi;
    for (int m = 0; m <= lm; ++m) {
      const double* cm = cos_.data() + static_cast<std::size_t>(m) * g.n_phi;
      const double* sm = sin_.data() + static_cast<std::size_t>(m) * g.n_phi;
      for (int s = 0; s < g.n_phi; ++s) row[s] += a[m] * cm[s] + b[m] * sm[s];
    }
  }
  return out;
}

std::vector<double> HarmonicTransform::basis_function(int l, int m) const {
  const QuadratureGrid& g = *grid_;
  if (l > l_max_ || std::abs(m) > l) throw InvalidArgument("basis_function: index out of band");
  std::vector<double> out(g.size());
  const int am = std::abs(m);
  const double* trig = (m < 0 ? sin_.data() : cos_.data()) + static_cast<std::size_t>(am) * g.n_phi;
  for (int r = 0; r < g.n_theta; ++r) {
    const double p = (m == 0 ? 1.0 : kSqrt2) * legendre(r, l, am);
    for (int s = 0; s < g.n_phi; ++s) out[static_cast<std::size_t>(r) * g.n_phi + s] = p * trig[s];
  }
  return out;
}

HarmonicCoeffs sh_analyze(std::span<const double> f, const QuadratureGrid& grid, int l_max) {
  return HarmonicTransform(grid, l_max).analyze(f);
}

std::vector<double> sh_synthesize(const HarmonicCoeffs& c, const QuadratureGrid& grid) {
  return HarmonicTransform(grid, c.l_max).synthesize(c);
}

std::vector<std::complex<double>> ring_fourier(std::span<const double> f, const QuadratureGrid& grid,
                                               int max_freq) {
  if (f.size() != grid.size()) throw InvalidArgument("ring_fourier: function size does not match grid");
  const int width = 2 * max_freq + 1;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(grid.n_theta) * width);
  std::vector<double> c(grid.n_phi), s(grid.n_phi);
  for (int n = 0; n <= max_freq; ++n) {
    for (int k = 0; k < grid.n_phi; ++k) {
      c[k] = std::cos(n * grid.phi(k));
      s[k] = std::sin(n * grid.phi(k));
    }
    for (int r = 0; r < grid.n_theta; ++r) {
      const double* row = f.data() + static_cast<std::size_t>(r) * grid.n_phi;
      double re = 0.0, im = 0.0;
      for (int k = 0; k < grid.n_phi; ++k) {
        re += row[k] * c[k];
        im -= row[k] * s[k];
      }
      const std::complex<double> g(re / grid.n_phi, im / grid.n_phi);
      out[static_cast<std::size_t>(r) * width + max_freq + n] = g;
      out[static_cast<std::size_t>(r) * width + max_freq - n] = std::conj(g);
    }
  }
  return out;
}

}  // namespace bergman
