#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "bergman/bergman_ops.hpp"
#include "bergman/error.hpp"
#include "bergman/harmonics.hpp"
#include "bergman/line_bundle.hpp"
#include "bergman/theorem_bench.hpp"

using namespace bergman;
using std::numbers::pi;

namespace {

using boost::math::quadrature::gauss_kronrod;

// dv_X on the sphere reduces to (1/2) dx in x = cos(theta) after the phi integral.
double axial_integral(const std::function<double(double)>& f) {
  return 0.5 * gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 15, 1e-15);
}

const VolumeForm& axial() {
  static const VolumeForm f("axial", {{{1, 0}, -0.3}});
  return f;
}

const VolumeForm& tilted() {
  static const VolumeForm f("tilted", {{{1, -1}, -0.3 * 0.48}, {{1, 0}, -0.3 * 0.64}, {{1, 1}, -0.3 * 0.6}});
  return f;
}

}  // namespace

TEST_CASE("monomial sections are orthonormal for dv_X (beta integrals)") {
  for (int p : {1, 5, 16, 40}) {
    const SectionBasis basis(p);
    for (int k = 0; k <= p; ++k) {
      const double c = (p + 1) * boost::math::binomial_coefficient<double>(p, k);
      CHECK(basis.scaling(k) * basis.scaling(k) == doctest::Approx(c).epsilon(1e-12));
    }
    const GramMatrix g = gram_matrix(basis, VolumeForm(), grid_for_degree(2 * p));
    CHECK((g.entries - Eigen::MatrixXcd::Identity(p + 1, p + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("axial gram matrix is diagonal with adaptive-quadrature entries") {
  const int p = 12;
  const SectionBasis basis(p);
  const GramMatrix g = gram_matrix(basis, axial(), grid_for_degree(2 * p + 1 + 40));
  for (int k = 0; k <= p; ++k) {
    const double c = (p + 1) * boost::math::binomial_coefficient<double>(p, k);
    const double v = c * axial_integral([&](double x) {
      return std::pow((1 + x) / 2, p - k) * std::pow((1 - x) / 2, k) * std::exp(-0.3 * std::sqrt(3.0) * x);
    });
    CHECK(g.entries(k, k).real() == doctest::Approx(v).epsilon(1e-11));
    for (int j = 0; j < k; ++j) CHECK(std::abs(g.entries(k, j)) < 1e-13);
  }
  CHECK(g.condition_estimate >= 1.0);
  CHECK_THROWS_AS(gram_matrix(basis, axial(), build_grid(4, 8)), InvalidArgument);
}

TEST_CASE("Fubini-Study kernel: |P(x,y)| = (p+1) cos^p(d/2R), diagonal p+1") {
  const int p = 20;
  const BergmanEvaluator ev(SectionBasis(p), VolumeForm(), grid_for_degree(2 * p));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const SpherePoint x = SpherePoint::make(pi * u(rng), 2 * pi * u(rng));
    const SpherePoint y = SpherePoint::make(pi * u(rng), 2 * pi * u(rng));
    const double g = central_angle(x, y);
    CHECK(ev.kernel_norm(x, y) == doctest::Approx((p + 1) * std::pow(std::cos(g / 2), p)).epsilon(1e-12).scale(1.0));
    CHECK(ev.kernel_norm(x, x) == doctest::Approx(p + 1.0).epsilon(1e-13));
    CHECK(std::abs(ev.kernel(x, y) - std::conj(ev.kernel(y, x))) < 1e-12);
  }
  CHECK(rank_ratio(p, VolumeForm()) == p + 1.0);
}

TEST_CASE("Bergman kernel reproduces sections of the weighted space") {
  const int p = 9;
  const QuadratureGrid g = grid_for_degree(2 * p + 1 + 30);
  const BergmanEvaluator ev(SectionBasis(p), tilted(), g);
  const std::vector<double> rho = tilted().density_on(g);
  const SpherePoint x = SpherePoint::make(1.3, 2.1);
  const SectionBasis& basis = ev.basis();
  // int P(x, y) s(y) d nu(y) = s(x) for s = s_3.
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * rho[i] * ev.kernel(x, g.nodes[i]) * basis.evaluate(g.nodes[i])(3);
  CHECK(std::abs(acc - basis.evaluate(x)(3)) < 1e-11);
  // Trace of the projection is the dimension.
  double trace = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) trace += g.weights[i] * rho[i] * ev.kernel_norm(g.nodes[i], g.nodes[i]);
  CHECK(trace == doctest::Approx(p + 1.0).epsilon(1e-12));
}

TEST_CASE("omega frame kernel density differs from nu frame by eta(x) eta(y)") {
  const int p = 8;
  const QuadratureGrid g = grid_for_degree(2 * p + 1 + 30);
  const BergmanEvaluator nu(SectionBasis(p), axial(), g, KernelFrame::Nu);
  const BergmanEvaluator om(SectionBasis(p), axial(), g, KernelFrame::Omega);
  const DensityKernel k(nu);
  for (double t1 : {0.3, 1.7})
    for (double t2 : {0.9, 2.8}) {
      const SpherePoint x = SpherePoint::make(t1, 0.4), y = SpherePoint::make(t2, 5.0);
      const double ko = std::norm(om.kernel(x, y));
      CHECK(k(x, y) == doctest::Approx(axial().eta(x) * axial().eta(y) * ko).epsilon(1e-12));
    }
}

TEST_CASE("Q operator equals brute-force pairwise quadrature") {
  const int p = 6;
  const QOperator q(p, tilted(), q_operator_grid(p, tilted(), 3));
  const QuadratureGrid& g = q.grid();
  const BergmanEvaluator ev(SectionBasis(p), tilted(), g);
  const DensityKernel k(ev);
  const std::vector<double> rho = tilted().density_on(g);
  const std::vector<double> f = harmonic_on_grid(2, -1, g);
  const std::vector<double> qf = q.apply(f);
  const double r = rank_ratio(p, tilted());
  for (std::size_t i = 0; i < g.size(); i += 37) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += g.weights[j] * rho[j] * k(g.nodes[i], g.nodes[j]) * f[j];
    CHECK(qf[i] == doctest::Approx(acc / r).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("Q eigenvalues for dv_X: Funk-Hecke integral and closed product") {
  for (int p : {4, 10, 25}) {
    const QOperator q(p, VolumeForm(), q_operator_grid(p, VolumeForm(), 6));
    const HarmonicTransform t(q.grid(), 6);
    for (int l = 0; l <= 6; ++l) {
      const double fh = (p + 1) * axial_integral([&](double c) {
        return std::pow((1 + c) / 2, p) * boost::math::legendre_p(l, c);
      });
      CHECK(std::abs(fs_q_eigenvalue(p, l) - fh) <= 1e-15 + 1e-12 * std::abs(fh));
      const std::vector<double> y = t.basis_function(l, -l / 2);
      const HarmonicCoeffs c = t.analyze(q.apply(y));
      CHECK(c(l, -l / 2) == doctest::Approx(fh).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("Q preserves constants up to the diagonal of P and is self-adjoint in L2(nu)") {
  const int p = 7;
  const QOperator q(p, axial(), q_operator_grid(p, axial(), 4));
  const QuadratureGrid& g = q.grid();
  const std::vector<double> ones(g.size(), 1.0);
  const std::vector<double> q1 = q.apply(ones);
  for (std::size_t i = 0; i < g.size(); i += 11)
    CHECK(q.rank_ratio() * q1[i] == doctest::Approx(q.nu_evaluator().kernel_norm(g.nodes[i], g.nodes[i])).epsilon(1e-12));
  const std::vector<double> a = harmonic_on_grid(2, 1, g), b = harmonic_on_grid(3, 0, g);
  const std::vector<double> qa = q.apply(a), qb = q.apply(b);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    lhs += g.weights[i] * q.rho()[i] * qa[i] * b[i];
    rhs += g.weights[i] * q.rho()[i] * a[i] * qb[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13).scale(1.0));
}

TEST_CASE("off-diagonal sup for dv_X hits the closed form at distance eps") {
  const QuadratureGrid sample = build_grid(8, 16);
  for (int p : {8, 32}) {
    const BergmanEvaluator ev(SectionBasis(p), VolumeForm(), grid_for_degree(2 * p), KernelFrame::Omega);
    const double eps = 0.2;
    const double closed = (p + 1.0) * std::pow(std::cos(eps / kSphereRadius / 2), p) / p;
    CHECK(offdiag_sup(ev, eps, sample) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("near-diagonal origin residual for dv_X is 1/p and the sup shrinks") {
  const SpherePoint x0 = SpherePoint::make(1.1, 0.7);
  double prev = 1e300;
  for (int p : {16, 64}) {
    const BergmanEvaluator ev(SectionBasis(p), VolumeForm(), grid_for_degree(2 * p), KernelFrame::Omega);
    const NearDiagonalResult r = near_diagonal_residual(ev, x0);
    CHECK(r.origin_residual == doctest::Approx(1.0 / p).epsilon(1e-12));
    CHECK(r.sup_residual < prev);
    prev = r.sup_residual;
  }
}
