#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bergman/error.hpp"
#include "bergman/model_kernel.hpp"

using namespace bergman;
using std::numbers::pi;

TEST_CASE("flat kernel: diagonal one, modulus law, hermitian") {
  std::mt19937 rng(2);
  std::normal_distribution<double> n(0.0, 0.8);
  for (int i = 0; i < 100; ++i) {
    const FlatPoint z{n(rng), n(rng)}, w{n(rng), n(rng)};
    CHECK(std::abs(pn_eval(z, z) - 1.0) < 1e-14);
    const double d = (z.z1 - w.z1) * (z.z1 - w.z1) + (z.z2 - w.z2) * (z.z2 - w.z2);
    CHECK(std::norm(pn_eval(z, w)) == doctest::Approx(std::exp(-pi * d)).epsilon(1e-13).scale(1.0));
    CHECK(std::abs(pn_eval(z, w) - std::conj(pn_eval(w, z))) < 1e-14);
  }
}

TEST_CASE("flat kernel reproduces itself") {
  CHECK(reproducing_check({0.0, 0.0}, {0.0, 0.0}) < 1e-13);
  CHECK(reproducing_check({1.2, -0.7}, {-0.4, 1.5}) < 1e-10);
  CHECK(reproducing_check({1.9, 0.1}, {-0.6, -0.6}) < 1e-10);
}

TEST_CASE("gauss-hermite plane grid integrates the Gaussian weight") {
  const FlatGrid g = gauss_hermite_grid(20);
  double mass = 0.0, second = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    mass += g.weights[i];
    second += g.weights[i] * g.nodes[i].norm_squared();
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
  // int |W|^2 exp(-pi|W|^2) dW = 2 pi int r^3 exp(-pi r^2) dr = 1 / pi.
  CHECK(second == doctest::Approx(1.0 / pi).epsilon(1e-13));
}

TEST_CASE("gaussian polynomial derivatives match finite differences") {
  const GaussianPolynomial f(GaussianPolynomial::Terms{{{2, 1}, {0.5, -1.0}}, {{0, 3}, 2.0}}, {0.3, 0.1}, {-0.2, 0.4});
  const FlatPoint w{0.4, -0.3};
  const double h = 1e-5;
  auto at = [&](double dx, double dy) { return f({w.z1 + dx, w.z2 + dy}); };
  const std::complex<double> dx = (at(h, 0) - at(-h, 0)) / (2 * h);
  const std::complex<double> dy = (at(0, h) - at(0, -h)) / (2 * h);
  const std::complex<double> i(0.0, 1.0);
  CHECK(std::abs(f.d_z()(w) - 0.5 * (dx - i * dy)) < 1e-8);
  CHECK(std::abs(f.d_zbar()(w) - 0.5 * (dx + i * dy)) < 1e-8);
  CHECK(std::abs(f.times_z()(w) - w.z() * f(w)) < 1e-13);
  CHECK(std::abs(f.times_zbar(2.0)(w) - 2.0 * std::conj(w.z()) * f(w)) < 1e-13);
  CHECK(std::abs((f + f.scaled(-1.0))(w)) < 1e-14);
}

TEST_CASE("model operator annihilates kernel sections and lifts the first level by 4 pi") {
  const FlatGrid g = gauss_hermite_grid(8);
  std::mt19937 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const GaussianPolynomial f = GaussianPolynomial::model_kernel_section({n(rng), n(rng)});
    const ModelLResult r = model_L_apply(f, g);
    for (const auto& v : r.values) CHECK(std::abs(v) < 1e-12);
    CHECK(r.fd_residual < 1e-6);
  }
  const GaussianPolynomial first(GaussianPolynomial::Terms{{{0, 1}, 1.0}});
  const ModelLResult r = model_L_apply(first, g);
  for (std::size_t k = 0; k < g.nodes.size(); ++k) CHECK(std::abs(r.values[k] - 4 * pi * first(g.nodes[k])) < 1e-11);
}

TEST_CASE("gaussian laplacian identity") {
  const LaplacianIdentity zero = gaussian_laplacian_identity(4.0, {0.0, 0.0});
  CHECK(zero.closed_form == doctest::Approx(4 * pi * 4.0));
  CHECK(zero.computed == doctest::Approx(zero.closed_form).epsilon(1e-7));
  // pi p |Z'|^2 = n makes the value vanish.
  const LaplacianIdentity node = gaussian_laplacian_identity(2.0, {1.0 / std::sqrt(2 * pi), 0.0});
  CHECK(std::abs(node.closed_form) < 1e-14);
  CHECK(std::abs(node.computed) < 1e-6);
  const LaplacianIdentity g = gaussian_laplacian_identity(4.0, {0.3, 0.0});
  CHECK(std::abs(g.computed - g.closed_form) < 1e-6);
}
