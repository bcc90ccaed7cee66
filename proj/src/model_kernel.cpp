#include "bergman/model_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bergman/error.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

void add_term(GaussianPolynomial::Terms& terms, int i, int j, cplx v) {
  if (v == cplx(0.0)) return;
  terms[{i, j}] += v;
}

// Fourth-order centered first and second differences along one axis.
template <class F>
cplx first_diff(const F& f, FlatPoint w, int axis, double h) {
  auto at = [&](double s) {
    FlatPoint q = w;
    (axis == 0 ? q.z1 : q.z2) += s;
    return f(q);
  };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

template <class F>
cplx second_diff(const F& f, FlatPoint w, int axis, double h) {
  auto at = [&](double s) {
    FlatPoint q = w;
    (axis == 0 ? q.z1 : q.z2) += s;
    return f(q);
  };
  return (-at(2 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2 * h)) / (12.0 * h * h);
}

}  // namespace

cplx pn_eval(const FlatPoint& z, const FlatPoint& zp) {
  const cplx a = z.z();
  const cplx b = zp.z();
  return std::exp(-0.5 * kPi * (z.norm_squared() + zp.norm_squared() - 2.0 * a * std::conj(b)));
}

GaussianPolynomial::GaussianPolynomial(Terms terms, cplx a, cplx b, cplx c)
    : terms_(std::move(terms)), a_(a), b_(b), c_(c) {
  for (const auto& [ij, v] : terms_)
    if (ij.first < 0 || ij.second < 0) throw InvalidArgument("GaussianPolynomial: negative exponent");
}

GaussianPolynomial GaussianPolynomial::model_kernel_section(const FlatPoint& zp) {
  return GaussianPolynomial({{{0, 0}, 1.0}}, kPi * std::conj(zp.z()), 0.0, -0.5 * kPi * zp.norm_squared());
}

cplx GaussianPolynomial::operator()(const FlatPoint& w) const {
  const cplx z = w.z();
  const cplx zb = std::conj(z);
  cplx q = 0.0;
  for (const auto& [ij, v] : terms_) q += v * std::pow(z, ij.first) * std::pow(zb, ij.second);
  return q * std::exp(-0.5 * kPi * w.norm_squared() + a_ * z + b_ * zb + c_);
}

GaussianPolynomial GaussianPolynomial::d_z() const {
  // d/dz (q E) = (dq/dz + q (a - (pi/2) zbar)) E
  Terms out;
  for (const auto& [ij, v] : terms_) {
    const auto [i, j] = ij;
    if (i > 0) add_term(out, i - 1, j, v * static_cast<double>(i));
    add_term(out, i, j, v * a_);
    add_term(out, i, j + 1, -0.5 * kPi * v);
  }
  return GaussianPolynomial(std::move(out), a_, b_, c_);
}

GaussianPolynomial GaussianPolynomial::d_zbar() const {
  Terms out;
  for (const auto& [ij, v] : terms_) {
    const auto [i, j] = ij;
    if (j > 0) add_term(out, i, j - 1, v * static_cast<double>(j));
    add_term(out, i, j, v * b_);
    add_term(out, i + 1, j, -0.5 * kPi * v);
  }
  return GaussianPolynomial(std::move(out), a_, b_, c_);
}

GaussianPolynomial GaussianPolynomial::times_z(cplx scale) const {
  Terms out;
  for (const auto& [ij, v] : terms_) add_term(out, ij.first + 1, ij.second, scale * v);
  return GaussianPolynomial(std::move(out), a_, b_, c_);
}

GaussianPolynomial GaussianPolynomial::times_zbar(cplx scale) const {
  Terms out;
  for (const auto& [ij, v] : terms_) add_term(out, ij.first, ij.second + 1, scale * v);
  return GaussianPolynomial(std::move(out), a_, b_, c_);
}

GaussianPolynomial GaussianPolynomial::scaled(cplx s) const {
  Terms out;
  for (const auto& [ij, v] : terms_) add_term(out, ij.first, ij.second, s * v);
  return GaussianPolynomial(std::move(out), a_, b_, c_);
}

GaussianPolynomial GaussianPolynomial::operator+(const GaussianPolynomial& other) const {
  if (a_ != other.a_ || b_ != other.b_ || c_ != other.c_)
    throw InvalidArgument("GaussianPolynomial: sum needs a common exponential factor");
  Terms out = terms_;
  for (const auto& [ij, v] : other.terms_) out[ij] += v;
  std::erase_if(out, [](const auto& kv) { return kv.second == cplx(0.0); });
  return GaussianPolynomial(std::move(out), a_, b_, c_);
}

GaussianPolynomial model_L_apply(const GaussianPolynomial& f) {
  const GaussianPolynomial inner = f.d_zbar().scaled(2.0) + f.times_z(kPi);
  return inner.d_z().scaled(-2.0) + inner.times_zbar(kPi);
}

FlatGrid gauss_hermite_grid(int order, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("gauss_hermite_grid: scale must be positive");
  const QuadratureRule gh = gauss_hermite(order);
  // int g(W) exp(-pi |W|^2) dW with W = t / sqrt(pi) per axis.
  const double s = 1.0 / std::sqrt(kPi);
  FlatGrid grid;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      grid.nodes.push_back({scale * s * gh.nodes[i], scale * s * gh.nodes[j]});
      grid.weights.push_back(gh.weights[i] * gh.weights[j] / kPi);
    }
  return grid;
}

ModelLResult model_L_apply(const GaussianPolynomial& f, const FlatGrid& grid, double tolerance, double step) {
  const GaussianPolynomial lf = model_L_apply(f);
  ModelLResult out;
  out.values.reserve(grid.nodes.size());
  double scale = 1.0;
  double worst = 0.0;
  for (const FlatPoint& w : grid.nodes) {
    const cplx sym = lf(w);
    out.values.push_back(sym);
    // L f = -(d1^2 + d2^2) f - 2 pi f - 2 pi z df/dz + 2 pi zbar df/dzbar + pi^2 |z|^2 f
    const cplx d1 = first_diff(f, w, 0, step);
    const cplx d2 = first_diff(f, w, 1, step);
    const cplx dz = 0.5 * (d1 - cplx(0.0, 1.0) * d2);
    const cplx dzb = 0.5 * (d1 + cplx(0.0, 1.0) * d2);
    const cplx lap = second_diff(f, w, 0, step) + second_diff(f, w, 1, step);
    const cplx z = w.z();
    const cplx fv = f(w);
    const cplx fd = -lap - 2.0 * kPi * fv - 2.0 * kPi * z * dz + 2.0 * kPi * std::conj(z) * dzb +
                    kPi * kPi * w.norm_squared() * fv;
    scale = std::max(scale, std::abs(sym));
    worst = std::max(worst, std::abs(sym - fd));
  }
  out.fd_residual = worst / scale;
  if (out.fd_residual > tolerance)
    throw NumericalError("model_L_apply: finite-difference cross-check residual exceeds tolerance");
  return out;
}

double reproducing_check(const FlatPoint& z, const FlatPoint& zp, int order) {
  const FlatGrid grid = gauss_hermite_grid(order);
  const cplx a = z.z();
  const cplx bc = std::conj(zp.z());
  const double base = -0.5 * kPi * (z.norm_squared() + zp.norm_squared());
  cplx sum = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const cplx w = grid.nodes[i].z();
    // P^N(Z, W) P^N(W, Z') exp(pi |W|^2)
    sum += grid.weights[i] * std::exp(base + kPi * a * std::conj(w) + kPi * w * bc);
  }
  return std::abs(sum - pn_eval(z, zp));
}

LaplacianIdentity gaussian_laplacian_identity(double p, const FlatPoint& zp, double step) {
  if (!(p >= 1.0)) throw InvalidArgument("gaussian_laplacian_identity: p must be >= 1");
  auto f = [&](const FlatPoint& w) {
    const double d1 = w.z1 - zp.z1;
    const double d2 = w.z2 - zp.z2;
    return cplx(std::exp(-kPi * p * (d1 * d1 + d2 * d2)));
  };
  const FlatPoint origin{};
  const double computed = -(second_diff(f, origin, 0, step) + second_diff(f, origin, 1, step)).real();
  const double r2 = zp.norm_squared();
  const double closed = 4.0 * kPi * p * (1.0 - kPi * p * r2) * std::exp(-kPi * p * r2);
  return {computed, closed};
}

}  // namespace bergman
