#include "bergman/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "bergman/bergman_ops.hpp"
#include "bergman/error.hpp"
#include "bergman/harmonics.hpp"
#include "bergman/heat.hpp"
#include "bergman/line_bundle.hpp"
#include "bergman/linalg.hpp"
#include "bergman/model_kernel.hpp"
#include "bergman/theorem_bench.hpp"

namespace bergman::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

bool finite(double v) { return std::isfinite(v); }

Check make_check(std::string name, int criterion, double measured, std::string relation, double lo, double hi,
                 bool pass) {
  Check c;
  c.name = std::move(name);
  c.criterion = criterion;
  c.measured = measured;
  c.relation = std::move(relation);
  c.threshold = lo;
  c.threshold_high = hi;
  c.pass = pass && finite(measured);
  return c;
}

// Gram grid for an evaluator at tensor power p.
QuadratureGrid evaluator_grid(int p, const VolumeForm& form) {
  return grid_for_degree(2 * p + form.degree() + (form.is_uniform() ? 0 : 24));
}

std::vector<std::string> row(std::initializer_list<std::string> cells) { return cells; }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Check at_most(std::string name, int criterion, double measured, double threshold) {
  return make_check(std::move(name), criterion, measured, "<=", threshold, threshold, measured <= threshold);
}
Check below(std::string name, int criterion, double measured, double threshold) {
  return make_check(std::move(name), criterion, measured, "<", threshold, threshold, measured < threshold);
}
Check at_least(std::string name, int criterion, double measured, double threshold) {
  return make_check(std::move(name), criterion, measured, ">=", threshold, threshold, measured >= threshold);
}
Check within(std::string name, int criterion, double measured, double low, double high) {
  return make_check(std::move(name), criterion, measured, "in", low, high, measured >= low && measured <= high);
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void Table::write(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

bool CommandOutput::passed() const { return first_failure() == nullptr; }

const Check* CommandOutput::first_failure() const {
  for (const Check& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

// converge: criteria 1, 2 and 9.
CommandOutput run_converge(const RunConfig& config) {
  config.validate();
  const Tolerances& tol = config.tol;
  const int l_max = config.resolved_l_max();
  CommandOutput out;
  out.name = "converge";
  out.details["l_max"] = l_max;
  out.details["tail_bound"] = config.tail_bound;
  out.details["p_list"] = config.p_list;

  Table table{"converge.csv", {"p", "form_id", "norm1", "norm2", "tail_residual"}, {}};
  json forms = json::array();
  bool has_uniform = false;
  double uniform_c1 = 0.0, uniform_c2 = 0.0;
  for (const FormSpec& spec : config.forms) {
    const VolumeForm form = spec.build();
    const RateReport report = rate_report(form, config.p_list, l_max, config.tail_bound);
    json entries = json::array();
    for (const RateEntry& e : report.entries) {
      table.rows.push_back(row({std::to_string(e.p), form.id(), format_number(e.norm1), format_number(e.norm2),
                                format_number(e.tail_residual)}));
      entries.push_back({{"p", e.p},
                         {"norm1", e.norm1},
                         {"norm2", e.norm2},
                         {"tail_residual", e.tail_residual},
                         {"argmax1", {e.argmax1.l, e.argmax1.m}},
                         {"argmax2", {e.argmax2.l, e.argmax2.m}}});
    }
    forms.push_back({{"id", form.id()},
                     {"volume", form.volume()},
                     {"density_floor", form.floor()},
                     {"c_s_bound", form.c_s_bound()},
                     {"line1", {{"slope", report.line1.slope}, {"c_hat", report.line1.c_hat}, {"median", report.line1.median}}},
                     {"line2", {{"slope", report.line2.slope}, {"c_hat", report.line2.c_hat}, {"median", report.line2.median}}},
                     {"entries", entries}});
    if (form.is_uniform() && !has_uniform) {
      has_uniform = true;
      uniform_c1 = report.line1.c_hat;
      uniform_c2 = report.line2.c_hat;
    }
    const RateFit* lines[2] = {&report.line1, &report.line2};
    for (int k = 0; k < 2; ++k) {
      const std::string prefix = form.id() + ".line" + std::to_string(k + 1);
      out.checks.push_back(at_most(prefix + ".slope", k + 1, lines[k]->slope, tol.slope_max));
      out.checks.push_back(at_most(prefix + ".max_over_median", k + 1, lines[k]->c_hat / lines[k]->median,
                                   tol.boundedness_factor));
    }
  }
  for (int k = 1; k <= 2; ++k) {
    out.checks.push_back(at_least("line" + std::to_string(k) + ".forms.count", k, static_cast<double>(config.forms.size()), 3.0));
    out.checks.push_back(at_least("line" + std::to_string(k) + ".forms.includes_dvX", k, has_uniform ? 1.0 : 0.0, 1.0));
  }
  out.details["forms"] = forms;
  out.tables.push_back(std::move(table));

  if (!config.family_t.empty()) {
    std::vector<VolumeForm> family;
    for (double t : config.family_t) family.push_back(axial_family_member(t, config.family_amplitude));
    const UniformityResult u = uniformity_sweep(family, config.p_list, l_max, config.density_floor, config.tail_bound);
    if (!has_uniform) {
      const RateReport base = rate_report(VolumeForm(), config.p_list, l_max, config.tail_bound);
      uniform_c1 = base.line1.c_hat;
      uniform_c2 = base.line2.c_hat;
    }
    Table ut{"uniformity.csv", {"form_id", "t", "c_hat1", "c_hat2"}, {}};
    json rows = json::array();
    for (std::size_t i = 0; i < u.rows.size(); ++i) {
      const UniformityRow& r = u.rows[i];
      ut.rows.push_back(row({r.form_id, format_number(config.family_t[i]), format_number(r.c_hat1),
                             format_number(r.c_hat2)}));
      rows.push_back({{"id", r.form_id}, {"t", config.family_t[i]}, {"c_hat1", r.c_hat1}, {"c_hat2", r.c_hat2},
                      {"density_floor", family[i].floor()}, {"c_s_bound", family[i].c_s_bound()}});
      out.checks.push_back(within(r.form_id + ".c_hat1_finite", 9, r.c_hat1, 0.0, std::numeric_limits<double>::max()));
      out.checks.push_back(within(r.form_id + ".c_hat2_finite", 9, r.c_hat2, 0.0, std::numeric_limits<double>::max()));
      out.checks.push_back(at_most(r.form_id + ".c_hat1_over_dvX", 9, r.c_hat1 / uniform_c1, tol.uniformity_factor));
      out.checks.push_back(at_most(r.form_id + ".c_hat2_over_dvX", 9, r.c_hat2 / uniform_c2, tol.uniformity_factor));
    }
    out.details["uniformity"] = {{"amplitude", config.family_amplitude},
                                 {"floor", config.density_floor},
                                 {"dvX_c_hat1", uniform_c1},
                                 {"dvX_c_hat2", uniform_c2},
                                 {"max_over_min_c_hat1", u.ratio1},
                                 {"max_over_min_c_hat2", u.ratio2},
                                 {"members", rows}};
    out.tables.push_back(std::move(ut));
  }
  return out;
}

// decay: criterion 6.
CommandOutput run_decay(const RunConfig& config) {
  config.validate();
  CommandOutput out;
  out.name = "decay";
  out.details["eps"] = config.eps;
  out.details["p_list"] = config.decay_p_list;
  const QuadratureGrid sample = build_grid(config.grid_n_theta, config.grid_n_phi);
  json forms = json::array();
  for (const FormSpec& spec : config.forms) {
    const VolumeForm form = spec.build();
    Table table{"decay_" + form.id() + ".csv", {"p", "eps", "sup"}, {}};
    std::vector<double> sqrt_p, log_sup, scaled;
    json entries = json::array();
    for (int p : config.decay_p_list) {
      const BergmanEvaluator ev(SectionBasis(p), form, evaluator_grid(p, form), KernelFrame::Omega);
      const double sup = offdiag_sup(ev, config.eps, sample, config.circle_points);
      table.rows.push_back(row({std::to_string(p), format_number(config.eps), format_number(sup)}));
      sqrt_p.push_back(std::sqrt(static_cast<double>(p)));
      log_sup.push_back(std::log(sup));
      scaled.push_back(std::pow(static_cast<double>(p), 5) * sup);
      json e = {{"p", p}, {"sup", sup}, {"p5_sup", scaled.back()}};
      if (form.is_uniform()) {
        const double gamma = config.eps / kSphereRadius;
        const double closed = (p + 1.0) * std::pow(0.5 * (1.0 + std::cos(gamma)), 0.5 * p) / p;
        e["closed_form"] = closed;
        out.checks.push_back(at_most(form.id() + ".p" + std::to_string(p) + ".closed_form_rel", 6,
                                     std::abs(sup - closed) / closed, config.tol.closed_form));
      }
      entries.push_back(e);
    }
    double worst_step = 0.0;
    for (std::size_t i = 1; i < scaled.size(); ++i) worst_step = std::max(worst_step, scaled[i] / scaled[i - 1]);
    const std::string prefix = form.id();
    if (sqrt_p.size() >= 2) {
      const LineFit fit = fit_line(sqrt_p, log_sup);
      out.checks.push_back(below(prefix + ".log_sup_vs_sqrt_p_slope", 6, fit.slope, 0.0));
      out.checks.push_back(at_least(prefix + ".log_sup_vs_sqrt_p_r_squared", 6, fit.r_squared, config.tol.decay_r_squared));
      forms.push_back({{"id", form.id()}, {"slope", fit.slope}, {"intercept", fit.intercept},
                       {"r_squared", fit.r_squared}, {"entries", entries}});
    }
    out.checks.push_back(below(prefix + ".p5_sup_max_step_ratio", 6, worst_step, 1.0));
    out.tables.push_back(std::move(table));
  }
  out.details["forms"] = forms;
  return out;
}

// near-diagonal: criterion 5.
CommandOutput run_near_diagonal(const RunConfig& config) {
  config.validate();
  CommandOutput out;
  out.name = "near-diagonal";
  out.details["window"] = config.window;
  out.details["samples"] = config.window_samples;
  out.details["p_list"] = config.near_p_list;
  json forms = json::array();
  for (const FormSpec& spec : config.forms) {
    const VolumeForm form = spec.build();
    Table table{"near_diagonal_" + form.id() + ".csv", {"p", "residual"}, {}};
    std::vector<double> lp, lr;
    json entries = json::array();
    for (int p : config.near_p_list) {
      const BergmanEvaluator ev(SectionBasis(p), form, evaluator_grid(p, form), KernelFrame::Omega);
      double sup = 0.0, origin = 0.0;
      for (const SpherePoint& x0 : config.base_points) {
        const NearDiagonalResult r = near_diagonal_residual(ev, x0, config.window, config.window_samples);
        sup = std::max(sup, r.sup_residual);
        origin = std::max(origin, r.origin_residual);
      }
      table.rows.push_back(row({std::to_string(p), format_number(sup)}));
      lp.push_back(std::log(static_cast<double>(p)));
      lr.push_back(std::log(sup));
      entries.push_back({{"p", p}, {"residual", sup}, {"origin_residual", origin}});
      if (form.is_uniform())
        out.checks.push_back(at_most(form.id() + ".p" + std::to_string(p) + ".origin_minus_inverse_p", 5,
                                     std::abs(origin - 1.0 / p), 1e-12));
    }
    if (lp.size() >= 2) {
      const LineFit fit = fit_line(lp, lr);
      out.checks.push_back(
          within(form.id() + ".residual_slope", 5, fit.slope, config.tol.near_slope_min, config.tol.near_slope_max));
      forms.push_back({{"id", form.id()}, {"slope", fit.slope}, {"r_squared", fit.r_squared}, {"entries", entries}});
    }
    out.tables.push_back(std::move(table));
  }
  out.details["forms"] = forms;
  return out;
}

// model-check: criterion 8.
CommandOutput run_model_check(const RunConfig& config) {
  config.validate();
  const Tolerances& tol = config.tol;
  CommandOutput out;
  out.name = "model-check";
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disk_point = [&](double radius) {
    const double r = radius * std::sqrt(unit(rng));
    const double a = 2.0 * kPi * unit(rng);
    return FlatPoint{r * std::cos(a), r * std::sin(a)};
  };

  Table table{"model_reproducing.csv", {"z1", "z2", "zp1", "zp2", "residual"}, {}};
  double worst_reproducing = 0.0;
  std::vector<std::pair<FlatPoint, FlatPoint>> pairs{{{0.0, 0.0}, {0.0, 0.0}}};
  for (int i = 0; i < config.model_points; ++i) pairs.push_back({disk_point(config.model_radius), disk_point(config.model_radius)});
  for (const auto& [z, zp] : pairs) {
    const double r = reproducing_check(z, zp, config.hermite_order);
    worst_reproducing = std::max(worst_reproducing, r);
    table.rows.push_back(row({format_number(z.z1), format_number(z.z2), format_number(zp.z1), format_number(zp.z2),
                              format_number(r)}));
  }
  out.checks.push_back(at_most("reproducing.max_residual", 8, worst_reproducing, tol.reproducing));
  out.tables.push_back(std::move(table));

  // L annihilates the model kernel sections; symbolic values on a Hermite grid.
  const FlatGrid grid = gauss_hermite_grid(12);
  double worst_annihilation = 0.0, worst_fd = 0.0;
  for (int i = 0; i < config.model_points; ++i) {
    const GaussianPolynomial f = GaussianPolynomial::model_kernel_section(disk_point(config.model_radius));
    const ModelLResult lf = model_L_apply(f, grid, std::numeric_limits<double>::max());
    double scale = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
      scale = std::max(scale, std::abs(f(grid.nodes[k])));
      worst = std::max(worst, std::abs(lf.values[k]));
    }
    worst_annihilation = std::max(worst_annihilation, worst / scale);
    worst_fd = std::max(worst_fd, lf.fd_residual);
  }
  out.checks.push_back(at_most("annihilation.max_relative_residual", 8, worst_annihilation, tol.annihilation));
  out.checks.push_back(at_most("annihilation.finite_difference_cross_check", 8, worst_fd, tol.finite_difference));

  {
    const GaussianPolynomial ground(GaussianPolynomial::Terms{{{0, 0}, 1.0}});
    const GaussianPolynomial first(GaussianPolynomial::Terms{{{0, 1}, 1.0}});
    const ModelLResult lg = model_L_apply(ground, grid, tol.finite_difference);
    const ModelLResult l1 = model_L_apply(first, grid, tol.finite_difference);
    double g = 0.0, e = 0.0, s = 0.0;
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
      g = std::max(g, std::abs(lg.values[k]));
      e = std::max(e, std::abs(l1.values[k] - 4.0 * kPi * first(grid.nodes[k])));
      s = std::max(s, std::abs(4.0 * kPi * first(grid.nodes[k])));
    }
    out.checks.push_back(at_most("ground_state.residual", 8, g, tol.annihilation));
    out.checks.push_back(at_most("first_level.relative_residual", 8, e / s, tol.annihilation));
  }

  json lap = json::array();
  double worst_lap = 0.0;
  std::vector<std::pair<double, FlatPoint>> cases{{4.0, {0.3, 0.0}}, {4.0, {0.0, 0.0}},
                                                  {2.0, {1.0 / std::sqrt(2.0 * kPi), 0.0}}};
  for (int i = 0; i < 6; ++i) cases.push_back({1.0 + 7.0 * unit(rng), disk_point(0.5)});
  for (const auto& [p, zp] : cases) {
    const LaplacianIdentity li = gaussian_laplacian_identity(p, zp);
    worst_lap = std::max(worst_lap, std::abs(li.computed - li.closed_form));
    lap.push_back({{"p", p}, {"zp", {zp.z1, zp.z2}}, {"computed", li.computed}, {"closed_form", li.closed_form}});
  }
  out.checks.push_back(at_most("laplacian_identity.max_abs_error", 8, worst_lap, tol.laplacian_identity));

  double worst_mod = 0.0, worst_diag = 0.0, worst_herm = 0.0;
  for (int i = 0; i < 4 * config.model_points; ++i) {
    const FlatPoint z = disk_point(config.model_radius);
    const FlatPoint zp = disk_point(config.model_radius);
    const std::complex<double> v = pn_eval(z, zp);
    const double d1 = z.z1 - zp.z1, d2 = z.z2 - zp.z2;
    worst_mod = std::max(worst_mod, std::abs(std::norm(v) - std::exp(-kPi * (d1 * d1 + d2 * d2))));
    worst_diag = std::max(worst_diag, std::abs(pn_eval(z, z) - 1.0));
    worst_herm = std::max(worst_herm, std::abs(v - std::conj(pn_eval(zp, z))));
  }
  out.checks.push_back(at_most("modulus_law.max_abs_error", 8, worst_mod, tol.modulus_law));
  out.checks.push_back(at_most("diagonal_value.max_abs_error", 8, worst_diag, tol.modulus_law));
  out.checks.push_back(at_most("hermitian_symmetry.max_abs_error", 0, worst_herm, tol.modulus_law));
  out.details["laplacian_cases"] = lap;
  out.details["hermite_order"] = config.hermite_order;
  return out;
}

// heat-check: criterion 7.
CommandOutput run_heat_check(const RunConfig& config) {
  config.validate();
  const Tolerances& tol = config.tol;
  CommandOutput out;
  out.name = "heat-check";

  Table table{"heat_trace.csv", {"u", "heat_diag", "scaled_minus_one"}, {}};
  std::vector<double> us, ys;
  const double a = std::log(config.heat_u_min), b = std::log(config.heat_u_max);
  for (int i = 0; i < config.heat_points; ++i) {
    const double u = std::exp(a + (b - a) * i / (config.heat_points - 1));
    const double h = heat_diag(u);
    us.push_back(u);
    ys.push_back(4.0 * kPi * u * h - 1.0);
    table.rows.push_back(row({format_number(u), format_number(h), format_number(ys.back())}));
  }
  out.tables.push_back(std::move(table));
  const double target = 4.0 * kPi / 3.0;
  const std::vector<int> quad{1, 2};
  const std::vector<double> c = fit_powers(us, ys, quad);
  const std::vector<int> lin{1};
  const std::vector<double> c_lin = fit_powers(us, ys, lin);
  out.checks.push_back(below("heat_trace.linear_coefficient_rel_error", 7, std::abs(c[0] - target) / target,
                             tol.heat_coefficient));
  out.details["heat_trace"] = {{"fit", "a u + b u^2"},
                               {"a", c[0]},
                               {"b", c[1]},
                               {"a_expected", target},
                               {"b_expected", 16.0 * kPi * kPi / 15.0},
                               {"linear_only_coefficient", c_lin[0]}};

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int l = config.heat_l_max;
  auto random_coeffs = [&](int l_max) {
    HarmonicCoeffs h(l_max);
    for (double& v : h.c) v = normal(rng);
    return h;
  };
  const HarmonicCoeffs f = random_coeffs(l);
  const HarmonicCoeffs g = random_coeffs(l);
  const double fn = std::sqrt(f.norm_squared());

  out.checks.push_back(at_most("semigroup_derivative.relative_residual", 7,
                               semigroup_derivative_check(f, config.semigroup_u) / fn, tol.semigroup_derivative));
  {
    const HarmonicCoeffs two = heat_apply(heat_apply(f, 0.01), 0.02);
    const HarmonicCoeffs one = heat_apply(f, 0.03);
    double d = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i) d = std::max(d, std::abs(two.c[i] - one.c[i]));
    out.checks.push_back(at_most("semigroup_law.max_abs_error", 7, d / fn, tol.semigroup_law));
  }
  const QuadratureGrid grid = grid_for_degree(4 * l);
  const HarmonicTransform transform(grid, l);
  const double u = 1.0 / (4.0 * kPi * 16.0);
  {
    const std::vector<double> fv = transform.synthesize(f);
    const std::vector<double> hv = transform.synthesize(heat_apply(f, u));
    const double m0 = integrate(fv, grid), m1 = integrate(hv, grid);
    out.checks.push_back(at_most("mass_conservation.abs_error", 7, std::abs(m1 - m0), tol.mass));

    const std::vector<double> gv = transform.synthesize(g);
    const std::vector<double> hg = transform.synthesize(heat_apply(g, u));
    std::vector<double> p1(fv.size()), p2(fv.size());
    for (std::size_t i = 0; i < fv.size(); ++i) {
      p1[i] = hv[i] * gv[i];
      p2[i] = fv[i] * hg[i];
    }
    out.checks.push_back(at_most("self_adjoint.abs_error", 7, std::abs(integrate(p1, grid) - integrate(p2, grid)),
                                 tol.self_adjoint));
    const double ratio = std::sqrt(heat_apply(f, u).norm_squared()) / fn;
    out.checks.push_back(at_most("contraction.norm_ratio", 7, ratio, 1.0));
  }
  {
    // f = g^2 >= 0 is band-limited to 2 l_g.
    const int lg = l / 2;
    const HarmonicCoeffs base = random_coeffs(lg);
    const HarmonicTransform wide(grid, 2 * lg);
    HarmonicCoeffs bc(2 * lg);
    for (int ll = 0; ll <= lg; ++ll)
      for (int m = -ll; m <= ll; ++m) bc(ll, m) = base(ll, m);
    std::vector<double> sq = wide.synthesize(bc);
    for (double& v : sq) v *= v;
    const HarmonicCoeffs sc = wide.analyze(sq);
    const std::vector<double> smoothed = wide.synthesize(heat_apply(sc, u));
    const double lowest = *std::min_element(smoothed.begin(), smoothed.end());
    out.checks.push_back(at_least("positivity.min_value_over_scale", 7, lowest / max_abs(sq), -tol.positivity));
  }
  return out;
}

// identities: criteria 3 and 4.
CommandOutput run_identities(const RunConfig& config) {
  config.validate();
  const Tolerances& tol = config.tol;
  CommandOutput out;
  out.name = "identities";
  const QuadratureGrid sample = build_grid(config.grid_n_theta, config.grid_n_phi);
  const std::span<const SpherePoint> nodes(sample.nodes);

  Table table{"identities.csv", {"p", "form_id", "modulus_residual", "density_residual", "factorization_residual"}, {}};
  json id_details = json::array();
  constexpr int kTestDegree = 4;
  for (const FormSpec& spec : config.forms) {
    const VolumeForm form = spec.build();
    for (int p : config.identity_p_list) {
      const QOperator q(p, form, q_operator_grid(p, form, kTestDegree));
      const BergmanEvaluator& nu = q.nu_evaluator();
      const BergmanEvaluator& om = q.omega_evaluator();
      const Eigen::MatrixXcd en = nu.orthonormal(nodes);
      const Eigen::MatrixXcd eo = om.orthonormal(nodes);
      std::vector<double> eta(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) eta[i] = form.eta(nodes[i]);
      double modulus_res = 0.0, density_res = 0.0;
      for (Eigen::Index i = 0; i < en.cols(); ++i)
        for (Eigen::Index j = 0; j < en.cols(); ++j) {
          const double pn = std::abs(en.col(j).dot(en.col(i)));
          const double po = std::abs(eo.col(j).dot(eo.col(i)));
          // |P_omega| in the h^L frame carries eta^{1/2}(x) eta^{-1/2}(y).
          const double po_h = po * std::sqrt(eta[i] / eta[j]);
          modulus_res = std::max(modulus_res, std::abs(pn - eta[j] * po_h));
          density_res = std::max(density_res, std::abs(pn * pn - eta[i] * eta[j] * po * po));
        }
      // Q through d nu versus through eta(x) K_omega dv_X on every operator node.
      const QuadratureGrid& g = q.grid();
      const HarmonicTransform t(g, kTestDegree);
      double factorization_res = 0.0;
      for (int ll = 0; ll <= kTestDegree; ++ll)
        for (int m = -ll; m <= ll; ++m) {
          const std::vector<double> f = t.basis_function(ll, m);
          const std::vector<double> a = q.apply(f);
          const std::vector<double> b = q.apply_nu(f);
          for (std::size_t k = 0; k < a.size(); ++k) factorization_res = std::max(factorization_res, std::abs(a[k] - b[k]));
        }
      table.rows.push_back(
          row({std::to_string(p), form.id(), format_number(modulus_res), format_number(density_res), format_number(factorization_res)}));
      const std::string prefix = form.id() + ".p" + std::to_string(p);
      out.checks.push_back(below(prefix + ".weight_change_modulus", 4, modulus_res, tol.identity));
      out.checks.push_back(below(prefix + ".weight_change_density", 4, density_res, tol.identity));
      out.checks.push_back(below(prefix + ".operator_factorization", 4, factorization_res, tol.identity));

      // Reproducing: R_p Q(1)(x) = |P(x, x)|.
      const std::vector<double> ones(g.size(), 1.0);
      const std::vector<double> q1 = q.apply_nu(ones);
      double rep = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k)
        rep = std::max(rep, std::abs(q.rank_ratio() * q1[k] - nu.kernel_norm(g.nodes[k], g.nodes[k])));
      out.checks.push_back(below(prefix + ".reproducing_diagonal", 0, rep, tol.identity));
      id_details.push_back({{"form", form.id()}, {"p", p}, {"modulus", modulus_res}, {"density", density_res}, {"factorization", factorization_res}, {"reproducing", rep}});
    }
  }
  out.checks.push_back(at_least("forms.count", 4, static_cast<double>(config.forms.size()), 3.0));
  out.tables.push_back(std::move(table));
  out.details["identities"] = id_details;

  // Closed forms for nu = dv_X.
  const VolumeForm uniform;
  Table cf{"closed_form.csv", {"p", "l", "computed", "closed_form"}, {}};
  json cf_details = json::array();
  for (int p : config.closed_form_p_list) {
    const int lc = static_cast<int>(std::floor(2.0 * std::sqrt(static_cast<double>(p))));
    const OperatorMatrix m = q_operator_matrix(p, uniform, lc);
    double eig = 0.0, off = 0.0;
    for (int i = 0; i < m.matrix.rows(); ++i)
      for (int j = 0; j < m.matrix.cols(); ++j) {
        if (i == j)
          eig = std::max(eig, std::abs(m.matrix(i, i) - fs_q_eigenvalue(p, sh_degree_order(i).l)));
        else
          off = std::max(off, std::abs(m.matrix(i, j)));
      }
    for (int ll = 0; ll <= lc; ++ll)
      cf.rows.push_back(row({std::to_string(p), std::to_string(ll), format_number(m.matrix(sh_index(ll, 0), sh_index(ll, 0))),
                             format_number(fs_q_eigenvalue(p, ll))}));
    const BergmanEvaluator ev(SectionBasis(p), uniform, evaluator_grid(p, uniform));
    const DensityKernel kp(ev);
    const double d = (p + 1.0) * (p + 1.0);
    double diag = 0.0;
    for (const SpherePoint& x : sample.nodes) diag = std::max(diag, std::abs(kp(x, x) - d));
    const double rp = std::abs(rank_ratio(p, uniform) - (p + 1.0));
    const std::string prefix = "dvX.p" + std::to_string(p);
    out.checks.push_back(at_most(prefix + ".q_eigenvalues_max_abs_error", 3, eig, tol.closed_form));
    out.checks.push_back(at_most(prefix + ".q_offdiagonal_max_abs", 3, off, tol.closed_form));
    out.checks.push_back(at_most(prefix + ".kernel_diagonal_max_abs_error", 3, diag, tol.closed_form));
    out.checks.push_back(at_most(prefix + ".rank_ratio_abs_error", 3, rp, 0.0));
    cf_details.push_back({{"p", p}, {"l_max", lc}, {"eigenvalue_error", eig}, {"offdiagonal", off},
                          {"kernel_diagonal_error", diag}, {"rank_ratio_error", rp}});
  }
  out.tables.push_back(std::move(cf));
  out.details["closed_form"] = cf_details;
  return out;
}

CommandOutput run_command(const RunConfig& config) {
  const std::string& s = config.subcommand;
  if (s == "converge") return run_converge(config);
  if (s == "decay") return run_decay(config);
  if (s == "near-diagonal") return run_near_diagonal(config);
  if (s == "model-check") return run_model_check(config);
  if (s == "heat-check") return run_heat_check(config);
  if (s == "identities") return run_identities(config);
  throw InvalidArgument("unknown subcommand '" + s + "'");
}

json summary_json(const CommandOutput& out) {
  json checks = json::array();
  for (const Check& c : out.checks) {
    json j = {{"name", c.name}, {"criterion", c.criterion}, {"measured", c.measured}, {"relation", c.relation}};
    if (c.relation == "in")
      j["threshold"] = {c.threshold, c.threshold_high};
    else
      j["threshold"] = c.threshold;
    j["pass"] = c.pass;
    checks.push_back(j);
  }
  json criteria = json::object();
  for (const Check& c : out.checks) {
    if (c.criterion == 0) continue;
    const std::string key = std::to_string(c.criterion);
    if (!criteria.contains(key)) criteria[key] = true;
    criteria[key] = criteria[key].get<bool>() && c.pass;
  }
  const Check* first = out.first_failure();
  json s = {{"subcommand", out.name},
            {"status", first ? "fail" : "pass"},
            {"exit_code", first ? kExitAcceptance : kExitPass},
            {"first_failure", first ? json(first->name) : json(nullptr)},
            {"criteria", criteria},
            {"checks", checks},
            {"details", out.details}};
  return s;
}

void write_output(const CommandOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const Table& t : out.tables) {
    std::ofstream os(dir / t.file);
    if (!os) throw InvalidArgument("cannot write " + (dir / t.file).string());
    t.write(os);
  }
  std::string base = out.name;
  std::replace(base.begin(), base.end(), '-', '_');
  std::ofstream js(dir / (base + "_summary.json"));
  if (!js) throw InvalidArgument("cannot write summary into " + dir.string());
  js << summary_json(out).dump(2) << '\n';
}

int execute(const RunConfig& config, std::ostream& log, std::ostream& err) {
  auto fail = [&](int code, const char* kind, const std::string& message) {
    json j = {{"subcommand", config.subcommand}, {"status", "error"}, {"exit_code", code},
              {"reason", {{"kind", kind}, {"message", message}}}};
    err << j.dump() << '\n';
    try {
      std::filesystem::create_directories(config.out_dir);
      std::string base = config.subcommand;
      std::replace(base.begin(), base.end(), '-', '_');
      std::ofstream js(config.out_dir / (base + "_summary.json"));
      if (js) js << j.dump(2) << '\n';
    } catch (...) {
    }
    return code;
  };
  try {
    const CommandOutput out = run_command(config);
    write_output(out, config.out_dir);
    for (const Check& c : out.checks)
      log << (c.pass ? "[PASS] " : "[FAIL] ") << out.name << ' ' << c.name << ": " << format_number(c.measured) << ' '
          << c.relation << ' '
          << (c.relation == "in" ? "[" + format_number(c.threshold) + ", " + format_number(c.threshold_high) + "]"
                                 : format_number(c.threshold))
          << '\n';
    if (const Check* f = out.first_failure()) {
      err << json({{"subcommand", out.name}, {"status", "fail"}, {"exit_code", kExitAcceptance},
                   {"first_failure", f->name}, {"measured", f->measured}, {"threshold", f->threshold}})
                 .dump()
          << '\n';
      return kExitAcceptance;
    }
    return kExitPass;
  } catch (const InvalidRunError& e) {
    return fail(kExitInvalidRun, "invalid_run", e.what());
  } catch (const NumericalError& e) {
    return fail(kExitInvalidRun, "numerical_error", e.what());
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    return fail(kExitUsage, msg.find("insufficient points") != std::string::npos ? "fit_failure" : "invalid_argument",
                msg);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitUsage, "io_error", e.what());
  }
}

}  // namespace bergman::cli
