#include "acceptance_suite.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "contraction_oracle.hpp"
#include "gbbm/divisor_analysis.hpp"
#include "gbbm/dynamics.hpp"
#include "gbbm/index_sets.hpp"
#include "gbbm/kam_check.hpp"
#include "gbbm/normal_form.hpp"
#include "gbbm/parallel.hpp"

namespace gbbm::acceptance {

namespace {

using index_sets::Label;

constexpr long kN1 = 50, kN2 = 2500;

struct Context {
  int threads = 1;
  std::optional<normal_form::NormalFormResult> nf_large;  // (50, 2500), J = 5 n2

  const normal_form::NormalFormResult& large() {
    if (!nf_large) {
      normal_form::NormalFormOptions o;
      o.threads = threads;
      nf_large = normal_form::compute_normal_form(kN1, kN2, 5 * kN2, o);
    }
    return *nf_large;
  }
};

struct Result {
  bool pass;
  std::string detail;
};

Result exact_resonance(Context&) {
  int zeros = 0;
  for (long n = 4; n <= 100; ++n) {
    const std::vector<long> t{1, -2, -2, 3, n, -n};
    if (divisor_analysis::divisor(t) == 0) ++zeros;
  }
  return {zeros == 97, fmt::format("divisor(1,-2,-2,3,n,-n) exactly 0 for {}/97 n in [4,100]", zeros)};
}

Result order6_positivity(Context& c) {
  divisor_analysis::SurveyOptions o;
  o.threads = c.threads;
  const auto r = divisor_analysis::survey_min_divisor(6, divisor_analysis::admissible_labels(6),
                                                      {kN1, kN2}, 5 * kN2, o);
  const bool pos = r.min_abs_divisor && *r.min_abs_divisor > 0;
  return {r.clean() && pos && r.tail.certified && r.tail.uncovered.empty(),
          fmt::format("J=12500, {} canonical / {} ordered tuples, zeros={}, min={:.6e}, tail certified={} over {} "
                      "S-patterns",
                      r.tuples_checked, r.ordered_tuples, r.zero_count, pos ? r.min_abs_divisor->get_d() : 0.0,
                      r.tail.certified, r.tail.patterns)};
}

Result higher_order_positivity(Context& c) {
  divisor_analysis::SurveyOptions o;
  o.threads = c.threads;
  const index_sets::TangentialSet s(kN1, kN2);
  // a single non-S entry is fixed by momentum, so 9 n2 bounds every order-10 tuple
  const auto r10 = divisor_analysis::survey_min_divisor(10, {Label::kDeltaP0, Label::kDeltaP1}, s, 9 * kN2, o);
  const auto r14 = divisor_analysis::survey_min_divisor(14, {Label::kDeltaPP0}, s, kN2, o);
  index_sets::EnumerationOptions eo;
  eo.exclude_normal = true;
  const auto p0 = index_sets::enumerate_admissible(10, {Label::kDeltaP0}, s, kN2, eo).size();
  const auto pp0 = index_sets::enumerate_admissible(14, {Label::kDeltaPP0}, s, kN2, eo).size();
  eo.exclude_normal = false;
  eo.only_normal = true;
  const auto p0n = index_sets::enumerate_admissible(10, {Label::kDeltaP0}, s, kN2, eo).size();
  const auto pp0n = index_sets::enumerate_admissible(14, {Label::kDeltaPP0}, s, kN2, eo).size();
  const bool ok = r10.clean() && r14.clean() && p0 == 0 && pp0 == 0;
  return {ok, fmt::format("order 10 (J={}): {} tuples, zeros={}, min={:.6e}; order 14: {} tuples, zeros={}; "
                          "all-S non-normal: {} (order 10), {} (order 14); all-S normal: {}, {}",
                          r10.jmax, r10.tuples_checked, r10.zero_count,
                          r10.min_abs_divisor ? r10.min_abs_divisor->get_d() : 0.0, r14.tuples_checked,
                          r14.zero_count, p0, pp0, p0n, pp0n)};
}

Result homological(Context& c) {
  const auto& nf = c.large();
  return {nf.residual_zero && nf.reality_ok && nf.momentum_ok,
          fmt::format("J={}: Gtilde {} terms, F {} terms, residual terms {}", nf.jmax, nf.gtilde_terms, nf.f_terms,
                      nf.residual_terms)};
}

Result gbar_closed_forms(Context& c) {
  normal_form::BuildOptions o;
  o.parts.tilde = false;
  o.threads = c.threads;
  const auto g = normal_form::build_G(kN1, kN2, 5 * kN2, o);
  auto frac = [](long n) { return make_rational(n, 1 + n * n); };
  auto coef = [](Rational q) {
    symbolic::Atom a;
    a.rat = std::move(q);
    a.pi_pow = -2;
    return symbolic::SymbolicCoefficient(std::move(a));
  };
  auto mono = [](std::vector<long> e) { return symbolic::Monomial::from(e); };
  const Rational f1 = frac(kN1), f2 = frac(kN2);
  int checked = 0, matched = 0;
  auto expect = [&](const symbolic::Monomial& m, const Rational& q) {
    ++checked;
    if (g.bar.coefficient(m) == coef(q)) ++matched;
  };
  expect(normal_form::action_monomial(kN1, kN2, 3, 0), make_rational(1, 6) * f1 * f1 * f1);
  expect(normal_form::action_monomial(kN1, kN2, 2, 1), make_rational(3, 2) * f1 * f1 * f2);
  const std::vector<long> js{1, 2, 3, 7, 49, 51, 99, 100, 499, 777, 1000, 2499, 2501, 3000, 4999, 5000, 7777, 9999,
                             12000, 12500};
  for (long j : js) {
    const Rational fj = frac(j);
    expect(mono({kN1, kN1, -kN1, -kN1, j, -j}), make_rational(3, 2) * f1 * f1 * fj);
    expect(mono({kN1, -kN1, kN2, -kN2, j, -j}), make_rational(6, 1) * f1 * f2 * fj);
  }
  return {matched == checked && js.size() == 20,
          fmt::format("{}/{} exact matches (n1^3, n1^2 n2, n1^2 j and n1 n2 j families, {} values of j)", matched,
                      checked, js.size())};
}

Result oracle_equivalence(Context& c) {
  const long n1 = 3, n2 = 7, J = 35;
  normal_form::NormalFormOptions o;
  o.threads = c.threads;
  const auto nf = normal_form::compute_normal_form(n1, n2, J, o);  // throws unless exactly real
  const auto ro = oracle::R_coefficients({n1, n2, J});
  const auto to = oracle::T_coefficients({n1, n2, J});
  double rs = 0, ts = 0, worst = 0;
  for (double v : ro) rs = std::max(rs, std::abs(v));
  for (double v : to) ts = std::max(ts, std::abs(v));
  bool real = nf.R.c.size() == 6 && nf.T.c.size() == 8;
  for (int m = 0; m < 6 && real; ++m) worst = std::max(worst, std::abs(nf.R.c[m].value() - ro[m]) / rs);
  for (int m = 0; m < 8 && real; ++m) worst = std::max(worst, std::abs(nf.T.c[m].value() - to[m]) / ts);
  for (const auto& x : nf.R.c) real = real && x.pi_pow == -4;
  for (const auto& x : nf.T.c) real = real && x.pi_pow == -6;
  return {real && rs > 0 && ts > 0 && worst <= 1e-9,
          fmt::format("S=(3,7), J=35: R0..R5, T0..T7 exactly real (q pi^-4, q pi^-6); max deviation from oracle "
                      "{:.3e} of the largest coefficient",
                      worst)};
}

Result frequency_map(Context& c) {
  const auto m = kam_check::derive_frequency_model(c.large());
  const auto w0 = kam_check::omega0_at_origin(m);
  const bool origin = w0[0] == make_rational(kN1, 1 + kN1 * kN1) && w0[1] == make_rational(kN2, 1 + kN2 * kN2) &&
                      kam_check::omega0(m, 0, 0)[0] == w0[0].get_d();
  const double eps = 1e-6, lo = std::sqrt(eps), hi = 4 * lo;
  double max_det = -INFINITY, rel = 0;
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      const double x1 = lo + (hi - lo) * a / 63, x2 = lo + (hi - lo) * b / 63;
      const double d = kam_check::jacobian_det(m, x1, x2);
      max_det = std::max(max_det, d);
      const double cf = kam_check::leading_det_closed_form(kN1, kN2, x1, x2);
      rel = std::max(rel, std::abs(d - cf) / std::abs(cf));
    }
  const double an = kam_check::jacobian_det(m, 2 * lo, 3 * lo);
  const double fd = std::abs(kam_check::jacobian_det_fd(m, 2 * lo, 3 * lo, 1e-6, lo, hi) / an - 1);
  return {origin && max_det < 0 && rel <= 1e-3 && fd <= 1e-5,
          fmt::format("omega0(0) exact={}, max det on 64x64 grid {:.6e}, max rel. deviation from leading closed "
                      "form {:.3e}, finite-difference check {:.3e}",
                      origin, max_det, rel, fd)};
}

Result assumptions(Context& c) {
  const auto& nf = c.large();
  const auto m = kam_check::derive_frequency_model(nf);
  kam_check::AssumptionOptions o;
  o.scaling.threads = c.threads;
  const auto r = kam_check::verify_assumptions(m, 1e-6, 10000, nf.reality_ok, o);
  std::string slopes;
  for (const auto& p : r.c_pieces) slopes += fmt::format(" {}={:.3f}", p.name, p.slope);
  return {r.a_pass && r.b_pass && r.e_pass && r.c_pass,
          fmt::format("A inf|det|={:.3e}; B sup|dOmega|j={:.3e} <= c13={:.3e}; E vacuous; C slopes{}",
                      r.a_inf_abs_det, r.b_sup_dOmega_scaled, r.b_c13, slopes)};
}

Result integrator_physics(Context&) {
  using namespace dynamics;
  // linear phase
  SimConfig lin;
  lin.nonlinear = false;
  lin.dt = 0.01;
  lin.horizon = 1e3;
  lin.stride = 1000;
  SpectralState z(lin.jmax, true);
  for (long j = 1; j <= lin.jmax; ++j) z.set(j, std::polar(1.0 / j, 0.7 * j));
  const auto tl = integrate(lin, z);
  double phase = 0;
  for (long j = 1; j <= lin.jmax; ++j)
    phase = std::max(phase, std::abs(std::arg(tl.final_state[j] / (z[j] * std::polar(1.0, -spectral::lambda_value(j) * 1e3)))));
  // conservation at amplitude 0.1
  SimConfig cons;
  cons.xi1 = cons.xi2 = 1e-4;
  cons.horizon = 1e4;
  const auto tc = integrate(cons);
  // reversal
  SimConfig rev;
  const auto z0 = initial_torus_state(rev.xi1, rev.xi2, 0.3, 1.2, rev.n1, rev.n2, rev.jmax);
  Stepper st(rev);
  auto zr = z0;
  const int n = static_cast<int>(1e3 / rev.dt);
  for (int k = 0; k < n; ++k) st.step(zr, rev.dt);
  for (int k = 0; k < n; ++k) st.step(zr, -rev.dt);
  double back = 0;
  for (long j = -rev.jmax; j <= rev.jmax; ++j)
    if (j) back = std::max(back, std::abs(zr[j] - z0[j]));
  const bool ok = phase < 1e-8 && tc.e1_drift() < 1e-10 && tc.h_drift() < 1e-8 && back < 1e-8;
  return {ok, fmt::format("linear phase error {:.3e} (T=1e3); E1 drift {:.3e}, H drift {:.3e} (T=1e4); reversal "
                          "residual {:.3e} (T=1e3 each way)",
                          phase, tc.e1_drift(), tc.h_drift(), back)};
}

Result frequency_shift(Context& c) {
  normal_form::NormalFormOptions o;
  o.threads = c.threads;
  const auto m = kam_check::derive_frequency_model(normal_form::compute_normal_form(5, 13, 65, o));
  dynamics::ExperimentConfig e;
  e.threads = c.threads;
  const auto r = dynamics::frequency_experiment(e, m);
  return {r.pass(), fmt::format("S=(5,13), xi=(0.05,0.05): measured ({:.12f}, {:.12f}), shift error vs quadratic "
                                "bracket ({:.3e}, {:.3e}); sweep slopes ({:.4f}, {:.4f})",
                                r.main.measured[0], r.main.measured[1], r.main.shift_rel_err[0],
                                r.main.shift_rel_err[1], r.slope[0], r.slope[1])};
}

struct Criterion {
  int id;
  const char* name;
  Result (*fn)(Context&);
};

const Criterion kCriteria[] = {
    {1, "exact-resonance", exact_resonance},
    {2, "divisor-positivity-order-6", order6_positivity},
    {3, "divisor-positivity-orders-10-14", higher_order_positivity},
    {4, "homological-identity", homological},
    {5, "gbar-closed-forms", gbar_closed_forms},
    {6, "R-T-reality-and-oracle", oracle_equivalence},
    {7, "frequency-map", frequency_map},
    {8, "assumption-suite", assumptions},
    {9, "integrator-physics", integrator_physics},
    {10, "frequency-shift-experiment", frequency_shift},
};

}  // namespace

std::vector<Outcome> run_suite(const SuiteOptions& opts, const std::function<void(const Outcome&)>& on_done) {
  Context ctx;
  ctx.threads = resolve_threads(opts.threads);
  std::vector<Outcome> out;
  for (const auto& c : kCriteria) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) continue;
    Outcome o;
    o.id = c.id;
    o.name = c.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto r = c.fn(ctx);
      o.pass = r.pass;
      o.detail = r.detail;
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_done) on_done(o);
    out.push_back(std::move(o));
  }
  return out;
}

std::string format_line(const Outcome& o) {
  return fmt::format("{} {:2d} {}: {} ({:.1f} s)", o.pass ? "PASS" : "FAIL", o.id, o.name, o.detail, o.seconds);
}

nlohmann::json to_json(const std::vector<Outcome>& outcomes) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& o : outcomes) {
    arr.push_back({{"id", o.id}, {"name", o.name}, {"pass", o.pass}, {"detail", o.detail}, {"seconds", o.seconds}});
    all = all && o.pass;
  }
  return {{"criteria", arr}, {"pass", all}};
}

}  // namespace gbbm::acceptance
