#include "gbbm/normal_form.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "gbbm/divisor_analysis.hpp"
#include "gbbm/index_sets.hpp"
#include "gbbm/parallel.hpp"
#include "gbbm/spectral_core.hpp"

namespace gbbm::normal_form {

using index_sets::Label;
using symbolic::Atom;

HamiltonianPoly build_Lambda(const PolyMeta& meta) {
  HamiltonianPoly p(meta);
  for (long j = 1; j <= meta.jmax; ++j) {
    const long e[2] = {-j, j};
    p.add(Monomial::from(e), SymbolicCoefficient::rational(spectral::lambda(spectral::Mode(j))));
  }
  return p;
}

SymbolicCoefficient g_coefficient(std::span<const long> sorted_entries) {
  Atom a;
  a.rat = Rational(static_cast<unsigned long>(index_sets::multiplicity(sorted_entries)));
  a.rat /= 120;
  a.pi_pow = -2;
  std::map<long, int> by_abs;
  for (long j : sorted_entries) ++by_abs[j < 0 ? -j : j];
  for (const auto& [j, c] : by_abs) {
    const Rational d2 = spectral::delta_sq(spectral::Mode(j));
    for (int k = 0; k < c / 2; ++k) a.rat *= d2;
    if (c % 2) a.odd.push_back(static_cast<std::int32_t>(j));
  }
  return SymbolicCoefficient(std::move(a));
}

namespace {

HamiltonianPoly build_part(const PolyMeta& meta, std::vector<Label> labels, bool only_normal,
                           bool exclude_normal, const BuildOptions& opts) {
  index_sets::EnumerationOptions eo;
  eo.ceiling = opts.ceiling;
  eo.only_normal = only_normal;
  eo.exclude_normal = exclude_normal;
  index_sets::Enumerator en(6, std::move(labels), meta.tangential(), meta.jmax, eo);
  const int nw = resolve_threads(opts.threads);
  std::vector<std::vector<std::pair<Monomial, SymbolicCoefficient>>> local(static_cast<std::size_t>(nw));
  parallel_for(en.work().size(), nw, [&](std::size_t i, int w) {
    en.run(en.work()[i], [&](const index_sets::CanonicalTuple& t) {
      local[static_cast<std::size_t>(w)].emplace_back(Monomial::from(t.entries), g_coefficient(t.entries));
    });
  });
  HamiltonianPoly p(meta);
  for (auto& v : local) {
    for (auto& [m, c] : v) p.add(m, c);
  }
  return p;
}

}  // namespace

GSplit build_G(long n1, long n2, long jmax, const BuildOptions& opts) {
  const PolyMeta meta{n1, n2, jmax};
  GSplit g{HamiltonianPoly(meta), HamiltonianPoly(meta), HamiltonianPoly(meta), false};
  const std::vector<Label> low{Label::kDelta0, Label::kDelta1, Label::kDelta2};
  if (opts.parts.bar) g.bar = build_part(meta, low, true, false, opts);
  if (opts.parts.tilde) g.tilde = build_part(meta, low, false, true, opts);
  if (opts.parts.hat) {
    g.hat = build_part(meta, {Label::kDelta3}, false, false, opts);
    g.has_hat = true;
  }
  return g;
}

HamiltonianPoly build_F6(const HamiltonianPoly& gtilde) {
  HamiltonianPoly f(gtilde.meta());
  for (const auto& [m, c] : gtilde.sorted()) {
    std::vector<long> e(m.entries().begin(), m.entries().end());
    const Rational d = divisor_analysis::divisor(e);
    if (d == 0) {
      throw ZeroDivisorError(fmt::format("zero divisor on the support of Gtilde at ({})", fmt::join(e, ", ")),
                             e);
    }
    // 1/(i d) = -i/d
    SymbolicCoefficient q = *c;
    q *= Rational(-1) / d;
    f.add(m, q.times_i());
  }
  return f;
}

HamiltonianPoly homological_residual(const HamiltonianPoly& lambda, const HamiltonianPoly& gtilde,
                                     const HamiltonianPoly& f, int threads) {
  HamiltonianPoly r = symbolic::poisson_bracket(lambda, f, {}, threads);
  r += gtilde;
  return r;
}

double RealCoefficient::value() const { return rat.get_d() * std::pow(std::numbers::pi, pi_pow); }

nlohmann::json RealCoefficient::to_json() const {
  nlohmann::json j = rational_to_json(rat);
  j["pi_pow"] = pi_pow;
  j["value"] = value();
  return j;
}

Monomial action_monomial(long n1, long n2, int a, int b) {
  std::vector<long> e;
  for (int k = 0; k < a; ++k) {
    e.push_back(n1);
    e.push_back(-n1);
  }
  for (int k = 0; k < b; ++k) {
    e.push_back(n2);
    e.push_back(-n2);
  }
  return Monomial::from(e);
}

namespace {

RealCoefficient to_real(const SymbolicCoefficient& c, int expected_pi, const std::string& what) {
  RealCoefficient r;
  r.pi_pow = expected_pi;
  if (c.is_zero()) return r;
  if (!c.is_exactly_real() || c.atoms().size() != 1) {
    throw VerificationFailure(what + " is not an exact real number: " + c.to_json().dump());
  }
  r.rat = c.atoms().front().rat;
  r.pi_pow = c.atoms().front().pi_pow;
  return r;
}

ActionCoefficients read_actions(const HamiltonianPoly& proj, int degree, int expected_pi,
                                const std::string& name) {
  const long n1 = proj.meta().n1, n2 = proj.meta().n2;
  const int half = degree / 2;
  ActionCoefficients out;
  out.degree = degree;
  std::size_t matched = 0;
  for (int m = 0; m <= half; ++m) {
    const auto mon = action_monomial(n1, n2, half - m, m);
    const auto* c = proj.find(mon);
    if (c) ++matched;
    out.c.push_back(to_real(c ? *c : SymbolicCoefficient{}, expected_pi, fmt::format("{}_{}", name, m)));
  }
  if (matched != proj.size()) {
    throw VerificationFailure(name + " projection contains terms outside the action monomials");
  }
  return out;
}

}  // namespace

ActionCoefficients compute_Rbar(const GSplit& g, const HamiltonianPoly& f, int threads) {
  HamiltonianPoly a = g.bar;
  a += make_rational(1, 2) * g.tilde;
  if (g.has_hat) a += g.hat;
  auto proj = symbolic::poisson_bracket(a, f, {0, true}, threads);
  auto r = read_actions(proj, 10, -4, "R");
  r.contracted_terms = proj.size();
  return r;
}

ActionCoefficients compute_Tbar(const GSplit& g, const HamiltonianPoly& f, int threads) {
  HamiltonianPoly a = make_rational(1, 2) * g.bar;
  a += make_rational(1, 3) * g.tilde;
  if (g.has_hat) a += make_rational(1, 2) * g.hat;
  // A final contraction against F removes the contracted non-S entry from
  // both factors, so only intermediates with at most one non-S entry can
  // reach the all-S projection.
  auto inner = symbolic::poisson_bracket(a, f, {1, false}, threads);
  auto proj = symbolic::poisson_bracket(inner, f, {0, true}, threads);
  auto t = read_actions(proj, 14, -6, "T");
  t.contracted_terms = inner.size();
  return t;
}

GbarTable read_Gbar(const HamiltonianPoly& gbar) {
  const long n1 = gbar.meta().n1, n2 = gbar.meta().n2;
  GbarTable t;
  t.g30 = to_real(gbar.coefficient(action_monomial(n1, n2, 3, 0)), -2, "Gbar(3,0)");
  t.g21 = to_real(gbar.coefficient(action_monomial(n1, n2, 2, 1)), -2, "Gbar(2,1)");
  t.g12 = to_real(gbar.coefficient(action_monomial(n1, n2, 1, 2)), -2, "Gbar(1,2)");
  t.g03 = to_real(gbar.coefficient(action_monomial(n1, n2, 0, 3)), -2, "Gbar(0,3)");
  bool first = true;
  const index_sets::TangentialSet s(n1, n2);
  for (long j = 1; j <= gbar.meta().jmax; ++j) {
    if (s.contains(j)) continue;
    const Rational lam = spectral::lambda(spectral::Mode(j));
    auto per_j = [&](std::vector<long> e, const char* what) {
      e.push_back(j);
      e.push_back(-j);
      auto c = to_real(gbar.coefficient(Monomial::from(e)), -2, what);
      c.rat /= lam;
      return c;
    };
    auto h1 = per_j({n1, n1, -n1, -n1}, "Gbar(2,0;j)");
    auto h2 = per_j({n2, n2, -n2, -n2}, "Gbar(0,2;j)");
    auto h12 = per_j({n1, -n1, n2, -n2}, "Gbar(1,1;j)");
    if (first) {
      t.h1 = h1;
      t.h2 = h2;
      t.h12 = h12;
      first = false;
    } else if (h1.rat != t.h1.rat || h2.rat != t.h2.rat || h12.rat != t.h12.rat) {
      t.j_independent = false;
    }
    ++t.j_checked;
  }
  return t;
}

NormalFormResult compute_normal_form(long n1, long n2, long jmax, const NormalFormOptions& opts) {
  NormalFormResult r;
  r.n1 = n1;
  r.n2 = n2;
  r.jmax = jmax;
  BuildOptions bo;
  bo.threads = opts.threads;
  bo.ceiling = opts.ceiling;
  const GSplit g = build_G(n1, n2, jmax, bo);
  r.gbar_terms = g.bar.size();
  r.gtilde_terms = g.tilde.size();
  const HamiltonianPoly f = build_F6(g.tilde);
  r.f_terms = f.size();
  r.momentum_ok = g.bar.momentum_conserved() && g.tilde.momentum_conserved() && f.momentum_conserved();
  r.reality_ok = g.bar.reality_holds() && g.tilde.reality_holds() && f.reality_holds();
  if (opts.check_residual) {
    const auto res = homological_residual(build_Lambda(g.tilde.meta()), g.tilde, f, opts.threads);
    r.residual_terms = res.size();
    r.residual_zero = res.is_zero();
  }
  r.gbar = read_Gbar(g.bar);
  r.R = compute_Rbar(g, f, opts.threads);
  if (opts.compute_T) r.T = compute_Tbar(g, f, opts.threads);
  return r;
}

nlohmann::json to_json(const NormalFormResult& r) {
  nlohmann::json j;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["jmax"] = r.jmax;
  nlohmann::json gbar;
  gbar["actions"] = nlohmann::json::array({
      nlohmann::json{{"a", 3}, {"b", 0}, {"coefficient", r.gbar.g30.to_json()}},
      nlohmann::json{{"a", 2}, {"b", 1}, {"coefficient", r.gbar.g21.to_json()}},
      nlohmann::json{{"a", 1}, {"b", 2}, {"coefficient", r.gbar.g12.to_json()}},
      nlohmann::json{{"a", 0}, {"b", 3}, {"coefficient", r.gbar.g03.to_json()}},
  });
  gbar["normal_per_lambda_j"] = {{"I1^2", r.gbar.h1.to_json()},
                                 {"I2^2", r.gbar.h2.to_json()},
                                 {"I1*I2", r.gbar.h12.to_json()},
                                 {"j_checked", r.gbar.j_checked},
                                 {"j_independent", r.gbar.j_independent}};
  j["Gbar"] = gbar;
  auto coeffs = [](const ActionCoefficients& a) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : a.c) arr.push_back(c.to_json());
    return arr;
  };
  j["R"] = coeffs(r.R);
  j["T"] = coeffs(r.T);
  j["homological_residual"] = {{"zero", r.residual_zero}, {"terms", r.residual_terms}};
  j["terms"] = {{"Gbar", r.gbar_terms}, {"Gtilde", r.gtilde_terms}, {"F", r.f_terms}};
  j["reality"] = r.reality_ok;
  j["momentum"] = r.momentum_ok;
  return j;
}

}  // namespace gbbm::normal_form
