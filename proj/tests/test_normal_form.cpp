#include <cmath>
#include <numbers>
#include <random>

#include "contraction_oracle.hpp"
#include "doctest.h"
#include "gbbm/divisor_analysis.hpp"
#include "gbbm/normal_form.hpp"
#include "gbbm/spectral_core.hpp"

using namespace gbbm;
using namespace gbbm::symbolic;
using namespace gbbm::normal_form;

namespace {

Monomial mono(std::initializer_list<long> e) { return Monomial::from(std::vector<long>(e)); }

HamiltonianPoly random_quadratic(const PolyMeta& meta, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> pick(1, meta.jmax);
  std::uniform_int_distribution<long> num(-9, 9);
  HamiltonianPoly p(meta);
  for (int k = 0; k < 4; ++k) {
    const long a = pick(rng), b = pick(rng);
    // Momentum need not vanish for the algebraic identities.
    p.add(mono({a, -b}), SymbolicCoefficient::rational(make_rational(num(rng), 1 + k)));
    p.add(mono({a, b}), SymbolicCoefficient::rational(make_rational(num(rng), 2 + k)).times_i());
  }
  return p;
}

HamiltonianPoly sub(HamiltonianPoly a, const HamiltonianPoly& b) {
  a += Rational(-1) * b;
  return a;
}

}  // namespace

TEST_CASE("coefficient algebra") {
  Atom a;
  a.rat = make_rational(3, 4);
  a.pi_pow = -2;
  a.odd = {3, 5};
  Atom b;
  b.rat = make_rational(2, 1);
  b.i_pow = 1;
  b.odd = {5, 7};
  auto p = multiply(a, b);
  CHECK(p.odd == std::vector<std::int32_t>{3, 7});
  CHECK(p.rat == make_rational(3, 2) * spectral::delta_sq(spectral::Mode(5)));
  CHECK(p.i_pow == 1);
  CHECK(std::abs(p.value() - a.value() * b.value()) < 1e-15);
  SymbolicCoefficient c(a);
  CHECK(c.times_i().times_i() == SymbolicCoefficient(a) * SymbolicCoefficient::rational(-1));
  SymbolicCoefficient z = c;
  z -= c;
  CHECK(z.is_zero());
}

TEST_CASE("brackets with Lambda") {
  const PolyMeta meta{50, 2500, 2500};
  const auto lam = build_Lambda(meta);
  CHECK(poisson_bracket(lam, lam).is_zero());
  for (long a : {1L, 7L, 50L, 2500L}) {
    HamiltonianPoly p(meta);
    p.add(mono({a, -a}), SymbolicCoefficient::rational(1));
    CHECK(poisson_bracket(lam, p).is_zero());
  }
  // {Lambda, m} = -i * divisor * m.
  HamiltonianPoly m(meta);
  const std::vector<long> e{50, 50, 50, 50, -2500, 2300};
  m.add(Monomial::from(e), SymbolicCoefficient::rational(1));
  const auto r = poisson_bracket(lam, m);
  REQUIRE(r.size() == 1);
  const auto expected = SymbolicCoefficient::rational(-divisor_analysis::divisor(e)).times_i();
  CHECK(r.coefficient(Monomial::from(e)) == expected);
}

TEST_CASE("antisymmetry, Leibniz and grading") {
  const PolyMeta meta{2, 5, 6};
  for (unsigned seed = 0; seed < 5; ++seed) {
    auto a = random_quadratic(meta, seed);
    auto b = random_quadratic(meta, seed + 100);
    auto c = random_quadratic(meta, seed + 200);
    CHECK(sub(poisson_bracket(a, b), Rational(-1) * poisson_bracket(b, a)).is_zero());
    auto lhs = poisson_bracket(a, product(b, c));
    auto rhs = product(poisson_bracket(a, b), c);
    rhs += product(b, poisson_bracket(a, c));
    CHECK(sub(lhs, rhs).is_zero());
    // Jacobi
    auto j = poisson_bracket(a, poisson_bracket(b, c));
    j += poisson_bracket(b, poisson_bracket(c, a));
    j += poisson_bracket(c, poisson_bracket(a, b));
    CHECK(j.is_zero());
    for (int d : poisson_bracket(a, product(b, c)).degrees()) CHECK(d == 4);
  }
}

TEST_CASE("Gbar closed forms at S=(50,2500)") {
  BuildOptions o;
  o.parts.tilde = false;
  const auto g = build_G(50, 2500, 2500, o);
  const long n1 = 50, n2 = 2500;
  auto rat = [](long a, long b) { return make_rational(a, b); };
  auto frac = [](long n) { return make_rational(n, 1 + n * n); };
  auto expect = [&](Monomial m, Rational q) {
    Atom a;
    a.rat = q;
    a.pi_pow = -2;
    CHECK(g.bar.coefficient(m) == SymbolicCoefficient(a));
  };
  const Rational f1 = frac(n1), f2 = frac(n2);
  expect(action_monomial(n1, n2, 3, 0), rat(1, 6) * f1 * f1 * f1);
  expect(action_monomial(n1, n2, 0, 3), rat(1, 6) * f2 * f2 * f2);
  expect(action_monomial(n1, n2, 2, 1), rat(3, 2) * f1 * f1 * f2);
  expect(action_monomial(n1, n2, 1, 2), rat(3, 2) * f1 * f2 * f2);
  for (long j : {1L, 2L, 3L, 49L, 51L, 100L, 777L, 2499L}) {
    const Rational fj = frac(j);
    expect(mono({n1, n1, -n1, -n1, j, -j}), rat(3, 2) * f1 * f1 * fj);
    expect(mono({n2, n2, -n2, -n2, j, -j}), rat(3, 2) * f2 * f2 * fj);
    expect(mono({n1, -n1, n2, -n2, j, -j}), rat(6, 1) * f1 * f2 * fj);
  }
  CHECK(g.bar.momentum_conserved());
  CHECK(g.bar.reality_holds());
}

TEST_CASE("F6 coefficients and homological identity") {
  const long n1 = 50, n2 = 2500;
  const auto g = build_G(n1, n2, 2500);
  const auto f = build_F6(g.tilde);
  const std::vector<long> e{-2500, 50, 50, 50, 50, 2300};
  const auto m = Monomial::from(e);
  // multiplicity 6!/4! = 30
  Atom a;
  a.rat = make_rational(30, 120) * spectral::delta_sq(spectral::Mode(50)) * spectral::delta_sq(spectral::Mode(50)) /
          -divisor_analysis::divisor(e);
  a.pi_pow = -2;
  a.i_pow = 1;
  a.odd = {2300, 2500};
  CHECK(f.coefficient(m) == SymbolicCoefficient(a));
  CHECK(f.find(action_monomial(n1, n2, 2, 1)) == nullptr);
  CHECK(f.find(mono({1, -2, -2, 3, 7, -7})) == nullptr);
  CHECK(f.reality_holds());
  CHECK(f.momentum_conserved());
  const auto lam = build_Lambda(g.tilde.meta());
  CHECK(homological_residual(lam, g.tilde, f).is_zero());
  // Single monomial and empty polynomial.
  HamiltonianPoly one(g.tilde.meta());
  one.add(m, g.tilde.coefficient(m));
  one.add(m.flipped(), g.tilde.coefficient(m.flipped()));
  CHECK(homological_residual(lam, one, build_F6(one)).is_zero());
  HamiltonianPoly empty(g.tilde.meta());
  CHECK(homological_residual(lam, empty, build_F6(empty)).is_zero());
}

TEST_CASE("F6 refuses a zero divisor") {
  HamiltonianPoly bad(PolyMeta{50, 2500, 2500});
  const std::vector<long> e{1, -2, -2, 3, 7, -7};
  bad.add(Monomial::from(e), g_coefficient(std::vector<long>{-7, -2, -2, 1, 3, 7}));
  CHECK_THROWS_AS(build_F6(bad), ZeroDivisorError);
}

TEST_CASE("R and T vanish without Gtilde") {
  BuildOptions o;
  o.parts.tilde = false;
  auto g = build_G(3, 7, 35, o);
  const auto f = build_F6(g.tilde);
  for (const auto& c : compute_Rbar(g, f).c) CHECK(c.rat == 0);
  for (const auto& c : compute_Tbar(g, f).c) CHECK(c.rat == 0);
}

TEST_CASE("Ghat does not reach the R and T projections") {
  BuildOptions with_hat;
  with_hat.parts.hat = true;
  auto g = build_G(3, 7, 10, with_hat);
  CHECK(g.hat.size() > 0);
  const auto f = build_F6(g.tilde);
  auto r_with = compute_Rbar(g, f);
  auto t_with = compute_Tbar(g, f);
  g.has_hat = false;
  auto r_without = compute_Rbar(g, f);
  auto t_without = compute_Tbar(g, f);
  for (int m = 0; m < 6; ++m) CHECK(r_with.c[m].rat == r_without.c[m].rat);
  for (int m = 0; m < 8; ++m) CHECK(t_with.c[m].rat == t_without.c[m].rat);
}

TEST_CASE("R and T equal the contraction oracle") {
  for (auto [n1, n2] : {std::pair{3L, 7L}, std::pair{5L, 13L}}) {
    const long J = 5 * n2;
    auto nf = compute_normal_form(n1, n2, J);
    CHECK(nf.residual_zero);
    const auto ro = oracle::R_coefficients({n1, n2, J});
    const auto to = oracle::T_coefficients({n1, n2, J});
    double rs = 0, ts = 0;
    for (double v : ro) rs = std::max(rs, std::abs(v));
    for (double v : to) ts = std::max(ts, std::abs(v));
    REQUIRE(rs > 0);
    REQUIRE(ts > 0);
    for (int m = 0; m < 6; ++m) CHECK(std::abs(nf.R.c[m].value() - ro[m]) <= 1e-9 * rs);
    for (int m = 0; m < 8; ++m) CHECK(std::abs(nf.T.c[m].value() - to[m]) <= 1e-9 * ts);
  }
}

TEST_CASE("Lambda agrees with the spectral quadratic energy") {
  const PolyMeta meta{3, 7, 20};
  const NumericPoly lam(build_Lambda(meta));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  spectral::SpectralState z(20, true);
  for (long j = 1; j <= 20; ++j) z.set(j, {g(rng), g(rng)});
  std::vector<Complex> flat(41);
  for (long j = -20; j <= 20; ++j) {
    if (j) flat[static_cast<std::size_t>(j + 20)] = z[j];
  }
  CHECK(lam.evaluate(flat).real() == doctest::Approx(spectral::quadratic_energy(z)).epsilon(1e-12));
}

TEST_CASE("numeric G polynomial matches the grid energy and gradient") {
  BuildOptions o;
  o.parts.hat = true;
  const long J = 9;
  auto g = build_G(3, 7, J, o);
  HamiltonianPoly full = g.bar;
  full += g.tilde;
  full += g.hat;
  const NumericPoly np(full);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gd;
  spectral::SpectralState z(J, false);
  std::vector<Complex> flat(2 * J + 1);
  for (long j = -J; j <= J; ++j) {
    if (!j) continue;
    const Complex v(0.4 * gd(rng), 0.4 * gd(rng));
    z.set_raw(j, v);
    flat[static_cast<std::size_t>(j + J)] = v;
  }
  const Complex e = spectral::sextic_energy(z);
  CHECK(std::abs(np.evaluate(flat) - e) <= 1e-12 * std::abs(e));
  std::vector<Complex> grad(2 * J + 1);
  np.add_gradient(flat, grad);
  const auto gg = spectral::gradient_G(z);
  for (long j = -J; j <= J; ++j) {
    if (!j) continue;
    // gradient_G holds dG/dz_{-j} at slot j.
    CHECK(std::abs(grad[static_cast<std::size_t>(-j + J)] - gg[j]) <= 1e-12 * std::abs(e));
  }
}
