#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gbbm/dynamics.hpp"

using namespace gbbm;
using namespace gbbm::dynamics;

namespace {

std::vector<Complex> tone(double nu, Complex a, double dt, std::size_t n) {
  std::vector<Complex> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = a * std::polar(1.0, -nu * dt * static_cast<double>(k));
  return s;
}

}  // namespace

TEST_CASE("initial torus data") {
  auto z = initial_torus_state(1e-4, 1e-4, 0, 0, 5, 13, 64);
  CHECK(z[5] == Complex(0.1, 0));
  CHECK(z[13].real() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(z[-13] == std::conj(z[13]));
  CHECK(z[6] == Complex(0));
  z = initial_torus_state(0.04, 0.09, std::numbers::pi / 2, 0, 5, 13, 64);
  CHECK(z[5].real() == doctest::Approx(0).scale(1));
  CHECK(z[5].imag() == doctest::Approx(-std::pow(0.04, 0.25)));
  CHECK(std::norm(z[13]) == doctest::Approx(std::sqrt(0.09)));
  CHECK_THROWS_AS(initial_torus_state(1e-4, 1e-4, 0, 0, 5, 13, 12), ConfigError);
}

TEST_CASE("configuration validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.grid = 128;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.grid = 256;  // passes the 4J rule, but aliases the quintic field
  c.horizon = 1;
  CHECK_THROWS_AS(integrate(c), ConfigError);
  c = SimConfig{};
  c.n1 = 13;
  c.n2 = 5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(integrator_from_name("rk4"), ConfigError);
  CHECK(integrator_from_name(integrator_name(Integrator::kImplicitMidpoint)) == Integrator::kImplicitMidpoint);
}

TEST_CASE("linear flow is exact under splitting") {
  SimConfig c;
  c.nonlinear = false;
  c.dt = 0.01;
  c.horizon = 1e3;
  c.stride = 1000;
  SpectralState z(c.jmax, true);
  for (long j = 1; j <= c.jmax; ++j) z.set(j, std::polar(1.0 / j, 0.3 * j));
  const auto tr = integrate(c, z);
  double err = 0;
  for (long j = 1; j <= c.jmax; ++j)
    err = std::max(err, std::abs(tr.final_state[j] - z[j] * std::polar(1.0, -spectral::lambda_value(j) * 1e3)));
  CHECK(err < 1e-8);

  // the plain midpoint rule has the Cayley phase error lambda^3 dt^2 T / 12
  c.integrator = Integrator::kImplicitMidpoint;
  const auto tm = integrate(c, z);
  const double ph = std::arg(tm.final_state[1] / (z[1] * std::polar(1.0, -0.5 * 1e3)));
  CHECK(std::abs(ph) == doctest::Approx(0.125 * 1e-4 * 1e3 / 12).epsilon(1e-3));
}

TEST_CASE("conservation, reality and near-invariance of the torus") {
  SimConfig c;
  c.xi1 = c.xi2 = 1e-4;  // amplitude 0.1
  c.horizon = 2000;
  const auto tr = integrate(c);
  CHECK(tr.e1_drift() < 1e-10);
  CHECK(tr.h_drift() < 1e-8);
  CHECK(tr.max_reality_defect == 0);
  CHECK(tr.times.size() == 4001);
  CHECK(tr.final_state.reality_defect() == 0);

  SimConfig d;
  d.horizon = 2000;
  const auto t2 = integrate(d);
  CHECK(t2.max_normal_energy_ratio < 1e-2);
  CHECK(t2.max_normal_energy_ratio > 0);
  // both schemes conserve the quadratic invariant
  d.integrator = Integrator::kImplicitMidpoint;
  d.horizon = 200;
  CHECK(integrate(d).e1_drift() < 1e-10);
}

TEST_CASE("time reversal") {
  SimConfig c;
  c.xi1 = 0.05;
  c.xi2 = 0.02;
  c.phase1 = 0.4;
  const auto z0 = initial_torus_state(c.xi1, c.xi2, c.phase1, c.phase2, c.n1, c.n2, c.jmax);
  for (auto kind : {Integrator::kSplitting, Integrator::kImplicitMidpoint}) {
    c.integrator = kind;
    Stepper s(c);
    auto z = z0;
    for (int k = 0; k < 2000; ++k) s.step(z, c.dt);
    double moved = 0;
    for (long j = -c.jmax; j <= c.jmax; ++j)
      if (j) moved = std::max(moved, std::abs(z[j] - z0[j]));
    CHECK(moved > 1e-2);
    for (int k = 0; k < 2000; ++k) s.step(z, -c.dt);
    double back = 0;
    for (long j = -c.jmax; j <= c.jmax; ++j)
      if (j) back = std::max(back, std::abs(z[j] - z0[j]));
    CHECK(back < 1e-8);
  }
}

TEST_CASE("frequency extraction") {
  const auto s = tone(0.3, 1.0, 0.1, 100000);
  const auto f = extract_frequencies(s, 0.1, 1);
  CHECK(std::abs(f[0].frequency - 0.3) < 1e-8);
  CHECK(std::abs(f[0].amplitude - 1.0) < 1e-6);

  auto two = tone(0.3, 1.0, 0.1, 100000);
  const auto b = tone(0.07, 0.5, 0.1, 100000);
  for (std::size_t k = 0; k < two.size(); ++k) two[k] += b[k];
  const auto g = extract_frequencies(two, 0.1, 2);
  REQUIRE(g.size() == 2);
  CHECK(std::abs(g[0].frequency - 0.3) < 1e-7);
  CHECK(std::abs(g[1].frequency - 0.07) < 1e-7);
  CHECK(std::abs(g[1].amplitude) == doctest::Approx(0.5).epsilon(1e-5));

  const auto neg = extract_frequencies(tone(-0.2, Complex(0, 2), 0.5, 1 << 15), 0.5, 1);
  CHECK(std::abs(neg[0].frequency + 0.2) < 1e-9);

  CHECK_THROWS_AS(extract_frequencies(tone(0.3, 1.0, 0.1, 1000), 0.1, 1), ConfigError);
  CHECK_THROWS_AS(extract_frequencies(tone(0.3, 1.0, 0.1, 1 << 14), 0.1, 2), ConvergenceError);
}

TEST_CASE("CSV round trip") {
  SimConfig c;
  c.horizon = 50;
  const auto tr = integrate(c);
  std::stringstream ss;
  write_csv(tr, ss);
  const auto back = read_csv(ss);
  CHECK(back.n1 == 5);
  CHECK(back.n2 == 13);
  CHECK(back.xi1 == tr.xi1);
  CHECK(back.sample_dt == tr.sample_dt);
  REQUIRE(back.times.size() == tr.times.size());
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(back.z1[i] == tr.z1[i]);
    CHECK(back.z2[i] == tr.z2[i]);
    CHECK(back.H[i] == tr.H[i]);
    CHECK(back.E1[i] == tr.E1[i]);
  }
  std::stringstream bad("t,a\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad), ConfigError);
}

TEST_CASE("measured frequencies: phase invariance and the normal-form shift") {
  normal_form::NormalFormOptions o;
  o.check_residual = false;
  const auto model = kam_check::derive_frequency_model(normal_form::compute_normal_form(5, 13, 65, o));
  SimConfig c;
  c.horizon = 1e4;
  const auto a = compare(integrate(c), model);
  c.phase1 = 1.1;
  c.phase2 = 2.2;
  const auto b = compare(integrate(c), model);
  CHECK(std::abs(a.measured[0] - b.measured[0]) < 1e-8);
  CHECK(std::abs(a.measured[1] - b.measured[1]) < 1e-8);
  CHECK(a.shift_rel_err[0] < 0.1);
  CHECK(a.shift_rel_err[1] < 0.1);
  CHECK(a.shift_rel_err_full[0] < a.shift_rel_err[0]);
}
