#include "gbbm/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gbbm/errors.hpp"
#include "gbbm/index_sets.hpp"
#include "gbbm/parallel.hpp"

namespace gbbm::dynamics {

Integrator integrator_from_name(const std::string& name) {
  if (name == "splitting") return Integrator::kSplitting;
  if (name == "implicit-midpoint") return Integrator::kImplicitMidpoint;
  throw ConfigError("unknown integrator '" + name + "'");
}

std::string integrator_name(Integrator i) {
  return i == Integrator::kSplitting ? "splitting" : "implicit-midpoint";
}

void SimConfig::validate() const {
  const index_sets::TangentialSet s(n1, n2);  // throws on a bad pair
  if (jmax < n2) throw ConfigError("jmax must be at least n2");
  if (!(xi1 > 0) || !(xi2 > 0)) throw ConfigError("xi must have positive components");
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  // fastest linear frequency is lambda_1 = 1/2
  if (dt * 0.5 > 0.1) throw ConfigError(fmt::format("dt = {} violates dt * max lambda <= 0.1", dt));
  if (!(horizon > 0)) throw ConfigError("horizon must be positive");
  if (stride < 1) throw ConfigError("stride must be at least 1");
  if (grid != 0 && grid < 4 * static_cast<std::size_t>(jmax)) throw ConfigError("grid must be at least 4 jmax");
  if (!(solver_tolerance > 0) || max_iterations < 1) throw ConfigError("bad solver controls");
}

long SimConfig::steps() const { return std::lround(horizon / dt); }

SpectralState initial_torus_state(double xi1, double xi2, double phase1, double phase2, long n1, long n2,
                                  int jmax) {
  if (n2 > jmax || n1 > jmax) throw ConfigError("tangential modes exceed jmax");
  if (xi1 < 0 || xi2 < 0) throw ConfigError("xi must be nonnegative");
  SpectralState z(jmax, true);
  z.set(n1, std::polar(std::pow(xi1, 0.25), -phase1));
  z.set(n2, std::polar(std::pow(xi2, 0.25), -phase2));
  return z;
}

// ---------------------------------------------------------------------------

Stepper::Stepper(const SimConfig& cfg) : cfg_(cfg) {
  if (cfg.nonlinear) eval_.emplace(cfg.jmax, cfg.grid);
  work_ = SpectralState(cfg.jmax, true);
  mid_ = work_;
  next_ = work_;
}

void Stepper::linear(SpectralState& z, double h) const {
  for (long j = 1; j <= z.jmax(); ++j) z.set(j, z[j] * std::polar(1.0, -spectral::lambda_value(j) * h));
}

void Stepper::field(const SpectralState& z, SpectralState& out) {
  eval_->gradient(z, out);
  auto d = out.data();
  const std::size_t half = d.size() / 2;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Complex g = d[i];
    d[i] = i < half ? Complex(0, 1) * g : Complex(0, -1) * g;  // -i sgn(j) g
  }
}

void Stepper::step(SpectralState& z, double h) {
  if (!cfg_.nonlinear) {
    if (cfg_.integrator == Integrator::kSplitting) {
      linear(z, h);
    } else {
      for (long j = 1; j <= z.jmax(); ++j) {
        const Complex a(0, -spectral::lambda_value(j) * h / 2);
        z.set(j, z[j] * (1.0 + a) / (1.0 - a));
      }
    }
    last_iterations_ = 0;
    return;
  }
  const bool split = cfg_.integrator == Integrator::kSplitting;
  if (split) linear(z, h / 2);
  auto z0 = z.data();
  const std::size_t n = z0.size();
  double scale = 0;
  for (const auto& c : z0) scale = std::max(scale, std::abs(c));
  const double tol = cfg_.solver_tolerance * std::max(scale, 1e-300);
  // midpoint m solves m = z0 + (h/2) f(m); for the full scheme the linear part is inverted exactly
  std::vector<Complex> inv;
  if (!split) {
    inv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const long j = SpectralState::index_to_mode(i, z.jmax());
      const double lam = spectral::lambda_value(std::labs(j)) * (j > 0 ? 1.0 : -1.0);
      inv[i] = 1.0 / (1.0 + Complex(0, lam * h / 2));
    }
  }
  auto m = mid_.data();
  std::copy(z0.begin(), z0.end(), m.begin());
  int it = 0;
  for (;; ++it) {
    if (it >= cfg_.max_iterations)
      throw ConvergenceError(fmt::format("midpoint iteration did not reach {} in {} sweeps", tol, it));
    field(mid_, work_);
    const auto f = work_.data();
    auto nx = next_.data();
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex v = z0[i] + 0.5 * h * f[i];
      if (!split) v *= inv[i];
      diff = std::max(diff, std::abs(v - m[i]));
      nx[i] = v;
    }
    std::copy(nx.begin(), nx.end(), m.begin());
    if (diff <= tol) break;
  }
  for (std::size_t i = 0; i < n; ++i) z0[i] = 2.0 * m[i] - z0[i];
  last_iterations_ = it + 1;
  if (split) linear(z, h / 2);
}

double Stepper::hamiltonian(const SpectralState& z) {
  double h = spectral::quadratic_energy(z);
  if (eval_) h += eval_->sextic_energy(z).real();
  return h;
}

// ---------------------------------------------------------------------------

double Trajectory::h_drift() const {
  double d = 0;
  for (double h : H) d = std::max(d, std::abs(h - H.front()));
  return H.empty() ? 0 : d / std::abs(H.front());
}

double Trajectory::e1_drift() const {
  double d = 0;
  for (double e : E1) d = std::max(d, std::abs(e - E1.front()));
  return E1.empty() ? 0 : d / E1.front();
}

Trajectory integrate(const SimConfig& cfg) {
  cfg.validate();
  return integrate(cfg, initial_torus_state(cfg.xi1, cfg.xi2, cfg.phase1, cfg.phase2, cfg.n1, cfg.n2, cfg.jmax));
}

Trajectory integrate(const SimConfig& cfg, SpectralState z) {
  cfg.validate();
  if (z.jmax() != cfg.jmax || !z.is_real()) throw ConfigError("initial state must be real with the configured jmax");
  Stepper stepper(cfg);
  Trajectory tr;
  tr.n1 = cfg.n1;
  tr.n2 = cfg.n2;
  tr.xi1 = cfg.xi1;
  tr.xi2 = cfg.xi2;
  tr.sample_dt = cfg.dt * cfg.stride;
  const long steps = cfg.steps();
  const std::size_t samples = static_cast<std::size_t>(steps / cfg.stride) + 1;
  tr.times.reserve(samples);
  tr.z1.reserve(samples);
  tr.z2.reserve(samples);
  tr.H.reserve(samples);
  tr.E1.reserve(samples);
  auto record = [&](long k) {
    tr.times.push_back(static_cast<double>(k) * cfg.dt);
    tr.z1.push_back(z[cfg.n1]);
    tr.z2.push_back(z[cfg.n2]);
    tr.H.push_back(stepper.hamiltonian(z));
    const double e1 = spectral::sobolev_energy(z);
    tr.E1.push_back(e1);
    const double es = 2 * (cfg.n1 * std::norm(z[cfg.n1]) + cfg.n2 * std::norm(z[cfg.n2]));
    tr.max_normal_energy_ratio = std::max(tr.max_normal_energy_ratio, (e1 - es) / es);
    tr.max_reality_defect = std::max(tr.max_reality_defect, z.reality_defect());
    if (cfg.record_states) tr.states.push_back(z);
    const double dh = std::abs(tr.H.back() - tr.H.front()) / std::abs(tr.H.front());
    const double de = std::abs(e1 - tr.E1.front()) / tr.E1.front();
    if (dh > cfg.drift_tolerance || de > cfg.drift_tolerance)
      throw VerificationFailure(
          fmt::format("conserved quantity drift at t = {}: H {:.3e}, E1 {:.3e}", tr.times.back(), dh, de));
  };
  record(0);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(z, cfg.dt);
    if (k % cfg.stride == 0) record(k);
  }
  tr.final_state = std::move(z);
  return tr;
}

// ---------------------------------------------------------------------------

void write_csv(const Trajectory& t, std::ostream& out) {
  fmt::print(out, "# n1={} n2={} xi1={:.17g} xi2={:.17g} sample_dt={:.17g}\n", t.n1, t.n2, t.xi1, t.xi2,
             t.sample_dt);
  out << "t,re_z_n1,im_z_n1,re_z_n2,im_z_n2,H,E1\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", t.times[i], t.z1[i].real(),
               t.z1[i].imag(), t.z2[i].real(), t.z2[i].imag(), t.H[i], t.E1[i]);
}

Trajectory read_csv(std::istream& in) {
  Trajectory t;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string kv;
      while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = kv.substr(0, eq);
        const double v = std::stod(kv.substr(eq + 1));
        if (k == "n1") t.n1 = std::lround(v);
        else if (k == "n2") t.n2 = std::lround(v);
        else if (k == "xi1") t.xi1 = v;
        else if (k == "xi2") t.xi2 = v;
        else if (k == "sample_dt") t.sample_dt = v;
      }
      continue;
    }
    if (!header) {
      if (line.rfind("t,", 0) != 0) throw ConfigError("trajectory CSV lacks its header row");
      header = true;
      continue;
    }
    double v[7];
    std::istringstream ss(line);
    for (int c = 0; c < 7; ++c) {
      std::string cell;
      if (!std::getline(ss, cell, ',')) throw ConfigError(fmt::format("short row at line {}", lineno));
      try {
        v[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("bad number at line {}", lineno));
      }
    }
    t.times.push_back(v[0]);
    t.z1.emplace_back(v[1], v[2]);
    t.z2.emplace_back(v[3], v[4]);
    t.H.push_back(v[5]);
    t.E1.push_back(v[6]);
  }
  if (t.n1 <= 0 || t.n2 <= 0) throw ConfigError("trajectory CSV lacks the n1/n2 metadata line");
  t.max_normal_energy_ratio = std::nan("");  // not part of the file
  if (t.times.size() >= 2 && t.sample_dt == 0) t.sample_dt = t.times[1] - t.times[0];
  return t;
}

// ---------------------------------------------------------------------------

namespace {

struct Windowed {
  std::span<const Complex> s;
  const std::vector<double>& w;
  double dt;

  // F(nu) = sum w_k s_k e^{i nu t_k} and its nu-derivative
  std::pair<Complex, Complex> eval(double nu) const {
    Complex f = 0, df = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double t = static_cast<double>(k) * dt;
      const Complex e = w[k] * s[k] * std::polar(1.0, nu * t);
      f += e;
      df += Complex(0, t) * e;
    }
    return {f, df};
  }
  double slope(double nu) const {
    const auto [f, df] = eval(nu);
    return 2 * (std::conj(f) * df).real();
  }
};

}  // namespace

std::vector<Tone> extract_frequencies(std::span<const Complex> signal, double dt, int count) {
  const std::size_t n = signal.size();
  if (n < (1u << 14)) throw ConfigError("frequency extraction needs at least 2^14 samples");
  if (!(dt > 0) || count < 1) throw ConfigError("bad sampling step or tone count");
  std::vector<double> w(n);
  double wsum = 0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 * (1 - std::cos(2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1)));
    wsum += w[k];
  }
  std::vector<Complex> residual(signal.begin(), signal.end());
  std::vector<Complex> buf(n);
  fftw_plan plan;
  {
    std::lock_guard lock(spectral::planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf.data()),
                            reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  const double bin = 2 * std::numbers::pi / (static_cast<double>(n) * dt);
  std::vector<Tone> tones;
  double first = 0;
  try {
    for (int c = 0; c < count; ++c) {
      for (std::size_t k = 0; k < n; ++k) buf[k] = w[k] * residual[k];
      fftw_execute(plan);
      std::size_t peak = 0;
      for (std::size_t k = 1; k < n; ++k)
        if (std::abs(buf[k]) > std::abs(buf[peak])) peak = k;
      const long m = peak < n / 2 ? static_cast<long>(peak) : static_cast<long>(peak) - static_cast<long>(n);
      const double nu0 = -static_cast<double>(m) * bin;  // exp(-i nu t) peaks at bin -nu
      const Windowed fw{residual, w, dt};
      double a = nu0 - bin, b = nu0 + bin;
      double fa = fw.slope(a), fb = fw.slope(b);
      if (!(fa > 0 && fb < 0)) {
        a = nu0 - 2 * bin;
        b = nu0 + 2 * bin;
        fa = fw.slope(a);
        fb = fw.slope(b);
      }
      if (!(fa > 0 && fb < 0)) throw ConvergenceError(fmt::format("tone {} is not resolvable", c + 1));
      boost::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(
          [&](double x) { return fw.slope(x); }, a, b, fa, fb,
          [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)); }, iters);
      const double nu = 0.5 * (root.first + root.second);
      const Complex amp = fw.eval(nu).first / wsum;
      if (c == 0) first = std::abs(amp);
      if (!(std::abs(amp) > 1e-12 * first)) throw ConvergenceError(fmt::format("tone {} is not resolvable", c + 1));
      tones.push_back({nu, amp});
      for (std::size_t k = 0; k < n; ++k)
        residual[k] -= amp * std::polar(1.0, -nu * static_cast<double>(k) * dt);
    }
  } catch (...) {
    std::lock_guard lock(spectral::planner_mutex());
    fftw_destroy_plan(plan);
    throw;
  }
  std::lock_guard lock(spectral::planner_mutex());
  fftw_destroy_plan(plan);
  return tones;
}

// ---------------------------------------------------------------------------

RunComparison compare(const Trajectory& t, const kam_check::FrequencyModel& model) {
  if (t.n1 != model.n1 || t.n2 != model.n2) throw ConfigError("trajectory and model disagree on S");
  RunComparison c;
  c.xi1 = t.xi1;
  c.xi2 = t.xi2;
  c.measured = {extract_frequencies(t.z1, t.sample_dt, 1)[0].frequency,
                extract_frequencies(t.z2, t.sample_dt, 1)[0].frequency};
  c.linear = {model.lam1, model.lam2};
  c.predicted_quadratic = kam_check::omega0(model.without_corrections(), t.xi1, t.xi2);
  c.predicted_full = kam_check::omega0(model, t.xi1, t.xi2);
  for (int l = 0; l < 2; ++l) {
    const double shift = c.measured[l] - c.linear[l];
    c.shift_rel_err[l] = std::abs(shift - (c.predicted_quadratic[l] - c.linear[l])) /
                         std::abs(c.predicted_quadratic[l] - c.linear[l]);
    c.shift_rel_err_full[l] =
        std::abs(shift - (c.predicted_full[l] - c.linear[l])) / std::abs(c.predicted_full[l] - c.linear[l]);
  }
  c.h_drift = t.h_drift();
  c.e1_drift = t.e1_drift();
  c.normal_energy_ratio = t.max_normal_energy_ratio;
  return c;
}

ExperimentReport frequency_experiment(const ExperimentConfig& cfg, const kam_check::FrequencyModel& model) {
  cfg.sim.validate();
  if (cfg.sweep.size() < 2) throw ConfigError("the sweep needs at least two xi values");
  std::vector<SimConfig> runs;
  runs.push_back(cfg.sim);
  for (double s : cfg.sweep) {
    if (s == cfg.sim.xi1 && s == cfg.sim.xi2) continue;
    SimConfig c = cfg.sim;
    c.xi1 = c.xi2 = s;
    runs.push_back(c);
  }
  std::vector<RunComparison> out(runs.size());
  parallel_for(runs.size(), resolve_threads(cfg.threads),
               [&](std::size_t i, int) { out[i] = compare(integrate(runs[i]), model); });
  ExperimentReport r;
  r.main = out[0];
  for (double s : cfg.sweep)
    for (const auto& c : out)
      if (c.xi1 == s && c.xi2 == s) {
        r.sweep.push_back(c);
        break;
      }
  for (int l = 0; l < 2; ++l) {
    const double n = static_cast<double>(r.sweep.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& c : r.sweep) {
      const double x = std::log(c.xi1), y = std::log(std::abs(c.measured[l] - c.linear[l]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    r.slope[l] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  r.shift_pass = r.main.shift_rel_err[0] <= cfg.tolerance && r.main.shift_rel_err[1] <= cfg.tolerance;
  r.slope_pass = std::abs(r.slope[0] - 1) <= cfg.slope_tolerance && std::abs(r.slope[1] - 1) <= cfg.slope_tolerance;
  return r;
}

nlohmann::json to_json(const RunComparison& c) {
  auto v = [](const Vec2& x) { return nlohmann::json::array({x[0], x[1]}); };
  return {{"xi", {c.xi1, c.xi2}},
          {"measured", v(c.measured)},
          {"linear", v(c.linear)},
          {"predicted_quadratic", v(c.predicted_quadratic)},
          {"predicted_with_R_T", v(c.predicted_full)},
          {"shift_rel_err", v(c.shift_rel_err)},
          {"shift_rel_err_with_R_T", v(c.shift_rel_err_full)},
          {"H_drift", c.h_drift},
          {"E1_drift", c.e1_drift},
          {"normal_energy_ratio", c.normal_energy_ratio}};
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json sweep = nlohmann::json::array();
  for (const auto& c : r.sweep) sweep.push_back(to_json(c));
  return {{"main", to_json(r.main)},
          {"sweep", sweep},
          {"slope", {r.slope[0], r.slope[1]}},
          {"shift_pass", r.shift_pass},
          {"slope_pass", r.slope_pass},
          {"pass", r.pass()}};
}

}  // namespace gbbm::dynamics
