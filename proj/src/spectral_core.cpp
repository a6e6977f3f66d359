#include "gbbm/spectral_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gbbm/errors.hpp"

namespace gbbm::spectral {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t wrap(long j, std::size_t m) {
  const long mm = static_cast<long>(m);
  return static_cast<std::size_t>(((j % mm) + mm) % mm);
}

constexpr double kPi = std::numbers::pi;

}  // namespace

Mode::Mode(long j) : j_(j) {
  if (j == 0) throw std::invalid_argument("mode j = 0 is excluded from the model space");
}

Rational lambda(Mode j) {
  const long v = j.value();
  Rational q(v);
  q /= Rational(1 + Integer(v) * v);
  return q;
}

Rational delta_sq(Mode j) {
  const long v = j.value();
  Rational q(std::labs(v));
  q /= Rational(1 + Integer(v) * v);
  return q;
}

double lambda_value(long j) {
  const double x = static_cast<double>(j);
  return x / (1.0 + x * x);
}

double delta_value(long j) {
  const double x = static_cast<double>(j);
  return std::sqrt(std::abs(x) / (1.0 + x * x));
}

SpectralState::SpectralState(int jmax, bool real) : jmax_(jmax), real_(real) {
  if (jmax < 1) throw std::invalid_argument("jmax must be positive");
  data_.assign(2 * static_cast<std::size_t>(jmax), Complex{});
}

std::size_t SpectralState::slot(long j) const {
  if (j == 0 || std::labs(j) > jmax_) {
    throw std::out_of_range("mode " + std::to_string(j) + " outside 1 <= |j| <= " +
                            std::to_string(jmax_));
  }
  return static_cast<std::size_t>(j < 0 ? j + jmax_ : j + jmax_ - 1);
}

void SpectralState::set(long j, Complex value) {
  data_[slot(j)] = value;
  if (real_) data_[slot(-j)] = std::conj(value);
}

double SpectralState::reality_defect() const {
  double worst = 0.0;
  for (long j = 1; j <= jmax_; ++j) {
    worst = std::max(worst, std::abs((*this)[-j] - std::conj((*this)[j])));
  }
  return worst;
}

SpectralState& SpectralState::operator+=(const SpectralState& other) {
  if (other.jmax_ != jmax_) throw std::invalid_argument("state truncation mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  real_ = real_ && other.real_;
  return *this;
}

SpectralState& SpectralState::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  if (s.imag() != 0.0) real_ = false;
  return *this;
}

SpectralState operator+(SpectralState a, const SpectralState& b) {
  a += b;
  return a;
}

SpectralState operator*(Complex s, SpectralState a) {
  a *= s;
  return a;
}

GridProfile make_grid_profile(std::vector<double> samples) {
  if (!is_power_of_two(samples.size()) || samples.size() < 4) {
    throw std::invalid_argument("grid size must be a power of two >= 4");
  }
  double mean = 0.0;
  double scale = 0.0;
  for (double v : samples) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(samples.size());
  if (std::abs(mean) > 1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("grid profile has nonzero mean; the model space is mean-free");
  }
  return GridProfile{std::move(samples)};
}

namespace {

// One-shot complex transform; FFTW_BACKWARD uses e^{+i k x}.
std::vector<Complex> transform(std::vector<Complex> in, int sign) {
  const int n = static_cast<int>(in.size());
  auto* buf = reinterpret_cast<fftw_complex*>(in.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return in;
}

}  // namespace

SpectralState analyze(const GridProfile& u, int jmax) {
  const std::size_t m = u.size();
  if (!is_power_of_two(m)) throw std::invalid_argument("grid size must be a power of two");
  if (m < 4 * static_cast<std::size_t>(jmax)) {
    throw std::invalid_argument("grid size must be at least 4 * jmax");
  }
  std::vector<Complex> buf(u.samples.begin(), u.samples.end());
  buf = transform(std::move(buf), FFTW_FORWARD);
  SpectralState z(jmax, true);
  const double root2pi = std::sqrt(2.0 * kPi);
  for (long j = -jmax; j <= jmax; ++j) {
    if (j == 0) continue;
    const Complex uhat = buf[wrap(j, m)] / static_cast<double>(m);
    z.set_raw(j, uhat * root2pi / delta_value(j));
  }
  // Enforce the constraint exactly; the transform of real data is Hermitian
  // up to round-off.
  for (long j = 1; j <= jmax; ++j) {
    const Complex avg = 0.5 * (z[j] + std::conj(z[-j]));
    z.set(j, avg);
  }
  return z;
}

GridProfile synthesize(const SpectralState& z, std::size_t grid_size) {
  if (!is_power_of_two(grid_size)) throw std::invalid_argument("grid size must be a power of two");
  if (grid_size < 4 * static_cast<std::size_t>(z.jmax())) {
    throw std::invalid_argument("grid size must be at least 4 * jmax");
  }
  if (!z.is_real()) throw std::invalid_argument("synthesize requires a real state");
  std::vector<Complex> buf(grid_size);
  const double inv = 1.0 / std::sqrt(2.0 * kPi);
  for (long j = -z.jmax(); j <= z.jmax(); ++j) {
    if (j == 0) continue;
    buf[wrap(j, grid_size)] = delta_value(j) * z[j] * inv;
  }
  buf = transform(std::move(buf), FFTW_BACKWARD);
  GridProfile u;
  u.samples.resize(grid_size);
  for (std::size_t m = 0; m < grid_size; ++m) u.samples[m] = buf[m].real();
  return u;
}

std::size_t nonlinear_grid_size(int jmax) {
  std::size_t m = 4;
  while (m <= 6 * static_cast<std::size_t>(jmax)) m *= 2;
  return m;
}

double quadratic_energy(const SpectralState& z) {
  double acc = 0.0;
  for (long j = 1; j <= z.jmax(); ++j) acc += lambda_value(j) * (z[j] * z[-j]).real();
  return acc;
}

Complex sextic_energy(const SpectralState& z) {
  NonlinearEvaluator eval(z.jmax());
  return eval.sextic_energy(z);
}

double energy(const SpectralState& z) {
  if (!z.is_real()) throw std::invalid_argument("energy is defined on real states");
  return quadratic_energy(z) + sextic_energy(z).real();
}

double sobolev_energy(const SpectralState& z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.data().size(); ++i) {
    const long j = SpectralState::index_to_mode(i, z.jmax());
    acc += static_cast<double>(std::labs(j)) * std::norm(z.data()[i]);
  }
  return acc;
}

double weighted_norm(const SpectralState& z, double p) {
  if (p < 0.0) throw std::invalid_argument("weight exponent must be nonnegative");
  double acc = 0.0;
  for (std::size_t i = 0; i < z.data().size(); ++i) {
    const long j = SpectralState::index_to_mode(i, z.jmax());
    acc += std::norm(z.data()[i]) * std::pow(static_cast<double>(std::labs(j)), 2.0 * p);
  }
  return std::sqrt(acc);
}

SpectralState gradient_G(const SpectralState& z) {
  NonlinearEvaluator eval(z.jmax());
  SpectralState out(z.jmax(), z.is_real());
  eval.gradient(z, out);
  return out;
}

SpectralState gradient_G(const SpectralState& z, std::size_t grid_size) {
  NonlinearEvaluator eval(z.jmax(), grid_size);
  SpectralState out(z.jmax(), z.is_real());
  eval.gradient(z, out);
  return out;
}

struct NonlinearEvaluator::Plans {
  explicit Plans(std::size_t m) : m(m) {
    const int n = static_cast<int>(m);
    cbuf = fftw_alloc_complex(m);
    rbuf = fftw_alloc_real(m);
    hbuf = fftw_alloc_complex(m / 2 + 1);
    std::lock_guard lock(planner_mutex());
    c2c_fwd = fftw_plan_dft_1d(n, cbuf, cbuf, FFTW_FORWARD, FFTW_ESTIMATE);
    c2c_bwd = fftw_plan_dft_1d(n, cbuf, cbuf, FFTW_BACKWARD, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(n, hbuf, rbuf, FFTW_ESTIMATE);
    r2c = fftw_plan_dft_r2c_1d(n, rbuf, hbuf, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_destroy_plan(c2c_bwd);
    fftw_destroy_plan(c2c_fwd);
    fftw_free(hbuf);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  Complex* complex_grid() { return reinterpret_cast<Complex*>(cbuf); }
  Complex* half_spectrum() { return reinterpret_cast<Complex*>(hbuf); }

  std::size_t m;
  fftw_complex* cbuf;
  double* rbuf;
  fftw_complex* hbuf;
  fftw_plan c2c_fwd, c2c_bwd, c2r, r2c;
  bool real_mode = false;
};

NonlinearEvaluator::NonlinearEvaluator(int jmax, std::size_t grid_size)
    : jmax_(jmax), grid_(grid_size == 0 ? nonlinear_grid_size(jmax) : grid_size) {
  if (jmax < 1) throw std::invalid_argument("jmax must be positive");
  if (!is_power_of_two(grid_)) throw std::invalid_argument("grid size must be a power of two");
  if (grid_ <= 6 * static_cast<std::size_t>(jmax)) {
    throw ConfigError("aliasing guard: nonlinear grid of size " + std::to_string(grid_) +
                      " needs to exceed 6 * jmax = " + std::to_string(6 * jmax));
  }
  delta_.resize(static_cast<std::size_t>(jmax) + 1);
  for (long j = 1; j <= jmax; ++j) delta_[j] = delta_value(j);
  plans_ = std::make_unique<Plans>(grid_);
}

NonlinearEvaluator::~NonlinearEvaluator() = default;

// Fills the grid with w(x_m) = sum_j delta_j z_j e^{i j x_m} = sqrt(2 pi) u(x_m).
void NonlinearEvaluator::to_grid(const SpectralState& z) {
  if (z.jmax() != jmax_) throw std::invalid_argument("state truncation mismatch");
  Plans& p = *plans_;
  p.real_mode = z.is_real();
  if (p.real_mode) {
    Complex* h = p.half_spectrum();
    std::fill(h, h + p.m / 2 + 1, Complex{});
    for (long j = 1; j <= jmax_; ++j) h[j] = delta_[j] * z[j];
    fftw_execute(p.c2r);
  } else {
    Complex* c = p.complex_grid();
    std::fill(c, c + p.m, Complex{});
    for (long j = 1; j <= jmax_; ++j) {
      c[j] = delta_[j] * z[j];
      c[p.m - j] = delta_[j] * z[-j];
    }
    fftw_execute(p.c2c_bwd);
  }
}

void NonlinearEvaluator::gradient(const SpectralState& z, SpectralState& out) {
  to_grid(z);
  Plans& p = *plans_;
  const double scale = 1.0 / (20.0 * kPi * kPi * static_cast<double>(p.m));
  if (out.jmax() != jmax_) out = SpectralState(jmax_, z.is_real());
  if (p.real_mode) {
    for (std::size_t m = 0; m < p.m; ++m) {
      const double w = p.rbuf[m];
      const double w2 = w * w;
      p.rbuf[m] = w2 * w2 * w;
    }
    fftw_execute(p.r2c);
    const Complex* h = p.half_spectrum();
    for (long j = 1; j <= jmax_; ++j) {
      const Complex g = scale * delta_[j] * h[j];
      out.set_raw(j, g);
      out.set_raw(-j, std::conj(g));
    }
  } else {
    Complex* c = p.complex_grid();
    for (std::size_t m = 0; m < p.m; ++m) {
      const Complex w = c[m];
      const Complex w2 = w * w;
      c[m] = w2 * w2 * w;
    }
    fftw_execute(p.c2c_fwd);
    for (long j = 1; j <= jmax_; ++j) {
      out.set_raw(j, scale * delta_[j] * c[j]);
      out.set_raw(-j, scale * delta_[j] * c[p.m - j]);
    }
  }
}

Complex NonlinearEvaluator::sextic_energy(const SpectralState& z) {
  to_grid(z);
  Plans& p = *plans_;
  Complex acc{};
  if (p.real_mode) {
    double s = 0.0;
    for (std::size_t m = 0; m < p.m; ++m) {
      const double w2 = p.rbuf[m] * p.rbuf[m];
      s += w2 * w2 * w2;
    }
    acc = s;
  } else {
    const Complex* c = p.complex_grid();
    for (std::size_t m = 0; m < p.m; ++m) {
      const Complex w2 = c[m] * c[m];
      acc += w2 * w2 * w2;
    }
  }
  return acc / (120.0 * kPi * kPi * static_cast<double>(p.m));
}

}  // namespace gbbm::spectral
