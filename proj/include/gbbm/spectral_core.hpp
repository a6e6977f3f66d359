#pragma once

// Spectral representation of the periodic gBBM equation
//
//   u_t - u_xxt + u_x + u^4 u_x = 0,   x in [0, 2pi),
//
// in the amplitudes z_j defined by u = sum_{j != 0} delta_j z_j e^{ijx} / sqrt(2 pi),
// delta_j = sqrt(|j| / (1 + j^2)).  In these variables the Hamiltonian is
// H = sum_{j>=1} lambda_j z_j z_{-j} + G with lambda_j = j / (1 + j^2) and
// G = (1 / (120 pi^2)) sum_{j1+..+j6=0} delta_j1..delta_j6 z_j1..z_j6.

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "gbbm/rational.hpp"

namespace gbbm::spectral {

using Complex = std::complex<double>;

/// A nonzero Fourier wavenumber.
class Mode {
 public:
  explicit Mode(long j);
  long value() const noexcept { return j_; }

 private:
  long j_;
};

/// lambda_j = j / (1 + j^2), exact.
Rational lambda(Mode j);
/// delta_j^2 = |j| / (1 + j^2), exact.
Rational delta_sq(Mode j);

double lambda_value(long j);
double delta_value(long j);

/// Complex amplitudes z_j for 1 <= |j| <= jmax. The mean mode is not stored.
///
/// A real state keeps z_{-j} == conj(z_j); `set` maintains the constraint.
class SpectralState {
 public:
  SpectralState() = default;
  SpectralState(int jmax, bool real);

  int jmax() const noexcept { return jmax_; }
  bool is_real() const noexcept { return real_; }

  Complex operator[](long j) const { return data_[slot(j)]; }
  /// Writes z_j (and z_{-j} = conj(z_j) for a real state).
  void set(long j, Complex value);
  /// Writes z_j only; the caller is responsible for the reality constraint.
  void set_raw(long j, Complex value) { data_[slot(j)] = value; }

  /// Storage ordered j = -jmax..-1, 1..jmax.
  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  static long index_to_mode(std::size_t i, int jmax) {
    const long k = static_cast<long>(i) - jmax;
    return k < 0 ? k : k + 1;
  }

  /// max_j |z_{-j} - conj(z_j)|, zero for exactly real states.
  double reality_defect() const;

  SpectralState& operator+=(const SpectralState& other);
  SpectralState& operator*=(Complex s);

 private:
  std::size_t slot(long j) const;

  int jmax_ = 0;
  bool real_ = false;
  std::vector<Complex> data_;
};

SpectralState operator+(SpectralState a, const SpectralState& b);
SpectralState operator*(Complex s, SpectralState a);

/// Real samples u(x_m), x_m = 2 pi m / M, M a power of two.
struct GridProfile {
  std::vector<double> samples;

  std::size_t size() const noexcept { return samples.size(); }
};

/// Validates the grid size and the zero-mean constraint.
GridProfile make_grid_profile(std::vector<double> samples);

SpectralState analyze(const GridProfile& u, int jmax);
GridProfile synthesize(const SpectralState& z, std::size_t grid_size);

/// Smallest power of two strictly greater than 6 * jmax; below this size the
/// quintic products in the vector field alias into retained modes.
std::size_t nonlinear_grid_size(int jmax);

/// Held while creating or destroying any FFTW plan.
std::mutex& planner_mutex();

/// sum_{j>=1} lambda_j |z_j|^2, or sum_{j>=1} lambda_j z_j z_{-j} for complex states.
double quadratic_energy(const SpectralState& z);
/// (1/30) int u^6 dx by exact grid quadrature. For non-real states this is
/// the holomorphic extension of G.
Complex sextic_energy(const SpectralState& z);
double energy(const SpectralState& z);

/// Conserved quadratic invariant int (u^2 + u_x^2) dx = sum_j |j| |z_j|^2.
double sobolev_energy(const SpectralState& z);

double weighted_norm(const SpectralState& z, double p);

/// (dG/dz_{-j})_j computed pseudo-spectrally. Homogeneous of degree 5.
SpectralState gradient_G(const SpectralState& z);
/// As above on an explicit grid; throws if the grid would alias.
SpectralState gradient_G(const SpectralState& z, std::size_t grid_size);

/// Reusable workspace for repeated nonlinear evaluations at fixed jmax.
class NonlinearEvaluator {
 public:
  explicit NonlinearEvaluator(int jmax, std::size_t grid_size = 0);
  ~NonlinearEvaluator();
  NonlinearEvaluator(const NonlinearEvaluator&) = delete;
  NonlinearEvaluator& operator=(const NonlinearEvaluator&) = delete;

  int jmax() const noexcept { return jmax_; }
  std::size_t grid_size() const noexcept { return grid_; }

  /// out_j = dG/dz_{-j}.
  void gradient(const SpectralState& z, SpectralState& out);
  Complex sextic_energy(const SpectralState& z);

 private:
  void to_grid(const SpectralState& z);

  int jmax_;
  std::size_t grid_;
  std::vector<double> delta_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace gbbm::spectral
