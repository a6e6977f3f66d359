#pragma once

// Galerkin-truncated gBBM flow in the z variables and frequency analysis of
// the tangential modes.  Equations of motion: dz_j/dt = -i sgn(j) dH/dz_{-j}.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gbbm/kam_check.hpp"
#include "gbbm/spectral_core.hpp"

namespace gbbm::dynamics {

using spectral::Complex;
using spectral::SpectralState;

enum class Integrator { kSplitting, kImplicitMidpoint };

Integrator integrator_from_name(const std::string& name);
std::string integrator_name(Integrator i);

struct SimConfig {
  long n1 = 5, n2 = 13;
  double xi1 = 0.05, xi2 = 0.05;
  double phase1 = 0, phase2 = 0;
  int jmax = 64;
  std::size_t grid = 0;  // 0: smallest alias-free power of two
  double dt = 0.05;
  double horizon = 1e5;
  int stride = 10;
  Integrator integrator = Integrator::kSplitting;
  bool nonlinear = true;
  double drift_tolerance = 1e-6;
  double solver_tolerance = 1e-13;
  int max_iterations = 100;
  bool record_states = false;

  /// Throws ConfigError.
  void validate() const;
  long steps() const;
};

/// z_{n_l} = xi_l^{1/4} e^{-i x_l}, all other modes zero.
SpectralState initial_torus_state(double xi1, double xi2, double phase1, double phase2, long n1, long n2,
                                  int jmax);

/// One-step maps of the truncated flow; h may be negative.
class Stepper {
 public:
  explicit Stepper(const SimConfig& cfg);
  void step(SpectralState& z, double h);
  double hamiltonian(const SpectralState& z);
  int last_iterations() const noexcept { return last_iterations_; }

 private:
  void linear(SpectralState& z, double h) const;
  void field(const SpectralState& z, SpectralState& out);  // nonlinear part of dz/dt

  SimConfig cfg_;
  std::optional<spectral::NonlinearEvaluator> eval_;
  SpectralState work_, mid_, next_;
  int last_iterations_ = 0;
};

struct Trajectory {
  long n1 = 0, n2 = 0;
  double xi1 = 0, xi2 = 0;
  double sample_dt = 0;
  std::vector<double> times;
  std::vector<Complex> z1, z2;
  std::vector<double> H, E1;
  std::vector<SpectralState> states;  // only with record_states
  SpectralState final_state;
  double max_reality_defect = 0;
  double max_normal_energy_ratio = 0;  // sum_{j not in S} |j||z_j|^2 / sum_{j in S} |j||z_j|^2

  double h_drift() const;
  double e1_drift() const;
};

Trajectory integrate(const SimConfig& cfg);
/// Starts from an explicit state instead of the torus data in cfg.
Trajectory integrate(const SimConfig& cfg, SpectralState z0);

void write_csv(const Trajectory& t, std::ostream& out);
/// Reads the series written by write_csv; states are not stored in the file.
Trajectory read_csv(std::istream& in);

struct Tone {
  double frequency = 0;  // signal ~ amplitude * exp(-i frequency t)
  Complex amplitude;
};

/// Hann-windowed FFT peak, refined to the stationary point of the windowed
/// Fourier sum, then subtracted before the next peak is sought.
std::vector<Tone> extract_frequencies(std::span<const Complex> signal, double dt, int count);

using Vec2 = kam_check::Vec2;

struct RunComparison {
  double xi1 = 0, xi2 = 0;
  Vec2 measured{}, linear{}, predicted_quadratic{}, predicted_full{};
  Vec2 shift_rel_err{};       // against the quadratic bracket
  Vec2 shift_rel_err_full{};  // with the R and T corrections
  double h_drift = 0, e1_drift = 0;
  double normal_energy_ratio = 0;
};

RunComparison compare(const Trajectory& t, const kam_check::FrequencyModel& model);

struct ExperimentConfig {
  SimConfig sim;
  std::vector<double> sweep{0.0125, 0.025, 0.05};  // xi = (s, s)
  double tolerance = 0.1;
  double slope_tolerance = 0.1;
  int threads = 1;
};

struct ExperimentReport {
  RunComparison main;
  std::vector<RunComparison> sweep;
  Vec2 slope{};
  bool shift_pass = false;
  bool slope_pass = false;
  bool pass() const noexcept { return shift_pass && slope_pass; }
};

ExperimentReport frequency_experiment(const ExperimentConfig& cfg, const kam_check::FrequencyModel& model);

nlohmann::json to_json(const RunComparison& c);
nlohmann::json to_json(const ExperimentReport& r);

}  // namespace gbbm::dynamics
