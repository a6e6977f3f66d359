#pragma once

// Frequency model of the normal form in the actions I_l = |z_{n_l}|^2 = sqrt(xi_l),
// and numerical checks of the nondegeneracy and size assumptions on
// O* = [sqrt(eps), 4 sqrt(eps)]^2.

#include <array>
#include <optional>
#include <vector>

#include "gbbm/normal_form.hpp"

namespace gbbm::kam_check {

struct FrequencyModel {
  long n1 = 0, n2 = 0;
  Rational lambda1, lambda2;
  double lam1 = 0, lam2 = 0;
  // Gbar on the torus: g30 I1^3 + g21 I1^2 I2 + g12 I1 I2^2 + g03 I2^3.
  double g30 = 0, g21 = 0, g12 = 0, g03 = 0;
  // Omega_j = lambda_j (1 + h1 xi1 + h2 xi2 + h12 sqrt(xi1 xi2)).
  double h1 = 0, h2 = 0, h12 = 0;
  std::array<double, 6> R{};  // R_m I1^{5-m} I2^m
  std::array<double, 8> T{};  // T_m I1^{7-m} I2^m
  bool use_R = true;
  bool use_T = true;

  /// Coefficients of xi1^{(4-j)/2} xi2^{j/2} in omega_l (l = 0, 1).
  std::array<std::array<double, 5>, 2> R_lj() const;
  /// Coefficients of xi1^{(6-j)/2} xi2^{j/2} in omega_l.
  std::array<std::array<double, 7>, 2> T_lj() const;

  FrequencyModel without_corrections() const;
  /// (xi1, n1) <-> (xi2, n2)
  FrequencyModel swapped() const;
};

FrequencyModel derive_frequency_model(const normal_form::NormalFormResult& nf);

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

Vec2 omega0(const FrequencyModel& m, double xi1, double xi2);
/// The exact value at xi = 0.
std::array<Rational, 2> omega0_at_origin(const FrequencyModel& m);
double Omega(const FrequencyModel& m, long j, double xi1, double xi2);
Vec2 dOmega(const FrequencyModel& m, long j, double xi1, double xi2);

/// d omega_l / d xi_k, analytic.
Mat2 jacobian(const FrequencyModel& m, double xi1, double xi2);
double jacobian_det(const FrequencyModel& m, double xi1, double xi2);
/// Central differences with step h*xi_k, one-sided where a step would leave [lo, hi].
double jacobian_det_fd(const FrequencyModel& m, double xi1, double xi2, double h = 1e-6,
                       double lo = 0.0, double hi = 1e300);
/// Leading-order closed form of det d_xi omega^0 from the quadratic bracket.
double leading_det_closed_form(long n1, long n2, double xi1, double xi2);

bool in_domain(double eps, double xi1, double xi2);

struct ScalingPiece {
  std::string name;
  std::vector<double> eps;
  std::vector<double> ratio;  // |piece| / r^2
  double slope = 0;
  double predicted = 1.0;
  bool pass = false;
};

struct ScalingOptions {
  std::vector<double> eps{1e-4, 1e-5, 1e-6};
  long jmax = 0;  // 0: 5 * n2
  double tolerance = 0.15;
  unsigned seed = 20240601;
  int threads = 1;
  /// zhat on the modes a*n1 + b*n2 (|a|+|b| <= 13, a+b odd) that couple to the torus
  /// up to order 14; otherwise on every non-S mode.
  bool shell_support = true;
};

/// Size of the Ghat, Rhat and That pieces at z = z_S + zhat with
/// |z_{n_l}| = xi_l^{1/4}, xi in O*, |zhat| = eps^{5/8}, divided by r^2 = eps^{5/4}.
std::vector<ScalingPiece> assumption_c_scaling(long n1, long n2, const ScalingOptions& opts);

struct AssumptionReport {
  double eps = 0;
  long jmax = 0;
  // A
  bool a_pass = false;
  double a_inf_abs_det = 0;
  double a_max_det = 0;  // largest (least negative) determinant on the grid
  Vec2 a_inf_witness{};
  double a_sup_dw = 0;
  double a_sup_bound = 0;
  bool a_sup_pass = false;
  double a_fd_rel_err = 0;
  double a_leading_rel_err = 0;        // full model vs closed form, max over grid
  double a_leading_rel_err_gbar = 0;   // Gbar-only model vs closed form
  double a_shift_constant = 0;         // max |omega - omega_0| / sqrt(eps)
  // B
  bool b_pass = false;
  double b_min_scaled = 0;  // min Omega_j |j|
  double b_max_scaled = 0;  // max Omega_j |j|
  double b_sup_dOmega_scaled = 0;
  double b_c13 = 0;
  bool b_paper_c11_holds = false;
  long b_witness_j = 0;
  Vec2 b_witness_xi{};
  std::size_t b_samples = 0;
  // C
  bool c_pass = false;
  std::vector<ScalingPiece> c_pieces;
  bool c_run = false;
  // D, E
  bool d_pass = false;
  bool e_pass = true;

  bool pass() const noexcept { return a_pass && b_pass && (!c_run || c_pass) && d_pass && e_pass; }
};

struct AssumptionOptions {
  int grid = 64;
  int random_samples = 1000;
  unsigned seed = 7;
  bool run_c = true;
  ScalingOptions scaling;
};

AssumptionReport verify_assumptions(const FrequencyModel& m, double eps, long jmax, bool reality_ok,
                                    const AssumptionOptions& opts = {});

nlohmann::json to_json(const FrequencyModel& m);
nlohmann::json to_json(const AssumptionReport& r);

}  // namespace gbbm::kam_check
