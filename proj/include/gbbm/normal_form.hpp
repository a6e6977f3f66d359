#pragma once

// Birkhoff normal form at orders 6, 10 and 14 around the tangential set S.

#include <array>
#include <optional>
#include <vector>

#include "gbbm/errors.hpp"
#include "gbbm/symbolic.hpp"

namespace gbbm::normal_form {

using symbolic::HamiltonianPoly;
using symbolic::Monomial;
using symbolic::PolyMeta;
using symbolic::SymbolicCoefficient;

class ZeroDivisorError : public VerificationFailure {
 public:
  ZeroDivisorError(const std::string& what, std::vector<long> witness)
      : VerificationFailure(what), witness_(std::move(witness)) {}
  const std::vector<long>& witness() const noexcept { return witness_; }

 private:
  std::vector<long> witness_;
};

/// Lambda = sum_{j>=1} lambda_j z_j z_{-j}.
HamiltonianPoly build_Lambda(const PolyMeta& meta);

/// Coefficient of the canonical sextic tuple in G (multiplicity included).
SymbolicCoefficient g_coefficient(std::span<const long> sorted_entries);

struct GParts {
  bool bar = true;
  bool tilde = true;
  bool hat = false;  // Delta3 grows like jmax^5; off unless asked for
};

struct GSplit {
  HamiltonianPoly bar;    // (Delta0 u Delta1 u Delta2) n N
  HamiltonianPoly tilde;  // (Delta0 u Delta1 u Delta2) \ N
  HamiltonianPoly hat;    // Delta3
  bool has_hat = false;
};

struct BuildOptions {
  GParts parts;
  double ceiling = 1e9;
  int threads = 1;
};

GSplit build_G(long n1, long n2, long jmax, const BuildOptions& opts = {});

/// F = sum Gtilde_m / (i * divisor(m)) m. Throws ZeroDivisorError.
HamiltonianPoly build_F6(const HamiltonianPoly& gtilde);

/// Gtilde + {Lambda, F}.
HamiltonianPoly homological_residual(const HamiltonianPoly& lambda, const HamiltonianPoly& gtilde,
                                     const HamiltonianPoly& f, int threads = 1);

/// A real coefficient q * pi^p.
struct RealCoefficient {
  Rational rat;
  int pi_pow = 0;
  double value() const;
  nlohmann::json to_json() const;
};

struct ActionCoefficients {
  int degree = 0;  // 10 or 14
  std::vector<RealCoefficient> c;  // c[m] multiplies |z_n1|^{2(d/2 - m)} |z_n2|^{2m}
  std::size_t contracted_terms = 0;
};

/// Monomial |z_n1|^{2a} |z_n2|^{2b}.
Monomial action_monomial(long n1, long n2, int a, int b);

/// Projection of {Gbar + Ghat + Gtilde/2, F} onto all-S normal monomials.
ActionCoefficients compute_Rbar(const GSplit& g, const HamiltonianPoly& f, int threads = 1);
/// Projection of {{(Gbar + Ghat)/2 + Gtilde/3, F}, F} onto all-S normal monomials.
ActionCoefficients compute_Tbar(const GSplit& g, const HamiltonianPoly& f, int threads = 1);

/// Smallest non-S count a bracket of a Delta3 term with F can produce. Each
/// contraction removes at most one non-S entry from each factor, so the
/// result keeps at least 3 - 1 of them; Ghat therefore never reaches the
/// all-S projection of Rbar nor the at-most-one-non-S intermediate of Tbar.
constexpr int kHatMinNonSAfterBracket = 3 - 1;

/// Coefficients of Gbar read off as the action polynomial and normal-frequency
/// corrections: Gbar = g30 I1^3 + g21 I1^2 I2 + g12 I1 I2^2 + g03 I2^3
///                    + sum_j (h1 I1^2 + h2 I2^2 + h12 I1 I2) lambda_j |z_j|^2 + ...
struct GbarTable {
  RealCoefficient g30, g21, g12, g03;
  /// Per-j coefficients divided by lambda_j; j-independent by construction.
  RealCoefficient h1, h2, h12;
  std::size_t j_checked = 0;  // number of j at which the per-j coefficients were read
  bool j_independent = true;
};

GbarTable read_Gbar(const HamiltonianPoly& gbar);

struct NormalFormResult {
  long n1 = 0, n2 = 0, jmax = 0;
  GbarTable gbar;
  ActionCoefficients R;
  ActionCoefficients T;
  bool residual_zero = false;
  std::size_t residual_terms = 0;
  std::size_t gbar_terms = 0, gtilde_terms = 0, f_terms = 0;
  bool reality_ok = true;
  bool momentum_ok = true;
};

struct NormalFormOptions {
  bool compute_T = true;
  bool check_residual = true;
  int threads = 1;
  double ceiling = 1e9;
};

NormalFormResult compute_normal_form(long n1, long n2, long jmax, const NormalFormOptions& opts = {});

nlohmann::json to_json(const NormalFormResult& r);

}  // namespace gbbm::normal_form
