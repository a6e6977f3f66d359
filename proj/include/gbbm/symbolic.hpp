#pragma once

// Sparse polynomials in the amplitudes z_j with exact coefficients of the form
//   sum of  q * pi^p * i^k * prod_{j in odd} delta_j,
// where even powers of delta_j are folded into q through delta_j^2 = |j|/(1+j^2).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gbbm/index_sets.hpp"
#include "gbbm/rational.hpp"

namespace gbbm::symbolic {

using Complex = std::complex<double>;

constexpr int kMaxDegree = 18;

struct Atom {
  Rational rat;
  int pi_pow = 0;
  int i_pow = 0;                  // 0 or 1; i^2 is folded into the sign of rat
  std::vector<std::int32_t> odd;  // sorted |j| carrying an odd power of delta_j

  bool same_key(const Atom& o) const noexcept {
    return pi_pow == o.pi_pow && i_pow == o.i_pow && odd == o.odd;
  }
  bool key_less(const Atom& o) const noexcept;
  Complex value() const;
};

Atom multiply(const Atom& a, const Atom& b);

class SymbolicCoefficient {
 public:
  SymbolicCoefficient() = default;
  explicit SymbolicCoefficient(Atom a);
  static SymbolicCoefficient rational(const Rational& q);

  bool is_zero() const noexcept { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  SymbolicCoefficient& operator+=(const SymbolicCoefficient& o);
  SymbolicCoefficient& operator-=(const SymbolicCoefficient& o);
  SymbolicCoefficient& operator*=(const Rational& q);
  SymbolicCoefficient times_i() const;
  SymbolicCoefficient conj() const;
  friend SymbolicCoefficient operator*(const SymbolicCoefficient& a, const SymbolicCoefficient& b);
  friend bool operator==(const SymbolicCoefficient& a, const SymbolicCoefficient& b);

  Complex value() const;
  /// True when every atom is a real number (no i, no odd delta powers).
  bool is_exactly_real() const noexcept;
  bool all_delta_even() const noexcept;

  nlohmann::json to_json() const;

 private:
  void add_atom(const Atom& a, int sign);
  std::vector<Atom> atoms_;  // sorted by key, merged, nonzero
};

/// Product of amplitudes z_{e_0} ... z_{e_{deg-1}}, entries sorted.
struct Monomial {
  std::array<std::int32_t, kMaxDegree> e{};
  std::uint8_t deg = 0;

  static Monomial from(std::span<const long> entries);
  std::span<const std::int32_t> entries() const noexcept { return {e.data(), deg}; }
  long momentum() const noexcept;
  bool is_normal() const noexcept;
  int non_s(const index_sets::TangentialSet& s) const noexcept;
  int exponent(std::int32_t j) const noexcept;
  /// j -> -j throughout.
  Monomial flipped() const;

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.deg == b.deg && std::equal(a.e.begin(), a.e.begin() + a.deg, b.e.begin());
  }
  friend bool operator<(const Monomial& a, const Monomial& b) noexcept;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

struct PolyMeta {
  long n1 = 1;
  long n2 = 2;
  long jmax = 2;

  index_sets::TangentialSet tangential() const { return {n1, n2}; }
  friend bool operator==(const PolyMeta&, const PolyMeta&) = default;
};

class HamiltonianPoly {
 public:
  using Map = std::unordered_map<Monomial, SymbolicCoefficient, MonomialHash>;

  HamiltonianPoly() = default;
  explicit HamiltonianPoly(PolyMeta meta) : meta_(meta) {}

  const PolyMeta& meta() const noexcept { return meta_; }
  const Map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(const Monomial& m, const SymbolicCoefficient& c);
  const SymbolicCoefficient* find(const Monomial& m) const;
  SymbolicCoefficient coefficient(const Monomial& m) const;

  HamiltonianPoly& operator+=(const HamiltonianPoly& o);
  HamiltonianPoly& operator*=(const Rational& q);
  friend HamiltonianPoly operator+(HamiltonianPoly a, const HamiltonianPoly& b) { return a += b; }
  friend HamiltonianPoly operator*(const Rational& q, HamiltonianPoly a) { return a *= q; }

  /// Terms in increasing monomial order.
  std::vector<std::pair<Monomial, const SymbolicCoefficient*>> sorted() const;

  bool momentum_conserved() const;
  /// Coefficient of the flipped monomial is the conjugate coefficient.
  bool reality_holds() const;
  /// Set of degrees present.
  std::vector<int> degrees() const;
  int min_non_s() const;

 private:
  PolyMeta meta_;
  Map terms_;
};

/// Projection applied while contracting; terms outside it are never formed.
struct Projection {
  int max_non_s = kMaxDegree;
  bool normal_only = false;
};

/// {A,B} = i sum_j sgn(j) dA/dz_j dB/dz_{-j}.
HamiltonianPoly poisson_bracket(const HamiltonianPoly& a, const HamiltonianPoly& b,
                                const Projection& proj = {}, int threads = 1);

/// Ordinary product of polynomials.
HamiltonianPoly product(const HamiltonianPoly& a, const HamiltonianPoly& b);

/// Double-precision evaluation of a polynomial and its gradient.
class NumericPoly {
 public:
  explicit NumericPoly(const HamiltonianPoly& p);

  long jmax() const noexcept { return jmax_; }
  /// z is indexed by j + jmax for -jmax <= j <= jmax (slot jmax unused).
  Complex evaluate(std::span<const Complex> z) const;
  /// grad[j + jmax] += dP/dz_j
  void add_gradient(std::span<const Complex> z, std::span<Complex> grad, Complex scale = 1.0) const;

 private:
  long jmax_;
  std::vector<std::int32_t> entries_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Complex> coef_;
};

}  // namespace gbbm::symbolic
