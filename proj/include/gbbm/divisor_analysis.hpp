#pragma once

// Exact small divisors sum_i lambda_{j_i} and exhaustive positivity surveys.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gbbm/index_sets.hpp"
#include "gbbm/rational.hpp"

namespace gbbm::divisor_analysis {

using index_sets::Label;
using index_sets::TangentialSet;

Rational divisor(std::span<const long> entries);
Rational divisor(const index_sets::IndexTuple& t);
double divisor_value(std::span<const long> entries);

/// The admissible label sets for each order.
std::vector<Label> admissible_labels(int order);

/// Extends a Delta2-type search beyond jmax. For an S-part with momentum s and
/// divisor sigma, the two free entries j, -s-j have |lambda_j + lambda_{-s-j}|
/// <= 1/J + 1/(J - |s|) once |j| > J, so |sigma| above that bound rules out
/// zeros for all larger entries. For s = 0 the free pair cancels exactly.
struct TailCertificate {
  bool applicable = false;
  bool certified = true;
  int patterns = 0;
  std::vector<std::vector<long>> uncovered;  // S-parts that fail the rule
  std::optional<Rational> weakest_margin;     // min over patterns of |sigma| - bound
};

struct CaseBoundCheck {
  std::uint64_t matched = 0;
  std::uint64_t violations = 0;
  std::vector<long> first_violation;
};

struct DivisorReport {
  int order = 0;
  std::vector<Label> labels;
  long n1 = 0;
  long n2 = 0;
  long jmax = 0;
  long non_s_bound = 0;
  std::optional<Rational> min_abs_divisor;
  std::vector<long> witness;
  std::uint64_t tuples_checked = 0;
  std::uint64_t ordered_tuples = 0;
  std::vector<std::vector<long>> zeros;
  std::uint64_t zero_count = 0;
  TailCertificate tail;
  CaseBoundCheck case_i1;

  bool clean() const noexcept { return zero_count == 0; }
};

struct SurveyOptions {
  int threads = 1;
  double ceiling = 1e9;
  std::size_t max_zeros_recorded = 64;
  /// Admissible sets exclude normal tuples; widening to include them is only
  /// useful for diagnostics.
  bool exclude_normal = true;
  long non_s_bound = 0;
};

DivisorReport survey_min_divisor(int order, const std::vector<Label>& labels,
                                 const TangentialSet& s, long jmax, SurveyOptions opts = {});

/// One positive and three negative entries (or the mirror) among four entries,
/// the other two forming a cancelling pair in S.
bool matches_case_i1(std::span<const long> sorted6, const TangentialSet& s);

/// (n1^2 - 27)^2 - 720
Integer discriminant_form1(long n1);
/// (n1^2 - (2r^2 - 1))^2 - (2r^2 - 1)^2 + 1
Integer discriminant_form2(long n1, long r);
bool is_perfect_square(const Integer& x);
bool discriminant_square_check(long n1);
bool discriminant_square_check(long n1, long r);

nlohmann::json to_json(const DivisorReport& r);

}  // namespace gbbm::divisor_analysis
