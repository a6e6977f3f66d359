#include <random>

#include "doctest.h"
#include "gbbm/divisor_analysis.hpp"

using namespace gbbm;
using namespace gbbm::divisor_analysis;
using index_sets::Label;
using index_sets::TangentialSet;

TEST_CASE("divisor values") {
  CHECK(divisor(std::vector<long>{1, -2, -2, 3, 7, -7}) == 0);
  CHECK(divisor(std::vector<long>{3, -3, 8, -8, 11, -11}) == 0);
  CHECK(divisor(std::vector<long>{1, 1, 1, -3, 5, -5}) == make_rational(6, 5));
  for (long n = 4; n <= 100; ++n) CHECK(divisor(std::vector<long>{1, -2, -2, 3, n, -n}) == 0);
}

TEST_CASE("divisor is additive and vanishes on paired tuples") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> d(1, 5000);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<long> t;
    const int pairs = 3 + 2 * (trial % 3);
    for (int p = 0; p < pairs; ++p) {
      const long a = d(rng);
      t.push_back(a);
      t.push_back(-a);
    }
    std::shuffle(t.begin(), t.end(), rng);
    CHECK(divisor(t) == 0);
  }
  std::vector<long> a{1, 2, -3}, b{7, -4, 9};
  std::vector<long> ab{1, 2, -3, 7, -4, 9};
  CHECK(divisor(ab) == divisor(a) + divisor(b));
}

TEST_CASE("discriminant checks") {
  CHECK(discriminant_form1(50) == 6115009);
  CHECK_FALSE(discriminant_square_check(50));
  CHECK_FALSE(discriminant_square_check(20));
  for (long n1 = 20; n1 <= 10000; ++n1) {
    // Oracle: integer square root by Newton iteration on mpz.
    const Integer v = discriminant_form1(n1);
    Integer r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    const bool square = r * r == v;
    CHECK(square == discriminant_square_check(n1));
    REQUIRE_FALSE(square);
  }
  for (long r : {2L, 3L}) {
    for (long n1 = 20; n1 <= 2000; ++n1) CHECK_FALSE(discriminant_square_check(n1, r));
  }
  CHECK(is_perfect_square(Integer(144)));
  CHECK_FALSE(is_perfect_square(Integer(-4)));
}

TEST_CASE("widened order-6 survey finds the resonant tuples") {
  SurveyOptions o;
  o.max_zeros_recorded = 100000;
  o.non_s_bound = 8;
  auto r = survey_min_divisor(6, {Label::kDelta3}, TangentialSet(50, 2500), 2500, o);
  CHECK(r.zero_count > 0);
  const std::vector<long> w{-7, -2, -2, 1, 3, 7};
  CHECK(std::find(r.zeros.begin(), r.zeros.end(), w) != r.zeros.end());
}

TEST_CASE("order-6 survey at a small configuration") {
  auto r = survey_min_divisor(6, admissible_labels(6), TangentialSet(5, 13), 65);
  CHECK(r.clean());
  REQUIRE(r.min_abs_divisor.has_value());
  CHECK(*r.min_abs_divisor > 0);
  CHECK(abs(divisor(r.witness)) == *r.min_abs_divisor);
  CHECK(r.case_i1.violations == 0);
  // The same minimum from a direct loop over the Delta1/Delta2 patterns.
  Rational best(-1);
  index_sets::Enumerator en(6, admissible_labels(6), TangentialSet(5, 13), 65,
                            index_sets::EnumerationOptions{1e9, true});
  en.run_all([&](const index_sets::CanonicalTuple& t) {
    const Rational q = abs(divisor(t.entries));
    if (best < 0 || q < best) best = q;
  });
  CHECK(best == *r.min_abs_divisor);
}

TEST_CASE("survey is deterministic across thread counts") {
  SurveyOptions one, four;
  one.threads = 1;
  four.threads = 4;
  auto a = survey_min_divisor(6, admissible_labels(6), TangentialSet(3, 7), 35, one);
  auto b = survey_min_divisor(6, admissible_labels(6), TangentialSet(3, 7), 35, four);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("case I-1 pattern") {
  const TangentialSet s(50, 2500);
  CHECK(matches_case_i1(std::vector<long>{-2500, -60, -50, -40, 50, 2600}, s));
  CHECK_FALSE(matches_case_i1(std::vector<long>{-2500, -60, -40, 50, 50, 2500}, s));
  CHECK_FALSE(matches_case_i1(std::vector<long>{-7, -2, -2, 1, 3, 7}, s));
}
