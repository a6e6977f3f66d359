#include "gbbm/divisor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "gbbm/errors.hpp"
#include "gbbm/parallel.hpp"
#include "gbbm/spectral_core.hpp"

namespace gbbm::divisor_analysis {

using index_sets::CanonicalTuple;
using index_sets::Enumerator;

Rational divisor(std::span<const long> entries) {
  // Accumulate numerators over a common denominator lazily; mpq keeps it reduced.
  Rational acc(0);
  for (long j : entries) acc += spectral::lambda(spectral::Mode(j));
  return acc;
}

Rational divisor(const index_sets::IndexTuple& t) { return divisor(t.entries()); }

double divisor_value(std::span<const long> entries) {
  double acc = 0.0;
  for (long j : entries) acc += spectral::lambda_value(j);
  return acc;
}

std::vector<Label> admissible_labels(int order) {
  switch (order) {
    case 6:
      return {Label::kDelta0, Label::kDelta1, Label::kDelta2};
    case 10:
      return {Label::kDeltaP0, Label::kDeltaP1};
    case 14:
      return {Label::kDeltaPP0};
    default:
      throw ConfigError("order must be 6, 10 or 14");
  }
}

bool matches_case_i1(std::span<const long> e, const TangentialSet& s) {
  if (e.size() != 6) return false;
  for (std::size_t a = 0; a < 6; ++a) {
    if (!s.contains(e[a]) || e[a] <= 0) continue;
    for (std::size_t b = 0; b < 6; ++b) {
      if (b == a || e[b] != -e[a]) continue;
      int pos = 0;
      int neg = 0;
      for (std::size_t c = 0; c < 6; ++c) {
        if (c == a || c == b) continue;
        (e[c] > 0 ? pos : neg) += 1;
      }
      if ((pos == 1 && neg == 3) || (pos == 3 && neg == 1)) return true;
    }
  }
  return false;
}

namespace {

// Rounding error of divisor_value is far below this; anything within it of a
// decision boundary is settled in exact arithmetic.
constexpr double kGuard = 1e-12;

bool lex_less(const std::vector<long>& a, const std::vector<long>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Partial {
  std::optional<Rational> min;
  double min_value = std::numeric_limits<double>::infinity();
  std::vector<long> witness;
  std::uint64_t checked = 0;
  std::uint64_t ordered = 0;
  std::uint64_t zero_count = 0;
  std::vector<std::vector<long>> zeros;
  CaseBoundCheck case_i1;
};

TailCertificate tail_certificate(const Enumerator& e, long jmax) {
  TailCertificate t;
  for (const auto& w : e.work()) {
    if (w.k != 2) continue;
    t.applicable = true;
    long s = 0;
    for (long j : w.s_part) s += j;
    const Rational sigma = abs(divisor(w.s_part));
    if (s == 0) {
      // The free pair is (j, -j): such tuples are normal iff the S-part is.
      if (index_sets::is_normal_pairing(w.s_part)) continue;
      ++t.patterns;
      if (sigma == 0) {
        t.certified = false;
        t.uncovered.push_back(w.s_part);
      } else if (!t.weakest_margin || sigma < *t.weakest_margin) {
        t.weakest_margin = sigma;
      }
      continue;
    }
    ++t.patterns;
    const long as = s < 0 ? -s : s;
    if (jmax <= as) {
      t.certified = false;
      t.uncovered.push_back(w.s_part);
      continue;
    }
    const Rational bound = Rational(1, jmax) + Rational(1, jmax - as);
    const Rational margin = sigma - bound;
    if (margin <= 0) {
      t.certified = false;
      t.uncovered.push_back(w.s_part);
    }
    if (!t.weakest_margin || margin < *t.weakest_margin) t.weakest_margin = margin;
  }
  return t;
}

}  // namespace

DivisorReport survey_min_divisor(int order, const std::vector<Label>& labels,
                                 const TangentialSet& s, long jmax, SurveyOptions opts) {
  index_sets::EnumerationOptions eo;
  eo.ceiling = opts.ceiling;
  eo.exclude_normal = opts.exclude_normal;
  eo.non_s_bound = opts.non_s_bound;
  Enumerator en(order, labels, s, jmax, eo);

  const int nw = resolve_threads(opts.threads);
  std::vector<Partial> parts(static_cast<std::size_t>(nw));
  const Rational case_bound = make_rational(2 * s.n2(), 1 + s.n2() * s.n2());
  const double case_bound_value = case_bound.get_d();
  const bool check_case = order == 6;

  parallel_for(en.work().size(), nw, [&](std::size_t i, int w) {
    Partial& p = parts[static_cast<std::size_t>(w)];
    en.run(en.work()[i], [&](const CanonicalTuple& t) {
      ++p.checked;
      p.ordered += t.multiplicity;
      const double d = std::abs(divisor_value(t.entries));
      std::optional<Rational> exact;
      auto get_exact = [&]() -> const Rational& {
        if (!exact) exact = abs(divisor(t.entries));
        return *exact;
      };
      if (d < kGuard && get_exact() == 0) {
        ++p.zero_count;
        if (p.zeros.size() < opts.max_zeros_recorded) {
          p.zeros.emplace_back(t.entries.begin(), t.entries.end());
        }
      }
      if (d <= p.min_value + kGuard) {
        const Rational& q = get_exact();
        std::vector<long> cand(t.entries.begin(), t.entries.end());
        if (!p.min || q < *p.min || (q == *p.min && lex_less(cand, p.witness))) {
          p.min = q;
          p.min_value = std::min(p.min_value, d);
          p.witness = std::move(cand);
        }
      }
      if (check_case && matches_case_i1(t.entries, s)) {
        ++p.case_i1.matched;
        const bool ok = d > case_bound_value + kGuard || get_exact() >= case_bound;
        if (!ok) {
          if (p.case_i1.violations++ == 0) {
            p.case_i1.first_violation.assign(t.entries.begin(), t.entries.end());
          }
        }
      }
    });
  });

  DivisorReport r;
  r.order = order;
  r.labels = labels;
  r.n1 = s.n1();
  r.n2 = s.n2();
  r.jmax = jmax;
  for (auto& p : parts) {
    r.tuples_checked += p.checked;
    r.ordered_tuples += p.ordered;
    r.zero_count += p.zero_count;
    for (auto& z : p.zeros) r.zeros.push_back(std::move(z));
    if (p.min && (!r.min_abs_divisor || *p.min < *r.min_abs_divisor ||
                  (*p.min == *r.min_abs_divisor && lex_less(p.witness, r.witness)))) {
      r.min_abs_divisor = p.min;
      r.witness = p.witness;
    }
    r.case_i1.matched += p.case_i1.matched;
    if (p.case_i1.violations > 0 &&
        (r.case_i1.violations == 0 || lex_less(p.case_i1.first_violation, r.case_i1.first_violation))) {
      r.case_i1.first_violation = p.case_i1.first_violation;
    }
    r.case_i1.violations += p.case_i1.violations;
  }
  std::sort(r.zeros.begin(), r.zeros.end(), lex_less);
  if (r.zeros.size() > opts.max_zeros_recorded) r.zeros.resize(opts.max_zeros_recorded);
  r.tail = tail_certificate(en, opts.non_s_bound > 0 ? std::min(opts.non_s_bound, jmax) : jmax);
  r.non_s_bound = opts.non_s_bound > 0 ? std::min(opts.non_s_bound, jmax) : jmax;
  return r;
}

Integer discriminant_form1(long n1) {
  Integer a = Integer(n1) * n1 - 27;
  return a * a - 720;
}

Integer discriminant_form2(long n1, long r) {
  const Integer c = 2 * Integer(r) * r - 1;
  Integer a = Integer(n1) * n1 - c;
  return a * a - c * c + 1;
}

bool is_perfect_square(const Integer& x) {
  if (x < 0) return false;
  return mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

bool discriminant_square_check(long n1) { return is_perfect_square(discriminant_form1(n1)); }

bool discriminant_square_check(long n1, long r) {
  return is_perfect_square(discriminant_form2(n1, r));
}

namespace {

nlohmann::json tuple_list(const std::vector<std::vector<long>>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : v) a.push_back(t);
  return a;
}

}  // namespace

nlohmann::json to_json(const DivisorReport& r) {
  nlohmann::json j;
  j["order"] = r.order;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["jmax"] = r.jmax;
  if (r.non_s_bound != r.jmax) j["non_s_bound"] = r.non_s_bound;
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : r.labels) labels.push_back(index_sets::label_name(l));
  j["labels"] = labels;
  j["min_divisor"] = r.min_abs_divisor ? rational_to_json(*r.min_abs_divisor) : nlohmann::json();
  j["min_divisor_value"] = r.min_abs_divisor ? r.min_abs_divisor->get_d() : 0.0;
  j["witness"] = r.witness;
  j["zeros"] = tuple_list(r.zeros);
  j["zero_count"] = r.zero_count;
  j["tuples_checked"] = r.tuples_checked;
  j["ordered_tuples"] = r.ordered_tuples;
  nlohmann::json tail;
  tail["applicable"] = r.tail.applicable;
  tail["certified"] = r.tail.certified;
  tail["patterns"] = r.tail.patterns;
  tail["uncovered"] = tuple_list(r.tail.uncovered);
  tail["weakest_margin"] =
      r.tail.weakest_margin ? rational_to_json(*r.tail.weakest_margin) : nlohmann::json();
  j["tail"] = tail;
  if (r.order == 6) {
    nlohmann::json c;
    c["matched"] = r.case_i1.matched;
    c["violations"] = r.case_i1.violations;
    c["first_violation"] = r.case_i1.first_violation;
    j["case_i1_bound"] = c;
  }
  return j;
}

}  // namespace gbbm::divisor_analysis
