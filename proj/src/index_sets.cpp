#include "gbbm/index_sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "gbbm/errors.hpp"

namespace gbbm::index_sets {

TangentialSet::TangentialSet(long n1, long n2) : n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 <= n1) {
    throw ConfigError(fmt::format("tangential set needs 1 <= n1 < n2, got ({}, {})", n1, n2));
  }
}

bool TangentialSet::contains(long j) const noexcept {
  const long a = j < 0 ? -j : j;
  return a == n1_ || a == n2_;
}

IndexTuple::IndexTuple(std::vector<long> entries) : entries_(std::move(entries)) {
  const auto n = entries_.size();
  if (n != 6 && n != 10 && n != 14) {
    throw std::invalid_argument(fmt::format("tuple length {} is not 6, 10 or 14", n));
  }
  for (long j : entries_) {
    if (j == 0) throw std::invalid_argument("tuple entries must be nonzero");
  }
}

long IndexTuple::momentum() const noexcept {
  long m = 0;
  for (long j : entries_) m += j;
  return m;
}

IndexTuple IndexTuple::canonical() const {
  auto e = entries_;
  std::sort(e.begin(), e.end());
  return IndexTuple(std::move(e));
}

namespace {

struct LabelInfo {
  Label label;
  const char* name;
  int order;
  int lo;
  int hi;
};

constexpr LabelInfo kLabels[] = {
    {Label::kDelta0, "Delta0", 6, 0, 0},      {Label::kDelta1, "Delta1", 6, 1, 1},
    {Label::kDelta2, "Delta2", 6, 2, 2},      {Label::kDelta3, "Delta3", 6, 3, 6},
    {Label::kDeltaP0, "Delta'0", 10, 0, 0},   {Label::kDeltaP1, "Delta'1", 10, 1, 1},
    {Label::kDeltaP2, "Delta'2", 10, 2, 10},  {Label::kDeltaPP0, "Delta''0", 14, 0, 0},
    {Label::kDeltaPP1, "Delta''1", 14, 1, 14},
};

const LabelInfo& info(Label l) {
  for (const auto& i : kLabels) {
    if (i.label == l) return i;
  }
  throw std::logic_error("unknown label");
}

constexpr std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

double binomial(double n, int k) {
  if (k < 0 || n < k) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::string label_name(Label l) { return info(l).name; }

Label label_from_name(const std::string& name) {
  for (const auto& i : kLabels) {
    if (name == i.name) return i.label;
  }
  throw ConfigError("unknown index-set label '" + name + "'");
}

int label_order(Label l) { return info(l).order; }

NonSRange non_s_range(Label l) { return {info(l).lo, info(l).hi}; }

bool is_normal_pairing(std::span<const long> entries) {
  // The multiset is closed under negation iff its sorted copy reads as its
  // own negative backwards.
  std::array<long, 32> buf{};
  std::vector<long> heap;
  long* a = buf.data();
  if (entries.size() > buf.size()) {
    heap.assign(entries.begin(), entries.end());
    a = heap.data();
  } else {
    std::copy(entries.begin(), entries.end(), a);
  }
  const std::size_t n = entries.size();
  std::sort(a, a + n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != -a[n - 1 - i]) return false;
  }
  return true;
}

bool is_normal_pairing(const IndexTuple& t) { return is_normal_pairing(t.entries()); }

int non_s_count(std::span<const long> entries, const TangentialSet& s) {
  int c = 0;
  for (long j : entries) c += s.contains(j) ? 0 : 1;
  return c;
}

Label label_for(int order, int non_s) {
  for (const auto& i : kLabels) {
    if (i.order == order && non_s >= i.lo && non_s <= i.hi) return i.label;
  }
  throw std::invalid_argument(fmt::format("no label for order {} with {} non-S entries", order, non_s));
}

TupleClass classify(const IndexTuple& t, const TangentialSet& s) {
  TupleClass c;
  c.order = static_cast<int>(t.order());
  c.non_s_count = non_s_count(t.entries(), s);
  c.normal = is_normal_pairing(t);
  c.label = label_for(c.order, c.non_s_count);
  return c;
}

std::uint64_t multiplicity(std::span<const long> sorted_entries) {
  std::uint64_t m = factorial(static_cast<int>(sorted_entries.size()));
  std::size_t i = 0;
  while (i < sorted_entries.size()) {
    std::size_t k = i;
    while (k < sorted_entries.size() && sorted_entries[k] == sorted_entries[i]) ++k;
    m /= factorial(static_cast<int>(k - i));
    i = k;
  }
  return m;
}

Enumerator::Enumerator(int order, std::vector<Label> labels, TangentialSet s, long jmax,
                       EnumerationOptions opts)
    : order_(order), labels_(std::move(labels)), s_(s), jmax_(jmax), opts_(opts) {
  if (order != 6 && order != 10 && order != 14) {
    throw ConfigError(fmt::format("order must be 6, 10 or 14, got {}", order));
  }
  if (jmax < s.n2()) throw ConfigError("jmax must be at least n2");
  if (labels_.empty()) throw ConfigError("no labels requested");
  free_bound_ = opts_.non_s_bound > 0 ? std::min(opts_.non_s_bound, jmax) : jmax;
  std::set<int> ks;
  for (Label l : labels_) {
    if (label_order(l) != order) {
      throw ConfigError(fmt::format("label {} does not belong to order {}", label_name(l), order));
    }
    if (l == Label::kDeltaPP1) {
      throw ConfigError("Delta''1 is supported for classification only, not enumeration");
    }
    const auto r = non_s_range(l);
    for (int k = r.lo; k <= r.hi; ++k) ks.insert(k);
  }
  for (long j = -free_bound_; j <= free_bound_; ++j) {
    if (j != 0 && !s.contains(j)) non_s_values_.push_back(j);
  }
  const auto sv = s.values();
  const double v = static_cast<double>(non_s_values_.size());
  for (int k : ks) {
    const int m = order - k;
    // Non-decreasing S-multisets of size m.
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    while (true) {
      WorkItem w;
      w.k = k;
      for (int i : idx) w.s_part.push_back(sv[static_cast<std::size_t>(i)]);
      work_.push_back(std::move(w));
      projected_ += k == 0 ? 1.0 : binomial(v + k - 2, k - 1);
      int p = m - 1;
      while (p >= 0 && idx[static_cast<std::size_t>(p)] == 3) --p;
      if (p < 0) break;
      const int nv = idx[static_cast<std::size_t>(p)] + 1;
      for (int q = p; q < m; ++q) idx[static_cast<std::size_t>(q)] = nv;
    }
  }
  if (projected_ > opts_.ceiling) {
    throw ResourceLimitError(fmt::format(
        "projected enumeration of {:.3g} candidates exceeds the ceiling {:.3g}", projected_,
        opts_.ceiling));
  }
}

void Enumerator::run(const WorkItem& item,
                     const std::function<void(const CanonicalTuple&)>& visit) const {
  long s = 0;
  for (long j : item.s_part) s += j;
  const int k = item.k;
  std::vector<long> free(static_cast<std::size_t>(k));
  std::vector<long> merged(static_cast<std::size_t>(order_));

  auto emit = [&]() {
    std::merge(item.s_part.begin(), item.s_part.end(), free.begin(), free.end(), merged.begin());
    const bool normal = is_normal_pairing(merged);
    if (opts_.exclude_normal && normal) return;
    if (opts_.only_normal && !normal) return;
    visit(CanonicalTuple{merged, k, multiplicity(merged)});
  };
  auto admissible_last = [&](long j) { return j != 0 && j >= -free_bound_ && j <= free_bound_ && !s_.contains(j);
  };

  if (k == 0) {
    if (s == 0) emit();
    return;
  }
  const auto& vals = non_s_values_;
  // Choose free[0..k-2] non-decreasing; free[k-1] is solved from momentum.
  auto rec = [&](auto&& self, int depth, std::size_t start, long partial) -> void {
    if (depth == k - 1) {
      const long last = -s - partial;
      if (depth > 0 && last < free[static_cast<std::size_t>(depth - 1)]) return;
      if (!admissible_last(last)) return;
      free[static_cast<std::size_t>(depth)] = last;
      emit();
      return;
    }
    const int remaining = k - 1 - depth;  // entries after this one, including the solved one
    const long target = -s - partial;
    // Lower bound: the remaining entries are at most jmax each.
    const long lo = target - static_cast<long>(remaining) * free_bound_;
    auto it = std::lower_bound(vals.begin() + static_cast<long>(start), vals.end(), lo);
    for (; it != vals.end(); ++it) {
      const long v = *it;
      // The remaining entries are >= v each.
      if (static_cast<long>(remaining + 1) * v > target) break;
      free[static_cast<std::size_t>(depth)] = v;
      self(self, depth + 1, static_cast<std::size_t>(it - vals.begin()), partial + v);
    }
  };
  rec(rec, 0, 0, 0);
}

void Enumerator::run_all(const std::function<void(const CanonicalTuple&)>& visit) const {
  for (const auto& w : work_) run(w, visit);
}

std::vector<IndexTuple> enumerate_admissible(int order, const std::vector<Label>& labels,
                                             const TangentialSet& s, long jmax,
                                             EnumerationOptions opts) {
  Enumerator e(order, labels, s, jmax, opts);
  std::vector<IndexTuple> out;
  e.run_all([&](const CanonicalTuple& t) {
    out.emplace_back(std::vector<long>(t.entries.begin(), t.entries.end()));
  });
  std::sort(out.begin(), out.end(), [](const IndexTuple& a, const IndexTuple& b) {
    return std::lexicographical_compare(a.entries().begin(), a.entries().end(),
                                        b.entries().begin(), b.entries().end());
  });
  return out;
}

}  // namespace gbbm::index_sets
