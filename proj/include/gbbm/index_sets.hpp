#pragma once

// Index tuples of orders 6, 10, 14 and their classification relative to the
// tangential set S = {+-n1, +-n2}.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gbbm::index_sets {

class TangentialSet {
 public:
  TangentialSet(long n1, long n2);

  long n1() const noexcept { return n1_; }
  long n2() const noexcept { return n2_; }
  bool contains(long j) const noexcept;
  /// The divisor arguments assume n1 >= 20.
  bool below_proof_regime() const noexcept { return n1_ < 20; }
  /// {-n2, -n1, n1, n2}
  std::array<long, 4> values() const noexcept { return {-n2_, -n1_, n1_, n2_}; }

 private:
  long n1_;
  long n2_;
};

class IndexTuple {
 public:
  explicit IndexTuple(std::vector<long> entries);

  std::span<const long> entries() const noexcept { return entries_; }
  std::size_t order() const noexcept { return entries_.size(); }
  long momentum() const noexcept;
  /// Non-decreasing representative of the permutation class.
  IndexTuple canonical() const;

 private:
  std::vector<long> entries_;
};

enum class Label {
  kDelta0,
  kDelta1,
  kDelta2,
  kDelta3,
  kDeltaP0,
  kDeltaP1,
  kDeltaP2,
  kDeltaPP0,
  kDeltaPP1,
};

std::string label_name(Label l);
Label label_from_name(const std::string& name);
int label_order(Label l);

struct TupleClass {
  int order = 0;
  int non_s_count = 0;
  bool normal = false;
  Label label = Label::kDelta0;
};

/// count(a) == count(-a) for every a.
bool is_normal_pairing(std::span<const long> entries);
bool is_normal_pairing(const IndexTuple& t);

int non_s_count(std::span<const long> entries, const TangentialSet& s);
Label label_for(int order, int non_s);

TupleClass classify(const IndexTuple& t, const TangentialSet& s);

/// Number of orderings of a sorted multiset.
std::uint64_t multiplicity(std::span<const long> sorted_entries);

/// Range of non-S counts covered by a label at its order.
struct NonSRange {
  int lo;
  int hi;
};
NonSRange non_s_range(Label l);

struct EnumerationOptions {
  double ceiling = 1e9;
  /// Keep only non-normal tuples (the admissible sets are all "\ N").
  bool exclude_normal = false;
  bool only_normal = false;
  /// Optional tighter bound on |j| for the non-S entries (0: use jmax).
  long non_s_bound = 0;
};

/// Canonical tuple handed to enumeration visitors. `entries` is sorted.
struct CanonicalTuple {
  std::span<const long> entries;
  int non_s;
  std::uint64_t multiplicity;
};

/// A unit of enumeration work: one multiset of S-entries combined with all
/// admissible non-S completions.
struct WorkItem {
  std::vector<long> s_part;
  int k;  // number of non-S entries
};

class Enumerator {
 public:
  Enumerator(int order, std::vector<Label> labels, TangentialSet s, long jmax,
             EnumerationOptions opts = {});

  /// Projected candidate count; throws ResourceLimitError above the ceiling.
  double projected_candidates() const noexcept { return projected_; }
  const std::vector<WorkItem>& work() const noexcept { return work_; }

  void run(const WorkItem& item, const std::function<void(const CanonicalTuple&)>& visit) const;
  void run_all(const std::function<void(const CanonicalTuple&)>& visit) const;

  int order() const noexcept { return order_; }
  long jmax() const noexcept { return jmax_; }
  const TangentialSet& tangential() const noexcept { return s_; }

 private:
  int order_;
  std::vector<Label> labels_;
  TangentialSet s_;
  long jmax_;
  long free_bound_;
  EnumerationOptions opts_;
  std::vector<long> non_s_values_;
  std::vector<WorkItem> work_;
  double projected_ = 0.0;
};

/// Collecting convenience wrapper around Enumerator.
std::vector<IndexTuple> enumerate_admissible(int order, const std::vector<Label>& labels,
                                             const TangentialSet& s, long jmax,
                                             EnumerationOptions opts = {});

}  // namespace gbbm::index_sets
