#include "gbbm/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "gbbm/parallel.hpp"
#include "gbbm/spectral_core.hpp"

namespace gbbm::symbolic {

bool Atom::key_less(const Atom& o) const noexcept {
  if (pi_pow != o.pi_pow) return pi_pow < o.pi_pow;
  if (i_pow != o.i_pow) return i_pow < o.i_pow;
  return odd < o.odd;
}

Complex Atom::value() const {
  double v = rat.get_d() * std::pow(std::numbers::pi, pi_pow);
  for (auto j : odd) v *= spectral::delta_value(j);
  return i_pow ? Complex(0.0, v) : Complex(v, 0.0);
}

Atom multiply(const Atom& a, const Atom& b) {
  Atom r;
  r.rat = a.rat * b.rat;
  r.pi_pow = a.pi_pow + b.pi_pow;
  r.i_pow = a.i_pow + b.i_pow;
  if (r.i_pow == 2) {
    r.i_pow = 0;
    r.rat = -r.rat;
  }
  // Symmetric difference of the odd sets; shared entries square to delta^2.
  std::size_t i = 0, k = 0;
  r.odd.reserve(a.odd.size() + b.odd.size());
  while (i < a.odd.size() || k < b.odd.size()) {
    if (k == b.odd.size() || (i < a.odd.size() && a.odd[i] < b.odd[k])) {
      r.odd.push_back(a.odd[i++]);
    } else if (i == a.odd.size() || b.odd[k] < a.odd[i]) {
      r.odd.push_back(b.odd[k++]);
    } else {
      r.rat *= spectral::delta_sq(spectral::Mode(a.odd[i]));
      ++i;
      ++k;
    }
  }
  return r;
}

SymbolicCoefficient::SymbolicCoefficient(Atom a) {
  if (a.rat != 0) atoms_.push_back(std::move(a));
}

SymbolicCoefficient SymbolicCoefficient::rational(const Rational& q) {
  Atom a;
  a.rat = q;
  return SymbolicCoefficient(std::move(a));
}

void SymbolicCoefficient::add_atom(const Atom& a, int sign) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a,
                             [](const Atom& x, const Atom& y) { return x.key_less(y); });
  if (it != atoms_.end() && it->same_key(a)) {
    if (sign > 0) {
      it->rat += a.rat;
    } else {
      it->rat -= a.rat;
    }
    if (it->rat == 0) atoms_.erase(it);
    return;
  }
  Atom c = a;
  if (sign < 0) c.rat = -c.rat;
  atoms_.insert(it, std::move(c));
}

SymbolicCoefficient& SymbolicCoefficient::operator+=(const SymbolicCoefficient& o) {
  for (const auto& a : o.atoms_) add_atom(a, 1);
  return *this;
}

SymbolicCoefficient& SymbolicCoefficient::operator-=(const SymbolicCoefficient& o) {
  for (const auto& a : o.atoms_) add_atom(a, -1);
  return *this;
}

SymbolicCoefficient& SymbolicCoefficient::operator*=(const Rational& q) {
  if (q == 0) {
    atoms_.clear();
    return *this;
  }
  for (auto& a : atoms_) a.rat *= q;
  return *this;
}

SymbolicCoefficient SymbolicCoefficient::times_i() const {
  SymbolicCoefficient r;
  for (const auto& a : atoms_) {
    Atom b = a;
    if (b.i_pow == 1) {
      b.i_pow = 0;
      b.rat = -b.rat;
    } else {
      b.i_pow = 1;
    }
    r.add_atom(b, 1);
  }
  return r;
}

SymbolicCoefficient SymbolicCoefficient::conj() const {
  SymbolicCoefficient r = *this;
  for (auto& a : r.atoms_) {
    if (a.i_pow == 1) a.rat = -a.rat;
  }
  return r;
}

SymbolicCoefficient operator*(const SymbolicCoefficient& a, const SymbolicCoefficient& b) {
  SymbolicCoefficient r;
  for (const auto& x : a.atoms_) {
    for (const auto& y : b.atoms_) r.add_atom(multiply(x, y), 1);
  }
  return r;
}

bool operator==(const SymbolicCoefficient& a, const SymbolicCoefficient& b) {
  if (a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
    if (!a.atoms_[i].same_key(b.atoms_[i]) || a.atoms_[i].rat != b.atoms_[i].rat) return false;
  }
  return true;
}

Complex SymbolicCoefficient::value() const {
  Complex v{};
  for (const auto& a : atoms_) v += a.value();
  return v;
}

bool SymbolicCoefficient::is_exactly_real() const noexcept {
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [](const Atom& a) { return a.i_pow == 0 && a.odd.empty(); });
}

bool SymbolicCoefficient::all_delta_even() const noexcept {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.odd.empty(); });
}

nlohmann::json SymbolicCoefficient::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : atoms_) {
    nlohmann::json j = rational_to_json(a.rat);
    j["pi_pow"] = a.pi_pow;
    j["i_pow"] = a.i_pow;
    j["odd_delta"] = a.odd;
    arr.push_back(j);
  }
  return arr;
}

Monomial Monomial::from(std::span<const long> entries) {
  if (entries.size() > static_cast<std::size_t>(kMaxDegree)) {
    throw std::length_error(fmt::format("monomial degree {} exceeds {}", entries.size(), kMaxDegree));
  }
  Monomial m;
  m.deg = static_cast<std::uint8_t>(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] == 0) throw std::invalid_argument("z_0 is not a variable");
    m.e[i] = static_cast<std::int32_t>(entries[i]);
  }
  std::sort(m.e.begin(), m.e.begin() + m.deg);
  return m;
}

long Monomial::momentum() const noexcept {
  long s = 0;
  for (int i = 0; i < deg; ++i) s += e[i];
  return s;
}

bool Monomial::is_normal() const noexcept {
  for (int i = 0; i < deg; ++i) {
    if (e[i] != -e[deg - 1 - i]) return false;
  }
  return true;
}

int Monomial::non_s(const index_sets::TangentialSet& s) const noexcept {
  int c = 0;
  for (int i = 0; i < deg; ++i) c += s.contains(e[i]) ? 0 : 1;
  return c;
}

int Monomial::exponent(std::int32_t j) const noexcept {
  return static_cast<int>(std::count(e.begin(), e.begin() + deg, j));
}

Monomial Monomial::flipped() const {
  Monomial m;
  m.deg = deg;
  for (int i = 0; i < deg; ++i) m.e[i] = -e[deg - 1 - i];
  return m;
}

bool operator<(const Monomial& a, const Monomial& b) noexcept {
  if (a.deg != b.deg) return a.deg < b.deg;
  return std::lexicographical_compare(a.e.begin(), a.e.begin() + a.deg, b.e.begin(),
                                      b.e.begin() + b.deg);
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 1469598103934665603ull ^ m.deg;
  for (int i = 0; i < m.deg; ++i) {
    h ^= static_cast<std::uint32_t>(m.e[i]);
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

void HamiltonianPoly::add(const Monomial& m, const SymbolicCoefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

const SymbolicCoefficient* HamiltonianPoly::find(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? nullptr : &it->second;
}

SymbolicCoefficient HamiltonianPoly::coefficient(const Monomial& m) const {
  const auto* c = find(m);
  return c ? *c : SymbolicCoefficient{};
}

HamiltonianPoly& HamiltonianPoly::operator+=(const HamiltonianPoly& o) {
  if (!(o.meta_ == meta_)) throw std::invalid_argument("polynomial metadata mismatch");
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

HamiltonianPoly& HamiltonianPoly::operator*=(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= q;
  return *this;
}

std::vector<std::pair<Monomial, const SymbolicCoefficient*>> HamiltonianPoly::sorted() const {
  std::vector<std::pair<Monomial, const SymbolicCoefficient*>> v;
  v.reserve(terms_.size());
  for (const auto& [m, c] : terms_) v.emplace_back(m, &c);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

bool HamiltonianPoly::momentum_conserved() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.momentum() == 0; });
}

bool HamiltonianPoly::reality_holds() const {
  for (const auto& [m, c] : terms_) {
    const auto* partner = find(m.flipped());
    if (!partner || !(*partner == c.conj())) return false;
  }
  return true;
}

std::vector<int> HamiltonianPoly::degrees() const {
  std::vector<int> d;
  for (const auto& [m, c] : terms_) {
    if (std::find(d.begin(), d.end(), m.deg) == d.end()) d.push_back(m.deg);
  }
  std::sort(d.begin(), d.end());
  return d;
}

int HamiltonianPoly::min_non_s() const {
  const auto s = meta_.tangential();
  int best = kMaxDegree + 1;
  for (const auto& [m, c] : terms_) best = std::min(best, m.non_s(s));
  return best;
}

namespace {

struct IndexEntry {
  const Monomial* m;
  const SymbolicCoefficient* c;
  int exp;
  int non_s;
};

// Removes one occurrence of x from m.
void erase_one(const Monomial& m, std::int32_t x, std::int32_t* out) {
  bool removed = false;
  int k = 0;
  for (int i = 0; i < m.deg; ++i) {
    if (!removed && m.e[i] == x) {
      removed = true;
      continue;
    }
    out[k++] = m.e[i];
  }
}

}  // namespace

HamiltonianPoly poisson_bracket(const HamiltonianPoly& a, const HamiltonianPoly& b,
                                const Projection& proj, int threads) {
  if (!(a.meta() == b.meta())) throw std::invalid_argument("polynomial metadata mismatch");
  const auto s = a.meta().tangential();

  std::unordered_map<std::int32_t, std::vector<IndexEntry>> index;
  for (const auto& [m, c] : b.terms()) {
    const int ns = m.non_s(s);
    for (int i = 0; i < m.deg; ++i) {
      if (i > 0 && m.e[i] == m.e[i - 1]) continue;
      index[m.e[i]].push_back({&m, &c, m.exponent(m.e[i]), ns});
    }
  }
  for (auto& [x, v] : index) {
    std::stable_sort(v.begin(), v.end(), [](const IndexEntry& p, const IndexEntry& q) { return p.non_s < q.non_s; });
  }

  std::vector<std::pair<const Monomial*, const SymbolicCoefficient*>> aterms;
  aterms.reserve(a.size());
  for (const auto& [m, c] : a.terms()) aterms.emplace_back(&m, &c);

  const int nw = resolve_threads(threads);
  std::vector<HamiltonianPoly::Map> local(static_cast<std::size_t>(nw));
  constexpr std::size_t kChunk = 256;
  const std::size_t nchunks = (aterms.size() + kChunk - 1) / kChunk;

  parallel_for(nchunks, nw, [&](std::size_t chunk, int w) {
    auto& out = local[static_cast<std::size_t>(w)];
    const std::size_t end = std::min(aterms.size(), (chunk + 1) * kChunk);
    std::array<std::int32_t, kMaxDegree> ra{}, rb{};
    for (std::size_t t = chunk * kChunk; t < end; ++t) {
      const Monomial& ma = *aterms[t].first;
      const SymbolicCoefficient& ca = *aterms[t].second;
      const int na = ma.non_s(s);
      for (int i = 0; i < ma.deg; ++i) {
        const std::int32_t x = ma.e[i];
        if (i > 0 && x == ma.e[i - 1]) continue;
        auto it = index.find(-x);
        if (it == index.end()) continue;
        const bool x_free = !s.contains(x);
        const int limit = proj.max_non_s - na + (x_free ? 2 : 0);
        const int ea = ma.exponent(x);
        erase_one(ma, x, ra.data());
        for (const IndexEntry& be : it->second) {
          if (be.non_s > limit) break;
          const int deg = ma.deg + be.m->deg - 2;
          if (deg > kMaxDegree) throw std::length_error("bracket degree exceeds the monomial capacity");
          erase_one(*be.m, -x, rb.data());
          Monomial prod;
          prod.deg = static_cast<std::uint8_t>(deg);
          std::merge(ra.begin(), ra.begin() + (ma.deg - 1), rb.begin(), rb.begin() + (be.m->deg - 1),
                     prod.e.begin());
          if (proj.normal_only && !prod.is_normal()) continue;
          SymbolicCoefficient c = ca * *be.c;
          c *= Rational((x > 0 ? 1 : -1) * ea * be.exp);
          c = c.times_i();
          auto [slot, inserted] = out.try_emplace(prod, std::move(c));
          if (!inserted) {
            slot->second += c;
          }
        }
      }
    }
  });

  HamiltonianPoly r(a.meta());
  for (auto& m : local) {
    for (auto& [mon, c] : m) r.add(mon, c);
  }
  return r;
}

HamiltonianPoly product(const HamiltonianPoly& a, const HamiltonianPoly& b) {
  if (!(a.meta() == b.meta())) throw std::invalid_argument("polynomial metadata mismatch");
  HamiltonianPoly r(a.meta());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const int deg = ma.deg + mb.deg;
      if (deg > kMaxDegree) throw std::length_error("product degree exceeds the monomial capacity");
      Monomial m;
      m.deg = static_cast<std::uint8_t>(deg);
      std::merge(ma.e.begin(), ma.e.begin() + ma.deg, mb.e.begin(), mb.e.begin() + mb.deg, m.e.begin());
      r.add(m, ca * cb);
    }
  }
  return r;
}

NumericPoly::NumericPoly(const HamiltonianPoly& p) : jmax_(p.meta().jmax) {
  offsets_.push_back(0);
  for (const auto& [m, c] : p.sorted()) {
    for (int i = 0; i < m.deg; ++i) {
      if (std::labs(m.e[i]) > jmax_) throw std::out_of_range("monomial mode beyond jmax");
      entries_.push_back(m.e[i]);
    }
    offsets_.push_back(static_cast<std::uint32_t>(entries_.size()));
    coef_.push_back(c->value());
  }
}

Complex NumericPoly::evaluate(std::span<const Complex> z) const {
  Complex acc{};
  for (std::size_t t = 0; t < coef_.size(); ++t) {
    Complex p = coef_[t];
    for (auto k = offsets_[t]; k < offsets_[t + 1]; ++k) p *= z[static_cast<std::size_t>(entries_[k] + jmax_)];
    acc += p;
  }
  return acc;
}

void NumericPoly::add_gradient(std::span<const Complex> z, std::span<Complex> grad, Complex scale) const {
  std::array<Complex, kMaxDegree + 1> prefix{};
  for (std::size_t t = 0; t < coef_.size(); ++t) {
    const auto b = offsets_[t];
    const auto n = offsets_[t + 1] - b;
    prefix[0] = scale * coef_[t];
    for (std::uint32_t k = 0; k < n; ++k) {
      prefix[k + 1] = prefix[k] * z[static_cast<std::size_t>(entries_[b + k] + jmax_)];
    }
    Complex suffix = 1.0;
    for (std::uint32_t k = n; k-- > 0;) {
      const auto slot = static_cast<std::size_t>(entries_[b + k] + jmax_);
      grad[slot] += prefix[k] * suffix;
      suffix *= z[slot];
    }
  }
}

}  // namespace gbbm::symbolic
