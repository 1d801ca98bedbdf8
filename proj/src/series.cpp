#include "orient/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "orient/errors.hpp"

namespace orient {

namespace {

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int x : e) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

using Accumulator = std::unordered_map<Exponents, Rational, ExponentsHash>;

std::vector<TruncatedSeries::Term> drain(Accumulator& acc) {
  std::vector<TruncatedSeries::Term> out;
  out.reserve(acc.size());
  for (auto& [e, c] : acc) {
    if (sgn(c) != 0) out.emplace_back(e, std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void require_same_table(const TablePtr& a, const TablePtr& b, const char* what) {
  if (!same_table(a, b)) throw TableMismatch(std::string(what) + ": variable tables differ");
}

// Newton iteration g <- g + g(1 - f g); the error squares each round, so a
// nilpotent error dies after a logarithmic number of rounds.
TruncatedSeries newton_inverse(const TruncatedSeries& f, const Multiply& mul) {
  const Rational c0 = f.constant_term();
  if (sgn(c0) == 0) throw DomainError("inverse: constant term is zero");
  auto one = TruncatedSeries::constant(f.table(), f.profile(), 1);
  Rational inv0 = 1 / c0;
  auto g = TruncatedSeries::constant(f.table(), f.profile(), inv0);
  for (int round = 0; round < 64; ++round) {
    auto err = one - mul(f, g);
    if (err.is_zero()) return g;
    g = g + mul(g, err);
  }
  throw DomainError("inverse: non-constant part is not nilpotent under the profile");
}

}  // namespace

// ---------------------------------------------------------------- rationals

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_pair_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw DomainError("bad rational literal '" + s + "'");
  if (sgn(q.get_den()) == 0) throw DomainError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

Rational binomial(long n, long k) {
  if (k < 0) return 0;
  Rational r = 1;
  for (long i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
  return r;
}

// ---------------------------------------------------------------- tables

VariableTable::VariableTable(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars_) {
    if (v.name.empty()) throw DomainError("variable with empty name");
    if (!seen.insert(v.name).second) throw DomainError("duplicate variable '" + v.name + "'");
    if (v.filtered && v.codegree <= 0)
      throw DomainError("filtered variable '" + v.name + "' needs positive codegree");
    if (v.cap && *v.cap < 1) throw DomainError("cap of '" + v.name + "' must be positive");
  }
}

std::optional<std::size_t> VariableTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::size_t VariableTable::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw DomainError("unknown variable '" + std::string(name) + "'");
}

int VariableTable::filtration(const Exponents& e) const {
  int w = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].filtered) w += vars_[i].codegree * e[i];
  return w;
}

int VariableTable::codegree(const Exponents& e) const {
  int w = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) w += vars_[i].codegree * e[i];
  return w;
}

bool operator==(const VariableTable& a, const VariableTable& b) {
  if (a.vars_.size() != b.vars_.size()) return false;
  for (std::size_t i = 0; i < a.vars_.size(); ++i) {
    const auto& x = a.vars_[i];
    const auto& y = b.vars_[i];
    if (x.name != y.name || x.codegree != y.codegree || x.filtered != y.filtered ||
        x.laurent != y.laurent)
      return false;
  }
  return true;
}

TablePtr make_table(std::vector<Variable> vars) {
  return std::make_shared<const VariableTable>(std::move(vars));
}

bool same_table(const TablePtr& a, const TablePtr& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------- profiles

Profile Profile::defaults(const VariableTable& table, std::optional<int> total_bound) {
  Profile p;
  p.total_bound = total_bound;
  p.caps.reserve(table.size());
  for (const auto& v : table.variables()) p.caps.push_back(v.cap);
  return p;
}

bool Profile::admits(const VariableTable& table, const Exponents& e) const {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 && !table[i].laurent) return false;
    if (caps[i] && e[i] >= *caps[i]) return false;
  }
  if (total_bound && table.filtration(e) >= *total_bound) return false;
  return true;
}

Profile Profile::coarser(const Profile& other) const {
  Profile p;
  if (total_bound && other.total_bound)
    p.total_bound = std::min(*total_bound, *other.total_bound);
  else
    p.total_bound = total_bound ? total_bound : other.total_bound;
  p.caps.resize(std::max(caps.size(), other.caps.size()));
  for (std::size_t i = 0; i < p.caps.size(); ++i) {
    std::optional<int> a = i < caps.size() ? caps[i] : std::nullopt;
    std::optional<int> b = i < other.caps.size() ? other.caps[i] : std::nullopt;
    if (a && b)
      p.caps[i] = std::min(*a, *b);
    else
      p.caps[i] = a ? a : b;
  }
  return p;
}

bool Profile::unbounded_in(const VariableTable& table, std::size_t i) const {
  if (caps[i]) return false;
  return !(total_bound && table[i].filtered);
}

// ---------------------------------------------------------------- series

TruncatedSeries::TruncatedSeries(TablePtr table, Profile profile)
    : table_(std::move(table)), profile_(std::move(profile)) {
  if (!table_) throw DomainError("series without a variable table");
  if (profile_.caps.size() != table_->size())
    throw DomainError("profile does not match the variable table");
}

TruncatedSeries TruncatedSeries::constant(TablePtr table, Profile profile, const Rational& c) {
  std::size_t n = table->size();
  return monomial(std::move(table), std::move(profile), Exponents(n, 0), c);
}

TruncatedSeries TruncatedSeries::variable(TablePtr table, Profile profile, std::string_view name) {
  Exponents e(table->size(), 0);
  e[table->index(name)] = 1;
  return monomial(std::move(table), std::move(profile), std::move(e), 1);
}

TruncatedSeries TruncatedSeries::monomial(TablePtr table, Profile profile, Exponents e,
                                          const Rational& c) {
  TruncatedSeries s(std::move(table), std::move(profile));
  if (e.size() != s.table_->size()) throw DomainError("exponent vector has the wrong length");
  if (sgn(c) != 0 && s.profile_.admits(*s.table_, e)) {
    s.terms_.emplace_back(std::move(e), c);
    s.terms_.back().second.canonicalize();
  }
  return s;
}

TruncatedSeries TruncatedSeries::from_terms(TablePtr table, Profile profile,
                                            std::vector<Term> terms) {
  TruncatedSeries s(std::move(table), std::move(profile));
  Accumulator acc;
  for (auto& [e, c] : terms) {
    if (e.size() != s.table_->size()) throw DomainError("exponent vector has the wrong length");
    if (!s.profile_.admits(*s.table_, e)) continue;
    c.canonicalize();
    acc[std::move(e)] += c;
  }
  s.terms_ = drain(acc);
  return s;
}

Rational TruncatedSeries::constant_term() const {
  if (!terms_.empty()) {
    const auto& e = terms_.front().first;
    if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) return terms_.front().second;
  }
  // Laurent variables can sort before the zero vector; fall back to a search.
  for (const auto& [e, c] : terms_)
    if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) return c;
  return 0;
}

Rational TruncatedSeries::coefficient(const Exponents& e) const {
  if (e.size() != table_->size()) throw DomainError("exponent vector has the wrong length");
  if (!profile_.admits(*table_, e)) throw OutOfProfile("monomial lies outside the truncation profile");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, const Exponents& k) { return t.first < k; });
  if (it != terms_.end() && it->first == e) return it->second;
  return 0;
}

std::optional<int> TruncatedSeries::max_codegree() const {
  std::optional<int> best;
  for (const auto& [e, c] : terms_) {
    int d = table_->codegree(e);
    if (!best || d > *best) best = d;
  }
  return best;
}

std::optional<int> TruncatedSeries::min_filtration() const {
  std::optional<int> best;
  for (const auto& [e, c] : terms_) {
    int d = table_->filtration(e);
    if (!best || d < *best) best = d;
  }
  return best;
}

bool TruncatedSeries::free_of(std::size_t i) const {
  return std::all_of(terms_.begin(), terms_.end(), [i](const Term& t) { return t.first[i] == 0; });
}

TruncatedSeries TruncatedSeries::restricted(const Profile& p) const {
  TruncatedSeries s(table_, profile_.coarser(p));
  for (const auto& t : terms_)
    if (s.profile_.admits(*table_, t.first)) s.terms_.push_back(t);
  return s;
}

TruncatedSeries TruncatedSeries::redeclared(const Profile& p) const {
  return from_terms(table_, p, terms_);
}

TruncatedSeries TruncatedSeries::embedded(TablePtr target, Profile profile) const {
  std::vector<std::optional<std::size_t>> where(table_->size());
  for (std::size_t i = 0; i < table_->size(); ++i) where[i] = target->find((*table_)[i].name);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    Exponents f(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!where[i])
        throw TableMismatch("variable '" + (*table_)[i].name + "' is missing from the target table");
      f[*where[i]] = e[i];
    }
    out.emplace_back(std::move(f), c);
  }
  return from_terms(std::move(target), std::move(profile), std::move(out));
}

TruncatedSeries TruncatedSeries::scaled(const Rational& c) const {
  TruncatedSeries s(table_, profile_);
  if (sgn(c) == 0) return s;
  s.terms_ = terms_;
  for (auto& t : s.terms_) t.second *= c;
  return s;
}

TruncatedSeries TruncatedSeries::pow(unsigned n) const {
  auto result = constant(table_, profile_, 1);
  auto base = *this;
  while (n) {
    if (n & 1u) result = poly_mul(result, base);
    n >>= 1u;
    if (n) base = poly_mul(base, base);
  }
  return result;
}

TruncatedSeries TruncatedSeries::operator-() const { return scaled(-1); }

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_table(a.table_, b.table_, "add");
  TruncatedSeries s(a.table_, a.profile_.coarser(b.profile_));
  const bool narrowed_a = !(s.profile_ == a.profile_);
  const bool narrowed_b = !(s.profile_ == b.profile_);
  auto keep = [&](const TruncatedSeries::Term& t, bool narrowed) {
    return !narrowed || s.profile_.admits(*s.table_, t.first);
  };
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  s.terms_.reserve(a.terms_.size() + b.terms_.size());
  while (i != a.terms_.end() || j != b.terms_.end()) {
    if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
      if (keep(*i, narrowed_a)) s.terms_.push_back(*i);
      ++i;
    } else if (i == a.terms_.end() || j->first < i->first) {
      if (keep(*j, narrowed_b)) s.terms_.push_back(*j);
      ++j;
    } else {
      Rational c = i->second + j->second;
      if (sgn(c) != 0 && keep(*i, narrowed_a || narrowed_b)) s.terms_.emplace_back(i->first, c);
      ++i;
      ++j;
    }
  }
  return s;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return poly_mul(a, b); }

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_table(a.table_, b.table_, "compare");
  Profile common = a.profile_.coarser(b.profile_);
  auto x = a.restricted(common);
  auto y = b.restricted(common);
  return x.terms_ == y.terms_;
}

std::string TruncatedSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    bool unit_monomial = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (first)
      out << (sgn(c) < 0 ? "-" : "");
    else
      out << (sgn(c) < 0 ? " - " : " + ");
    first = false;
    bool wrote = false;
    if (mag != 1 || unit_monomial) {
      out << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << '*';
      out << (*table_)[i].name;
      if (e[i] != 1) out << '^' << e[i];
      wrote = true;
    }
  }
  return out.str();
}

TruncatedSeries poly_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_table(a.table(), b.table(), "multiply");
  const auto& table = *a.table();
  Profile profile = a.profile().coarser(b.profile());
  if (a.is_zero() || b.is_zero()) return TruncatedSeries(a.table(), profile);

  const std::size_t n = table.size();
  std::vector<std::size_t> capped;
  for (std::size_t i = 0; i < n; ++i)
    if (profile.caps[i]) capped.push_back(i);

  // Visit b in increasing filtration so the inner loop can stop early.
  std::vector<std::pair<int, std::size_t>> order;
  order.reserve(b.size());
  auto bt = b.terms();
  for (std::size_t j = 0; j < bt.size(); ++j) order.emplace_back(table.filtration(bt[j].first), j);
  std::sort(order.begin(), order.end());

  Accumulator acc;
  acc.reserve(a.size() + b.size());
  Exponents scratch(n);
  Rational product;
  for (const auto& [ea, ca] : a.terms()) {
    int wa = table.filtration(ea);
    if (profile.total_bound && wa >= *profile.total_bound) continue;
    for (const auto& [wb, j] : order) {
      if (profile.total_bound && wa + wb >= *profile.total_bound) break;
      const auto& [eb, cb] = bt[j];
      bool ok = true;
      for (std::size_t k : capped) {
        if (ea[k] + eb[k] >= *profile.caps[k]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (std::size_t k = 0; k < n; ++k) scratch[k] = ea[k] + eb[k];
      mpq_mul(product.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(scratch);
      if (inserted)
        it->second = product;
      else
        it->second += product;
    }
  }
  return TruncatedSeries::from_terms(a.table(), std::move(profile), drain(acc));
}

TruncatedSeries series_substitute(const TruncatedSeries& f,
                                  const std::map<std::string, TruncatedSeries>& bindings,
                                  TablePtr target, const Profile& target_profile,
                                  const Multiply& mul) {
  const auto& src = *f.table();
  const std::size_t n = src.size();

  std::vector<std::optional<std::size_t>> bound_to;  // source var -> binding slot
  std::vector<const TruncatedSeries*> slot;
  bound_to.resize(n);
  for (const auto& [name, series] : bindings) {
    auto i = src.find(name);
    if (!i) throw DomainError("substitution binds '" + name + "', which the series does not use");
    if (!same_table(series.table(), target))
      throw TableMismatch("substitution: binding for '" + name + "' is over another table");
    bound_to[*i] = slot.size();
    slot.push_back(&series);
  }

  // Bound variables that the profile truncates make f an infinite series;
  // composing it with something that has a constant term is not defined.
  for (std::size_t i = 0; i < n; ++i) {
    if (!bound_to[i]) continue;
    if (!f.profile().unbounded_in(src, i) && sgn(slot[*bound_to[i]]->constant_term()) != 0)
      throw DomainError("substitution of a series with nonzero constant term for '" + src[i].name +
                        "' into a truncated series");
  }

  std::vector<std::optional<std::size_t>> carry(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!bound_to[i]) carry[i] = target->find(src[i].name);

  const std::size_t k = slot.size();
  // Power caches per slot; negative powers use the inverse.
  std::vector<std::map<int, TruncatedSeries>> powers(k);
  auto one = TruncatedSeries::constant(target, target_profile, 1);
  auto power = [&](std::size_t s, int e) -> const TruncatedSeries& {
    auto& cache = powers[s];
    if (auto it = cache.find(e); it != cache.end()) return it->second;
    if (e == 0) return cache.emplace(0, one).first->second;
    if (e > 0) {
      if (!cache.count(1)) cache.emplace(1, slot[s]->restricted(target_profile));
      const TruncatedSeries& base = cache.at(1);
      auto below = cache.lower_bound(e);  // first key >= e; step back to the largest < e
      --below;
      int have = below->first > 0 ? below->first : 1;
      TruncatedSeries cur = cache.at(have);
      while (have < e) {
        cur = mul(cur, base);
        ++have;
        cache.emplace(have, cur);
      }
      return cache.at(e);
    }
    if (!cache.count(-1))
      cache.emplace(-1, newton_inverse(slot[s]->restricted(target_profile), mul));
    const TruncatedSeries& inv = cache.at(-1);
    auto above = cache.upper_bound(e);  // smallest key > e, at most -1
    int have = above->first < 0 ? above->first : -1;
    TruncatedSeries cur = cache.at(have);
    while (have > e) {
      cur = mul(cur, inv);
      --have;
      cache.emplace(have, cur);
    }
    return cache.at(e);
  };

  // Group terms by the exponents of all bound slots except the last, so the
  // last slot only needs cheap scalar-monomial products.
  std::map<std::vector<int>, std::map<int, std::vector<TruncatedSeries::Term>>> groups;
  for (const auto& [e, c] : f.terms()) {
    std::vector<int> prefix(k == 0 ? 0 : k - 1, 0);
    int last = 0;
    Exponents carried(target->size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      if (bound_to[i]) {
        std::size_t s = *bound_to[i];
        if (s + 1 == k)
          last = e[i];
        else
          prefix[s] = e[i];
      } else {
        if (!carry[i])
          throw TableMismatch("substitution: variable '" + src[i].name +
                              "' is neither bound nor present in the target");
        carried[*carry[i]] = e[i];
      }
    }
    groups[prefix][last].emplace_back(std::move(carried), c);
  }

  TruncatedSeries result(target, target_profile);
  for (const auto& [prefix, by_last] : groups) {
    TruncatedSeries inner(target, target_profile);
    for (const auto& [last, terms] : by_last) {
      auto coeff = TruncatedSeries::from_terms(target, target_profile, terms);
      if (coeff.is_zero()) continue;
      inner = inner + (k == 0 ? coeff : mul(coeff, power(k - 1, last)));
    }
    if (inner.is_zero()) continue;
    for (std::size_t s = 0; s + 1 < k; ++s)
      if (prefix[s] != 0) inner = mul(inner, power(s, prefix[s]));
    result = result + inner;
  }
  return result;
}

TruncatedSeries series_substitute(const TruncatedSeries& f,
                                  const std::map<std::string, TruncatedSeries>& bindings) {
  if (bindings.empty()) return f;
  const auto& first = bindings.begin()->second;
  Profile p = first.profile();
  for (const auto& [name, s] : bindings) p = p.coarser(s.profile());
  return series_substitute(f, bindings, first.table(), p);
}

TruncatedSeries invert_unit_series(const TruncatedSeries& f) {
  if (sgn(f.constant_term()) == 0) throw DomainError("invert_unit_series: constant term is zero");
  const auto& table = *f.table();
  for (const auto& [e, c] : f.terms()) {
    bool constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (constant) continue;
    bool nilpotent = f.profile().total_bound && table.filtration(e) > 0;
    for (std::size_t i = 0; i < e.size() && !nilpotent; ++i)
      nilpotent = e[i] > 0 && f.profile().caps[i].has_value();
    if (!nilpotent)
      throw DomainError("invert_unit_series: term " +
                        TruncatedSeries::from_terms(f.table(), f.profile(), {{e, c}}).to_string() +
                        " is not nilpotent under the profile");
  }
  return newton_inverse(f, poly_mul);
}

}  // namespace orient
