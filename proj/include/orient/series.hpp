#pragma once

// Exact rational multivariate polynomials truncated by a profile.
//
// A TruncatedSeries is a sparse map from exponent vectors to rationals over a
// shared VariableTable. The profile decides which monomials exist: a monomial
// whose filtered degree reaches the total bound, or whose exponent reaches a
// per-variable cap, is identically zero. Every value is immutable.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace orient {

using Rational = mpq_class;
using Exponents = std::vector<int>;

std::string to_string(const Rational& q);
/// "p/q" with an explicit denominator, the form used in machine output.
std::string to_pair_string(const Rational& q);
Rational parse_rational(std::string_view text);

struct Variable {
  std::string name;
  int codegree = 1;
  /// x^cap == 0 when set.
  std::optional<int> cap;
  /// Counts toward the total degree bound of a profile (weight = codegree).
  bool filtered = false;
  /// Negative exponents are allowed (the Bott element).
  bool laurent = false;
};

class VariableTable {
 public:
  VariableTable() = default;
  explicit VariableTable(std::vector<Variable> vars);

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  std::span<const Variable> variables() const { return vars_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws DomainError when the name is absent.
  std::size_t index(std::string_view name) const;

  /// Filtered degree of a monomial.
  int filtration(const Exponents& e) const;
  /// Grading codegree of a monomial (coefficient variables count negatively).
  int codegree(const Exponents& e) const;

  friend bool operator==(const VariableTable& a, const VariableTable& b);

 private:
  std::vector<Variable> vars_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

TablePtr make_table(std::vector<Variable> vars);
bool same_table(const TablePtr& a, const TablePtr& b);

struct Profile {
  /// Monomials with filtration >= total_bound vanish.
  std::optional<int> total_bound;
  std::vector<std::optional<int>> caps;

  /// Caps taken from the table, with the given total bound.
  static Profile defaults(const VariableTable& table, std::optional<int> total_bound = std::nullopt);

  bool admits(const VariableTable& table, const Exponents& e) const;
  /// Keeps less: the smaller bound and the smaller cap everywhere.
  Profile coarser(const Profile& other) const;
  /// True when no bound or cap restricts variable i.
  bool unbounded_in(const VariableTable& table, std::size_t i) const;

  friend bool operator==(const Profile&, const Profile&) = default;
};

class TruncatedSeries {
 public:
  using Term = std::pair<Exponents, Rational>;

  TruncatedSeries(TablePtr table, Profile profile);

  static TruncatedSeries constant(TablePtr table, Profile profile, const Rational& c);
  static TruncatedSeries variable(TablePtr table, Profile profile, std::string_view name);
  static TruncatedSeries monomial(TablePtr table, Profile profile, Exponents e, const Rational& c);
  /// Merges duplicates, drops zeros and monomials outside the profile.
  static TruncatedSeries from_terms(TablePtr table, Profile profile, std::vector<Term> terms);

  const TablePtr& table() const { return table_; }
  const Profile& profile() const { return profile_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational constant_term() const;
  /// Stored coefficient or zero; throws OutOfProfile for monomials the
  /// profile cannot represent.
  Rational coefficient(const Exponents& e) const;

  /// Largest grading codegree over the stored terms (nullopt when zero).
  std::optional<int> max_codegree() const;
  /// Smallest filtration over the stored terms (nullopt when zero).
  std::optional<int> min_filtration() const;
  /// True when every exponent of variable i is zero.
  bool free_of(std::size_t i) const;

  TruncatedSeries restricted(const Profile& p) const;
  /// Same stored terms under another profile. Only sound when the caller
  /// knows the terms are exact at `p` (e.g. u * g(u) when g is known mod u^(N-1)).
  TruncatedSeries redeclared(const Profile& p) const;
  /// Same terms over another table; variables are matched by name and any
  /// variable missing from the target must have exponent zero.
  TruncatedSeries embedded(TablePtr target, Profile profile) const;

  TruncatedSeries scaled(const Rational& c) const;
  TruncatedSeries pow(unsigned n) const;

  TruncatedSeries operator-() const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  /// Equality of coefficient maps under the coarser of the two profiles.
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

  std::string to_string() const;

 private:
  TablePtr table_;
  Profile profile_;
  std::vector<Term> terms_;  // sorted by exponents, no zero coefficients
};

/// Exact product reduced by the coarser profile of the operands.
TruncatedSeries poly_mul(const TruncatedSeries& a, const TruncatedSeries& b);

using Multiply = std::function<TruncatedSeries(const TruncatedSeries&, const TruncatedSeries&)>;

/// Composition f(bindings). Unbound variables of f are carried to the target
/// table by name. Negative exponents of a bound variable use the inverse of
/// its binding. `mul` lets a quotient ring supply its own reduction.
TruncatedSeries series_substitute(const TruncatedSeries& f,
                                  const std::map<std::string, TruncatedSeries>& bindings,
                                  TablePtr target, const Profile& target_profile,
                                  const Multiply& mul = poly_mul);

/// Overload whose target is the table and coarsest profile of the bindings.
TruncatedSeries series_substitute(const TruncatedSeries& f,
                                  const std::map<std::string, TruncatedSeries>& bindings);

/// g with f*g == 1 under the profile of f. The non-constant part of f must be
/// nilpotent under the profile.
TruncatedSeries invert_unit_series(const TruncatedSeries& f);

/// Exact binomial coefficient C(n, k) for integer n (possibly negative) and k >= 0.
Rational binomial(long n, long k);

}  // namespace orient
