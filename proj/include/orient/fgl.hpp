#pragma once

// Formal group laws F(u, v) truncated at total degree N, with the three
// built-in theories: additive (Chow), multiplicative u + v - b*u*v
// (K-theory with Bott element b) and the universal rational law written
// through its logarithm u + m1*u^2 + m2*u^3 + ... .

#include <string>
#include <string_view>
#include <vector>

#include "orient/series.hpp"

namespace orient {

enum class FglKind { additive, multiplicative, universal };

std::string_view to_string(FglKind kind);
/// Accepts chow|additive, ktheory|multiplicative, universal.
FglKind parse_fgl_kind(std::string_view name);

/// Name of the Bott element.
inline constexpr std::string_view kBott = "b";
/// Name of the i-th logarithm coefficient of the universal law.
std::string universal_coefficient_name(int i);

class FormalGroupLaw {
 public:
  FglKind kind() const { return kind_; }
  /// All series in u, v are taken modulo total degree `order()`.
  int order() const { return order_; }

  /// Coefficient-ring variables: none, {b}, or {m1, ..., m_{N-1}}.
  const std::vector<Variable>& coefficient_variables() const { return coefficients_; }

  /// F(u, v) over the table [coefficients..., u, v].
  const TruncatedSeries& series() const { return law_; }
  const TablePtr& u_table() const { return u_table_; }
  Profile u_profile() const;
  /// The variable u over u_table().
  TruncatedSeries u() const;

  /// Logarithm l(u) of the universal law (over u_table()); zero otherwise.
  const TruncatedSeries& logarithm() const { return log_; }

 private:
  friend FormalGroupLaw make_fgl(FglKind kind, int order);
  FormalGroupLaw(FglKind kind, int order, std::vector<Variable> coefficients, TablePtr u_table,
                 TruncatedSeries law, TruncatedSeries log);

  FglKind kind_;
  int order_;
  std::vector<Variable> coefficients_;
  TablePtr u_table_;
  TruncatedSeries law_;
  TruncatedSeries log_;
};

/// Throws DomainError for order < 2.
FormalGroupLaw make_fgl(FglKind kind, int order);

/// g(u) with F(u, u g(u)) = 0 and g(0) = -1, known modulo u^(N-1).
struct InverseSeries {
  TruncatedSeries g;
  /// F(u, u g(u)) == 0 mod u^N was checked after solving.
  bool verified = false;
};

InverseSeries formal_inverse(const FormalGroupLaw& law);

/// True when F(u, u*g(u)) vanishes modulo u^N.
bool inverse_identity_holds(const FormalGroupLaw& law, const TruncatedSeries& g);

/// [n](u): [0] = 0, [n+1] = F([n], u), [-n](u) = [n](u g(u)). Over u_table().
TruncatedSeries n_series(const FormalGroupLaw& law, int n);

/// F(a, b) for elements with zero constant term over any table that carries
/// the coefficient variables of the law.
TruncatedSeries fgl_add(const FormalGroupLaw& law, const TruncatedSeries& a, const TruncatedSeries& b,
                        const Multiply& mul = poly_mul);

/// a*g(a): the first Chern class of the dual line when a = c1(L).
TruncatedSeries fgl_negate(const FormalGroupLaw& law, const InverseSeries& inverse,
                           const TruncatedSeries& a, const Multiply& mul = poly_mul);

/// Composes a series in u (over u_table()) with an element of another ring.
TruncatedSeries apply_u_series(const FormalGroupLaw& law, const TruncatedSeries& series_in_u,
                               const TruncatedSeries& a, const Multiply& mul = poly_mul);

/// Pushes a series over the universal coefficients to a specific theory:
/// additive sends every m_i to 0, multiplicative sends m_i to b^i/(i+1).
TruncatedSeries specialize_universal(const TruncatedSeries& x, FglKind target);

/// Table obtained from `table` by the same specialization (m's replaced).
TablePtr specialize_table(const TablePtr& table, FglKind target);

}  // namespace orient
