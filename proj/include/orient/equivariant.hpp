#pragma once

// Localized equivariant classes: numerator / prod [lambda]_F(z)^e with the
// denominator kept symbolic. Characters are stored canonically (first nonzero
// weight positive); c_(-mu) = c_mu g(c_mu) moves the unit g(c_mu) into the
// numerator.
//
// Equality against a constant is decided by cross-multiplication in the
// truncated ring, and only after the bookkeeping shows the truncation is
// large enough: max(net, 0) + s + 1 <= cap, where s is the denominator
// codegree and net = numerator codegree - s.

#include <map>
#include <optional>
#include <string>

#include "orient/space.hpp"

namespace orient {

/// [lambda]_F(z1..zr) in an equivariant ring.
Element char_c1(const Character& lambda, const RingPtr& ring);
/// Same over a fresh point ring of the given context and law.
TruncatedSeries char_c1(const Character& lambda, const TorusContext& ctx, const FormalGroupLaw& law);

class LocalizedElement {
 public:
  /// `codegree_bound` defaults to the computed codegree of the numerator
  /// (0 for zero). Pass it explicitly when the numerator may be truncated.
  explicit LocalizedElement(Element numerator, std::optional<int> codegree_bound = std::nullopt);

  static LocalizedElement zero(const RingPtr& ring);
  static LocalizedElement one(const RingPtr& ring);
  /// numerator / [lambda]^exponent, lambda nonzero.
  static LocalizedElement over(Element numerator, const Character& lambda, int exponent = 1,
                               std::optional<int> codegree_bound = std::nullopt);

  const Element& numerator() const { return numerator_; }
  const RingPtr& ring() const { return numerator_.ring(); }
  /// Canonical character -> exponent.
  const std::map<Character, int>& denominators() const { return denominators_; }

  int numerator_codegree() const { return numerator_bound_; }
  int denominator_codegree() const;
  int net_codegree() const { return numerator_bound_ - denominator_codegree(); }
  /// Smallest cap at which equality verdicts are sound.
  int required_cap() const;
  bool truncation_sufficient() const;

  /// prod [lambda]^e in the ring.
  Element denominator_element() const;

  std::string to_string() const;

  friend LocalizedElement operator+(const LocalizedElement& a, const LocalizedElement& b);
  friend LocalizedElement operator*(const LocalizedElement& a, const LocalizedElement& b);
  LocalizedElement operator-() const;

 private:
  LocalizedElement(Element numerator, std::map<Character, int> den, int bound);
  friend LocalizedElement push_to_point(const LocalizedElement& a);
  friend LocalizedElement restrict_to(const LocalizedElement& a, const RingPtr& target);
  friend LocalizedElement specialize(const LocalizedElement& a, const RingPtr& target);

  Element numerator_;
  std::map<Character, int> denominators_;
  int numerator_bound_ = 0;
};

enum class LocOp { add, mul };

/// Ring operations of R[Q^-1]. Throws InsufficientTruncation when the result
/// needs a cap beyond the context ceiling.
LocalizedElement loc_combine(LocOp op, const LocalizedElement& a, const LocalizedElement& b);

/// prod over summands of 1 / (c_lambda +_F x). Every character must be nonzero.
LocalizedElement invert_equivariant_euler(const BundleSpec& bundle, const RingPtr& ring);

/// numerator == c * denominator in the truncated ring. Throws
/// InsufficientTruncation when the bookkeeping does not allow a verdict.
bool assert_constant(const LocalizedElement& a, const TruncatedSeries& c);
bool assert_constant(const LocalizedElement& a, const Rational& c);

/// The z-free scalar c with a == c, if there is one.
std::optional<TruncatedSeries> extract_constant(const LocalizedElement& a);

/// Value at z = 0 of a denominator-free class: the element is restricted to
/// a regular one-parameter subgroup z_l -> w_l z, where it reads
/// N(z) / (z^s V(z)) with V(0) a nonzero rational. Denominator-free means the
/// z^j coefficients of N vanish for j < s; the limit is N_s / V(0). Exact in
/// every theory once cap > s. nullopt when the class is not denominator-free.
std::optional<TruncatedSeries> nonequivariant_limit(const LocalizedElement& a);

/// Integrates the numerator over the (integrable) base, coefficient-wise in z.
LocalizedElement push_to_point(const LocalizedElement& a);

/// Moves the element to a ring with the same law and model but a smaller
/// cap, dropping the terms the smaller cap kills.
LocalizedElement restrict_to(const LocalizedElement& a, const RingPtr& target);

/// Specializes a universal-theory element into `target` (Chow or K-theory
/// ring over the same model and torus).
LocalizedElement specialize(const LocalizedElement& a, const RingPtr& target);

/// Scalar series `c` (over any point table) as an element of the ring.
Element scalar_in(const RingPtr& ring, const TruncatedSeries& c);

}  // namespace orient
