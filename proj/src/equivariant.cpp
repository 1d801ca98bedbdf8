#include "orient/equivariant.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "orient/errors.hpp"

namespace orient {

namespace {

const TorusContext& torus_of(const RingPtr& ring) {
  if (!ring->torus()) throw DomainError("localized classes need an equivariant ring");
  return *ring->torus();
}

int zeta_degree(const Exponents& e, const std::vector<std::size_t>& zetas) {
  int d = 0;
  for (auto i : zetas) d += e[i];
  return d;
}

}  // namespace

Element char_c1(const Character& lambda, const RingPtr& ring) { return ring->character_class(lambda); }

TruncatedSeries char_c1(const Character& lambda, const TorusContext& ctx, const FormalGroupLaw& law) {
  return build_space(law, SpaceModel::point(), ctx)->character_class(lambda).value();
}

// ---------------------------------------------------------------- LocalizedElement

LocalizedElement::LocalizedElement(Element numerator, std::optional<int> codegree_bound)
    : numerator_(std::move(numerator)) {
  numerator_bound_ = codegree_bound ? *codegree_bound : numerator_.codegree().value_or(0);
}

LocalizedElement::LocalizedElement(Element numerator, std::map<Character, int> den, int bound)
    : numerator_(std::move(numerator)), denominators_(std::move(den)), numerator_bound_(bound) {}

LocalizedElement LocalizedElement::zero(const RingPtr& ring) { return LocalizedElement(ring->zero(), 0); }

LocalizedElement LocalizedElement::one(const RingPtr& ring) { return LocalizedElement(ring->one(), 0); }

LocalizedElement LocalizedElement::over(Element numerator, const Character& lambda, int exponent,
                                        std::optional<int> codegree_bound) {
  if (lambda.is_zero()) throw DomainError("cannot divide by the class of the zero character");
  if (exponent < 0) throw DomainError("negative denominator exponent");
  const RingPtr ring = numerator.ring();
  torus_of(ring);
  int bound = codegree_bound ? *codegree_bound : numerator.codegree().value_or(0);
  if (exponent == 0) return LocalizedElement(std::move(numerator), {}, bound);
  Character mu = lambda;
  if (!lambda.is_canonical()) {
    // 1/c_(-mu) = g(c_mu)^(-1) / c_mu.
    mu = -lambda;
    auto c = ring->character_class(mu);
    auto g = ring->element(apply_u_series(ring->law(), ring->inverse().g, c.value(), ring->multiplier()));
    numerator = numerator * ring->invert(g).pow(exponent);
  }
  return LocalizedElement(std::move(numerator), {{mu, exponent}}, bound);
}

int LocalizedElement::denominator_codegree() const {
  int s = 0;
  for (const auto& [l, e] : denominators_) s += e;
  return s;
}

int LocalizedElement::required_cap() const {
  return std::max(net_codegree(), 0) + denominator_codegree() + 1;
}

bool LocalizedElement::truncation_sufficient() const {
  if (!ring()->torus()) return denominators_.empty();
  return required_cap() <= ring()->torus()->cap;
}

Element LocalizedElement::denominator_element() const {
  Element d = ring()->one();
  for (const auto& [l, e] : denominators_) d = d * ring()->character_class(l).pow(e);
  return d;
}

std::string LocalizedElement::to_string() const {
  std::ostringstream out;
  out << "(" << numerator_.to_string() << ")";
  if (denominators_.empty()) return out.str();
  out << " / (";
  bool first = true;
  for (const auto& [l, e] : denominators_) {
    if (!first) out << " ";
    out << "[" << l.to_string() << "]";
    if (e != 1) out << "^" << e;
    first = false;
  }
  out << ")";
  return out.str();
}

LocalizedElement operator+(const LocalizedElement& a, const LocalizedElement& b) {
  std::map<Character, int> den = a.denominators_;
  for (const auto& [l, e] : b.denominators_) den[l] = std::max(den[l], e);
  auto lift = [&](const LocalizedElement& x, int& bound) {
    Element n = x.numerator_;
    bound = x.numerator_bound_;
    for (const auto& [l, e] : den) {
      auto it = x.denominators_.find(l);
      int missing = e - (it == x.denominators_.end() ? 0 : it->second);
      if (missing == 0) continue;
      n = n * x.ring()->character_class(l).pow(missing);
      bound += missing;
    }
    return n;
  };
  int ba = 0;
  int bb = 0;
  Element na = lift(a, ba);
  Element nb = lift(b, bb);
  return LocalizedElement(na + nb, std::move(den), std::max(ba, bb));
}

LocalizedElement operator*(const LocalizedElement& a, const LocalizedElement& b) {
  std::map<Character, int> den = a.denominators_;
  for (const auto& [l, e] : b.denominators_) den[l] += e;
  return LocalizedElement(a.numerator_ * b.numerator_, std::move(den), a.numerator_bound_ + b.numerator_bound_);
}

LocalizedElement LocalizedElement::operator-() const {
  return LocalizedElement(-numerator_, denominators_, numerator_bound_);
}

LocalizedElement loc_combine(LocOp op, const LocalizedElement& a, const LocalizedElement& b) {
  LocalizedElement r = op == LocOp::add ? a + b : a * b;
  if (const auto& t = r.ring()->torus(); t && r.required_cap() > t->max_cap)
    throw InsufficientTruncation("localized class needs truncation " + std::to_string(r.required_cap()) +
                                 ", above the ceiling " + std::to_string(t->max_cap));
  return r;
}

// ---------------------------------------------------------------- Euler classes

LocalizedElement invert_equivariant_euler(const BundleSpec& bundle, const RingPtr& ring) {
  torus_of(ring);
  LocalizedElement result = LocalizedElement::one(ring);
  for (const auto& s : bundle.summands) {
    if (s.character.is_zero())
      throw DomainError("invert_equivariant_euler: summand with zero character (fixed part is not zero)");
    auto x = ring->c1(s.line);
    // x^(k+1) = 0 makes the geometric series below finite.
    const int k = nilpotency_index(x) - 1;
    auto c = ring->character_class(s.character);
    auto n = ring->fgl_sum(c, x) - c;
    Element numer = ring->zero();
    Element neg_n_power = ring->one();
    for (int j = 0; j <= k; ++j) {
      numer = numer + neg_n_power * c.pow(k - j);
      neg_n_power = -(neg_n_power * n);
    }
    result = result * LocalizedElement::over(numer, s.character, k + 1, k);
  }
  return result;
}

// ---------------------------------------------------------------- verdicts

Element scalar_in(const RingPtr& ring, const TruncatedSeries& c) { return ring->element(c); }

namespace {

void require_sufficient(const LocalizedElement& a) {
  if (a.truncation_sufficient()) return;
  const int have = a.ring()->torus() ? a.ring()->torus()->cap : 0;
  throw InsufficientTruncation("equality verdict needs truncation " + std::to_string(a.required_cap()) +
                               ", have " + std::to_string(have));
}

}  // namespace

bool assert_constant(const LocalizedElement& a, const TruncatedSeries& c) {
  require_sufficient(a);
  return a.numerator() == scalar_in(a.ring(), c) * a.denominator_element();
}

bool assert_constant(const LocalizedElement& a, const Rational& c) {
  require_sufficient(a);
  return a.numerator() == a.ring()->constant(c) * a.denominator_element();
}

std::optional<TruncatedSeries> extract_constant(const LocalizedElement& a) {
  require_sufficient(a);
  const auto& ring = a.ring();
  if (a.denominators().empty()) {
    if (ring->torus()) {
      for (int l = 0; l < ring->torus()->rank; ++l)
        if (!a.numerator().value().free_of(ring->table()->index(TorusContext::zeta_name(l)))) return std::nullopt;
    }
    return a.numerator().value();
  }
  const auto& table = *ring->table();
  std::vector<std::size_t> zetas;
  for (int l = 0; l < ring->torus()->rank; ++l) zetas.push_back(table.index(TorusContext::zeta_name(l)));
  const int s = a.denominator_codegree();

  // Lowest z-degree part of the denominator has rational coefficients; pick
  // one of its monomials and read c off the numerator there.
  auto d = a.denominator_element();
  std::optional<Exponents> pick;
  Rational dc;
  for (const auto& [e, c] : d.value().terms())
    if (zeta_degree(e, zetas) == s) {
      pick = e;
      dc = c;
      break;
    }
  if (!pick) return std::nullopt;
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool z = std::find(zetas.begin(), zetas.end(), i) != zetas.end();
    if (!z && (*pick)[i] != 0) return std::nullopt;
  }
  std::vector<TruncatedSeries::Term> terms;
  for (const auto& [e, c] : a.numerator().value().terms()) {
    bool match = true;
    for (auto i : zetas) match = match && e[i] == (*pick)[i];
    if (!match) continue;
    Exponents rest = e;
    for (auto i : zetas) rest[i] = 0;
    terms.emplace_back(std::move(rest), c / dc);
  }
  auto c = TruncatedSeries::from_terms(ring->table(), ring->profile(), std::move(terms));
  if (!(a.numerator() == ring->element(c) * d)) return std::nullopt;
  return c;
}

std::optional<TruncatedSeries> nonequivariant_limit(const LocalizedElement& a) {
  const auto& ring = a.ring();
  const int s = a.denominator_codegree();
  const auto& model = ring->model();
  auto plain = IntersectionRing::build(ring->law(), ring->inverse(), model, std::nullopt);
  if (!ring->torus()) return a.numerator().value().embedded(plain->table(), plain->profile());
  const TorusContext& t = *ring->torus();
  if (s + 1 > t.cap)
    throw InsufficientTruncation("non-equivariant limit needs truncation " + std::to_string(s + 1) + ", have " +
                                 std::to_string(t.cap));

  // w_l = B^l with B > 2 max|a_l| keeps <w, lambda> != 0 for every denominator.
  long base = 2;
  for (const auto& [l, e] : a.denominators())
    for (int x : l.weights) base = std::max<long>(base, 2L * std::abs(x) + 1);
  std::vector<Rational> w;
  Rational p = 1;
  for (int l = 0; l < t.rank; ++l) {
    w.push_back(p);
    p *= base;
  }
  auto line = IntersectionRing::build(ring->law(), ring->inverse(), model, TorusContext{1, t.cap, t.max_cap});
  auto z = line->zeta(0);
  std::map<std::string, TruncatedSeries> bindings;
  for (int l = 0; l < t.rank; ++l) {
    auto name = TorusContext::zeta_name(l);
    if (!a.numerator().value().free_of(ring->table()->index(name))) bindings.emplace(name, z.scaled(w[l]).value());
  }
  auto n = series_substitute(a.numerator().value(), bindings, line->table(), line->profile(), line->multiplier());

  Rational v0 = 1;
  for (const auto& [l, e] : a.denominators()) {
    Rational dot = 0;
    for (std::size_t i = 0; i < l.weights.size(); ++i) dot += w[i] * l.weights[i];
    if (sgn(dot) == 0) throw VerificationFailure("non-equivariant limit: degenerate one-parameter subgroup");
    for (int k = 0; k < e; ++k) v0 *= dot;
  }
  const std::size_t zi = line->table()->index(TorusContext::zeta_name(0));
  std::vector<TruncatedSeries::Term> terms;
  for (const auto& [e, c] : n.terms()) {
    if (e[zi] < s) return std::nullopt;
    if (e[zi] > s) continue;
    Exponents rest = e;
    rest[zi] = 0;
    terms.emplace_back(std::move(rest), c / v0);
  }
  return TruncatedSeries::from_terms(line->table(), line->profile(), std::move(terms))
      .embedded(plain->table(), plain->profile());
}

// ---------------------------------------------------------------- moving between rings

LocalizedElement push_to_point(const LocalizedElement& a) {
  const auto& ring = a.ring();
  if (ring->level_count() == 0) return a;
  auto point = ring->point_ring();
  auto value = integrate(a.numerator());
  return LocalizedElement(point->element(value), a.denominators_, a.numerator_bound_ - ring->dimension());
}

LocalizedElement restrict_to(const LocalizedElement& a, const RingPtr& target) {
  if (target->law().kind() != a.ring()->law().kind()) throw DomainError("restrict_to: different theories");
  // Coefficients the target law does not carry (m_i beyond its order) only
  // occur with filtration above the target cap; such terms are dropped.
  const auto& src = a.numerator().value();
  const auto& from = *src.table();
  const auto& to = *target->table();
  const std::optional<int> bound = target->profile().total_bound;
  std::vector<TruncatedSeries::Term> kept;
  for (const auto& [e, c] : src.terms()) {
    bool foreign = false;
    for (std::size_t i = 0; i < e.size(); ++i) foreign = foreign || (e[i] != 0 && !to.find(from[i].name));
    if (!foreign) {
      kept.emplace_back(e, c);
    } else if (!bound || from.filtration(e) < *bound) {
      throw DomainError("restrict_to: term outside the target law survives the target truncation");
    }
  }
  auto value = TruncatedSeries::from_terms(src.table(), src.profile(), std::move(kept))
                   .embedded(target->table(), target->profile());
  return LocalizedElement(target->element(value), a.denominators_, a.numerator_bound_);
}

LocalizedElement specialize(const LocalizedElement& a, const RingPtr& target) {
  if (a.ring()->law().kind() != FglKind::universal) throw DomainError("specialize: element is not universal");
  auto value = specialize_universal(a.numerator().value(), target->law().kind());
  return LocalizedElement(target->element(value.embedded(target->table(), target->profile())), a.denominators_,
                          a.numerator_bound_);
}

}  // namespace orient
