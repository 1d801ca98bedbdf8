#include "orient/space.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "orient/errors.hpp"

namespace orient {

// ---------------------------------------------------------------- torus

bool Character::is_zero() const {
  return std::all_of(weights.begin(), weights.end(), [](int a) { return a == 0; });
}

bool Character::is_canonical() const {
  for (int a : weights)
    if (a != 0) return a > 0;
  return true;
}

Character Character::operator-() const {
  Character c = *this;
  for (int& a : c.weights) a = -a;
  return c;
}

Character operator+(const Character& a, const Character& b) {
  Character c;
  c.weights.assign(std::max(a.weights.size(), b.weights.size()), 0);
  for (std::size_t i = 0; i < a.weights.size(); ++i) c.weights[i] += a.weights[i];
  for (std::size_t i = 0; i < b.weights.size(); ++i) c.weights[i] += b.weights[i];
  return c;
}

std::string Character::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    int a = weights[i];
    if (a == 0) continue;
    if (!first) out << (a > 0 ? "+" : "-");
    else if (a < 0) out << "-";
    int m = a < 0 ? -a : a;
    if (m != 1) out << m;
    out << "t" << i + 1;
    first = false;
  }
  return first ? "0" : out.str();
}

Character basis_character(int rank, int i, int times) {
  if (i < 0 || i >= rank) throw DomainError("basis_character: index out of range");
  Character c;
  c.weights.assign(rank, 0);
  c.weights[i] = times;
  return c;
}

std::string TorusContext::zeta_name(int l) { return "z" + std::to_string(l + 1); }

// ---------------------------------------------------------------- bundles

LineBundle LineBundle::of_level(std::size_t k, int d) {
  LineBundle l;
  l.degrees.assign(k + 1, 0);
  l.degrees[k] = d;
  return l;
}

bool LineBundle::is_trivial() const {
  return std::all_of(degrees.begin(), degrees.end(), [](int d) { return d == 0; });
}

LineBundle LineBundle::dual() const {
  LineBundle l = *this;
  for (int& d : l.degrees) d = -d;
  return l;
}

LineBundle operator+(const LineBundle& a, const LineBundle& b) {
  LineBundle l;
  l.degrees.assign(std::max(a.degrees.size(), b.degrees.size()), 0);
  for (std::size_t i = 0; i < a.degrees.size(); ++i) l.degrees[i] += a.degrees[i];
  for (std::size_t i = 0; i < b.degrees.size(); ++i) l.degrees[i] += b.degrees[i];
  return l;
}

BundleSpec BundleSpec::trivial(std::size_t rank) {
  BundleSpec e;
  e.summands.resize(rank);
  return e;
}

BundleSpec BundleSpec::lines(std::vector<LineBundle> lines) {
  BundleSpec e;
  for (auto& l : lines) e.summands.push_back({std::move(l), {}});
  return e;
}

BundleSpec operator+(const BundleSpec& a, const BundleSpec& b) {
  BundleSpec e = a;
  e.summands.insert(e.summands.end(), b.summands.begin(), b.summands.end());
  return e;
}

// ---------------------------------------------------------------- models

namespace {

void check_unique_names(const std::vector<SpaceModel::Level>& levels) {
  std::set<std::string> seen;
  for (const auto& l : levels) {
    if (l.name.empty()) throw DomainError("malformed tower: empty level name");
    if (!seen.insert(l.name).second) throw DomainError("malformed tower: duplicate level name '" + l.name + "'");
  }
}

}  // namespace

SpaceModel SpaceModel::point() { return SpaceModel(); }

SpaceModel SpaceModel::projective(int n, std::string name) {
  if (n < 0) throw DomainError("malformed tower: negative projective dimension");
  SpaceModel m;
  m.dimension_ = n;
  m.levels_.push_back({name, n + 1, BundleSpec::trivial(n + 1), true});
  m.description_ = "P" + std::to_string(n) + "[" + name + "]";
  return m;
}

SpaceModel SpaceModel::bundle(const SpaceModel& base, BundleSpec bundle, std::string name) {
  if (bundle.rank() == 0) throw DomainError("malformed tower: projective bundle of rank 0");
  const std::size_t k = base.levels_.size();
  for (auto& s : bundle.summands) {
    if (s.line.degrees.size() > k)
      throw DomainError("malformed tower: summand refers to a level above the base");
    s.line.degrees.resize(k, 0);
  }
  SpaceModel m = base;
  m.dimension_ += static_cast<int>(bundle.rank()) - 1;
  const int r = static_cast<int>(bundle.rank());
  m.levels_.push_back({std::move(name), r, std::move(bundle), false});
  check_unique_names(m.levels_);
  m.description_ = "P(" + std::to_string(r) + " over " + base.description_ + ")[" + m.levels_.back().name + "]";
  return m;
}

SpaceModel SpaceModel::product(const SpaceModel& left, const SpaceModel& right) {
  SpaceModel m = left;
  const std::size_t shift = left.levels_.size();
  for (auto level : right.levels_) {
    for (auto& s : level.bundle.summands) s.line.degrees.insert(s.line.degrees.begin(), shift, 0);
    m.levels_.push_back(std::move(level));
  }
  check_unique_names(m.levels_);
  m.dimension_ = left.dimension_ + right.dimension_;
  m.description_ = left.description_ + " x " + right.description_;
  return m;
}

bool SpaceModel::integrable() const {
  return std::all_of(levels_.begin(), levels_.end(), [](const Level& l) { return l.projective_space; });
}

// ---------------------------------------------------------------- elements

Element::Element(RingPtr ring, TruncatedSeries value) : ring_(std::move(ring)), value_(std::move(value)) {
  if (!ring_) throw DomainError("element without a ring");
  value_ = ring_->reduce(value_);
}

namespace {

void require_same_ring(const Element& a, const Element& b) {
  if (a.ring() != b.ring() && !same_table(a.ring()->table(), b.ring()->table()))
    throw TableMismatch("elements of different rings");
}

}  // namespace

Element Element::scaled(const Rational& c) const { return Element(ring_, value_.scaled(c)); }

Element Element::pow(unsigned n) const {
  Element result = ring_->one();
  Element base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Element Element::operator-() const { return Element(ring_, -value_); }

Element operator+(const Element& a, const Element& b) {
  require_same_ring(a, b);
  return Element(a.ring_, a.value_ + b.value_);
}

Element operator-(const Element& a, const Element& b) {
  require_same_ring(a, b);
  return Element(a.ring_, a.value_ - b.value_);
}

Element operator*(const Element& a, const Element& b) {
  require_same_ring(a, b);
  return Element(a.ring_, a.ring_->multiply(a.value_, b.value_));
}

bool operator==(const Element& a, const Element& b) {
  require_same_ring(a, b);
  return a.value_ == b.value_;
}

// ---------------------------------------------------------------- rings

IntersectionRing::IntersectionRing(FormalGroupLaw law, InverseSeries inverse, SpaceModel model,
                                   std::optional<TorusContext> torus)
    : law_(std::move(law)),
      inverse_(std::move(inverse)),
      model_(std::move(model)),
      torus_(std::move(torus)),
      profile_() {
  std::vector<Variable> vars = law_.coefficient_variables();
  for (const auto& level : model_.levels()) {
    xi_index_.push_back(vars.size());
    vars.push_back({level.name, 1, std::nullopt, false, false});
  }
  if (torus_)
    for (int l = 0; l < torus_->rank; ++l)
      vars.push_back({TorusContext::zeta_name(l), 1, torus_->cap, true, false});
  table_ = make_table(std::move(vars));
  profile_ = Profile::defaults(*table_, torus_ ? std::optional<int>(torus_->cap) : std::nullopt);
}

int IntersectionRing::required_order(const SpaceModel& model, const std::optional<TorusContext>& torus) {
  // Nonzero normal forms have xi-degree <= dim and z-degree < cap.
  return std::max(2, model.dimension() + 1 + (torus ? torus->cap - 1 : 0));
}

RingPtr IntersectionRing::build(const FormalGroupLaw& law, const SpaceModel& model,
                                std::optional<TorusContext> torus) {
  return build(law, formal_inverse(law), model, std::move(torus));
}

RingPtr IntersectionRing::build(const FormalGroupLaw& law, const InverseSeries& inverse,
                                const SpaceModel& model, std::optional<TorusContext> torus) {
  if (torus) {
    if (torus->rank < 1) throw DomainError("torus rank must be positive");
    if (torus->cap < 2) throw DomainError("equivariant truncation must be at least 2");
  }
  const int need = required_order(model, torus);
  if (law.kind() != FglKind::additive && law.order() < need)
    throw DomainError("formal group law order " + std::to_string(law.order()) + " is too small for " +
                      model.describe() + "; need at least " + std::to_string(need));
  for (const auto& level : model.levels())
    for (const auto& s : level.bundle.summands)
      if (!s.character.is_zero()) {
        if (!torus) throw DomainError("bundle with a torus character on a non-equivariant ring");
        if (static_cast<int>(s.character.weights.size()) != torus->rank)
          throw DomainError("character " + s.character.to_string() + " does not match the torus rank");
      }
  std::shared_ptr<IntersectionRing> ring(new IntersectionRing(law, inverse, model, torus));
  ring->install_relations();
  return ring;
}

void IntersectionRing::install_relations() {
  const auto& levels = model_.levels();
  relations_.assign(levels.size(), {});
  trivial_relation_.assign(levels.size(), false);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::vector<Element> duals;
    for (const auto& s : levels[k].bundle.summands) duals.push_back(dual(summand_class(s)));
    std::vector<Element> c = elementary_symmetric(duals, zero());
    relations_[k] = c;
    trivial_relation_[k] = std::all_of(c.begin() + 1, c.end(), [](const Element& e) { return e.is_zero(); });
  }
  // Assert the projective-bundle relation in every level.
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const int r = levels[k].rank;
    auto xi = hyperplane(k);
    Element total = zero();
    for (int i = 0; i <= r; ++i) {
      auto term = relations_[k][i] * xi.pow(r - i);
      total = (i % 2 == 0) ? total + term : total - term;
    }
    if (!total.is_zero())
      throw VerificationFailure("projective bundle relation fails at level '" + levels[k].name + "'");
  }
}

std::size_t IntersectionRing::rank() const {
  std::size_t r = 1;
  for (const auto& l : model_.levels()) r *= static_cast<std::size_t>(l.rank);
  return r;
}

std::vector<Element> IntersectionRing::basis() const {
  std::vector<Element> out{one()};
  for (std::size_t k = 0; k < level_count(); ++k) {
    std::vector<Element> next;
    auto xi = hyperplane(k);
    for (const auto& b : out) {
      Element p = b;
      for (int e = 0; e < model_.levels()[k].rank; ++e) {
        next.push_back(p);
        p = p * xi;
      }
    }
    out = std::move(next);
  }
  return out;
}

Element IntersectionRing::zero() const { return Element(shared_from_this(), TruncatedSeries(table_, profile_)); }

Element IntersectionRing::one() const { return constant(1); }

Element IntersectionRing::constant(const Rational& c) const {
  return Element(shared_from_this(), TruncatedSeries::constant(table_, profile_, c));
}

Element IntersectionRing::coefficient(std::string_view name) const {
  return Element(shared_from_this(), TruncatedSeries::variable(table_, profile_, name));
}

Element IntersectionRing::hyperplane(std::size_t level) const {
  if (level >= level_count()) throw DomainError("no tower level " + std::to_string(level));
  Exponents e(table_->size(), 0);
  e[xi_index_[level]] = 1;
  return Element(shared_from_this(), TruncatedSeries::monomial(table_, profile_, e, 1));
}

Element IntersectionRing::line_class(std::string_view name) const {
  const auto& levels = model_.levels();
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k].name == name) return hyperplane(k);
  throw DomainError("unknown line class '" + std::string(name) + "'");
}

std::optional<std::size_t> IntersectionRing::level_index(std::string_view name) const {
  const auto& levels = model_.levels();
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k].name == name) return k;
  return std::nullopt;
}

Element IntersectionRing::zeta(int l) const {
  if (!torus_ || l < 0 || l >= torus_->rank) throw DomainError("no torus parameter " + std::to_string(l + 1));
  return Element(shared_from_this(), TruncatedSeries::variable(table_, profile_, TorusContext::zeta_name(l)));
}

Element IntersectionRing::element(const TruncatedSeries& s) const {
  if (same_table(s.table(), table_)) return Element(shared_from_this(), s.restricted(profile_));
  return Element(shared_from_this(), s.embedded(table_, profile_));
}

TruncatedSeries IntersectionRing::reduce(const TruncatedSeries& s) const {
  if (!same_table(s.table(), table_)) throw TableMismatch("reduce: series is not over the ring table");
  TruncatedSeries cur = s.profile() == profile_ ? s : s.restricted(profile_);
  const auto& levels = model_.levels();
  for (std::size_t k = levels.size(); k-- > 0;) {
    const std::size_t xi = xi_index_[k];
    const int r = levels[k].rank;
    int top = 0;
    for (const auto& [e, c] : cur.terms()) top = std::max(top, e[xi]);
    if (top < r) continue;
    if (relations_.size() <= k || relations_[k].empty())
      throw VerificationFailure("reduce: level '" + levels[k].name + "' used before its relation exists");

    std::vector<std::vector<TruncatedSeries::Term>> raw(top + 1);
    for (const auto& [e, c] : cur.terms()) {
      Exponents rest = e;
      rest[xi] = 0;
      raw[e[xi]].emplace_back(std::move(rest), c);
    }
    std::vector<TruncatedSeries> bucket;
    bucket.reserve(raw.size());
    for (auto& terms : raw) bucket.push_back(TruncatedSeries::from_terms(table_, profile_, std::move(terms)));

    // xi^r = sum_{i>=1} (-1)^(i+1) c_i xi^(r-i), applied from the top down.
    if (!trivial_relation_[k]) {
      for (int e = top; e >= r; --e) {
        if (bucket[e].is_zero()) continue;
        for (int i = 1; i <= r; ++i) {
          const auto& ci = relations_[k][i].value();
          if (ci.is_zero()) continue;
          auto p = poly_mul(bucket[e], ci);
          bucket[e - i] = (i % 2 == 1) ? bucket[e - i] + p : bucket[e - i] - p;
        }
      }
    }
    std::vector<TruncatedSeries::Term> terms;
    for (int e = 0; e < r && e <= top; ++e)
      for (const auto& [x, c] : bucket[e].terms()) {
        Exponents full = x;
        full[xi] = e;
        terms.emplace_back(std::move(full), c);
      }
    cur = TruncatedSeries::from_terms(table_, profile_, std::move(terms));
  }
  return cur;
}

TruncatedSeries IntersectionRing::multiply(const TruncatedSeries& a, const TruncatedSeries& b) const {
  return reduce(poly_mul(a, b));
}

Multiply IntersectionRing::multiplier() const {
  // Holding the ring keeps the functor valid beyond the caller's handle.
  auto self = shared_from_this();
  return [self](const TruncatedSeries& a, const TruncatedSeries& b) { return self->multiply(a, b); };
}

const TruncatedSeries& IntersectionRing::n_series_cached(int n) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = n_series_cache_.find(n);
  if (it != n_series_cache_.end()) return it->second;
  TruncatedSeries s(law_.u_table(), law_.u_profile());
  if (n > 0) {
    s = n_series(law_, n);
  } else if (n < 0) {
    // [-n](u) = [n](u g(u)); avoids solving for g again.
    auto neg = fgl_negate(law_, inverse_, law_.u());
    s = series_substitute(n_series(law_, -n), {{"u", neg}}, law_.u_table(), law_.u_profile());
  }
  return n_series_cache_.emplace(n, std::move(s)).first->second;
}

Element IntersectionRing::apply_n_series(int n, const Element& x) const {
  if (n == 0) return zero();
  if (n == 1) return x;
  if (law_.kind() == FglKind::additive) return x.scaled(n);
  return Element(shared_from_this(), apply_u_series(law_, n_series_cached(n), x.value(), multiplier()));
}

Element IntersectionRing::c1(const LineBundle& line) const {
  if (line.degrees.size() > level_count()) throw DomainError("line bundle refers to a missing level");
  Element acc = zero();
  for (std::size_t k = 0; k < line.degrees.size(); ++k)
    if (line.degrees[k] != 0) acc = fgl_sum(acc, apply_n_series(line.degrees[k], hyperplane(k)));
  return acc;
}

Element IntersectionRing::character_class(const Character& lambda) const {
  if (lambda.is_zero()) return zero();
  if (!torus_) throw DomainError("character class on a non-equivariant ring");
  if (static_cast<int>(lambda.weights.size()) != torus_->rank)
    throw DomainError("character " + lambda.to_string() + " does not match the torus rank");
  Element acc = zero();
  for (int l = 0; l < torus_->rank; ++l)
    if (lambda.weights[l] != 0) acc = fgl_sum(acc, apply_n_series(lambda.weights[l], zeta(l)));
  return acc;
}

Element IntersectionRing::summand_class(const LineSummand& s) const {
  return fgl_sum(c1(s.line), character_class(s.character));
}

Element IntersectionRing::fgl_sum(const Element& a, const Element& b) const {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Element(shared_from_this(), fgl_add(law_, a.value(), b.value(), multiplier()));
}

Element IntersectionRing::dual(const Element& x) const {
  return Element(shared_from_this(), fgl_negate(law_, inverse_, x.value(), multiplier()));
}

Element IntersectionRing::invert(const Element& x) const {
  const Rational c0 = x.value().constant_term();
  if (sgn(c0) == 0) throw DomainError("invert: constant term is zero");
  Element y = constant(1 / c0);
  const Element one_ = one();
  for (int round = 0; round < 64; ++round) {
    Element err = one_ - x * y;
    if (err.is_zero()) return y;
    y = y + y * err;
  }
  throw DomainError("invert: element is not a unit of the form c + nilpotent");
}

const std::vector<Element>& IntersectionRing::relation_coefficients(std::size_t level) const {
  if (level >= relations_.size()) throw DomainError("no tower level " + std::to_string(level));
  return relations_[level];
}

RingPtr IntersectionRing::point_ring() const {
  if (model_.levels().empty()) return shared_from_this();
  std::call_once(point_once_, [this] { point_ = build(law_, inverse_, SpaceModel::point(), torus_); });
  return point_;
}

RingPtr IntersectionRing::with_torus(std::optional<TorusContext> torus) const {
  return build(law_, inverse_, model_, std::move(torus));
}

RingPtr build_space(const FormalGroupLaw& law, const SpaceModel& model, std::optional<TorusContext> torus) {
  return IntersectionRing::build(law, model, std::move(torus));
}

// ---------------------------------------------------------------- Chern calculus

std::vector<Element> elementary_symmetric(const std::vector<Element>& roots, const Element& zero) {
  std::vector<Element> e(roots.size() + 1, zero);
  e[0] = zero.ring()->one();
  for (std::size_t j = 0; j < roots.size(); ++j)
    for (std::size_t k = j + 1; k >= 1; --k) e[k] = e[k] + e[k - 1] * roots[j];
  return e;
}

std::vector<Element> summand_classes(const BundleSpec& bundle, const RingPtr& ring) {
  std::vector<Element> out;
  for (const auto& s : bundle.summands) out.push_back(ring->summand_class(s));
  return out;
}

Element chern(const BundleSpec& bundle, int i, const RingPtr& ring) {
  if (i < 0 || i > static_cast<int>(bundle.rank()))
    throw DomainError("chern: index " + std::to_string(i) + " out of range for rank " +
                      std::to_string(bundle.rank()));
  return elementary_symmetric(summand_classes(bundle, ring), ring->zero())[i];
}

Element total_chern(const BundleSpec& bundle, const RingPtr& ring) {
  Element total = ring->zero();
  for (const auto& c : elementary_symmetric(summand_classes(bundle, ring), ring->zero())) total = total + c;
  return total;
}

Element euler(const BundleSpec& bundle, const RingPtr& ring) {
  Element e = ring->one();
  for (const auto& x : summand_classes(bundle, ring)) e = e * x;
  return e;
}

Element c1_tensor(const Element& c1_first, const Element& c1_second) {
  require_same_ring(c1_first, c1_second);
  return c1_first.ring()->fgl_sum(c1_first, c1_second);
}

// ---------------------------------------------------------------- integration

namespace {

void require_integrable(const IntersectionRing& ring) {
  if (!ring.model().integrable())
    throw Unsupported("direct integration needs a point, projective space or product of those; got " +
                      ring.model().describe());
  if (ring.law().kind() == FglKind::universal)
    throw Unsupported("direct integration is not available for the universal theory");
}

TablePtr k_table(const IntersectionRing& ring) {
  std::vector<Variable> vars = ring.law().coefficient_variables();
  for (const auto& level : ring.model().levels()) vars.push_back({"X_" + level.name, 0, std::nullopt, false, true});
  if (ring.torus())
    for (int l = 0; l < ring.torus()->rank; ++l)
      vars.push_back({TorusContext::zeta_name(l), 1, ring.torus()->cap, true, false});
  return make_table(std::move(vars));
}

Profile profile_like(const TablePtr& table, const IntersectionRing& ring) {
  return Profile::defaults(*table, ring.profile().total_bound);
}

// b^k over the point ring.
TruncatedSeries bott_power(const RingPtr& point, int k) {
  Exponents e(point->table()->size(), 0);
  e[point->table()->index(kBott)] = k;
  return TruncatedSeries::monomial(point->table(), point->profile(), e, 1);
}

}  // namespace

KClass to_k_basis(const Element& alpha) {
  const auto& ring = *alpha.ring();
  if (ring.law().kind() != FglKind::multiplicative) throw DomainError("to_k_basis: not a K-theory ring");
  auto table = k_table(ring);
  auto profile = profile_like(table, ring);
  Exponents binv(table->size(), 0);
  binv[table->index(kBott)] = -1;
  auto inv_b = TruncatedSeries::monomial(table, profile, binv, 1);
  auto one = TruncatedSeries::constant(table, profile, 1);
  std::map<std::string, TruncatedSeries> bindings;
  for (const auto& level : ring.model().levels()) {
    // c1(O(1)) = (1 - [O(-1)]) / b.
    auto x = TruncatedSeries::variable(table, profile, "X_" + level.name);
    bindings.emplace(level.name, (one - x) * inv_b);
  }
  return {series_substitute(alpha.value(), bindings, table, profile)};
}

Element from_k_basis(const KClass& k, const RingPtr& ring) {
  if (ring->law().kind() != FglKind::multiplicative) throw DomainError("from_k_basis: not a K-theory ring");
  std::map<std::string, TruncatedSeries> bindings;
  auto b = ring->coefficient(kBott);
  for (std::size_t i = 0; i < ring->level_count(); ++i) {
    // [O(-1)] = 1 - b c1(O(1)) in the ring.
    auto x = ring->one() - b * ring->hyperplane(i);
    bindings.emplace("X_" + ring->model().levels()[i].name, x.value());
  }
  if (!same_table(k.value.table(), k_table(*ring))) throw TableMismatch("from_k_basis: class of another ring");
  return ring->element(series_substitute(k.value, bindings, ring->table(), ring->profile(), ring->multiplier()));
}

KClass k_line(const RingPtr& ring, std::size_t level, int d) {
  if (level >= ring->level_count()) throw DomainError("k_line: no such level");
  auto table = k_table(*ring);
  Exponents e(table->size(), 0);
  e[table->index("X_" + ring->model().levels()[level].name)] = -d;
  return {TruncatedSeries::monomial(table, profile_like(table, *ring), e, 1)};
}

TruncatedSeries k_functional(const KClass& k, const RingPtr& ring) {
  require_integrable(*ring);
  auto point = ring->point_ring();
  const auto& src = *k.value.table();
  const auto& dst = *point->table();
  std::vector<std::optional<std::size_t>> to(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) to[i] = dst.find(src[i].name);
  std::vector<std::pair<std::size_t, int>> levels;  // source index, n_k
  for (const auto& level : ring->model().levels())
    levels.emplace_back(src.index("X_" + level.name), level.rank - 1);

  std::vector<TruncatedSeries::Term> terms;
  const std::size_t bi = dst.index(kBott);
  for (const auto& [e, c] : k.value.terms()) {
    Rational value = c;
    for (const auto& [xi, n] : levels) value *= binomial(n - e[xi], n);
    if (sgn(value) == 0) continue;
    Exponents out(dst.size(), 0);
    for (std::size_t i = 0; i < src.size(); ++i)
      if (to[i]) out[*to[i]] = e[i];
    out[bi] += ring->dimension();
    terms.emplace_back(std::move(out), value);
  }
  return TruncatedSeries::from_terms(point->table(), point->profile(), std::move(terms));
}

TruncatedSeries integrate(const Element& alpha) {
  const auto& ring = alpha.ring();
  require_integrable(*ring);
  if (ring->law().kind() == FglKind::multiplicative) return k_functional(to_k_basis(alpha), ring);

  auto point = ring->point_ring();
  const auto& table = *ring->table();
  std::vector<std::pair<std::size_t, int>> top;
  for (const auto& level : ring->model().levels()) top.emplace_back(table.index(level.name), level.rank - 1);
  std::vector<TruncatedSeries::Term> terms;
  for (const auto& [e, c] : alpha.value().terms()) {
    bool hit = std::all_of(top.begin(), top.end(), [&e = e](const auto& t) { return e[t.first] == t.second; });
    if (!hit) continue;
    Exponents rest = e;
    for (const auto& t : top) rest[t.first] = 0;
    terms.emplace_back(std::move(rest), c);
  }
  return TruncatedSeries::from_terms(ring->table(), ring->profile(), std::move(terms))
      .embedded(point->table(), point->profile());
}

TruncatedSeries euler_characteristic(const Element& alpha) {
  const auto& ring = alpha.ring();
  if (ring->law().kind() != FglKind::multiplicative) throw DomainError("euler_characteristic: K-theory only");
  return integrate(alpha) * bott_power(ring->point_ring(), -ring->dimension());
}

// ---------------------------------------------------------------- operators

Element minus_divisor_pushed(const Element& alpha, const Element& c1_line) {
  require_same_ring(alpha, c1_line);
  const auto& ring = alpha.ring();
  if (sgn(c1_line.value().constant_term()) != 0) throw DomainError("minus_divisor_pushed: not a line class");
  auto g = ring->element(apply_u_series(ring->law(), ring->inverse().g, c1_line.value(), ring->multiplier()));
  return g * c1_line * alpha;
}

int nilpotency_index(const Element& c1_line) {
  const auto& ring = c1_line.ring();
  const int bound = IntersectionRing::required_order(ring->model(), ring->torus());
  Element power = ring->one();
  for (int k = 0; k <= bound; ++k) {
    if (power.is_zero()) return k;
    power = power * c1_line;
  }
  throw DomainError("nilpotency_index: class is not nilpotent");
}

}  // namespace orient
