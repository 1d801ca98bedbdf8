#pragma once

// Intersection rings of model spaces built from projective-bundle towers.
//
// A model flattens to a list of levels. Level k adds a class xi_k = c1(O(1))
// of the projective bundle P(E_k) and the relation
//   sum_{i=0}^{r} (-1)^i c_i(E_k^dual) xi_k^(r-i) = 0,
// so the ring is free over the coefficients with basis prod_k xi_k^(e_k),
// e_k < rank(E_k). An equivariant ring (trivial action on the model) also
// carries the torus parameters z1..zr under the truncation of TorusContext.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "orient/fgl.hpp"
#include "orient/series.hpp"
#include "orient/torus.hpp"

namespace orient {

/// Tensor product of the pullbacks of O_k(d_k) from the tower levels.
struct LineBundle {
  std::vector<int> degrees;

  static LineBundle trivial() { return {}; }
  /// O(d) from level k.
  static LineBundle of_level(std::size_t k, int d);
  bool is_trivial() const;
  LineBundle dual() const;
  friend LineBundle operator+(const LineBundle& a, const LineBundle& b);  // tensor product
};

/// One split summand: line bundle twisted by a torus character.
struct LineSummand {
  LineBundle line;
  Character character;
};

/// A split vector bundle given by its line summands (splitting principle).
struct BundleSpec {
  std::vector<LineSummand> summands;

  std::size_t rank() const { return summands.size(); }
  static BundleSpec trivial(std::size_t rank);
  static BundleSpec lines(std::vector<LineBundle> lines);
  friend BundleSpec operator+(const BundleSpec& a, const BundleSpec& b);  // direct sum
};

class SpaceModel {
 public:
  struct Level {
    std::string name;
    int rank = 1;
    /// Bundle whose projectivization adds this level; degrees index all
    /// levels of the flattened tower (zero from this level on).
    BundleSpec bundle;
    /// Level of a projective-space factor (trivial, untwisted bundle).
    bool projective_space = false;
  };

  static SpaceModel point();
  static SpaceModel projective(int n, std::string name = "h");
  static SpaceModel bundle(const SpaceModel& base, BundleSpec bundle, std::string name = "xi");
  static SpaceModel product(const SpaceModel& left, const SpaceModel& right);

  int dimension() const { return dimension_; }
  const std::vector<Level>& levels() const { return levels_; }
  /// Point, projective spaces and products thereof.
  bool integrable() const;
  std::string describe() const { return description_; }

 private:
  int dimension_ = 0;
  std::vector<Level> levels_;
  std::string description_ = "pt";
};

class IntersectionRing;
using RingPtr = std::shared_ptr<const IntersectionRing>;

/// An element of an intersection ring, always kept in normal form.
class Element {
 public:
  Element(RingPtr ring, TruncatedSeries value);

  const RingPtr& ring() const { return ring_; }
  const TruncatedSeries& value() const { return value_; }
  bool is_zero() const { return value_.is_zero(); }
  std::string to_string() const { return value_.to_string(); }
  std::optional<int> codegree() const { return value_.max_codegree(); }

  Element scaled(const Rational& c) const;
  Element pow(unsigned n) const;

  Element operator-() const;
  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const Element& a, const Element& b);
  friend bool operator==(const Element& a, const Element& b);

 private:
  RingPtr ring_;
  TruncatedSeries value_;
};

class IntersectionRing : public std::enable_shared_from_this<IntersectionRing> {
 public:
  /// Throws DomainError for a malformed tower or a law of too small order,
  /// VerificationFailure if the projective-bundle relation does not hold.
  static RingPtr build(const FormalGroupLaw& law, const SpaceModel& model,
                       std::optional<TorusContext> torus = std::nullopt);
  /// Same, reusing an already solved formal inverse of `law`.
  static RingPtr build(const FormalGroupLaw& law, const InverseSeries& inverse, const SpaceModel& model,
                       std::optional<TorusContext> torus = std::nullopt);

  /// Smallest law order for which F and g are exact on this space.
  static int required_order(const SpaceModel& model, const std::optional<TorusContext>& torus);

  const FormalGroupLaw& law() const { return law_; }
  const InverseSeries& inverse() const { return inverse_; }
  const SpaceModel& model() const { return model_; }
  const std::optional<TorusContext>& torus() const { return torus_; }
  const TablePtr& table() const { return table_; }
  const Profile& profile() const { return profile_; }
  int dimension() const { return model_.dimension(); }
  std::size_t level_count() const { return model_.levels().size(); }

  /// Rank over the coefficient ring: product of the level ranks.
  std::size_t rank() const;
  /// Monomial basis prod xi_k^(e_k), e_k < rank_k.
  std::vector<Element> basis() const;

  Element zero() const;
  Element one() const;
  Element constant(const Rational& c) const;
  Element coefficient(std::string_view name) const;  // b or m_i as an element
  Element hyperplane(std::size_t level) const;
  /// Hyperplane class of the named level.
  Element line_class(std::string_view name) const;
  std::optional<std::size_t> level_index(std::string_view name) const;
  Element zeta(int l) const;
  /// Wraps a series over this ring's table (or the point table) and reduces it.
  Element element(const TruncatedSeries& s) const;

  /// Normal form: every xi_k exponent below rank_k.
  TruncatedSeries reduce(const TruncatedSeries& s) const;
  TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b) const;
  Multiply multiplier() const;

  Element c1(const LineBundle& line) const;
  /// [lambda]_F(z1..zr); zero for the zero character.
  Element character_class(const Character& lambda) const;
  /// First Chern class of the summand: c1(line) +_F [character].
  Element summand_class(const LineSummand& s) const;
  Element fgl_sum(const Element& a, const Element& b) const;
  /// x g(x): first Chern class of the dual.
  Element dual(const Element& x) const;
  /// Inverse of a unit by Newton iteration in the ring.
  Element invert(const Element& x) const;

  /// c_i(E_k^dual), i = 0..rank, for level k.
  const std::vector<Element>& relation_coefficients(std::size_t level) const;

  /// [n]_F(x) in this ring.
  Element apply_n_series(int n, const Element& x) const;

  /// Coefficients (and torus parameters) only.
  RingPtr point_ring() const;
  /// Same law and model under another torus context.
  RingPtr with_torus(std::optional<TorusContext> torus) const;

 private:
  IntersectionRing(FormalGroupLaw law, InverseSeries inverse, SpaceModel model,
                   std::optional<TorusContext> torus);
  void install_relations();
  const TruncatedSeries& n_series_cached(int n) const;

  FormalGroupLaw law_;
  InverseSeries inverse_;
  SpaceModel model_;
  std::optional<TorusContext> torus_;
  TablePtr table_;
  Profile profile_;
  std::vector<std::size_t> xi_index_;
  std::vector<std::vector<Element>> relations_;
  std::vector<bool> trivial_relation_;

  mutable std::mutex cache_mutex_;
  mutable std::map<int, TruncatedSeries> n_series_cache_;
  mutable std::once_flag point_once_;
  mutable RingPtr point_;
};

RingPtr build_space(const FormalGroupLaw& law, const SpaceModel& model,
                    std::optional<TorusContext> torus = std::nullopt);

/// e_0..e_n of the given roots; `zero` fixes the ring.
std::vector<Element> elementary_symmetric(const std::vector<Element>& roots, const Element& zero);
/// First Chern classes of the summands.
std::vector<Element> summand_classes(const BundleSpec& bundle, const RingPtr& ring);

/// i-th elementary symmetric function of the summand classes.
Element chern(const BundleSpec& bundle, int i, const RingPtr& ring);
/// sum_i c_i(E).
Element total_chern(const BundleSpec& bundle, const RingPtr& ring);
/// Product of the summand classes.
Element euler(const BundleSpec& bundle, const RingPtr& ring);
/// c1(L1 (x) L2) from the first Chern classes of L1 and L2.
Element c1_tensor(const Element& c1_first, const Element& c1_second);

/// Degree of a class: a series over point_ring()->table().
/// Chow: top coefficient of prod h_k^(n_k). K-theory: push-forward of the
/// class capped with [X] = [O_X] b^dim, through the [O(-1)] basis. Only for
/// point/projective-space/product towers; universal theory is unsupported.
TruncatedSeries integrate(const Element& alpha);

/// Euler characteristic chi = b^(-dim) * integrate (K-theory only).
TruncatedSeries euler_characteristic(const Element& alpha);

/// K-theory class written in the basis of powers of X_k = [O_k(-1)] with
/// Laurent coefficients in b.
struct KClass {
  TruncatedSeries value;
};

KClass to_k_basis(const Element& alpha);
Element from_k_basis(const KClass& k, const RingPtr& ring);
/// [O(d)] on level k as a KClass (X_k^(-d)).
KClass k_line(const RingPtr& ring, std::size_t level, int d);
/// Linear functional X^a -> prod_k C(n_k - a_k, n_k) * b^dim.
TruncatedSeries k_functional(const KClass& k, const RingPtr& ring);

/// The pushed-forward (-D) operator: g(c1 L) c1 L alpha.
Element minus_divisor_pushed(const Element& alpha, const Element& c1_line);

/// Smallest k with c1(L)^k = 0.
int nilpotency_index(const Element& c1_line);

}  // namespace orient
