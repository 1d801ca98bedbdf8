#include <doctest.h>

#include <random>

#include "orient/errors.hpp"
#include "orient/space.hpp"

using namespace orient;

namespace {

const FglKind kAllKinds[] = {FglKind::additive, FglKind::multiplicative, FglKind::universal};

RingPtr ring_of(FglKind kind, const SpaceModel& model, std::optional<TorusContext> torus = std::nullopt) {
  return build_space(make_fgl(kind, IntersectionRing::required_order(model, torus)), model, torus);
}

Rational scalar(const TruncatedSeries& s) {
  CHECK(s.size() <= 1);
  return s.constant_term();
}

// b^k over the point table of the ring.
TruncatedSeries bott(const RingPtr& ring, int k) {
  auto p = ring->point_ring();
  Exponents e(p->table()->size(), 0);
  e[p->table()->index(kBott)] = k;
  return TruncatedSeries::monomial(p->table(), p->profile(), e, 1);
}

SpaceModel p1xp2() { return SpaceModel::product(SpaceModel::projective(1, "h"), SpaceModel::projective(2, "k")); }

}  // namespace

TEST_CASE("build_space examples") {
  SUBCASE("point has rank 1") {
    auto r = ring_of(FglKind::additive, SpaceModel::point());
    CHECK(r->rank() == 1);
    CHECK(r->basis().size() == 1);
  }
  SUBCASE("P2 Chow: basis 1,h,h^2 and h^3 = 0") {
    auto r = ring_of(FglKind::additive, SpaceModel::projective(2));
    auto h = r->line_class("h");
    CHECK(r->rank() == 3);
    CHECK_FALSE(h.pow(2).is_zero());
    CHECK(h.pow(3).is_zero());
  }
  SUBCASE("P1 x P1 Chow: (h1 + h2)^2 = 2 h1 h2") {
    auto m = SpaceModel::product(SpaceModel::projective(1, "a"), SpaceModel::projective(1, "c"));
    auto r = ring_of(FglKind::additive, m);
    auto a = r->line_class("a");
    auto c = r->line_class("c");
    CHECK(r->rank() == 4);
    CHECK((a + c).pow(2) == (a * c).scaled(2));
  }
  SUBCASE("malformed towers") {
    CHECK_THROWS_AS(SpaceModel::projective(-1), DomainError);
    CHECK_THROWS_AS(SpaceModel::product(SpaceModel::projective(1), SpaceModel::projective(2)), DomainError);
    CHECK_THROWS_AS(SpaceModel::bundle(SpaceModel::projective(1), BundleSpec{}), DomainError);
    CHECK_THROWS_AS(SpaceModel::bundle(SpaceModel::point(), BundleSpec::lines({LineBundle::of_level(0, 1)})),
                    DomainError);
  }
  SUBCASE("law order too small is rejected") {
    CHECK_THROWS_AS(build_space(make_fgl(FglKind::multiplicative, 3), SpaceModel::projective(3)), DomainError);
  }
}

TEST_CASE("projective bundle P(O + O(1)) over P1") {
  auto base = SpaceModel::projective(1, "h");
  auto m = SpaceModel::bundle(base, BundleSpec::lines({LineBundle::trivial(), LineBundle::of_level(0, 1)}), "x");
  CHECK(m.dimension() == 2);
  CHECK_FALSE(m.integrable());
  SUBCASE("Chow: x^2 = -h x") {
    auto r = ring_of(FglKind::additive, m);
    auto x = r->line_class("x");
    auto h = r->line_class("h");
    CHECK(r->rank() == 4);
    CHECK(x.pow(2) == -(h * x));
    CHECK(x.pow(3) == Element(r, TruncatedSeries(r->table(), r->profile())) + (h * x).pow(1) * h);
    CHECK_THROWS_AS(integrate(x * h), Unsupported);
  }
  SUBCASE("every theory satisfies the relation it was built from") {
    for (FglKind kind : kAllKinds) {
      auto r = ring_of(kind, m);
      const auto& c = r->relation_coefficients(1);
      auto x = r->line_class("x");
      CHECK((x.pow(2) - c[1] * x + c[2]).is_zero());
    }
  }
}

TEST_CASE("chern and euler examples") {
  SUBCASE("trivial bundle has no higher classes") {
    auto r = ring_of(FglKind::multiplicative, SpaceModel::projective(2));
    for (int i = 1; i <= 3; ++i) CHECK(chern(BundleSpec::trivial(3), i, r).is_zero());
    CHECK(chern(BundleSpec::trivial(3), 0, r) == r->one());
    CHECK_THROWS_AS(chern(BundleSpec::trivial(3), 4, r), DomainError);
  }
  SUBCASE("O(1) + O(1) on P1, Chow: c1 = 2h") {
    auto r = ring_of(FglKind::additive, SpaceModel::projective(1));
    auto e = BundleSpec::lines({LineBundle::of_level(0, 1), LineBundle::of_level(0, 1)});
    CHECK(chern(e, 1, r) == r->line_class("h").scaled(2));
  }
  SUBCASE("dual line in K-theory: x g(x) = -x/(1 - b x)") {
    auto r = ring_of(FglKind::multiplicative, SpaceModel::projective(3));
    auto x = r->line_class("h");
    auto b = r->coefficient("b");
    auto d = r->c1(LineBundle::of_level(0, -1));
    CHECK(d == r->dual(x));
    CHECK(d == -(x * r->invert(r->one() - b * x)));
    CHECK(r->fgl_sum(x, d).is_zero());
  }
  SUBCASE("rank 0 bundle has euler class 1") {
    auto r = ring_of(FglKind::universal, SpaceModel::projective(2));
    CHECK(euler(BundleSpec{}, r) == r->one());
  }
  SUBCASE("O(d) on P1: euler is d h in Chow and K-theory") {
    for (FglKind kind : {FglKind::additive, FglKind::multiplicative}) {
      auto r = ring_of(kind, SpaceModel::projective(1));
      for (int d = -3; d <= 3; ++d)
        CHECK(euler(BundleSpec::lines({LineBundle::of_level(0, d)}), r) == r->line_class("h").scaled(d));
    }
  }
}

TEST_CASE("c1_tensor examples") {
  auto chow = ring_of(FglKind::additive, SpaceModel::projective(3));
  auto h = chow->line_class("h");
  CHECK(c1_tensor(h, h) == h.scaled(2));

  auto k = ring_of(FglKind::multiplicative, p1xp2());
  auto x = k->line_class("h");
  auto y = k->line_class("k");
  CHECK(c1_tensor(x, y) == x + y - k->coefficient("b") * x * y);
  CHECK(c1_tensor(x, k->zero()) == x);
  CHECK(c1_tensor(x, y) == k->c1(LineBundle{{1, 1}}));
}

TEST_CASE("integrate examples") {
  SUBCASE("Bezout on P2") {
    auto r = ring_of(FglKind::additive, SpaceModel::projective(2));
    auto h = r->line_class("h");
    for (int d1 = 1; d1 <= 4; ++d1)
      for (int d2 = 1; d2 <= 4; ++d2) CHECK(scalar(integrate(h.scaled(d1) * h.scaled(d2))) == d1 * d2);
  }
  SUBCASE("top power integrates to 1 in Chow; to b^(n-j) for h^j in K") {
    for (int n = 0; n <= 4; ++n) {
      auto chow = ring_of(FglKind::additive, SpaceModel::projective(n));
      CHECK(scalar(integrate(chow->line_class("h").pow(n))) == 1);
      auto k = ring_of(FglKind::multiplicative, SpaceModel::projective(n));
      for (int j = 0; j <= n; ++j) CHECK(integrate(k->line_class("h").pow(j)) == bott(k, n - j));
    }
  }
  SUBCASE("K-theory chi(P2, O(1)) = 3") {
    auto r = ring_of(FglKind::multiplicative, SpaceModel::projective(2));
    auto o1 = from_k_basis(k_line(r, 0, 1), r);
    CHECK(scalar(euler_characteristic(o1)) == 3);
    CHECK(integrate(o1) == bott(r, 2).scaled(3));
  }
  SUBCASE("K-theory chi(P^n, O(d)) is C(n+d, n), negative d included") {
    for (int n = 1; n <= 3; ++n) {
      auto r = ring_of(FglKind::multiplicative, SpaceModel::projective(n));
      for (int d = -5; d <= 4; ++d) CHECK(scalar(euler_characteristic(from_k_basis(k_line(r, 0, d), r))) ==
                                          binomial(n + d, n));
    }
  }
  SUBCASE("universal is unsupported") {
    auto r = ring_of(FglKind::universal, SpaceModel::projective(1));
    CHECK_THROWS_AS(integrate(r->one()), Unsupported);
  }
  SUBCASE("Chow vanishes off the top codegree") {
    auto r = ring_of(FglKind::additive, p1xp2());
    for (const auto& b : r->basis())
      if (b.codegree() != 3) CHECK(integrate(b).is_zero());
  }
}

TEST_CASE("K basis round trip") {
  for (auto model : {SpaceModel::projective(3), p1xp2()}) {
    auto r = ring_of(FglKind::multiplicative, model);
    for (const auto& b : r->basis()) CHECK(from_k_basis(to_k_basis(b), r) == b);
    // c1(L) = (1 - [L^dual]) / b.
    auto h = r->line_class("h");
    auto dual_class = from_k_basis(k_line(r, 0, -1), r);
    CHECK((r->one() - dual_class) == r->coefficient("b") * h);
  }
}

TEST_CASE("property: Kunneth for integrate") {
  for (FglKind kind : {FglKind::additive, FglKind::multiplicative}) {
    auto a = ring_of(kind, SpaceModel::projective(1, "h"));
    auto c = ring_of(kind, SpaceModel::projective(2, "k"));
    auto ac = ring_of(kind, p1xp2());
    for (const auto& x : a->basis())
      for (const auto& y : c->basis()) {
        auto xy = ac->element(x.value().embedded(ac->table(), ac->profile())) *
                  ac->element(y.value().embedded(ac->table(), ac->profile()));
        auto lhs = integrate(xy);
        auto rhs = integrate(x).embedded(lhs.table(), lhs.profile()) *
                   integrate(y).embedded(lhs.table(), lhs.profile());
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("property: Whitney formula and euler = top chern") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> deg(-2, 2);
  std::uniform_int_distribution<int> rank(0, 3);
  for (FglKind kind : kAllKinds) {
    auto r = ring_of(kind, p1xp2());
    auto random_bundle = [&] {
      BundleSpec e;
      int n = rank(rng);
      for (int i = 0; i < n; ++i) e.summands.push_back({LineBundle{{deg(rng), deg(rng)}}, {}});
      return e;
    };
    for (int trial = 0; trial < 6; ++trial) {
      auto e = random_bundle();
      auto f = random_bundle();
      CHECK(total_chern(e + f, r) == total_chern(e, r) * total_chern(f, r));
      CHECK(euler(e, r) == chern(e, static_cast<int>(e.rank()), r));
    }
  }
}

TEST_CASE("minus_divisor_pushed") {
  SUBCASE("Chow: -c1(L) alpha") {
    auto r = ring_of(FglKind::additive, SpaceModel::projective(2));
    auto h = r->line_class("h");
    CHECK(minus_divisor_pushed(r->one(), h) == -h);
  }
  SUBCASE("K on P1, L = O(1), alpha = 1 gives -h") {
    auto r = ring_of(FglKind::multiplicative, SpaceModel::projective(1));
    auto h = r->line_class("h");
    CHECK(minus_divisor_pushed(r->one(), h) == -h);
  }
  SUBCASE("equals c1(L^dual) alpha over a basis; composes with D to c1(L^dual) c1(L)") {
    for (FglKind kind : kAllKinds)
      for (auto model : {SpaceModel::projective(3), p1xp2()}) {
        auto r = ring_of(kind, model);
        auto l = model.levels().size() == 1 ? r->c1(LineBundle{{2}}) : r->c1(LineBundle{{1, 1}});
        auto dual = r->dual(l);
        for (const auto& b : r->basis()) {
          CHECK(minus_divisor_pushed(b, l) == dual * b);
          CHECK(minus_divisor_pushed(l * b, l) == dual * l * b);
        }
      }
  }
}

TEST_CASE("nilpotency_index") {
  for (FglKind kind : kAllKinds)
    for (int n = 0; n <= 4; ++n) {
      auto r = ring_of(kind, SpaceModel::projective(n));
      CHECK(nilpotency_index(r->line_class("h")) == n + 1);
      CHECK(nilpotency_index(r->c1(LineBundle::trivial())) == 1);
    }
  auto m = SpaceModel::product(SpaceModel::projective(1, "a"), SpaceModel::projective(1, "c"));
  auto r = ring_of(FglKind::additive, m);
  CHECK(nilpotency_index(r->c1(LineBundle{{1, 1}})) == 3);
}

TEST_CASE("property: ring multiplication is associative and commutative on the basis") {
  auto m = SpaceModel::bundle(SpaceModel::projective(1, "h"),
                              BundleSpec::lines({LineBundle::of_level(0, -1), LineBundle::of_level(0, 2),
                                                 LineBundle::trivial()}),
                              "x");
  for (FglKind kind : kAllKinds) {
    auto r = ring_of(kind, m);
    auto basis = r->basis();
    CHECK(basis.size() == 6);
    for (const auto& a : basis)
      for (const auto& b : basis) {
        CHECK(a * b == b * a);
        for (const auto& c : {basis[1], basis[3], basis[5]}) CHECK((a * b) * c == a * (b * c));
      }
  }
}

TEST_CASE("equivariant rings carry torus parameters") {
  TorusContext t{2, 4, 10};
  auto r = ring_of(FglKind::multiplicative, SpaceModel::projective(1), t);
  auto z1 = r->zeta(0);
  CHECK(z1.pow(3) != r->zero());
  CHECK(z1.pow(4).is_zero());
  CHECK((z1 * r->zeta(1)).pow(2).is_zero());  // total degree bound
  // [2](z1) = 2 z1 - b z1^2.
  auto two = r->character_class(basis_character(2, 0, 2));
  CHECK(two == z1.scaled(2) - r->coefficient("b") * z1 * z1);
  CHECK_THROWS_AS(r->character_class(Character{{1}}), DomainError);
  CHECK_THROWS_AS(ring_of(FglKind::additive, SpaceModel::projective(1))->character_class(Character{{1, 0}}),
                  DomainError);
}
