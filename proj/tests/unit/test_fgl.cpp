#include <doctest.h>

#include <random>

#include "orient/errors.hpp"
#include "orient/fgl.hpp"

using namespace orient;

namespace {

// Table [coefficients..., name...] filtered in the named variables.
TablePtr law_table(const FormalGroupLaw& law, std::initializer_list<const char*> names) {
  auto vars = law.coefficient_variables();
  for (const char* n : names) vars.push_back({n, 1, std::nullopt, true, false});
  return make_table(std::move(vars));
}

TruncatedSeries var(const TablePtr& t, const Profile& p, std::string_view n) {
  return TruncatedSeries::variable(t, p, n);
}

const FglKind kAllKinds[] = {FglKind::additive, FglKind::multiplicative, FglKind::universal};

}  // namespace

TEST_CASE("make_fgl examples") {
  SUBCASE("additive is u + v") {
    auto law = make_fgl(FglKind::additive, 7);
    auto t = law.series().table();
    auto p = law.series().profile();
    CHECK(law.series() == var(t, p, "u") + var(t, p, "v"));
  }
  SUBCASE("multiplicative is u + v - b u v") {
    auto law = make_fgl(FglKind::multiplicative, 3);
    auto t = law.series().table();
    auto p = law.series().profile();
    auto u = var(t, p, "u");
    auto v = var(t, p, "v");
    CHECK(law.series() == u + v - var(t, p, "b") * u * v);
  }
  SUBCASE("universal, order 3: uv coefficient is -2 m1") {
    auto law = make_fgl(FglKind::universal, 3);
    const auto& t = *law.series().table();
    Exponents e(t.size(), 0);
    e[t.index("u")] = 1;
    e[t.index("v")] = 1;
    Exponents m1 = e;
    m1[t.index("m1")] = 1;
    CHECK(law.series().coefficient(m1) == -2);
    CHECK(law.series().coefficient(e) == 0);
  }
  SUBCASE("order below 2 is rejected") {
    CHECK_THROWS_AS(make_fgl(FglKind::additive, 1), DomainError);
  }
}

TEST_CASE("universal law satisfies l(F(u,v)) = l(u) + l(v)") {
  for (int order : {3, 5, 8}) {
    auto law = make_fgl(FglKind::universal, order);
    auto t = law.series().table();
    auto p = law.series().profile();
    auto lu = series_substitute(law.logarithm(), {{"u", var(t, p, "u")}}, t, p);
    auto lv = series_substitute(law.logarithm(), {{"u", var(t, p, "v")}}, t, p);
    auto lf = series_substitute(law.logarithm(), {{"u", law.series()}}, t, p);
    CHECK(lf == lu + lv);
  }
}

TEST_CASE("property: unit, commutativity and associativity mod degree N") {
  for (FglKind kind : kAllKinds) {
    for (int order : {2, 4, 7}) {
      CAPTURE(to_string(kind));
      CAPTURE(order);
      auto law = make_fgl(kind, order);
      auto t = law_table(law, {"x", "y", "z"});
      auto p = Profile::defaults(*t, order);
      auto x = var(t, p, "x");
      auto y = var(t, p, "y");
      auto z = var(t, p, "z");
      TruncatedSeries zero(t, p);
      CHECK(fgl_add(law, x, zero) == x);
      CHECK(fgl_add(law, x, y) == fgl_add(law, y, x));
      CHECK(fgl_add(law, x, fgl_add(law, y, z)) == fgl_add(law, fgl_add(law, x, y), z));
    }
  }
}

TEST_CASE("formal_inverse examples") {
  SUBCASE("additive gives -1") {
    auto law = make_fgl(FglKind::additive, 6);
    auto inv = formal_inverse(law);
    CHECK(inv.g == TruncatedSeries::constant(law.u_table(), inv.g.profile(), -1));
    CHECK(inv.verified);
  }
  SUBCASE("multiplicative, N = 5") {
    auto law = make_fgl(FglKind::multiplicative, 5);
    auto inv = formal_inverse(law);
    auto t = law.u_table();
    auto p = inv.g.profile();
    auto bu = var(t, p, "b") * var(t, p, "u");
    auto one = TruncatedSeries::constant(t, p, 1);
    // Known modulo u^4: -(1 + bu + (bu)^2 + (bu)^3).
    CHECK(inv.g == -(one + bu + bu.pow(2) + bu.pow(3)));
    CHECK(inverse_identity_holds(law, inv.g));
    // Closed form -1/(1 - bu) as an independent check.
    CHECK(inv.g == -invert_unit_series(one - bu));
  }
  SUBCASE("g(0) = -1 for every law") {
    for (FglKind kind : kAllKinds) CHECK(formal_inverse(make_fgl(kind, 6)).g.constant_term() == -1);
  }
}

TEST_CASE("property: perturbing any coefficient of g breaks the inverse identity") {
  for (FglKind kind : kAllKinds) {
    auto law = make_fgl(kind, 7);
    auto g = formal_inverse(law).g;
    auto t = law.u_table();
    const auto ui = t->index("u");
    for (int k = 0; k < law.order() - 1; ++k) {
      Exponents e(t->size(), 0);
      e[ui] = k;
      auto bumped = g + TruncatedSeries::monomial(t, g.profile(), e, 1);
      CHECK_FALSE(inverse_identity_holds(law, bumped));
    }
  }
}

TEST_CASE("n_series examples") {
  SUBCASE("additive, n = 7") {
    auto law = make_fgl(FglKind::additive, 6);
    CHECK(n_series(law, 7) == law.u().scaled(7));
  }
  SUBCASE("multiplicative, n = 2 equals F(u,u)") {
    auto law = make_fgl(FglKind::multiplicative, 6);
    auto u = law.u();
    auto b = var(law.u_table(), law.u_profile(), "b");
    CHECK(n_series(law, 2) == u.scaled(2) - b * u * u);
  }
  SUBCASE("multiplicative, n = -1, N = 4") {
    auto law = make_fgl(FglKind::multiplicative, 4);
    auto u = law.u();
    auto b = var(law.u_table(), law.u_profile(), "b");
    CHECK(n_series(law, -1) == -u - b * u * u - b * b * u.pow(3));
  }
  SUBCASE("linear coefficient of [n] is n") {
    for (FglKind kind : kAllKinds) {
      auto law = make_fgl(kind, 5);
      const auto& t = *law.u_table();
      Exponents e(t.size(), 0);
      e[t.index("u")] = 1;
      for (int n = -4; n <= 4; ++n) CHECK(n_series(law, n).coefficient(e) == n);
    }
  }
}

TEST_CASE("property: [m] +_F [n] = [m+n]") {
  for (FglKind kind : kAllKinds) {
    auto law = make_fgl(kind, 6);
    for (int m = -4; m <= 4; ++m)
      for (int n = -4; n <= 4; ++n) {
        CAPTURE(m);
        CAPTURE(n);
        CHECK(fgl_add(law, n_series(law, m), n_series(law, n)) == n_series(law, m + n));
      }
  }
}

TEST_CASE("fgl_add examples") {
  auto law = make_fgl(FglKind::multiplicative, 6);
  auto vars = law.coefficient_variables();
  vars.push_back({"x", 1, 2, true, false});
  vars.push_back({"y", 1, 2, true, false});
  auto t = make_table(vars);
  auto p = Profile::defaults(*t, 6);
  auto x = var(t, p, "x");
  auto y = var(t, p, "y");
  CHECK(fgl_add(law, x, y) == x + y - var(t, p, "b") * x * y);
  CHECK(fgl_add(law, x, TruncatedSeries(t, p)) == x);

  auto inv = formal_inverse(law);
  CHECK(fgl_add(law, x, fgl_negate(law, inv, x)).is_zero());
  CHECK_THROWS_AS(fgl_add(law, x + TruncatedSeries::constant(t, p, 1), y), DomainError);
}

TEST_CASE("specialize_universal examples") {
  SUBCASE("to additive gives u + v") {
    auto law = make_fgl(FglKind::universal, 6);
    auto s = specialize_universal(law.series(), FglKind::additive);
    auto t = s.table();
    CHECK(s == var(t, s.profile(), "u") + var(t, s.profile(), "v"));
  }
  SUBCASE("to multiplicative, N = 4, gives u + v - b u v") {
    auto law = make_fgl(FglKind::universal, 4);
    auto s = specialize_universal(law.series(), FglKind::multiplicative);
    auto k = make_fgl(FglKind::multiplicative, 4);
    CHECK(same_table(s.table(), k.series().table()));
    CHECK(s == k.series());
  }
  SUBCASE("m1 goes to b/2") {
    auto law = make_fgl(FglKind::universal, 4);
    auto m1 = var(law.u_table(), law.u_profile(), "m1");
    auto s = specialize_universal(m1, FglKind::multiplicative);
    Exponents e(s.table()->size(), 0);
    e[s.table()->index("b")] = 1;
    CHECK(s == TruncatedSeries::monomial(s.table(), s.profile(), e, Rational(1, 2)));
  }
  SUBCASE("a table that already has b collides") {
    auto k = make_fgl(FglKind::multiplicative, 4);
    CHECK_THROWS_AS(specialize_universal(k.series(), FglKind::multiplicative), DomainError);
  }
}

TEST_CASE("specialization of the universal logarithm is -log(1 - b u)/b") {
  auto law = make_fgl(FglKind::universal, 7);
  auto s = specialize_universal(law.logarithm(), FglKind::multiplicative);
  const auto& t = *s.table();
  for (int k = 1; k < 7; ++k) {
    Exponents e(t.size(), 0);
    e[t.index("u")] = k;
    e[t.index("b")] = k - 1;
    CHECK(s.coefficient(e) == Rational(1, k));
  }
}

TEST_CASE("property: specialization commutes with fgl_add and formal_inverse") {
  for (FglKind target : {FglKind::additive, FglKind::multiplicative}) {
    auto uni = make_fgl(FglKind::universal, 7);
    auto spec = make_fgl(target, 7);
    auto g_uni = formal_inverse(uni).g;
    auto g_spec = formal_inverse(spec).g;
    CHECK(specialize_universal(g_uni, target) == g_spec);

    auto t = law_table(uni, {"x", "y"});
    auto p = Profile::defaults(*t, 7);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
      auto x = var(t, p, "x");
      auto y = var(t, p, "y");
      auto a = x.scaled(c(rng)) + (x * y).scaled(c(rng));
      auto b = y.scaled(c(rng)) + (y * y).scaled(c(rng));
      auto lhs = specialize_universal(fgl_add(uni, a, b), target);
      auto rhs = fgl_add(spec, specialize_universal(a, target), specialize_universal(b, target));
      CHECK(lhs == rhs);
    }
  }
}
