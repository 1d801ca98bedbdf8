#include <doctest.h>

#include "orient/cli/axioms.hpp"
#include "orient/cli/expression.hpp"
#include "orient/cli/task.hpp"
#include "orient/errors.hpp"

using namespace orient;
using namespace orient::cli;
using nlohmann::json;

namespace {

IntegrandEnv p2_env(FglKind kind) {
  auto model = SpaceModel::projective(2, "h");
  auto ring = build_space(make_fgl(kind, 4), model);
  IntegrandEnv env{ring, {{"h", ring->hyperplane(0)}}, {}};
  env.bundles.emplace("E", summand_classes(BundleSpec::lines({LineBundle::of_level(0, 1), LineBundle::of_level(0, 2)}), ring));
  return env;
}

}  // namespace

TEST_CASE("expression parsing and codegree") {
  CHECK(Expression::parse("(2h)(3h)").codegree() == 2);
  CHECK(Expression::parse("h^3 + 1").codegree() == 3);
  CHECK(Expression::parse("b*h").codegree() == 0);
  CHECK(Expression::parse("K(2h)").codegree() == 0);
  CHECK(Expression::parse("e(E) h").codegree({{"E", 2}}) == 3);
  CHECK(Expression::parse("c1(2h - k)").line_names() == std::set<std::string>{"h", "k"});
  CHECK(Expression::parse("   ").empty());
  CHECK_THROWS_AS(Expression::parse("(h"), ParseError);
  CHECK_THROWS_AS(Expression::parse("h +"), ParseError);
  CHECK_THROWS_AS(Expression::parse("h ^ x"), ParseError);
  CHECK_THROWS_AS(Expression::parse("h / 0"), ParseError);
  CHECK_THROWS_AS(Expression::parse("e(E)").codegree(), DomainError);
}

TEST_CASE("expression evaluation") {
  SUBCASE("Chow") {
    auto env = p2_env(FglKind::additive);
    auto h = env.ring->hyperplane(0);
    CHECK(Expression::parse("(2h)(3h)").evaluate(env) == h.pow(2).scaled(6));
    CHECK(Expression::parse("c1(2h) - 2h").evaluate(env).is_zero());
    CHECK(Expression::parse("e(E)").evaluate(env) == h.pow(2).scaled(2));
    CHECK(Expression::parse("-h/2 + 3").evaluate(env) == env.ring->constant(3) - h.scaled(Rational(1, 2)));
  }
  SUBCASE("K-theory: c1 of a tensor power goes through the group law") {
    auto env = p2_env(FglKind::multiplicative);
    auto h = env.ring->hyperplane(0);
    auto b = env.ring->coefficient("b");
    CHECK(Expression::parse("c1(2h)").evaluate(env) == h.scaled(2) - b * h * h);
    // [O(1)] = 1 - b c1(O(-1)).
    CHECK(Expression::parse("K(h)").evaluate(env) == env.ring->one() - b * env.ring->dual(h));
  }
  SUBCASE("undefined names") {
    auto env = p2_env(FglKind::additive);
    CHECK_THROWS_AS(Expression::parse("k").evaluate(env), DomainError);
  }
}

TEST_CASE("run_task examples") {
  SUBCASE("bezout") {
    auto r = run_task(json::parse(R"j({"task":"integrate","theory":"chow","space":{"projective":2},
                                      "integrand":"(2h)(3h)","expect":6})j"));
    CHECK(r.passed());
    CHECK(r.result["integral"]["1"] == "6/1");
  }
  SUBCASE("fgl-inverse, ktheory, N = 5") {
    auto r = run_task(json::parse(R"j({"task":"fgl-inverse","theory":"ktheory","truncation":{"order":5},
                                      "expect":["-1","-b","-b^2","-b^3"]})j"));
    CHECK(r.passed());
    CHECK(r.result["coefficients"].size() == 4);
  }
  SUBCASE("empty integrand gives 0 with a warning") {
    auto r = run_task(json::parse(R"j({"task":"integrate","theory":"ktheory","space":{"projective":1},
                                      "integrand":""})j"));
    CHECK(r.warnings.size() == 1);
    CHECK(r.result["integral"].empty());
  }
  SUBCASE("a wrong expectation fails the report") {
    auto r = run_task(json::parse(R"j({"task":"integrate","theory":"chow","space":{"projective":1},
                                      "integrand":"h","expect":"1/2"})j"));
    CHECK_FALSE(r.passed());
  }
  SUBCASE("universal localization with expected value in the universal coefficients") {
    auto r = run_task(json::parse(R"j({"task":"localize","theory":"universal","standard_pn":{"n":1},
                                      "integrand":"1","expect":"2m1"})j"));
    CHECK(r.passed());
  }
  SUBCASE("n-series expectations") {
    auto r = run_task(json::parse(R"j({"task":"n-series","theory":"chow","n":3,"truncation":{"order":4},
                                      "expect":[3,0,0]})j"));
    CHECK(r.passed());
  }
  SUBCASE("schema errors") {
    CHECK_THROWS_AS(run_task(json::parse(R"j({"task":"integrate","theory":"chow"})j")), ParseError);
    CHECK_THROWS_AS(run_task(json::parse(R"j({"task":"integrate","theory":"motives","space":"point","integrand":"1"})j")),
                    ParseError);
    CHECK_THROWS_AS(run_task(json::parse(R"j({"task":"integrate","theory":"chow","space":"point","integrand":"1",
                                             "colour":"red"})j")),
                    ParseError);
    CHECK_THROWS_AS(run_task(json::parse(R"j({"task":"integrate","theory":"chow","space":{"projective":1},
                                             "integrand":"b*h"})j")),
                    ParseError);
    CHECK_THROWS_AS(run_task(json::parse(R"j({"task":"localize","theory":"chow","standard_pn":{"n":1},
                                             "integrand":"k"})j")),
                    ParseError);
  }
  SUBCASE("insufficient truncation after the raise ceiling") {
    auto t = json::parse(R"j({"task":"localize","theory":"chow","standard_pn":{"n":3},"integrand":"h^3",
                             "truncation":{"cap":2,"max_raise":3}})j");
    CHECK_THROWS_AS(run_task(t), InsufficientTruncation);
    CHECK(run_task(t, RunOptions{std::nullopt, 12}).cap.value() >= 4);
  }
  SUBCASE("rendering is deterministic") {
    auto t = json::parse(R"j({"task":"localize","theory":"ktheory","standard_pn":{"n":2,"obstruction":[0]},
                             "integrand":"c1(h)^2"})j");
    CHECK(render_machine(run_task(t)) == render_machine(run_task(t)));
    CHECK(render_text(run_task(t)) == render_text(run_task(t)));
  }
}

TEST_CASE("check_axioms") {
  CHECK(check_axioms(FglKind::additive, 8).passed());
  CHECK(check_axioms(FglKind::universal, 6).passed());
  auto faulty = check_axioms(FglKind::multiplicative, 8, true);
  CHECK_FALSE(faulty.passed());
  int failed = 0;
  for (const auto& v : faulty.verdicts)
    if (!v.pass) {
      ++failed;
      CHECK(v.name.find("formal inverse") != std::string::npos);
    }
  CHECK(failed == 1);
  CHECK_THROWS_AS(check_axioms(FglKind::additive, 1), DomainError);
}
