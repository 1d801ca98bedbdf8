#include "orient/cli/task.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "orient/cli/axioms.hpp"
#include "orient/cli/expression.hpp"
#include "orient/errors.hpp"
#include "orient/localization.hpp"

namespace orient::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

void allow_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) bad(where, "unknown key '" + k + "'");
}

const json& required(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) bad(where, "missing key '" + key + "'");
  return j.at(key);
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  bad(where, "expected a string");
}

std::optional<int> opt_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return as_int(j.at(key), where + "." + key);
}

FglKind theory_of(const json& task) {
  auto name = as_string(required(task, "theory", "task"), "theory");
  if (name != "chow" && name != "ktheory" && name != "universal")
    bad("theory", "expected chow, ktheory or universal, got '" + name + "'");
  return parse_fgl_kind(name);
}

std::string theory_name(FglKind k) {
  switch (k) {
    case FglKind::additive: return "chow";
    case FglKind::multiplicative: return "ktheory";
    case FglKind::universal: return "universal";
  }
  return "";
}

// ---------------------------------------------------------------- spaces and bundles

std::optional<std::size_t> level_of(const SpaceModel& m, const std::string& name) {
  for (std::size_t k = 0; k < m.levels().size(); ++k)
    if (m.levels()[k].name == name) return k;
  return std::nullopt;
}

LineBundle parse_line(const json& j, const SpaceModel& m, const std::string& where) {
  if (!j.is_object()) bad(where, "a line is an object {level name: degree}");
  LineBundle l;
  l.degrees.assign(m.levels().size(), 0);
  for (const auto& [name, d] : j.items()) {
    auto k = level_of(m, name);
    if (!k) bad(where, "unknown level '" + name + "'");
    l.degrees[*k] = as_int(d, where + "." + name);
  }
  return l;
}

SpaceModel parse_space(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "point") return SpaceModel::point();
    bad(where, "unknown space '" + j.get<std::string>() + "'");
  }
  if (!j.is_object()) bad(where, "expected a space");
  if (j.contains("projective")) {
    allow_keys(j, {"projective", "name"}, where);
    int n = as_int(j.at("projective"), where + ".projective");
    return SpaceModel::projective(n, j.contains("name") ? as_string(j.at("name"), where + ".name") : "h");
  }
  if (j.contains("product")) {
    allow_keys(j, {"product"}, where);
    const auto& f = j.at("product");
    if (!f.is_array() || f.size() < 2) bad(where, "product takes a list of at least two spaces");
    auto m = parse_space(f[0], where + ".product[0]");
    for (std::size_t i = 1; i < f.size(); ++i)
      m = SpaceModel::product(m, parse_space(f[i], where + ".product[" + std::to_string(i) + "]"));
    return m;
  }
  if (j.contains("bundle")) {
    allow_keys(j, {"bundle"}, where);
    const auto& b = j.at("bundle");
    allow_keys(b, {"base", "summands", "name"}, where + ".bundle");
    auto base = parse_space(required(b, "base", where + ".bundle"), where + ".bundle.base");
    const auto& s = required(b, "summands", where + ".bundle");
    if (!s.is_array()) bad(where + ".bundle.summands", "expected a list");
    std::vector<LineBundle> lines;
    for (const auto& l : s) lines.push_back(parse_line(l, base, where + ".bundle.summands"));
    return SpaceModel::bundle(base, BundleSpec::lines(std::move(lines)),
                              b.contains("name") ? as_string(b.at("name"), where + ".bundle.name") : "xi");
  }
  if (j.contains("point")) return SpaceModel::point();
  bad(where, "expected point, projective, product or bundle");
}

Character parse_character(const json& j, int rank, const std::string& where) {
  if (!j.is_array()) bad(where, "a character is a list of integer weights");
  Character c;
  for (const auto& w : j) c.weights.push_back(as_int(w, where));
  if (static_cast<int>(c.weights.size()) != rank)
    bad(where, "character has " + std::to_string(c.weights.size()) + " weights, torus rank is " + std::to_string(rank));
  if (c.is_zero()) c.weights.clear();
  return c;
}

LineSummand parse_summand(const json& j, const SpaceModel& m, int rank, const std::string& where) {
  if (j.is_array()) return {LineBundle{std::vector<int>(m.levels().size(), 0)}, parse_character(j, rank, where)};
  allow_keys(j, {"line", "character"}, where);
  LineSummand s;
  s.line = j.contains("line") ? parse_line(j.at("line"), m, where + ".line")
                              : LineBundle{std::vector<int>(m.levels().size(), 0)};
  if (j.contains("character")) s.character = parse_character(j.at("character"), rank, where + ".character");
  return s;
}

BundleSpec parse_summands(const json& j, const SpaceModel& m, int rank, const std::string& where) {
  if (!j.is_array()) bad(where, "expected a list of summands");
  BundleSpec e;
  for (const auto& s : j) e.summands.push_back(parse_summand(s, m, rank, where));
  return e;
}

BundleSpec parse_line_list(const json& j, const SpaceModel& m, const std::string& where) {
  if (!j.is_array()) bad(where, "expected a list of lines");
  std::vector<LineBundle> lines;
  for (const auto& l : j) lines.push_back(parse_line(l, m, where));
  return BundleSpec::lines(std::move(lines));
}

// ---------------------------------------------------------------- helpers

Expression parse_expression(const json& j, const std::string& where) {
  return Expression::parse(as_string(j, where));
}

void require_names(const Expression& e, const std::set<std::string>& lines, const std::set<std::string>& bundles,
                   const std::string& where) {
  for (const auto& n : e.line_names())
    if (!lines.count(n)) bad(where, "undefined line '" + n + "'");
  for (const auto& n : e.bundle_names())
    if (!bundles.count(n)) bad(where, "undefined bundle '" + n + "'");
}

void require_bott(const Expression& e, FglKind kind, const std::string& where) {
  if (e.uses_bott() && kind != FglKind::multiplicative) bad(where, "b and K(...) are only defined in ktheory");
}

template <class Map>
std::set<std::string> keys_of(const Map& m) {
  std::set<std::string> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

bool same_scalar(const TruncatedSeries& a, const TruncatedSeries& b) {
  std::vector<Variable> vars;
  for (const auto* s : {&a, &b})
    for (const auto& v : s->table()->variables())
      if (std::none_of(vars.begin(), vars.end(), [&](const Variable& w) { return w.name == v.name; }))
        vars.push_back(v);
  auto t = make_table(std::move(vars));
  auto p = Profile::defaults(*t);
  return a.embedded(t, p) == b.embedded(t, p);
}

RingPtr scalar_ring(FglKind kind, int order) { return build_space(make_fgl(kind, order), SpaceModel::point()); }

TruncatedSeries expected_scalar(const json& j, FglKind kind, int order, const std::string& where) {
  auto e = parse_expression(j, where);
  require_bott(e, kind, where);
  if (!e.line_names().empty() || !e.bundle_names().empty()) {
    auto ring = scalar_ring(kind, order);
    for (const auto& n : e.line_names())
      if (!ring->table()->find(n)) bad(where, "undefined name '" + n + "'");
    if (!e.bundle_names().empty()) bad(where, "an expected value cannot contain e(...)");
  }
  return e.evaluate(scalar_ring(kind, order)).value();
}

// Coefficients of powers of u in a series over the law's u-table, as scalars.
std::vector<TruncatedSeries> u_coefficients(const TruncatedSeries& s, const FormalGroupLaw& law, int first,
                                            int last) {
  auto point = scalar_ring(law.kind(), law.order());
  const auto ui = law.u_table()->index("u");
  std::vector<std::vector<TruncatedSeries::Term>> buckets(last - first + 1);
  for (const auto& [e, c] : s.terms()) {
    if (e[ui] < first || e[ui] > last) continue;
    Exponents rest = e;
    rest[ui] = 0;
    buckets[e[ui] - first].emplace_back(std::move(rest), c);
  }
  std::vector<TruncatedSeries> out;
  for (auto& b : buckets)
    out.push_back(TruncatedSeries::from_terms(law.u_table(), Profile::defaults(*law.u_table()), std::move(b))
                      .embedded(point->table(), point->profile()));
  return out;
}

void coefficient_report(Report& r, const std::vector<TruncatedSeries>& coeffs, const json& task, FglKind kind,
                        int order, int first) {
  std::string list = "[";
  json arr = json::array();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    list += (i ? ", " : "") + coeffs[i].to_string();
    arr.push_back(series_json(coeffs[i]));
  }
  r.add_row("coefficients (u^" + std::to_string(first) + " first)", list + "]");
  r.result["coefficients"] = arr;
  r.result["first_power"] = first;
  if (!task.contains("expect")) return;
  const auto& ex = task.at("expect");
  if (!ex.is_array()) bad("expect", "expected a list of coefficients");
  bool ok = ex.size() <= coeffs.size();
  std::string detail;
  for (std::size_t i = 0; ok && i < ex.size(); ++i) {
    auto want = expected_scalar(ex[i], kind, order, "expect[" + std::to_string(i) + "]");
    if (!same_scalar(want, coeffs[i])) {
      ok = false;
      detail = "u^" + std::to_string(first + i) + ": expected " + want.to_string() + ", got " + coeffs[i].to_string();
    }
  }
  if (ex.size() > coeffs.size()) detail = "more expected coefficients than the order provides";
  r.add_verdict("expected coefficients", ok, detail);
}

struct Trunc {
  std::optional<int> order, cap, max_raise;
};

Trunc truncation_of(const json& task, const RunOptions& opt) {
  Trunc t;
  if (task.contains("truncation")) {
    const auto& j = task.at("truncation");
    allow_keys(j, {"order", "cap", "max_raise"}, "truncation");
    t.order = opt_int(j, "order", "truncation");
    t.cap = opt_int(j, "cap", "truncation");
    t.max_raise = opt_int(j, "max_raise", "truncation");
  }
  if (opt.cap) t.cap = opt.cap;
  if (opt.max_raise) t.max_raise = opt.max_raise;
  if (t.order && *t.order < 2) bad("truncation.order", "must be at least 2");
  if (t.cap && *t.cap < 1) bad("truncation.cap", "must be positive");
  return t;
}

// ---------------------------------------------------------------- tasks

Report run_integrate(const json& task, FglKind kind, const Trunc& t) {
  allow_keys(task, {"task", "theory", "truncation", "space", "lines", "bundles", "integrand", "expect", "expect_chi"},
             "task");
  auto model = parse_space(required(task, "space", "task"), "space");
  Report r;
  r.order = t.order.value_or(IntersectionRing::required_order(model, std::nullopt));
  auto ring = build_space(make_fgl(kind, r.order), model);

  IntegrandEnv env{ring, {}, {}};
  for (std::size_t k = 0; k < ring->level_count(); ++k) env.lines.emplace(model.levels()[k].name, ring->hyperplane(k));
  if (task.contains("lines")) {
    if (!task.at("lines").is_object()) bad("lines", "expected an object");
    for (const auto& [name, l] : task.at("lines").items())
      env.lines.insert_or_assign(name, ring->c1(parse_line(l, model, "lines." + name)));
  }
  if (task.contains("bundles")) {
    if (!task.at("bundles").is_object()) bad("bundles", "expected an object");
    for (const auto& [name, b] : task.at("bundles").items())
      env.bundles.emplace(name, summand_classes(parse_line_list(b, model, "bundles." + name), ring));
  }
  auto expr = parse_expression(required(task, "integrand", "task"), "integrand");
  require_names(expr, keys_of(env.lines), keys_of(env.bundles), "integrand");
  require_bott(expr, kind, "integrand");
  if (expr.empty()) r.warnings.push_back("empty integrand; the result is 0");

  auto alpha = expr.evaluate(env);
  auto value = integrate(alpha);
  r.add_row("space", model.describe());
  r.add_row("integrand", expr.text());
  r.add_row("class", alpha.to_string());
  r.add_row("integral", value.to_string());
  r.result["integral"] = series_json(value);
  std::optional<TruncatedSeries> chi;
  if (kind == FglKind::multiplicative) {
    chi = euler_characteristic(alpha);
    r.add_row("euler characteristic", chi->to_string());
    r.result["euler_characteristic"] = series_json(*chi);
  }
  if (task.contains("expect")) {
    auto want = expected_scalar(task.at("expect"), kind, r.order, "expect");
    bool ok = same_scalar(want, value);
    r.add_verdict("integral = expected", ok, ok ? "" : "expected " + want.to_string());
  }
  if (task.contains("expect_chi")) {
    if (!chi) bad("expect_chi", "only for ktheory");
    auto want = expected_scalar(task.at("expect_chi"), kind, r.order, "expect_chi");
    bool ok = same_scalar(want, *chi);
    r.add_verdict("euler characteristic = expected", ok, ok ? "" : "expected " + want.to_string());
  }
  return r;
}

json localized_json(const LocalizedElement& a) {
  json d = json::array();
  for (const auto& [c, e] : a.denominators()) d.push_back({{"character", c.to_string()}, {"exponent", e}});
  return {{"numerator", series_json(a.numerator().value())}, {"denominators", d}};
}

Report run_localize(const json& task, FglKind kind, const Trunc& t) {
  allow_keys(task, {"task", "theory", "truncation", "torus_rank", "integrand", "expect", "compare_direct",
                    "standard_pn", "components", "direct"},
             "task");
  Report r;
  auto expr = parse_expression(required(task, "integrand", "task"), "integrand");
  require_bott(expr, kind, "integrand");
  if (expr.empty()) r.warnings.push_back("empty integrand; the result is 0");
  if (t.order) r.notes.push_back("truncation.order is ignored; localization derives the law order from the cap");

  TorusContext torus;
  torus.cap = t.cap.value_or(4);
  torus.max_cap = t.max_raise.value_or(40);
  VirtualLocalizationProblem p;
  if (task.contains("standard_pn")) {
    if (task.contains("components") || task.contains("direct"))
      bad("task", "standard_pn excludes components and direct");
    const auto& s = task.at("standard_pn");
    allow_keys(s, {"n", "obstruction", "bundles"}, "standard_pn");
    int n = as_int(required(s, "n", "standard_pn"), "standard_pn.n");
    torus.rank = task.contains("torus_rank") ? as_int(task.at("torus_rank"), "torus_rank") : n + 1;
    std::vector<int> ob;
    if (s.contains("obstruction")) {
      if (!s.at("obstruction").is_array()) bad("standard_pn.obstruction", "expected a list of degrees");
      for (const auto& d : s.at("obstruction")) ob.push_back(as_int(d, "standard_pn.obstruction"));
    }
    std::map<std::string, std::vector<int>> bundles;
    std::map<std::string, int> ranks;
    if (s.contains("bundles")) {
      if (!s.at("bundles").is_object()) bad("standard_pn.bundles", "expected an object");
      for (const auto& [name, ds] : s.at("bundles").items()) {
        if (!ds.is_array()) bad("standard_pn.bundles." + name, "expected a list of degrees");
        for (const auto& d : ds) bundles[name].push_back(as_int(d, "standard_pn.bundles." + name));
        ranks[name] = static_cast<int>(ds.size());
      }
    }
    require_names(expr, {"h"}, keys_of(bundles), "integrand");
    p = standard_pn_fixed_data(kind, torus, n, expr.integrand(ranks), ob, bundles);
  } else {
    torus.rank = as_int(required(task, "torus_rank", "task"), "torus_rank");
    const auto& cs = required(task, "components", "task");
    if (!cs.is_array() || cs.empty()) bad("components", "expected a nonempty list");
    p.theory = kind;
    p.torus = torus;
    std::map<std::string, int> ranks;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string where = "components[" + std::to_string(i) + "]";
      const auto& c = cs[i];
      allow_keys(c, {"label", "base", "n0", "n1", "fixed_obstruction", "lines", "bundles"}, where);
      FixedComponentSpec f;
      f.label = c.contains("label") ? as_string(c.at("label"), where + ".label") : "F" + std::to_string(i + 1);
      f.base = c.contains("base") ? parse_space(c.at("base"), where + ".base") : SpaceModel::point();
      if (c.contains("n0")) f.moving_n0 = parse_summands(c.at("n0"), f.base, torus.rank, where + ".n0");
      if (c.contains("n1")) f.moving_n1 = parse_summands(c.at("n1"), f.base, torus.rank, where + ".n1");
      if (c.contains("fixed_obstruction"))
        f.obstruction_fixed = parse_summands(c.at("fixed_obstruction"), f.base, torus.rank, where + ".fixed_obstruction");
      if (c.contains("lines"))
        for (const auto& [name, l] : c.at("lines").items())
          f.lines[name] = parse_summand(l, f.base, torus.rank, where + ".lines." + name);
      if (c.contains("bundles"))
        for (const auto& [name, b] : c.at("bundles").items()) {
          f.bundles[name] = parse_summands(b, f.base, torus.rank, where + ".bundles." + name);
          if (i == 0) ranks[name] = static_cast<int>(f.bundles[name].rank());
        }
      require_names(expr, keys_of(f.lines), keys_of(f.bundles), where);
      p.components.push_back(std::move(f));
    }
    p.integrand = expr.integrand(ranks);
    if (task.contains("direct")) {
      const auto& d = task.at("direct");
      allow_keys(d, {"space", "obstruction", "lines", "bundles"}, "direct");
      DirectReference ref;
      ref.model = parse_space(required(d, "space", "direct"), "direct.space");
      if (d.contains("obstruction")) ref.obstruction = parse_line_list(d.at("obstruction"), ref.model, "direct.obstruction");
      if (d.contains("lines"))
        for (const auto& [name, l] : d.at("lines").items())
          ref.lines[name] = parse_line(l, ref.model, "direct.lines." + name);
      if (d.contains("bundles"))
        for (const auto& [name, b] : d.at("bundles").items())
          ref.bundles[name] = parse_line_list(b, ref.model, "direct.bundles." + name);
      require_names(expr, keys_of(ref.lines), keys_of(ref.bundles), "direct");
      p.direct = std::move(ref);
    }
  }

  auto res = localize(p);
  r.order = res.order;
  r.cap = res.cap;
  r.add_row("integrand", expr.text());
  r.add_row("fixed components", std::to_string(p.components.size()));
  r.add_row("localized", res.value.to_string());
  r.result["localized"] = localized_json(res.value);
  auto lim = nonequivariant_limit(res.value);
  r.add_row("non-equivariant value", lim ? lim->to_string() : "not denominator-free");
  r.result["value"] = lim ? series_json(*lim) : json(nullptr);
  if (!lim) r.warnings.push_back("the localized sum is not denominator-free");

  if (task.contains("expect")) {
    auto want = expected_scalar(task.at("expect"), kind, res.order, "expect");
    bool ok = lim && same_scalar(*lim, want);
    r.add_verdict("localized = expected", ok, ok ? "" : "expected " + want.to_string());
    bool constant = assert_constant(res.value, want);
    r.add_row("equivariantly constant", constant ? "yes" : "no");
  }
  bool compare = task.contains("compare_direct") ? task.at("compare_direct").get<bool>() : p.direct.has_value();
  if (compare) {
    if (!p.direct) bad("compare_direct", "the problem has no direct reference");
    auto rep = compare_with_direct(p);
    for (const auto& [k, v] : rep.direct) {
      r.add_row("direct (" + theory_name(k) + ")", v.to_string());
      r.result["direct"][theory_name(k)] = series_json(v);
    }
    r.add_verdict("localized = direct", rep.verdict);
    for (auto& n : rep.notes) r.notes.push_back(std::move(n));
  }
  return r;
}

Report run_inverse(const json& task, FglKind kind, const Trunc& t) {
  allow_keys(task, {"task", "theory", "truncation", "expect"}, "task");
  Report r;
  r.order = t.order.value_or(8);
  auto law = make_fgl(kind, r.order);
  auto inv = formal_inverse(law);
  r.add_row("g(u)", inv.g.to_string());
  coefficient_report(r, u_coefficients(inv.g, law, 0, r.order - 2), task, kind, r.order, 0);
  r.add_verdict("F(u, u g(u)) = 0", inverse_identity_holds(law, inv.g));
  return r;
}

Report run_n_series(const json& task, FglKind kind, const Trunc& t) {
  allow_keys(task, {"task", "theory", "truncation", "n", "expect"}, "task");
  Report r;
  r.order = t.order.value_or(8);
  int n = as_int(required(task, "n", "task"), "n");
  auto law = make_fgl(kind, r.order);
  auto s = n_series(law, n);
  r.add_row("[" + std::to_string(n) + "](u)", s.to_string());
  coefficient_report(r, u_coefficients(s, law, 1, r.order - 1), task, kind, r.order, 1);
  return r;
}

}  // namespace

Report run_task(const json& task, const RunOptions& options) {
  if (!task.is_object()) bad("task file", "expected a JSON object");
  auto name = as_string(required(task, "task", "task"), "task");
  auto kind = theory_of(task);
  auto t = truncation_of(task, options);
  Report r;
  if (name == "integrate") r = run_integrate(task, kind, t);
  else if (name == "localize") r = run_localize(task, kind, t);
  else if (name == "fgl-inverse") r = run_inverse(task, kind, t);
  else if (name == "n-series") r = run_n_series(task, kind, t);
  else if (name == "check-axioms") {
    allow_keys(task, {"task", "theory", "truncation", "inject_fault"}, "task");
    bool fault = task.contains("inject_fault") && task.at("inject_fault").get<bool>();
    r = check_axioms(kind, t.order.value_or(8), fault);
  } else {
    bad("task", "unknown task '" + name + "'");
  }
  r.task = name;
  r.theory = theory_name(kind);
  r.echo = task;
  return r;
}

Report run_task_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open task file '" + path + "'");
  json task;
  try {
    task = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("task file '" + path + "': " + e.what());
  }
  return run_task(task, options);
}

}  // namespace orient::cli
