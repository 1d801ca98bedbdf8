#include "orient/fgl.hpp"

#include <sstream>

#include "orient/errors.hpp"

namespace orient {

namespace {

Variable bott_variable() { return {std::string(kBott), -1, std::nullopt, false, true}; }

Variable formal_variable(const char* name) { return {name, 1, std::nullopt, true, false}; }

bool is_universal_coefficient(const std::string& name) {
  if (name.size() < 2 || name[0] != 'm') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return false;
  return true;
}

int universal_index(const std::string& name) { return std::stoi(name.substr(1)); }

}  // namespace

std::string_view to_string(FglKind kind) {
  switch (kind) {
    case FglKind::additive:
      return "chow";
    case FglKind::multiplicative:
      return "ktheory";
    case FglKind::universal:
      return "universal";
  }
  return "?";
}

FglKind parse_fgl_kind(std::string_view name) {
  if (name == "chow" || name == "additive") return FglKind::additive;
  if (name == "ktheory" || name == "k" || name == "multiplicative") return FglKind::multiplicative;
  if (name == "universal") return FglKind::universal;
  throw DomainError("unknown theory '" + std::string(name) + "'");
}

std::string universal_coefficient_name(int i) { return "m" + std::to_string(i); }

FormalGroupLaw::FormalGroupLaw(FglKind kind, int order, std::vector<Variable> coefficients,
                               TablePtr u_table, TruncatedSeries law, TruncatedSeries log)
    : kind_(kind),
      order_(order),
      coefficients_(std::move(coefficients)),
      u_table_(std::move(u_table)),
      law_(std::move(law)),
      log_(std::move(log)) {}

Profile FormalGroupLaw::u_profile() const { return Profile::defaults(*u_table_, order_); }

TruncatedSeries FormalGroupLaw::u() const {
  return TruncatedSeries::variable(u_table_, u_profile(), "u");
}

FormalGroupLaw make_fgl(FglKind kind, int order) {
  if (order < 2) throw DomainError("formal group law order must be at least 2");

  std::vector<Variable> coefficients;
  if (kind == FglKind::multiplicative) coefficients.push_back(bott_variable());
  if (kind == FglKind::universal)
    for (int i = 1; i <= order - 1; ++i)
      coefficients.push_back({universal_coefficient_name(i), -i, std::nullopt, false, false});

  auto with = [&](std::initializer_list<const char*> names) {
    auto vars = coefficients;
    for (const char* n : names) vars.push_back(formal_variable(n));
    return make_table(std::move(vars));
  };
  TablePtr ut = with({"u"});
  TablePtr uvt = with({"u", "v"});
  Profile up = Profile::defaults(*ut, order);
  Profile uvp = Profile::defaults(*uvt, order);

  auto u = TruncatedSeries::variable(uvt, uvp, "u");
  auto v = TruncatedSeries::variable(uvt, uvp, "v");
  TruncatedSeries law(uvt, uvp);
  TruncatedSeries log(ut, up);

  switch (kind) {
    case FglKind::additive:
      law = u + v;
      break;
    case FglKind::multiplicative:
      law = u + v - TruncatedSeries::variable(uvt, uvp, kBott) * u * v;
      break;
    case FglKind::universal: {
      auto x = TruncatedSeries::variable(ut, up, "u");
      log = x;
      for (int i = 1; i <= order - 1; ++i)
        log = log + TruncatedSeries::variable(ut, up, universal_coefficient_name(i)) * x.pow(i + 1);
      // Reversion: e = w - (l(e) - e), iterated; each pass fixes one more degree.
      auto tail = log - x;
      auto e = x;
      for (int pass = 0; pass < order; ++pass) e = x - series_substitute(tail, {{"u", e}});
      if (!(series_substitute(log, {{"u", e}}) == x))
        throw VerificationFailure("universal law: logarithm reversion failed");
      auto lu = series_substitute(log, {{"u", u}}, uvt, uvp);
      auto lv = series_substitute(log, {{"u", v}}, uvt, uvp);
      law = series_substitute(e, {{"u", lu + lv}}, uvt, uvp);
      break;
    }
  }
  return FormalGroupLaw(kind, order, std::move(coefficients), ut, std::move(law), std::move(log));
}

bool inverse_identity_holds(const FormalGroupLaw& law, const TruncatedSeries& g) {
  auto u = law.u();
  auto ug = u * g.redeclared(law.u_profile());
  auto value = series_substitute(law.series(), {{"u", u}, {"v", ug}}, law.u_table(), law.u_profile());
  return value.is_zero();
}

InverseSeries formal_inverse(const FormalGroupLaw& law) {
  const int n = law.order();
  const auto& table = law.u_table();
  const Profile g_profile = Profile::defaults(*table, n - 1);
  auto g = TruncatedSeries::constant(table, g_profile, -1);
  const std::size_t ui = table->index("u");

  // F(u, v) = u + v + (terms divisible by uv), so the u^d coefficient of
  // F(u, u g) is g_{d-1} plus terms in lower coefficients of g.
  for (int d = 2; d <= n - 1; ++d) {
    Profile step = Profile::defaults(*table, d + 1);
    auto u = TruncatedSeries::variable(table, step, "u");
    // g is exact through degree d-2, so u*g is exact through degree d-1.
    auto g_step = g.redeclared(step);
    auto residual = series_substitute(law.series(), {{"u", u}, {"v", u * g_step}}, table, step);
    std::vector<TruncatedSeries::Term> correction;
    for (const auto& [e, c] : residual.terms()) {
      if (e[ui] != d) continue;
      Exponents shifted = e;
      shifted[ui] = d - 1;
      correction.emplace_back(std::move(shifted), -c);
    }
    g = g + TruncatedSeries::from_terms(table, g_profile, std::move(correction));
  }

  InverseSeries out{g, false};
  out.verified = inverse_identity_holds(law, g);
  if (!out.verified) throw VerificationFailure("formal inverse: F(u, u g(u)) does not vanish");
  if (g.constant_term() != -1) throw VerificationFailure("formal inverse: g(0) != -1");
  return out;
}

TruncatedSeries apply_u_series(const FormalGroupLaw& law, const TruncatedSeries& series_in_u,
                               const TruncatedSeries& a, const Multiply& mul) {
  if (!same_table(series_in_u.table(), law.u_table()))
    throw TableMismatch("apply_u_series: series is not over the law's u table");
  return series_substitute(series_in_u, {{"u", a}}, a.table(), a.profile(), mul);
}

TruncatedSeries fgl_add(const FormalGroupLaw& law, const TruncatedSeries& a, const TruncatedSeries& b,
                        const Multiply& mul) {
  if (sgn(a.constant_term()) != 0 || sgn(b.constant_term()) != 0)
    throw DomainError("fgl_add: arguments must have zero constant term");
  if (!same_table(a.table(), b.table())) throw TableMismatch("fgl_add: operands over different tables");
  Profile p = a.profile().coarser(b.profile());
  if (a.is_zero()) return b.restricted(p);
  if (b.is_zero()) return a.restricted(p);
  return series_substitute(law.series(), {{"u", a}, {"v", b}}, a.table(), p, mul);
}

TruncatedSeries fgl_negate(const FormalGroupLaw& law, const InverseSeries& inverse,
                           const TruncatedSeries& a, const Multiply& mul) {
  if (sgn(a.constant_term()) != 0) throw DomainError("fgl_negate: argument must have zero constant term");
  if (law.kind() == FglKind::additive) return -a;
  return mul(a, apply_u_series(law, inverse.g, a, mul));
}

TruncatedSeries n_series(const FormalGroupLaw& law, int n) {
  auto u = law.u();
  TruncatedSeries zero(law.u_table(), law.u_profile());
  if (n == 0) return zero;
  auto base = u;
  if (n < 0) {
    base = fgl_negate(law, formal_inverse(law), u);
    n = -n;
  }
  // Double-and-add over the group law; equal to the iterated definition by
  // associativity.
  TruncatedSeries acc = zero;
  TruncatedSeries pw = base;
  while (n) {
    if (n & 1) acc = fgl_add(law, acc, pw);
    n >>= 1;
    if (n) pw = fgl_add(law, pw, pw);
  }
  return acc;
}

TablePtr specialize_table(const TablePtr& table, FglKind target) {
  std::vector<Variable> vars;
  bool inserted = false;
  for (const auto& v : table->variables()) {
    if (is_universal_coefficient(v.name)) {
      if (!inserted && target == FglKind::multiplicative) vars.push_back(bott_variable());
      inserted = true;
      continue;
    }
    if (v.name == kBott && target == FglKind::multiplicative)
      throw DomainError("specialize_universal: table already carries the Bott element");
    vars.push_back(v);
  }
  if (!inserted) throw DomainError("specialize_universal: no universal coefficients in the table");
  return make_table(std::move(vars));
}

TruncatedSeries specialize_universal(const TruncatedSeries& x, FglKind target) {
  if (target == FglKind::universal) return x;
  TablePtr out = specialize_table(x.table(), target);
  Profile p = Profile::defaults(*out, x.profile().total_bound);
  for (std::size_t i = 0; i < out->size(); ++i)
    if (auto j = x.table()->find((*out)[i].name)) p.caps[i] = x.profile().caps[*j];

  std::map<std::string, TruncatedSeries> bindings;
  for (const auto& v : x.table()->variables()) {
    if (!is_universal_coefficient(v.name)) continue;
    int i = universal_index(v.name);
    if (target == FglKind::additive) {
      bindings.emplace(v.name, TruncatedSeries(out, p));
    } else {
      Exponents e(out->size(), 0);
      e[out->index(kBott)] = i;
      bindings.emplace(v.name, TruncatedSeries::monomial(out, p, e, Rational(1, i + 1)));
    }
  }
  return series_substitute(x, bindings, out, p);
}

}  // namespace orient
