#include "orient/cli/expression.hpp"

#include <cctype>
#include <functional>
#include <limits>
#include <vector>

namespace orient::cli {

struct ExprNode {
  enum class Kind { integer, bott, line, euler, kclass, add, sub, mul, div, neg, pow };
  Kind kind;
  mpz_class value;                  // integer literal, divisor
  int exponent = 0;                 // pow
  std::map<std::string, int> line;  // line, kclass
  std::string name;                 // euler
  std::shared_ptr<const ExprNode> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

std::shared_ptr<ExprNode> make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse_all() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("integrand '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  mpz_class integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }
  int small_integer() {
    auto z = integer();
    if (!z.fits_sint_p() || z > 1000) fail("integer too large");
    return static_cast<int>(z.get_si());
  }
  std::string identifier() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && ident_start(s_[pos_]))
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  bool starts_primary() {
    char c = peek();
    return c == '(' || ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }
  // Lookahead for "name(" without consuming.
  bool call_of(std::string_view fn) {
    skip();
    if (s_.substr(pos_, fn.size()) != fn) return false;
    std::size_t p = pos_ + fn.size();
    if (p < s_.size() && ident_char(s_[p])) return false;
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    return p < s_.size() && s_[p] == '(';
  }

  NodePtr expr() {
    auto a = term();
    for (;;) {
      if (accept('+')) a = make(Kind::add, a, term());
      else if (accept('-')) a = make(Kind::sub, a, term());
      else return a;
    }
  }
  NodePtr term() {
    auto a = unary();
    for (;;) {
      if (accept('*')) {
        a = make(Kind::mul, a, unary());
      } else if (accept('/')) {
        auto n = make(Kind::div, a);
        auto d = integer();
        if (d == 0) fail("division by zero");
        n->value = d;
        a = n;
      } else if (starts_primary()) {
        a = make(Kind::mul, a, unary());
      } else {
        return a;
      }
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, unary());
    return power();
  }
  NodePtr power() {
    auto a = primary();
    if (accept('^')) {
      auto n = make(Kind::pow, a);
      n->exponent = small_integer();
      return n;
    }
    return a;
  }
  NodePtr primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto n = make(Kind::integer);
      n->value = integer();
      return n;
    }
    if (call_of("c1") || call_of("K")) {
      bool k = identifier() == "K";
      expect('(');
      auto n = make(k ? Kind::kclass : Kind::line);
      n->line = line_expr();
      expect(')');
      return n;
    }
    if (call_of("e")) {
      identifier();
      expect('(');
      auto n = make(Kind::euler);
      n->name = identifier();
      expect(')');
      return n;
    }
    if (!ident_start(c)) fail(c == '\0' ? "unexpected end of input" : "unexpected '" + std::string(1, c) + "'");
    auto name = identifier();
    if (name == kBott) return make(Kind::bott);
    auto n = make(Kind::line);
    n->line[name] = 1;
    return n;
  }
  std::map<std::string, int> line_expr() {
    std::map<std::string, int> out;
    int sign = accept('-') ? -1 : 1;
    for (;;) {
      int mult = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        mult = small_integer();
        accept('*');
      }
      out[identifier()] += sign * mult;
      if (accept('+')) sign = 1;
      else if (accept('-')) sign = -1;
      else break;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

int codegree_of(const ExprNode& n, const std::map<std::string, int>& ranks) {
  switch (n.kind) {
    case Kind::integer: return 0;
    case Kind::bott: return -1;
    case Kind::line: return 1;
    case Kind::kclass: return 0;
    case Kind::euler: {
      auto it = ranks.find(n.name);
      if (it == ranks.end()) throw DomainError("unknown bundle '" + n.name + "'");
      return it->second;
    }
    case Kind::add:
    case Kind::sub: return std::max(codegree_of(*n.lhs, ranks), codegree_of(*n.rhs, ranks));
    case Kind::mul: return codegree_of(*n.lhs, ranks) + codegree_of(*n.rhs, ranks);
    case Kind::div:
    case Kind::neg: return codegree_of(*n.lhs, ranks);
    case Kind::pow: return n.exponent * codegree_of(*n.lhs, ranks);
  }
  return 0;
}

Element eval(const ExprNode& n, const IntegrandEnv& env) {
  const auto& r = env.ring;
  switch (n.kind) {
    case Kind::integer: return r->constant(Rational(n.value));
    case Kind::bott: return r->coefficient(kBott);
    case Kind::line: return env.c1(n.line);
    case Kind::kclass: {
      std::map<std::string, int> dual;
      for (const auto& [k, d] : n.line) dual[k] = -d;
      return r->one() - r->coefficient(kBott) * env.c1(dual);
    }
    case Kind::euler: return env.euler(n.name);
    case Kind::add: return eval(*n.lhs, env) + eval(*n.rhs, env);
    case Kind::sub: return eval(*n.lhs, env) - eval(*n.rhs, env);
    case Kind::mul: return eval(*n.lhs, env) * eval(*n.rhs, env);
    case Kind::div: return eval(*n.lhs, env).scaled(Rational(1) / Rational(n.value));
    case Kind::neg: return -eval(*n.lhs, env);
    case Kind::pow: return eval(*n.lhs, env).pow(static_cast<unsigned>(n.exponent));
  }
  return r->zero();
}

void visit(const ExprNode& n, const std::function<void(const ExprNode&)>& f) {
  f(n);
  if (n.lhs) visit(*n.lhs, f);
  if (n.rhs) visit(*n.rhs, f);
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  bool blank = true;
  for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (!blank) e.root_ = Parser(text).parse_all();
  return e;
}

int Expression::codegree(const std::map<std::string, int>& bundle_ranks) const {
  return root_ ? codegree_of(*root_, bundle_ranks) : 0;
}

Element Expression::evaluate(const IntegrandEnv& env) const {
  return root_ ? eval(*root_, env) : env.ring->zero();
}

Element Expression::evaluate(const RingPtr& ring) const {
  IntegrandEnv env{ring, {}, {}};
  // Universal coefficients m_i are visible by name in scalar expressions.
  for (const auto& v : ring->law().coefficient_variables())
    if (v.name != kBott) env.lines.emplace(v.name, ring->coefficient(v.name));
  return evaluate(env);
}

std::set<std::string> Expression::line_names() const {
  std::set<std::string> out;
  if (root_)
    visit(*root_, [&](const ExprNode& n) {
      if (n.kind == Kind::line || n.kind == Kind::kclass)
        for (const auto& [k, d] : n.line) out.insert(k);
    });
  return out;
}

std::set<std::string> Expression::bundle_names() const {
  std::set<std::string> out;
  if (root_)
    visit(*root_, [&](const ExprNode& n) {
      if (n.kind == Kind::euler) out.insert(n.name);
    });
  return out;
}

bool Expression::uses_bott() const {
  bool b = false;
  if (root_)
    visit(*root_, [&](const ExprNode& n) { b = b || n.kind == Kind::bott || n.kind == Kind::kclass; });
  return b;
}

Integrand Expression::integrand(const std::map<std::string, int>& bundle_ranks) const {
  auto self = *this;
  return {[self](const IntegrandEnv& env) { return self.evaluate(env); }, codegree(bundle_ranks)};
}

}  // namespace orient::cli
