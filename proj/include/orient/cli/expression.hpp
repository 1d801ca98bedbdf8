#pragma once

// Integrand expressions:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/' | juxtaposition) unary)*      '/' only by integers
//   unary   := '-' unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 'b' | name | 'c1(' line ')' | 'e(' name ')' | 'K(' line ')' | '(' expr ')'
//   line    := ['-'] [integer] name (('+' | '-') [integer] name)*
// A bare name is c1 of that line. K(L) is the K-theory class [L] = 1 - b c1(L^dual).

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "orient/errors.hpp"
#include "orient/localization.hpp"

namespace orient::cli {

/// Malformed task file or expression.
class ParseError : public Error {
 public:
  using Error::Error;
};

struct ExprNode;

class Expression {
 public:
  /// Blank text gives the empty expression (value 0).
  static Expression parse(std::string_view text);

  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

  /// Formal codegree; bundle ranks give the codegree of e(name).
  int codegree(const std::map<std::string, int>& bundle_ranks = {}) const;
  Element evaluate(const IntegrandEnv& env) const;
  /// Value over a point ring without lines or bundles.
  Element evaluate(const RingPtr& ring) const;

  std::set<std::string> line_names() const;
  std::set<std::string> bundle_names() const;
  bool uses_bott() const;

  Integrand integrand(const std::map<std::string, int>& bundle_ranks = {}) const;

 private:
  std::string text_;
  std::shared_ptr<const ExprNode> root_;
};

}  // namespace orient::cli
