#pragma once

// Virtual torus localization: the integral of a class over X is the sum over
// fixed components F of
//   push_F( integrand|_F * e(Ob_F^fix) * e(N1) / e(N0) )
// with N^vir = N0 - N1 the moving part of the obstruction theory.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orient/equivariant.hpp"

namespace orient {

/// Classes an integrand may refer to, restricted to the ring it is evaluated in.
struct IntegrandEnv {
  RingPtr ring;
  /// First Chern classes of named line bundles.
  std::map<std::string, Element> lines;
  /// First Chern classes of the summands of named bundles.
  std::map<std::string, std::vector<Element>> bundles;

  /// c1 of the tensor product sum_k d_k * name_k.
  Element c1(const std::map<std::string, int>& line) const;
  /// Euler class of a named bundle.
  Element euler(const std::string& name) const;
};

struct Integrand {
  std::function<Element(const IntegrandEnv&)> evaluate;
  /// Formal codegree of the expression. When absent, the computed codegree
  /// of each restriction is used, which understates it if the truncation
  /// already removed the top terms.
  std::optional<int> codegree;
};

struct FixedComponentSpec {
  std::string label;
  /// Trivially acted point, projective space or product.
  SpaceModel base;
  BundleSpec moving_n0;
  BundleSpec moving_n1;
  BundleSpec obstruction_fixed;
  /// Restrictions of the named lines and bundles of the problem.
  std::map<std::string, LineSummand> lines;
  std::map<std::string, BundleSpec> bundles;
};

/// Non-equivariant model for the direct cross-check: the integral of
/// integrand * e(obstruction) over `model`.
struct DirectReference {
  SpaceModel model;
  BundleSpec obstruction;
  std::map<std::string, LineBundle> lines;
  std::map<std::string, BundleSpec> bundles;
};

struct VirtualLocalizationProblem {
  FglKind theory = FglKind::additive;
  TorusContext torus;
  Integrand integrand;
  std::vector<FixedComponentSpec> components;
  std::optional<DirectReference> direct;
};

/// P^n with the standard torus of rank n+1: fixed points p_i, tangent
/// characters t_j - t_i, c1(O(1))|p_i = [-t_i]. The line "h" is O(1).
/// `obstruction` lists the degrees a of summands O(a) of the obstruction
/// bundle; at p_i each one restricts to the character -a t_i (moving when
/// a != 0). Named bundles are sums of O(d) with the same restriction rule.
VirtualLocalizationProblem standard_pn_fixed_data(FglKind theory, const TorusContext& torus, int n,
                                                  Integrand integrand, std::vector<int> obstruction = {},
                                                  std::map<std::string, std::vector<int>> bundles = {});

/// [F]^vir = e(Ob) for smooth F with obstruction bundle Ob.
Element virtual_class_smooth(const RingPtr& ring, const BundleSpec& obstruction);

struct LocalizationResult {
  LocalizedElement value;
  int cap = 0;
  int order = 0;
};

/// Sum of the component contributions, over the point ring. The cap is
/// raised (up to torus.max_cap) until the bookkeeping allows verdicts.
LocalizationResult localize(const VirtualLocalizationProblem& problem);

/// Localized value at a fixed cap (no raising).
LocalizationResult localize_at(const VirtualLocalizationProblem& problem, int cap);

/// Limit of a localized result, as a series over the plain point table.
/// Throws VerificationFailure when the result is not denominator-free.
TruncatedSeries limit_value(const LocalizationResult& r);

/// Direct integral of the reference in the given theory (Chow or K-theory).
TruncatedSeries direct_value(const VirtualLocalizationProblem& problem, FglKind theory);

struct ConstantVerdict {
  /// Denominator-free with non-equivariant limit equal to the expected value.
  bool holds = false;
  bool denominator_free = false;
  /// assert_constant against the expected value: the equivariant integral
  /// itself is that constant. Stronger than `holds`; fails for integrands
  /// whose equivariant lift is not constant (k > n on P^n, K-theory Euler
  /// characteristics).
  bool equivariantly_constant = false;
  int cap = 0;
  /// Caps at which the verdict was evaluated.
  std::vector<int> checked_caps;
};

/// Verdict on the localized value against `expected`. The constancy flag is
/// evaluated at cap and, outside Chow, again at cap + 2.
ConstantVerdict check_constant(const VirtualLocalizationProblem& problem, const TruncatedSeries& expected);

struct ComparisonReport {
  LocalizationResult localized;
  /// Per theory compared: Chow/K give one entry, universal gives both.
  std::vector<std::pair<FglKind, TruncatedSeries>> direct;
  bool verdict = false;
  std::vector<std::string> notes;
};

ComparisonReport compare_with_direct(const VirtualLocalizationProblem& problem);

/// Applies the integer matrix `m` (rows = new torus rank) to every
/// character of the problem.
VirtualLocalizationProblem transform_characters(const VirtualLocalizationProblem& problem,
                                                const std::vector<std::vector<int>>& m);

/// Virtual dimension of a component: dim F - rank Ob + rank N0 - rank N1.
int virtual_dimension(const FixedComponentSpec& c);

}  // namespace orient
