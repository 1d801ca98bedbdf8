#pragma once

#include <compare>
#include <string>
#include <vector>

namespace orient {

/// A character sum_l a_l t_l of a split torus, stored by its integer weights.
struct Character {
  std::vector<int> weights;

  bool is_zero() const;
  /// First nonzero weight positive. Zero counts as canonical.
  bool is_canonical() const;
  Character operator-() const;
  friend Character operator+(const Character& a, const Character& b);

  std::string to_string() const;

  friend auto operator<=>(const Character&, const Character&) = default;
  friend bool operator==(const Character&, const Character&) = default;
};

/// Character t_i (0-based) of a rank-r torus scaled by `times`.
Character basis_character(int rank, int i, int times = 1);

/// Parameters of the truncated equivariant coefficient ring
/// H(pt)[z1..zr]/(z_l^cap) further cut at total z-degree < cap.
struct TorusContext {
  int rank = 0;
  int cap = 6;
  /// Ceiling for automatic raises of `cap`.
  int max_cap = 40;

  static std::string zeta_name(int l);  // "z1", "z2", ...
  TorusContext with_cap(int c) const {
    TorusContext t = *this;
    t.cap = c;
    return t;
  }
};

}  // namespace orient
