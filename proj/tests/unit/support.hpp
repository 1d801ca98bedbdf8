#pragma once

// Shared helpers for the unit suites: deterministic random series and a dense
// univariate schoolbook multiplier used as an independent oracle.

#include <random>
#include <vector>

#include "orient/series.hpp"

namespace orient::testing {

inline TablePtr uvw_table() {
  return make_table({{"u", 1, std::nullopt, true, false},
                     {"v", 1, std::nullopt, true, false},
                     {"w", 1, std::nullopt, true, false}});
}

/// Random series in every variable of the table with filtration < degree_bound.
inline TruncatedSeries random_series(std::mt19937& rng, const TablePtr& table, const Profile& profile,
                                     int degree_bound, int terms = 6) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> expo(0, degree_bound - 1);
  std::vector<TruncatedSeries::Term> out;
  for (int t = 0; t < terms; ++t) {
    Exponents e(table->size(), 0);
    for (auto& x : e) x = expo(rng) / static_cast<int>(table->size());
    out.emplace_back(e, Rational(coeff(rng), den(rng)));
  }
  return TruncatedSeries::from_terms(table, profile, out);
}

/// Dense product of univariate coefficient lists truncated to `length`.
inline std::vector<Rational> schoolbook(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                        std::size_t length) {
  std::vector<Rational> c(length, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < length; ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace orient::testing
