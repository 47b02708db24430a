#pragma once

#include <random>

#include "factgroup.hpp"

namespace tanglev {

// Entries p/q with q in 1..4 and |p/q| <= 5.
inline Qi random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(1, 4);
  long q = den(rng);
  std::uniform_int_distribution<long> num(-5 * q, 5 * q);
  return Qi::frac(num(rng), q);
}

inline Mat2<Qi> random_rational_matrix(std::mt19937_64& rng) {
  return {random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng)};
}

inline Mat2<Qi> random_factorizable(std::mt19937_64& rng) {
  for (;;) {
    auto g = random_rational_matrix(rng);
    if (is_factorizable(g)) return g;
  }
}

}  // namespace tanglev
