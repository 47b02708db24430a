#pragma once

#include <random>

#include "tanglev/factgroup.hpp"
#include "tanglev/sampling.hpp"

namespace tanglev::testing {

using tanglev::random_factorizable;
using tanglev::random_rational;
using tanglev::random_rational_matrix;

inline Cx random_cx(std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> n(0.0, spread);
  return {n(rng), n(rng)};
}

// Generic complex group element, kept away from the non-factorizable locus.
inline Mat2<Cx> random_generic(std::mt19937_64& rng) {
  for (;;) {
    Mat2<Cx> g{random_cx(rng), random_cx(rng), random_cx(rng), random_cx(rng)};
    if (std::abs(g.m22) > 0.3 && std::abs(g.det()) > 0.3) {
      auto f = factorize(g);
      if (std::abs(f.beta) > 0.1 && std::abs(f.b) > 0.1 && std::abs(f.a) > 0.1 && std::abs(f.alpha) > 0.1)
        return g;
    }
  }
}

}  // namespace tanglev::testing
