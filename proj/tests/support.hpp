#pragma once

#include "s3flow/s3core.hpp"

#include <random>

namespace s3flow::testing {

inline Vec4 random_unit4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec4 v(g(rng), g(rng), g(rng), g(rng));
  return v.normalized();
}

inline Vec3 random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

/// Unit tangent vector at x.
inline Vec4 random_tangent(std::mt19937_64& rng, const Vec4& x) {
  Vec4 w = random_unit4(rng);
  w -= w.dot(x) * x;
  return w.normalized();
}

}  // namespace s3flow::testing
