#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "anisost/geometry.hpp"
#include "anisost/polynomial.hpp"

namespace anisost {

struct Regularity {
  double s1 = 0.0;
  double s2 = 0.0;
  double q = 2.0;
};

// A deterministic scalar function on the closed cylinder. Evaluators must be
// pure; they are called concurrently.
struct ScalarField {
  std::function<double(double, const Vec&)> eval;
  std::string label;
  int d = 1;
  std::optional<Regularity> known_regularity;
  // Hints quadrature to subdivide before applying a rule (cusp integrands).
  bool rough = false;

  double operator()(double t, const Vec& x) const { return eval(t, x); }
};

struct FieldParams {
  std::map<std::string, double> scalars;
  // polynomial fields only
  int r1 = 0;
  int r2 = 0;
  std::vector<double> coeffs;

  double get(const std::string& key, double fallback) const {
    auto it = scalars.find(key);
    return it == scalars.end() ? fallback : it->second;
  }
};

// name in {polynomial, smooth_wave, temporal_cusp, spatial_corner,
// mixed_cusp, indicator_strip}; throws UnknownName otherwise.
ScalarField builtin_field(const std::string& name, const FieldParams& params, int d);

ScalarField polynomial_field(const AnisoPolynomial& P);

}  // namespace anisost
