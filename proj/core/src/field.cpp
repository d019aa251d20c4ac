#include "anisost/field.hpp"

#include <cmath>
#include <numbers>

#include "anisost/errors.hpp"

namespace anisost {

namespace {
constexpr double kPi = std::numbers::pi;
}

ScalarField polynomial_field(const AnisoPolynomial& P) {
  ScalarField f;
  f.d = P.d;
  f.label = "polynomial";
  f.eval = [P](double t, const Vec& x) { return P.evaluate(t, x); };
  return f;
}

ScalarField builtin_field(const std::string& name, const FieldParams& params, int d) {
  ScalarField f;
  f.d = d;
  f.label = name;

  if (name == "polynomial") {
    if (params.r1 < 1 || params.r2 < 1)
      throw ConfigError("polynomial field: r1, r2 required");
    AnisoPolynomial P(params.r1, params.r2, d);
    if (params.coeffs.size() != P.coeffs.size())
      throw ConfigError("polynomial field: expected " + std::to_string(P.coeffs.size()) +
                        " coefficients, got " + std::to_string(params.coeffs.size()));
    P.coeffs = params.coeffs;
    return polynomial_field(P);
  }
  if (name == "smooth_wave") {
    const double k = params.get("k", 1.0);
    f.eval = [d, k](double t, const Vec& x) {
      double v = std::sin(k * kPi * t);
      for (int j = 0; j < d; ++j) v *= std::sin(k * kPi * x[j]);
      return v;
    };
    return f;
  }
  if (name == "temporal_cusp") {
    const double alpha = params.get("alpha", 0.5);
    const double t0 = params.get("t0", 0.5);
    f.rough = true;
    f.eval = [d, alpha, t0](double t, const Vec& x) {
      double g = 1.0;
      for (int j = 0; j < d; ++j) g *= std::cos(0.5 * kPi * x[j]);
      return std::pow(std::abs(t - t0), alpha) * g;
    };
    return f;
  }
  if (name == "spatial_corner") {
    const double beta = params.get("beta", 0.5);
    Vec x0{params.get("x0", 0.5), params.get("x1", 0.5), params.get("x2", 0.5)};
    for (int j = d; j < 3; ++j) x0[j] = 0.0;
    f.rough = true;
    f.eval = [x0, beta](double t, const Vec& x) {
      const Vec r = vsub(x, x0);
      return std::pow(vnorm(r), beta) * std::cos(0.5 * kPi * t);
    };
    return f;
  }
  if (name == "mixed_cusp") {
    const double alpha = params.get("alpha", 0.5);
    const double beta = params.get("beta", 0.5);
    const double t0 = params.get("t0", 0.5);
    Vec x0{params.get("x0", 0.5), params.get("x1", 0.5), params.get("x2", 0.5)};
    for (int j = d; j < 3; ++j) x0[j] = 0.0;
    f.rough = true;
    f.eval = [alpha, beta, t0, x0](double t, const Vec& x) {
      const Vec r = vsub(x, x0);
      return std::pow(std::abs(t - t0), alpha) * std::pow(vnorm(r), beta);
    };
    return f;
  }
  if (name == "indicator_strip") {
    // axis 0 is time, axes 1..d are space coordinates
    const int axis = static_cast<int>(params.get("axis", 1.0));
    const double lo = params.get("lo", 0.25);
    const double hi = params.get("hi", 0.75);
    if (axis < 0 || axis > d) throw ConfigError("indicator_strip: axis out of range");
    f.rough = true;
    f.eval = [axis, lo, hi](double t, const Vec& x) {
      const double c = axis == 0 ? t : x[axis - 1];
      return (c >= lo && c < hi) ? 1.0 : 0.0;
    };
    return f;
  }
  throw UnknownName("builtin_field: unknown field '" + name + "'");
}

}  // namespace anisost
