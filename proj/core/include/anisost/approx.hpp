#pragma once

#include <string>

#include "anisost/besov.hpp"
#include "anisost/field.hpp"
#include "anisost/geometry.hpp"
#include "anisost/polynomial.hpp"
#include "anisost/quadrature.hpp"

namespace anisost {

struct SolverMeta {
  std::string method;
  int iterations = 0;
  bool converged = true;
};

// Element-local best fit. The polynomial lives in reference-prism
// coordinates; `to_local` maps global (t, x) onto them.
struct LocalFit {
  Prism element;
  AnisoPolynomial poly;
  AffineMap to_local;
  double error = 0.0;
  double p = 2.0;
  SolverMeta meta;

  double evaluate(double t, const Vec& x) const {
    return poly.evaluate(to_local.map_time(t), to_local.map_space(x));
  }
  AnisoPolynomial global() const { return pullback(poly, to_local); }
};

AffineMap element_to_reference(const Prism& el);

// Least squares at quadrature nodes for p = 2; iteratively reweighted least
// squares elsewhere (p in (0,1) with damping, p = inf via Lawson weights).
LocalFit best_fit(const ScalarField& f, const Prism& el, int r1, int r2, double p,
                  const QuadratureRule& rule);
LocalFit best_fit(const ScalarField& f, const Prism& el, int r1, int r2, double p);

// Residual p-norm of an existing fit under a different rule.
double fit_residual_norm(const ScalarField& f, const LocalFit& fit, double p,
                         const QuadratureRule& rule);

struct JacksonReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool exact_case = false;  // both sides vanish
  double delta_t = 0.0;     // |J|
  double delta_x = 0.0;     // diam(S)
};

JacksonReport jackson_check(const ScalarField& f, const Prism& el, int r1, int r2, double p,
                            const SamplingConfig& cfg,
                            const NodeBuildParams& build = NodeBuildParams{});

struct WhitneyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double exponent = 0.0;
  double measure = 0.0;
  double local_seminorm = 0.0;
  bool exact_case = false;
};

double whitney_exponent(double s1, double s2, int d, double p, double q);

WhitneyReport whitney_check(const ScalarField& f, const Prism& el, double s1, double s2,
                            double p, double q, const SamplingConfig& cfg, int n_max = 10,
                            const NodeBuildParams& build = NodeBuildParams{});

}  // namespace anisost
