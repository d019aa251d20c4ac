#pragma once

#include <vector>

#include "anisost/field.hpp"
#include "anisost/geometry.hpp"

namespace anisost {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// n-point Gauss-Legendre on [0,1]; exact for degree <= 2n - 1.
GaussRule gauss_legendre_01(int n);

// Points and weights on a simplex, exact for total degree <= `degree`.
// Built as a collapsed tensor Gauss grid; weights positive, nodes interior.
struct SimplexRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;  // sum to |S|
  int degree = 0;
};

SimplexRule simplex_rule(const Simplex& S, int degree);

// Tensor product of a temporal Gauss rule on J (exact for degree
// <= 2 * temporal_order - 1) with a simplex rule on S (exact for total
// degree <= spatial_degree). Node count = t_nodes.size() * x_nodes.size().
struct QuadratureRule {
  Interval domain_time;
  Simplex domain_space;
  std::vector<double> t_nodes, t_weights;  // on J, weights sum to |J|
  std::vector<Vec> x_nodes;
  std::vector<double> x_weights;  // on S, weights sum to |S|
  int temporal_order = 1;
  int spatial_degree = 1;

  std::size_t size() const { return t_nodes.size() * x_nodes.size(); }
  double weight_sum() const;
};

QuadratureRule prism_rule(const Interval& J, const Simplex& S, int temporal_order,
                          int spatial_degree);

double integrate(const ScalarField& f, const QuadratureRule& rule);

// Discrete L_p norm over the prism. p = inf takes the node max and then up
// to four dyadic subdivision passes until the max is stable to 1e-3
// relative. `subdivide_levels` applies the rule on a uniformly subdivided
// prism, which rough integrands need near their singular sets.
double lp_norm(const ScalarField& f, const Interval& J, const Simplex& S, double p,
               int temporal_order, int spatial_degree, int subdivide_levels = 0);

double lp_norm(const ScalarField& f, const Prism& el, double p, int temporal_order,
               int spatial_degree, int subdivide_levels = 0);

inline double mu(double p) { return std::min(1.0, p); }

// Exact value of the monomial t^i x^alpha integrated over [0,1] x reference
// simplex: 1/(i+1) * (prod alpha_j!) / (|alpha| + d)!.
double reference_monomial_moment(int i, const std::array<int, 3>& alpha, int d);

}  // namespace anisost
