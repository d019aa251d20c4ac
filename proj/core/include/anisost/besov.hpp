#pragma once

#include <vector>

#include "anisost/field.hpp"
#include "anisost/geometry.hpp"
#include "anisost/moduli.hpp"

namespace anisost {

struct BesovLevel {
  int n = 0;
  double delta_t = 0.0;
  double delta_x = 0.0;
  double temporal_term = 0.0;  // delta_t^{-s1} * omega_{r1,t}(delta_t)
  double spatial_term = 0.0;
};

struct BesovEstimate {
  double seminorm = 0.0;
  double s1 = 1.0, s2 = 1.0;
  double p = 2.0, q = 2.0;
  int r1 = 2, r2 = 2;
  int n_max = 10;
  ModulusKind kind = ModulusKind::sup;
  bool truncation_warning = false;
  // Domain scales the dyadic ladder was normalized with; 1 on the unit
  // cylinder, recorded otherwise.
  double scale_t = 1.0;
  double scale_x = 1.0;
  std::vector<BesovLevel> per_level;
  SampleMeta meta;
};

// Dyadic-sum seminorm with base 2 and truncation n_max. Orders are
// r_i = floor(s_i) + 1. The ladder runs over delta = scale * 2^{-n} with the
// domain scales |I| and diam(D), which reproduces the unit-cylinder formula
// exactly there and carries the recorded scale factors elsewhere.
BesovEstimate besov_seminorm(const ScalarField& f, const Cylinder& dom, double s1, double s2,
                             double p, double q, int n_max, const SamplingConfig& cfg,
                             ModulusKind kind = ModulusKind::sup,
                             const NodeSet* nodes = nullptr,
                             const NodeBuildParams& build = NodeBuildParams{});

BesovEstimate local_besov_seminorm(const ScalarField& f, const Prism& el, double s1, double s2,
                                   double p, double q, int n_max, const SamplingConfig& cfg,
                                   ModulusKind kind = ModulusKind::sup,
                                   const NodeBuildParams& build = NodeBuildParams{});

// sum over elements of local seminorm^q (q < inf) or the max (q = inf),
// with p = q in each local estimate.
double partition_seminorm_sum(const ScalarField& f, const Partition& P, double s1, double s2,
                              double q, int n_max, const SamplingConfig& cfg,
                              ModulusKind kind = ModulusKind::sup,
                              const NodeBuildParams& build = NodeBuildParams{});

}  // namespace anisost
