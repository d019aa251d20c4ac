#pragma once

#include <cstdint>
#include <vector>

#include "anisost/field.hpp"
#include "anisost/geometry.hpp"

namespace anisost {

enum class Direction { temporal, spatial };
enum class ModulusKind { sup, averaged };

struct SamplingConfig {
  int n_mag = 16;            // magnitudes per delta, geometric ladder
  int n_dir = 0;             // 0 resolves to 2*d*8 (d=1 uses the two signs)
  double mag_ratio = 0.70710678118654752440;
  std::uint64_t seed = 0x5eedULL;
  int measure_samples = 256;  // per mesh simplex, shifted-domain measure estimate
  int threads = 1;
};

struct SampleMeta {
  int n_dir = 0;
  int n_mag = 0;
  std::uint64_t seed = 0;
  double sigma_standin = 0.0;  // mesh inradius, recorded for spatial estimates
};

struct ModulusEstimate {
  double value = 0.0;
  ModulusKind kind = ModulusKind::sup;
  Direction direction = Direction::temporal;
  int order = 1;
  double delta = 0.0;
  double p = 2.0;
  SampleMeta meta;
};

// Discrete tensor representation of I x D used by all shifted-domain norms.
// Quadrature nodes renormalize filtered sums to the shifted-domain measure;
// lattice nodes keep raw midpoint weights so that translation arguments stay
// exact inequalities at the node level.
struct NodeSet {
  std::vector<double> ts, tw;
  std::vector<Vec> xs;
  std::vector<double> xw;
  bool lattice = false;
  bool renormalize = true;
};

struct NodeBuildParams {
  int time_cells = 4;
  int temporal_order = 3;
  int spatial_degree = 5;
  int subdivide = 1;  // spatial bisection rounds before placing rules
};

NodeSet quadrature_nodes(const Cylinder& dom, const NodeBuildParams& params);
NodeSet lattice_nodes(const Cylinder& dom, int time_points, int space_points_per_axis);

Cylinder element_cylinder(const Prism& el);

// Pointwise difference operators, binomial closed form.
double temporal_difference(const ScalarField& f, int r, double h, double t, const Vec& x,
                           const Interval& I);
double spatial_difference(const ScalarField& f, int r, const Vec& h, double t, const Vec& x,
                          const Cylinder& dom);

// || Delta_h^r f ||_{L_p} over the shifted domain, discretized on `nodes`.
double temporal_diff_norm(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                          int r, double h, double p);
double spatial_diff_norm(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                         int r, const Vec& h, double p, const SamplingConfig& cfg);

// Deterministic estimate of |D_{r,h}| = |{x in D : x + i h in D, i <= r}|.
double shifted_space_measure(const Cylinder& dom, int r, const Vec& h, int samples_per_simplex,
                             std::uint64_t seed);

struct HSample {
  double ht = 0.0;
  Vec hx{0, 0, 0};
  double magnitude = 0.0;
};

std::vector<Vec> sphere_directions(int d, int n, std::uint64_t seed);

// Shift samples shared by all deltas in a ladder; per-delta estimates filter
// by magnitude, so estimates are exactly monotone in delta.
std::vector<HSample> shift_ladder(Direction dir, int d, const std::vector<double>& deltas,
                                  const SamplingConfig& cfg);

std::vector<ModulusEstimate> sup_modulus_ladder(const ScalarField& f, const Cylinder& dom,
                                                const NodeSet& nodes, Direction dir, int r,
                                                const std::vector<double>& deltas, double p,
                                                const SamplingConfig& cfg);

ModulusEstimate sup_modulus(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                            Direction dir, int r, double delta, double p,
                            const SamplingConfig& cfg);

// Low-discrepancy average of ||Delta^r_h f||_p^p; h runs over [-delta,delta]
// (temporal) or the box [-delta,delta]^d (spatial). p = inf aliases sup.
ModulusEstimate averaged_modulus(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                                 Direction dir, int r, double delta, double p,
                                 const SamplingConfig& cfg);

struct ModulusPair {
  double sup = 0.0;
  double averaged = 0.0;
};

// Both estimators from one explicit shift set; the trivial averaged <= sup
// comparison is exact on shared samples.
ModulusPair modulus_pair_on_samples(const ScalarField& f, const Cylinder& dom,
                                    const NodeSet& nodes, Direction dir, int r,
                                    const std::vector<HSample>& samples, double p,
                                    const SamplingConfig& cfg);

// Lower-order modulus against the weighted tail integral of a higher-order
// one, evaluated with a trapezoid rule on a dyadic grid. Diagnostic only.
struct MarchaudDiagnostic {
  double delta = 0.0;
  int low_order = 1;
  int high_order = 2;
  double lhs = 0.0;  // omega_k(delta)^mu
  double rhs = 0.0;
  double ratio = 0.0;
};

MarchaudDiagnostic marchaud_diagnostic(const ScalarField& f, const Cylinder& dom,
                                       const NodeSet& nodes, Direction dir, int k, int r,
                                       double delta, double p, const SamplingConfig& cfg);

}  // namespace anisost
