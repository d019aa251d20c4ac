#pragma once

#include <cstddef>
#include <vector>

#include "anisost/approx.hpp"
#include "anisost/besov.hpp"
#include "anisost/field.hpp"
#include "anisost/geometry.hpp"

namespace anisost {

struct RefinementConfig {
  double s1 = 1.0, s2 = 1.0;
  int d = 1;
  int r1 = 2, r2 = 2;
  double p = 2.0, q = 2.0;
  double delta = -1.0;    // greedy threshold
  double epsilon = -1.0;  // accuracy target for rate runs
  int max_rounds = 30;
  std::size_t element_cap = 1000000;
  int besov_n_max = 10;
  SamplingConfig sampling;
  NodeBuildParams node_build;
  int threads = 1;
};

// One spatial bisection paired with m temporal bisections, m from the
// level-dependent ceiling rule; returns the 2^{m+1} child prisms.
std::vector<Prism> atomic_split(const Prism& el, double s1, double s2);
int atomic_split_temporal_rounds(int new_level, double s1, double s2, int d);
double atomic_split_child_bound(double s1, double s2, int d);

struct GreedyRound {
  int k = 0;
  std::size_t marked = 0;
  std::size_t elements_before = 0;
  std::size_t elements_after = 0;
  double max_error = 0.0;
};

struct GreedyTrace {
  std::vector<GreedyRound> rounds;
  bool terminated = false;
  std::size_t total_splits = 0;
  std::size_t marked_sum = 0;
};

struct GreedyResult {
  Partition partition;
  GreedyTrace trace;
  std::vector<LocalFit> fits;  // aligned with partition.elements

  double global_error(double p) const;
  double max_local_error() const;
};

// Mark every element whose discrete best-fit error exceeds delta, split all
// marked elements, repeat until nothing is marked. Stops with
// terminated = false after max_rounds; throws ElementCapExceeded beyond the
// element cap.
GreedyResult greedy(const ScalarField& f, const Partition& P0, const RefinementConfig& cfg);

struct GreedyAudit {
  double max_same_rule = 0.0;  // refit errors under the marking rule
  double max_fine_rule = 0.0;  // residual norms under one subdivision level
  double gap_ratio = 0.0;
};

GreedyAudit audit_greedy(const ScalarField& f, const GreedyResult& res,
                         const RefinementConfig& cfg);

struct DirectRunRecord {
  double epsilon = 0.0;
  double delta = 0.0;
  double seminorm = 0.0;
  std::size_t p0_size = 0;
  std::size_t p_size = 0;
  int rounds = 0;
  bool terminated = true;
  bool zero_seminorm = false;
  double global_error = 0.0;
};

// Estimates |f|_B on the root cylinder (averaged form with q = q), sets
// delta = eps^{1 + 1/(s1 p) + d/(s2 p)} |f|_B, runs the greedy loop and
// records element growth and the achieved error. A vanishing seminorm short
// circuits with f itself as the approximant.
DirectRunRecord direct_theorem_run(const ScalarField& f, const Partition& P0,
                                   RefinementConfig cfg, GreedyResult* out_result = nullptr);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace anisost
