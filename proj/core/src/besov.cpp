#include "anisost/besov.hpp"

#include <algorithm>
#include <cmath>

#include "anisost/errors.hpp"
#include "anisost/parallel.hpp"

namespace anisost {

BesovEstimate besov_seminorm(const ScalarField& f, const Cylinder& dom, double s1, double s2,
                             double p, double q, int n_max, const SamplingConfig& cfg,
                             ModulusKind kind, const NodeSet* nodes,
                             const NodeBuildParams& build) {
  if (s1 <= 0.0 || s2 <= 0.0) throw ConfigError("besov_seminorm: s1, s2 must be positive");
  if (!(q > 0.0)) throw ConfigError("besov_seminorm: q must be positive");

  BesovEstimate est;
  est.s1 = s1;
  est.s2 = s2;
  est.p = p;
  est.q = q;
  est.n_max = n_max;
  est.kind = kind;
  est.r1 = static_cast<int>(std::floor(s1)) + 1;
  est.r2 = static_cast<int>(std::floor(s2)) + 1;
  est.scale_t = dom.time().length();
  est.scale_x = dom.space_diameter();

  NodeSet local_nodes;
  if (nodes == nullptr) {
    local_nodes = quadrature_nodes(dom, build);
    nodes = &local_nodes;
  }

  std::vector<double> deltas_t(n_max + 1), deltas_x(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    deltas_t[n] = est.scale_t * std::pow(2.0, -n);
    deltas_x[n] = est.scale_x * std::pow(2.0, -n);
  }

  std::vector<double> om_t(n_max + 1), om_x(n_max + 1);
  if (kind == ModulusKind::sup) {
    const auto lt =
        sup_modulus_ladder(f, dom, *nodes, Direction::temporal, est.r1, deltas_t, p, cfg);
    const auto lx =
        sup_modulus_ladder(f, dom, *nodes, Direction::spatial, est.r2, deltas_x, p, cfg);
    for (int n = 0; n <= n_max; ++n) {
      om_t[n] = lt[n].value;
      om_x[n] = lx[n].value;
      est.meta = lx[n].meta;
    }
  } else {
    for (int n = 0; n <= n_max; ++n) {
      om_t[n] =
          averaged_modulus(f, dom, *nodes, Direction::temporal, est.r1, deltas_t[n], p, cfg)
              .value;
      const auto ax =
          averaged_modulus(f, dom, *nodes, Direction::spatial, est.r2, deltas_x[n], p, cfg);
      om_x[n] = ax.value;
      est.meta = ax.meta;
    }
  }

  const bool inf_q = std::isinf(q);
  double acc = 0.0, vmax = 0.0;
  est.per_level.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    BesovLevel lev;
    lev.n = n;
    lev.delta_t = deltas_t[n];
    lev.delta_x = deltas_x[n];
    lev.temporal_term = std::pow(deltas_t[n], -s1) * om_t[n];
    lev.spatial_term = std::pow(deltas_x[n], -s2) * om_x[n];
    est.per_level.push_back(lev);
    if (inf_q) {
      vmax = std::max({vmax, lev.temporal_term, lev.spatial_term});
    } else {
      acc += std::pow(lev.temporal_term, q) + std::pow(lev.spatial_term, q);
    }
  }
  est.seminorm = inf_q ? vmax : std::pow(acc, 1.0 / q);

  if (n_max >= 1) {
    const auto total = [&](int n) {
      return est.per_level[n].temporal_term + est.per_level[n].spatial_term;
    };
    const double last = total(n_max), prev = total(n_max - 1);
    if (last > 1e-13 * std::max(1.0, est.seminorm) && prev > 0.0 && last / prev > 0.9)
      est.truncation_warning = true;
  }
  return est;
}

BesovEstimate local_besov_seminorm(const ScalarField& f, const Prism& el, double s1, double s2,
                                   double p, double q, int n_max, const SamplingConfig& cfg,
                                   ModulusKind kind, const NodeBuildParams& build) {
  const Cylinder cyl = element_cylinder(el);
  return besov_seminorm(f, cyl, s1, s2, p, q, n_max, cfg, kind, nullptr, build);
}

double partition_seminorm_sum(const ScalarField& f, const Partition& P, double s1, double s2,
                              double q, int n_max, const SamplingConfig& cfg, ModulusKind kind,
                              const NodeBuildParams& build) {
  std::vector<double> locals(P.elements.size(), 0.0);
  SamplingConfig one = cfg;
  one.threads = 1;
  parallel_for(P.elements.size(), cfg.threads, [&](std::size_t i) {
    locals[i] =
        local_besov_seminorm(f, P.elements[i], s1, s2, q, q, n_max, one, kind, build).seminorm;
  });
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : locals) m = std::max(m, v);
    return m;
  }
  double acc = 0.0;
  for (double v : locals) acc += std::pow(v, q);
  return acc;
}

}  // namespace anisost
