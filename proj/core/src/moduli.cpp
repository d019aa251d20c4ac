#include "anisost/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "anisost/errors.hpp"
#include "anisost/parallel.hpp"
#include "anisost/quadrature.hpp"

namespace anisost {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr int kHaltonBases[3] = {2, 3, 5};

// Uniform point in a simplex from sorted low-discrepancy coordinates.
Vec simplex_point(const Simplex& S, std::uint64_t index, std::uint64_t seed) {
  double u[3] = {0, 0, 0};
  for (int j = 0; j < S.dim; ++j) u[j] = halton(index + 1 + (seed % 9173), kHaltonBases[j]);
  std::sort(u, u + S.dim);
  double bary_prev = 0.0;
  Vec acc{0, 0, 0};
  // barycentric increments u_(1), u_(2)-u_(1), ... against vertices 1..d
  for (int j = 0; j < S.dim; ++j) {
    const double lam = u[j] - bary_prev;
    bary_prev = u[j];
    acc = vadd(acc, vscale(lam, vsub(S.v[j + 1], S.v[0])));
  }
  return vadd(S.v[0], acc);
}

}  // namespace

Cylinder element_cylinder(const Prism& el) {
  return Cylinder(el.time, std::vector<Simplex>{el.space});
}

NodeSet quadrature_nodes(const Cylinder& dom, const NodeBuildParams& params) {
  NodeSet nodes;
  nodes.lattice = false;
  nodes.renormalize = true;
  const GaussRule g = gauss_legendre_01(params.temporal_order);
  const double a = dom.time().a;
  const double h = dom.time().length() / params.time_cells;
  for (int c = 0; c < params.time_cells; ++c)
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      nodes.ts.push_back(a + (c + g.nodes[i]) * h);
      nodes.tw.push_back(g.weights[i] * h);
    }
  std::vector<Simplex> cells = dom.space();
  for (int lev = 0; lev < params.subdivide; ++lev) {
    std::vector<Simplex> finer;
    finer.reserve(2 * cells.size());
    for (const Simplex& S : cells) {
      auto [c1, c2] = bisect_simplex(S);
      finer.push_back(c1);
      finer.push_back(c2);
    }
    cells.swap(finer);
  }
  for (const Simplex& S : cells) {
    SimplexRule sr = simplex_rule(S, params.spatial_degree);
    for (std::size_t i = 0; i < sr.nodes.size(); ++i) {
      nodes.xs.push_back(sr.nodes[i]);
      nodes.xw.push_back(sr.weights[i]);
    }
  }
  return nodes;
}

NodeSet lattice_nodes(const Cylinder& dom, int time_points, int space_points_per_axis) {
  NodeSet nodes;
  nodes.lattice = true;
  nodes.renormalize = false;
  const double st = dom.time().length() / time_points;
  for (int i = 0; i < time_points; ++i) {
    nodes.ts.push_back(dom.time().a + (i + 0.5) * st);
    nodes.tw.push_back(st);
  }
  const int d = dom.dim();
  // bounding box of the mesh
  Vec lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const Simplex& S : dom.space())
    for (int i = 0; i <= S.dim; ++i)
      for (int j = 0; j < d; ++j) {
        lo[j] = std::min(lo[j], S.v[i][j]);
        hi[j] = std::max(hi[j], S.v[i][j]);
      }
  std::array<int, 3> counts{1, 1, 1};
  Vec spacing{0, 0, 0};
  for (int j = 0; j < d; ++j) {
    counts[j] = space_points_per_axis;
    spacing[j] = (hi[j] - lo[j]) / space_points_per_axis;
  }
  double cell = 1.0;
  for (int j = 0; j < d; ++j) cell *= spacing[j];
  for (int i0 = 0; i0 < counts[0]; ++i0)
    for (int i1 = 0; i1 < counts[1]; ++i1)
      for (int i2 = 0; i2 < counts[2]; ++i2) {
        Vec x{0, 0, 0};
        const int idx[3] = {i0, i1, i2};
        for (int j = 0; j < d; ++j) x[j] = lo[j] + (idx[j] + 0.5) * spacing[j];
        if (dom.contains_space(x, 1e-12)) {
          nodes.xs.push_back(x);
          nodes.xw.push_back(cell);
        }
      }
  return nodes;
}

double temporal_difference(const ScalarField& f, int r, double h, double t, const Vec& x,
                           const Interval& I) {
  for (int i = 0; i <= r; ++i)
    if (!I.contains(t + i * h, 1e-12))
      throw OutOfDomain("temporal_difference: shifted chain leaves the interval");
  double sum = 0.0;
  for (int i = 0; i <= r; ++i) {
    const double c = binomial(r, i) * (((r - i) % 2 == 0) ? 1.0 : -1.0);
    sum += c * f(t + i * h, x);
  }
  return sum;
}

double spatial_difference(const ScalarField& f, int r, const Vec& h, double t, const Vec& x,
                          const Cylinder& dom) {
  for (int i = 0; i <= r; ++i)
    if (!dom.contains_space(vadd(x, vscale(static_cast<double>(i), h)), 1e-12))
      throw OutOfDomain("spatial_difference: shifted chain leaves the domain");
  double sum = 0.0;
  for (int i = 0; i <= r; ++i) {
    const double c = binomial(r, i) * (((r - i) % 2 == 0) ? 1.0 : -1.0);
    sum += c * f(t, vadd(x, vscale(static_cast<double>(i), h)));
  }
  return sum;
}

namespace {

double finish_norm(double acc, double p) { return std::pow(acc, 1.0 / p); }

}  // namespace

double temporal_diff_norm(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                          int r, double h, double p) {
  const Interval& I = dom.time();
  const double shifted_len = I.length() - r * std::abs(h);
  if (shifted_len <= 0.0) return 0.0;
  const double t_lo = h >= 0.0 ? I.a : I.a - r * h;
  const double t_hi = h >= 0.0 ? I.b - r * h : I.b;

  std::vector<double> coef(r + 1);
  for (int i = 0; i <= r; ++i)
    coef[i] = binomial(r, i) * (((r - i) % 2 == 0) ? 1.0 : -1.0);

  const bool inf_p = std::isinf(p);
  double acc = 0.0, kept_tw = 0.0, vmax = 0.0;
  for (std::size_t it = 0; it < nodes.ts.size(); ++it) {
    const double t = nodes.ts[it];
    if (t < t_lo - 1e-15 || t > t_hi + 1e-15) continue;
    kept_tw += nodes.tw[it];
    double row = 0.0;
    for (std::size_t ix = 0; ix < nodes.xs.size(); ++ix) {
      double diff = 0.0;
      for (int i = 0; i <= r; ++i) diff += coef[i] * f(t + i * h, nodes.xs[ix]);
      if (!std::isfinite(diff)) throw NonFiniteValue("temporal_diff_norm: non-finite value");
      const double ad = std::abs(diff);
      if (inf_p)
        vmax = std::max(vmax, ad);
      else
        row += nodes.xw[ix] * std::pow(ad, p);
    }
    acc += nodes.tw[it] * row;
  }
  if (inf_p) return vmax;
  if (kept_tw <= 0.0) return 0.0;
  if (nodes.renormalize) acc *= shifted_len / kept_tw;
  return finish_norm(acc, p);
}

double shifted_space_measure(const Cylinder& dom, int r, const Vec& h, int samples_per_simplex,
                             std::uint64_t seed) {
  double measure = 0.0;
  for (const Simplex& S : dom.space()) {
    int kept = 0;
    for (int s = 0; s < samples_per_simplex; ++s) {
      const Vec x = simplex_point(S, static_cast<std::uint64_t>(s), seed);
      bool ok = true;
      for (int i = 1; i <= r && ok; ++i)
        ok = dom.contains_space(vadd(x, vscale(static_cast<double>(i), h)), 1e-12);
      if (ok) ++kept;
    }
    measure += S.measure() * kept / samples_per_simplex;
  }
  return measure;
}

double spatial_diff_norm(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                         int r, const Vec& h, double p, const SamplingConfig& cfg) {
  std::vector<double> coef(r + 1);
  for (int i = 0; i <= r; ++i)
    coef[i] = binomial(r, i) * (((r - i) % 2 == 0) ? 1.0 : -1.0);

  std::vector<std::size_t> kept;
  kept.reserve(nodes.xs.size());
  double kept_xw = 0.0;
  for (std::size_t ix = 0; ix < nodes.xs.size(); ++ix) {
    bool ok = true;
    for (int i = 1; i <= r && ok; ++i)
      ok = dom.contains_space(vadd(nodes.xs[ix], vscale(static_cast<double>(i), h)), 1e-12);
    if (ok) {
      kept.push_back(ix);
      kept_xw += nodes.xw[ix];
    }
  }
  if (kept.empty()) return 0.0;

  const bool inf_p = std::isinf(p);
  double acc = 0.0, vmax = 0.0;
  for (std::size_t it = 0; it < nodes.ts.size(); ++it) {
    const double t = nodes.ts[it];
    double row = 0.0;
    for (std::size_t k : kept) {
      double diff = 0.0;
      for (int i = 0; i <= r; ++i)
        diff += coef[i] * f(t, vadd(nodes.xs[k], vscale(static_cast<double>(i), h)));
      if (!std::isfinite(diff)) throw NonFiniteValue("spatial_diff_norm: non-finite value");
      const double ad = std::abs(diff);
      if (inf_p)
        vmax = std::max(vmax, ad);
      else
        row += nodes.xw[k] * std::pow(ad, p);
    }
    acc += nodes.tw[it] * row;
  }
  if (inf_p) return vmax;
  if (nodes.renormalize) {
    const double est = shifted_space_measure(dom, r, h, cfg.measure_samples, cfg.seed);
    if (est <= 0.0) return 0.0;
    acc *= est / kept_xw;
  }
  return finish_norm(acc, p);
}

std::vector<Vec> sphere_directions(int d, int n, std::uint64_t seed) {
  std::vector<Vec> dirs;
  if (d == 1) {
    dirs.push_back({1, 0, 0});
    dirs.push_back({-1, 0, 0});
    return dirs;
  }
  const double offset = 0.5 + static_cast<double>(seed % 1009) / 1009.0;
  if (d == 2) {
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * (i + offset) / n;
      dirs.push_back({std::cos(th), std::sin(th), 0});
    }
    return dirs;
  }
  // Fibonacci sphere
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + offset) / n;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = golden * i;
    dirs.push_back({rad * std::cos(th), rad * std::sin(th), z});
  }
  return dirs;
}

std::vector<HSample> shift_ladder(Direction dir, int d, const std::vector<double>& deltas,
                                  const SamplingConfig& cfg) {
  std::vector<double> mags;
  for (double delta : deltas) {
    if (delta <= 0.0) continue;
    double m = delta;
    for (int k = 0; k < cfg.n_mag; ++k) {
      mags.push_back(m);
      m *= cfg.mag_ratio;
    }
  }
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-15 * b; }),
             mags.end());

  std::vector<HSample> samples;
  if (dir == Direction::temporal) {
    for (double m : mags)
      for (double sign : {1.0, -1.0}) samples.push_back({sign * m, {0, 0, 0}, m});
    return samples;
  }
  const int n_dir = cfg.n_dir > 0 ? cfg.n_dir : 2 * d * 8;
  const std::vector<Vec> dirs = sphere_directions(d, n_dir, cfg.seed);
  for (double m : mags)
    for (const Vec& u : dirs) samples.push_back({0.0, vscale(m, u), m});
  return samples;
}

namespace {

std::vector<double> norms_for_samples(const ScalarField& f, const Cylinder& dom,
                                      const NodeSet& nodes, Direction dir, int r,
                                      const std::vector<HSample>& samples, double p,
                                      const SamplingConfig& cfg) {
  std::vector<double> norms(samples.size(), 0.0);
  parallel_for(samples.size(), cfg.threads, [&](std::size_t i) {
    if (dir == Direction::temporal)
      norms[i] = temporal_diff_norm(f, dom, nodes, r, samples[i].ht, p);
    else
      norms[i] = spatial_diff_norm(f, dom, nodes, r, samples[i].hx, p, cfg);
  });
  return norms;
}

SampleMeta make_meta(const Cylinder& dom, Direction dir, int n_dir, int n_mag,
                     const SamplingConfig& cfg) {
  SampleMeta meta;
  meta.n_dir = n_dir;
  meta.n_mag = n_mag;
  meta.seed = cfg.seed;
  if (dir == Direction::spatial) meta.sigma_standin = dom.space_inradius();
  return meta;
}

}  // namespace

std::vector<ModulusEstimate> sup_modulus_ladder(const ScalarField& f, const Cylinder& dom,
                                                const NodeSet& nodes, Direction dir, int r,
                                                const std::vector<double>& deltas, double p,
                                                const SamplingConfig& cfg) {
  const int d = dom.dim();
  const std::vector<HSample> samples = shift_ladder(dir, d, deltas, cfg);
  const std::vector<double> norms =
      norms_for_samples(f, dom, nodes, dir, r, samples, p, cfg);
  const int n_dir_eff =
      dir == Direction::temporal ? 2 : (cfg.n_dir > 0 ? cfg.n_dir : 2 * d * 8);

  std::vector<ModulusEstimate> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    ModulusEstimate est;
    est.kind = ModulusKind::sup;
    est.direction = dir;
    est.order = r;
    est.delta = delta;
    est.p = p;
    est.meta = make_meta(dom, dir, n_dir_eff, cfg.n_mag, cfg);
    double v = 0.0;
    if (delta > 0.0 && r >= 1) {
      for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].magnitude <= delta * (1.0 + 1e-14)) v = std::max(v, norms[i]);
    }
    est.value = v;
    out.push_back(est);
  }
  return out;
}

ModulusEstimate sup_modulus(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                            Direction dir, int r, double delta, double p,
                            const SamplingConfig& cfg) {
  return sup_modulus_ladder(f, dom, nodes, dir, r, {delta}, p, cfg).front();
}

ModulusEstimate averaged_modulus(const ScalarField& f, const Cylinder& dom, const NodeSet& nodes,
                                 Direction dir, int r, double delta, double p,
                                 const SamplingConfig& cfg) {
  if (std::isinf(p)) {
    ModulusEstimate est = sup_modulus(f, dom, nodes, dir, r, delta, p, cfg);
    est.kind = ModulusKind::averaged;
    return est;
  }
  const int d = dom.dim();
  const int n_dir_eff = dir == Direction::temporal ? 2 : (cfg.n_dir > 0 ? cfg.n_dir : 2 * d * 8);
  const int n_samples = std::max(4, cfg.n_mag * n_dir_eff);

  std::vector<HSample> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    HSample s;
    if (dir == Direction::temporal) {
      s.ht = delta * (2.0 * halton(i + 1 + (cfg.seed % 4099), 2) - 1.0);
      s.magnitude = std::abs(s.ht);
    } else {
      for (int j = 0; j < d; ++j)
        s.hx[j] = delta * (2.0 * halton(i + 1 + (cfg.seed % 4099), kHaltonBases[j]) - 1.0);
      s.magnitude = vnorm(s.hx);
    }
    samples.push_back(s);
  }
  const std::vector<double> norms =
      norms_for_samples(f, dom, nodes, dir, r, samples, p, cfg);
  double mean = 0.0;
  for (double v : norms) mean += std::pow(v, p);
  mean /= norms.size();

  ModulusEstimate est;
  est.kind = ModulusKind::averaged;
  est.direction = dir;
  est.order = r;
  est.delta = delta;
  est.p = p;
  est.meta = make_meta(dom, dir, n_dir_eff, cfg.n_mag, cfg);
  est.value = delta > 0.0 && r >= 1 ? std::pow(mean, 1.0 / p) : 0.0;
  return est;
}

ModulusPair modulus_pair_on_samples(const ScalarField& f, const Cylinder& dom,
                                    const NodeSet& nodes, Direction dir, int r,
                                    const std::vector<HSample>& samples, double p,
                                    const SamplingConfig& cfg) {
  const std::vector<double> norms =
      norms_for_samples(f, dom, nodes, dir, r, samples, p, cfg);
  ModulusPair pair;
  for (double v : norms) pair.sup = std::max(pair.sup, v);
  if (std::isinf(p)) {
    pair.averaged = pair.sup;
    return pair;
  }
  double mean = 0.0;
  for (double v : norms) mean += std::pow(v, p);
  pair.averaged = norms.empty() ? 0.0 : std::pow(mean / norms.size(), 1.0 / p);
  return pair;
}

MarchaudDiagnostic marchaud_diagnostic(const ScalarField& f, const Cylinder& dom,
                                       const NodeSet& nodes, Direction dir, int k, int r,
                                       double delta, double p, const SamplingConfig& cfg) {
  MarchaudDiagnostic diag;
  diag.delta = delta;
  diag.low_order = k;
  diag.high_order = r;
  const double m = mu(p);

  const double scale =
      dir == Direction::temporal ? dom.time().length() : dom.space_diameter();
  std::vector<double> grid;
  for (double s = delta; s < 4.0 * scale; s *= 2.0) grid.push_back(s);
  grid.push_back(4.0 * scale);

  const auto omega_r = sup_modulus_ladder(f, dom, nodes, dir, r, grid, p, cfg);
  const auto omega_k = sup_modulus(f, dom, nodes, dir, k, delta, p, cfg);

  double fnorm = 0.0;
  {
    // || f ||_p over the node set
    double acc = 0.0, vmax = 0.0;
    for (std::size_t it = 0; it < nodes.ts.size(); ++it) {
      double row = 0.0;
      for (std::size_t ix = 0; ix < nodes.xs.size(); ++ix) {
        const double v = std::abs(f(nodes.ts[it], nodes.xs[ix]));
        vmax = std::max(vmax, v);
        if (!std::isinf(p)) row += nodes.xw[ix] * std::pow(v, p);
      }
      acc += nodes.tw[it] * row;
    }
    fnorm = std::isinf(p) ? vmax : std::pow(acc, 1.0 / p);
  }

  // trapezoid over the dyadic grid of omega_r(s)^mu / s^{k mu + 1}
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double g0 = std::pow(omega_r[i].value, m) / std::pow(grid[i], k * m + 1.0);
    const double g1 = std::pow(omega_r[i + 1].value, m) / std::pow(grid[i + 1], k * m + 1.0);
    integral += 0.5 * (g0 + g1) * (grid[i + 1] - grid[i]);
  }
  // tail beyond the grid with the saturated modulus
  const double sat = omega_r.back().value;
  integral += std::pow(sat, m) * std::pow(grid.back(), -k * m) / (k * m);

  diag.lhs = std::pow(omega_k.value, m);
  diag.rhs = std::pow(delta, k * m) * (std::pow(fnorm, m) + integral);
  diag.ratio = diag.rhs > 0.0 ? diag.lhs / diag.rhs : 0.0;
  return diag;
}

}  // namespace anisost
