#include "anisost/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "anisost/errors.hpp"

namespace anisost {

namespace {

constexpr int kMaxGaussPoints = 64;
constexpr int kMaxSimplexDegree = 40;

}  // namespace

GaussRule gauss_legendre_01(int n) {
  if (n < 1 || n > kMaxGaussPoints)
    throw UnsupportedOrder("gauss_legendre_01: order out of range");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n with Chebyshev starting guesses
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      pp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = 0.5 * (1.0 - x);  // descending cos order becomes ascending node order
    rule.weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
  std::vector<std::size_t> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  GaussRule sorted;
  sorted.nodes.reserve(n);
  sorted.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    sorted.nodes.push_back(rule.nodes[perm[i]]);
    sorted.weights.push_back(rule.weights[perm[i]]);
  }
  return sorted;
}

namespace {

// Rule on the reference simplex, exact for total degree <= degree. The
// collapsed map sends the unit square/cube onto the simplex; the Jacobian is
// polynomial, so bumping the per-axis Gauss order keeps total-degree
// exactness.
SimplexRule reference_simplex_rule(int d, int degree) {
  SimplexRule out;
  out.degree = degree;
  if (d == 1) {
    const GaussRule g = gauss_legendre_01((degree + 2) / 2);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      out.nodes.push_back({g.nodes[i], 0, 0});
      out.weights.push_back(g.weights[i]);
    }
    return out;
  }
  if (d == 2) {
    const GaussRule gu = gauss_legendre_01((degree + 2) / 2);
    const GaussRule gv = gauss_legendre_01((degree + 3) / 2);
    for (std::size_t a = 0; a < gu.nodes.size(); ++a)
      for (std::size_t b = 0; b < gv.nodes.size(); ++b) {
        const double u = gu.nodes[a], vv = gv.nodes[b];
        out.nodes.push_back({u * (1.0 - vv), vv, 0});
        out.weights.push_back(gu.weights[a] * gv.weights[b] * (1.0 - vv));
      }
    return out;
  }
  const GaussRule gu = gauss_legendre_01((degree + 2) / 2);
  const GaussRule gv = gauss_legendre_01((degree + 3) / 2);
  const GaussRule gw = gauss_legendre_01((degree + 4) / 2);
  for (std::size_t a = 0; a < gu.nodes.size(); ++a)
    for (std::size_t b = 0; b < gv.nodes.size(); ++b)
      for (std::size_t c = 0; c < gw.nodes.size(); ++c) {
        const double u = gu.nodes[a], vv = gv.nodes[b], w = gw.nodes[c];
        out.nodes.push_back({u * (1.0 - vv) * (1.0 - w), vv * (1.0 - w), w});
        out.weights.push_back(gu.weights[a] * gv.weights[b] * gw.weights[c] * (1.0 - vv) *
                              (1.0 - w) * (1.0 - w));
      }
  return out;
}

}  // namespace

SimplexRule simplex_rule(const Simplex& S, int degree) {
  if (S.dim < 1 || S.dim > 3) throw UnsupportedOrder("simplex_rule: d must be 1, 2 or 3");
  if (degree < 1 || degree > kMaxSimplexDegree)
    throw UnsupportedOrder("simplex_rule: degree out of range");
  SimplexRule ref = reference_simplex_rule(S.dim, degree);
  const double vol_ratio = S.measure() / reference_simplex(S.dim).measure();
  SimplexRule out;
  out.degree = degree;
  out.nodes.reserve(ref.nodes.size());
  out.weights.reserve(ref.nodes.size());
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    const Vec& u = ref.nodes[i];
    Vec x = S.v[0];
    for (int j = 1; j <= S.dim; ++j) x = vadd(x, vscale(u[j - 1], vsub(S.v[j], S.v[0])));
    for (int j = S.dim; j < 3; ++j) x[j] = 0.0;
    out.nodes.push_back(x);
    out.weights.push_back(ref.weights[i] * vol_ratio);
  }
  return out;
}

double QuadratureRule::weight_sum() const {
  double tw = 0.0, xw = 0.0;
  for (double w : t_weights) tw += w;
  for (double w : x_weights) xw += w;
  return tw * xw;
}

QuadratureRule prism_rule(const Interval& J, const Simplex& S, int temporal_order,
                          int spatial_degree) {
  if (temporal_order < 1) throw UnsupportedOrder("prism_rule: temporal_order must be >= 1");
  QuadratureRule rule;
  rule.domain_time = J;
  rule.domain_space = S;
  rule.temporal_order = temporal_order;
  rule.spatial_degree = spatial_degree;
  const GaussRule g = gauss_legendre_01(temporal_order);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    rule.t_nodes.push_back(J.a + J.length() * g.nodes[i]);
    rule.t_weights.push_back(J.length() * g.weights[i]);
  }
  SimplexRule sr = simplex_rule(S, spatial_degree);
  rule.x_nodes = std::move(sr.nodes);
  rule.x_weights = std::move(sr.weights);
  return rule;
}

double integrate(const ScalarField& f, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.t_nodes.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < rule.x_nodes.size(); ++j)
      row += rule.x_weights[j] * f(rule.t_nodes[i], rule.x_nodes[j]);
    sum += rule.t_weights[i] * row;
  }
  return sum;
}

namespace {

void collect_subprisms(const Interval& J, const Simplex& S, int levels,
                       std::vector<std::pair<Interval, Simplex>>& out) {
  if (levels == 0) {
    out.emplace_back(J, S);
    return;
  }
  const auto [jl, jr] = bisect_interval(J);
  const auto [sl, sr] = bisect_simplex(S);
  collect_subprisms(jl, sl, levels - 1, out);
  collect_subprisms(jl, sr, levels - 1, out);
  collect_subprisms(jr, sl, levels - 1, out);
  collect_subprisms(jr, sr, levels - 1, out);
}

double node_pth_power_sum(const ScalarField& f, const QuadratureRule& rule, double p,
                          double& node_max) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.t_nodes.size(); ++i)
    for (std::size_t j = 0; j < rule.x_nodes.size(); ++j) {
      const double v = f(rule.t_nodes[i], rule.x_nodes[j]);
      if (!std::isfinite(v)) throw NonFiniteValue("lp_norm: field not finite at node");
      const double av = std::abs(v);
      node_max = std::max(node_max, av);
      if (p != 0.0) sum += rule.t_weights[i] * rule.x_weights[j] * std::pow(av, p);
    }
  return sum;
}

}  // namespace

double lp_norm(const ScalarField& f, const Interval& J, const Simplex& S, double p,
               int temporal_order, int spatial_degree, int subdivide_levels) {
  if (!(p > 0.0)) throw ConfigError("lp_norm: p must be positive");
  std::vector<std::pair<Interval, Simplex>> prisms;
  collect_subprisms(J, S, subdivide_levels, prisms);

  if (std::isinf(p)) {
    // node max plus closed-prism corner samples, refined until stable
    const auto corner_max = [&f](const Interval& Jc, const Simplex& Sc) {
      double m = 0.0;
      for (double t : {Jc.a, Jc.midpoint(), Jc.b})
        for (int i = 0; i <= Sc.dim; ++i) {
          const double v = f(t, Sc.v[i]);
          if (!std::isfinite(v)) throw NonFiniteValue("lp_norm: field not finite at corner");
          m = std::max(m, std::abs(v));
        }
      return m;
    };
    double best = 0.0;
    for (int pass = 0;; ++pass) {
      double cur = 0.0;
      for (const auto& [Jc, Sc] : prisms) {
        const QuadratureRule rule = prism_rule(Jc, Sc, temporal_order, spatial_degree);
        node_pth_power_sum(f, rule, 0.0, cur);
        cur = std::max(cur, corner_max(Jc, Sc));
      }
      const bool stable = pass > 0 && cur <= best * (1.0 + 1e-3);
      best = std::max(best, cur);
      if (stable || pass >= 4) return best;
      std::vector<std::pair<Interval, Simplex>> finer;
      for (const auto& [Jc, Sc] : prisms) collect_subprisms(Jc, Sc, 1, finer);
      prisms.swap(finer);
    }
  }

  double sum = 0.0;
  double dummy = 0.0;
  for (const auto& [Jc, Sc] : prisms) {
    const QuadratureRule rule = prism_rule(Jc, Sc, temporal_order, spatial_degree);
    sum += node_pth_power_sum(f, rule, p, dummy);
  }
  return std::pow(sum, 1.0 / p);
}

double lp_norm(const ScalarField& f, const Prism& el, double p, int temporal_order,
               int spatial_degree, int subdivide_levels) {
  return lp_norm(f, el.time, el.space, p, temporal_order, spatial_degree, subdivide_levels);
}

double reference_monomial_moment(int i, const std::array<int, 3>& alpha, int d) {
  auto fact = [](int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
  };
  double num = 1.0;
  int total = 0;
  for (int j = 0; j < d; ++j) {
    num *= fact(alpha[j]);
    total += alpha[j];
  }
  return (1.0 / (i + 1)) * num / fact(total + d);
}

}  // namespace anisost
