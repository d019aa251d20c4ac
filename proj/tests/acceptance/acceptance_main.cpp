// Acceptance suite: each criterion runs standalone, prints one PASS/FAIL
// line with its measured quantities and wall time, and enforces its runtime
// budget. Run with no arguments for all criteria or with a list like
// `acceptance c3 c7`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anisost/adaptive.hpp"
#include "anisost/approx.hpp"
#include "anisost/besov.hpp"
#include "anisost/errors.hpp"
#include "anisost/field.hpp"
#include "anisost/moduli.hpp"
#include "anisost/parallel.hpp"
#include "anisost/polynomial.hpp"
#include "anisost/quadrature.hpp"

using namespace anisost;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

bool leq_slack(double a, double b, double slack = 1e-12) {
  return a <= b + slack * std::max(1.0, std::abs(b));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

AnisoPolynomial random_poly(int r1, int r2, int d, std::mt19937_64& rng) {
  AnisoPolynomial P(r1, r2, d);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double& c : P.coeffs) c = U(rng);
  return P;
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion1() {
  Outcome out;
  std::mt19937_64 rng(10001);
  SamplingConfig cfg;
  cfg.threads = 2;

  for (int k = 0; k < 20; ++k) {
    const int d = 1 + k % 2;
    const int r1 = 1 + k % 3;
    const int r2 = 1 + (k / 2) % 3;
    const Cylinder cyl = unit_cylinder(d);
    const NodeSet nodes = quadrature_nodes(cyl, NodeBuildParams{});
    const AnisoPolynomial P = random_poly(r1, r2, d, rng);
    const ScalarField f = polynomial_field(P);

    const double om_t =
        sup_modulus(f, cyl, nodes, Direction::temporal, r1, 0.37, 2.0, cfg).value;
    const double om_x =
        sup_modulus(f, cyl, nodes, Direction::spatial, r2, 0.37, 2.0, cfg).value;
    out.require(om_t <= 1e-10, "temporal modulus " + fmt(om_t) + " > 1e-10");
    out.require(om_x <= 1e-10, "spatial modulus " + fmt(om_x) + " > 1e-10");

    const double s1 = r1 - 0.9, s2 = r2 - 0.9;
    const double sem = besov_seminorm(f, cyl, s1, s2, 2.0, 2.0, 10, cfg).seminorm;
    out.require(sem <= 1e-8, "seminorm " + fmt(sem) + " > 1e-8");

    Prism el;
    el.time = cyl.time();
    el.space = cyl.space().front();
    const double err = best_fit(f, el, r1, r2, 2.0).error;
    out.require(err <= 1e-10, "fit error " + fmt(err) + " > 1e-10");

    Partition P0 = make_tensor_partition(cyl, 1, std::max(s1, 0.1), std::max(s2, 0.1));
    RefinementConfig rc;
    rc.d = d;
    rc.r1 = r1;
    rc.r2 = r2;
    rc.s1 = P0.s1;
    rc.s2 = P0.s2;
    rc.delta = 1e-6;
    rc.threads = 2;
    const GreedyResult res = greedy(f, P0, rc);
    out.require(res.trace.terminated && res.trace.rounds.size() == 1 &&
                    res.trace.rounds[0].marked == 0,
                "greedy refined a reproduced polynomial");
  }
  return out;
}

// ---------------------------------------------------------------- criterion 2

std::vector<HSample> lattice_t_samples(double step, std::initializer_list<int> ks) {
  std::vector<HSample> v;
  for (int k : ks)
    for (double s : {1.0, -1.0}) v.push_back({s * k * step, {0, 0, 0}, std::abs(k * step)});
  return v;
}

std::vector<HSample> lattice_x_samples(double step, int d, std::initializer_list<int> ks) {
  std::vector<HSample> v;
  for (int k : ks) {
    for (int axis = 0; axis < d; ++axis)
      for (double s : {1.0, -1.0}) {
        HSample h;
        h.hx[axis] = s * k * step;
        h.magnitude = std::abs(k * step);
        v.push_back(h);
      }
    if (d >= 2) {
      HSample h;
      h.hx = {k * step, k * step, 0};
      h.magnitude = std::sqrt(2.0) * k * step;
      v.push_back(h);
    }
  }
  return v;
}

std::vector<HSample> scaled(const std::vector<HSample>& in, double m) {
  std::vector<HSample> out = in;
  for (HSample& h : out) {
    h.ht *= m;
    h.hx = vscale(m, h.hx);
    h.magnitude *= m;
  }
  return out;
}

Outcome criterion2() {
  Outcome out;
  SamplingConfig cfg;
  cfg.threads = 2;
  const std::vector<double> ps{0.5, 1.0, 2.0, kInf};

  for (int d : {1, 2}) {
    const Cylinder cyl = unit_cylinder(d);
    const int npts = d == 1 ? 24 : 12;
    const NodeSet lattice = lattice_nodes(cyl, npts, npts);
    const double step = 1.0 / npts;
    const ScalarField f = builtin_field("smooth_wave", FieldParams{}, d);
    const ScalarField g = builtin_field("temporal_cusp", FieldParams{}, d);
    ScalarField fg;
    fg.d = d;
    fg.eval = [&f, &g](double t, const Vec& x) { return f(t, x) + g(t, x); };

    for (double p : ps) {
      const double m = mu(p);
      for (Direction dir : {Direction::temporal, Direction::spatial}) {
        // monotonicity in delta, exact on the shared ladder
        const std::vector<double> deltas{0.02, 0.05, 0.11, 0.23, 0.35, 0.5};
        const auto ladder = sup_modulus_ladder(f, cyl, lattice, dir, 2, deltas, p, cfg);
        for (std::size_t i = 1; i < ladder.size(); ++i)
          out.require(ladder[i].value >= ladder[i - 1].value,
                      "monotonicity broken at delta " + fmt(ladder[i].delta));

        // averaged never exceeds sup on shared shifts
        const auto shared = shift_ladder(dir, d, {0.2}, cfg);
        const ModulusPair pair = modulus_pair_on_samples(f, cyl, lattice, dir, 2, shared, p, cfg);
        out.require(leq_slack(pair.averaged, pair.sup),
                    "averaged " + fmt(pair.averaged) + " > sup " + fmt(pair.sup));

        // subadditivity in the field argument
        const double vfg =
            std::pow(modulus_pair_on_samples(fg, cyl, lattice, dir, 2, shared, p, cfg).sup, m);
        const double vf =
            std::pow(modulus_pair_on_samples(f, cyl, lattice, dir, 2, shared, p, cfg).sup, m);
        const double vg =
            std::pow(modulus_pair_on_samples(g, cyl, lattice, dir, 2, shared, p, cfg).sup, m);
        out.require(leq_slack(vfg, vf + vg), "subadditivity broken (p=" + fmt(p) + ")");

        // order reduction with factor 2^{r-k}
        for (auto [r, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}}) {
          const auto hs = dir == Direction::temporal ? lattice_t_samples(step, {1, 2, 3})
                                                     : lattice_x_samples(step, d, {1, 2});
          const double vr =
              std::pow(modulus_pair_on_samples(f, cyl, lattice, dir, r, hs, p, cfg).sup, m);
          const double vk =
              std::pow(modulus_pair_on_samples(f, cyl, lattice, dir, k, hs, p, cfg).sup, m);
          out.require(leq_slack(vr, std::pow(2.0, r - k) * vk),
                      "order reduction broken (r=" + std::to_string(r) + ")");
        }

        // scaling law over integer stretches of the shift set
        for (int mf : {2, 3}) {
          const auto base = dir == Direction::temporal ? lattice_t_samples(step, {1, 2})
                                                       : lattice_x_samples(step, d, {1});
          const double v1 =
              std::pow(modulus_pair_on_samples(f, cyl, lattice, dir, 2, base, p, cfg).sup, m);
          const double vm = std::pow(
              modulus_pair_on_samples(f, cyl, lattice, dir, 2, scaled(base, mf), p, cfg).sup,
              m);
          out.require(leq_slack(vm, std::pow(double(mf), 2 * m) * v1),
                      "scaling law broken (m=" + std::to_string(mf) + ")");
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 3

double node_norm(const std::vector<double>& values, const std::vector<double>& weights,
                 double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    acc += weights[i] * std::pow(std::abs(values[i]), p);
  return std::pow(acc, 1.0 / p);
}

Outcome criterion3() {
  Outcome out;
  std::mt19937_64 rng(30003);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> S(0.3, 1.7);
  const int r1 = 2, r2 = 2;

  for (int d : {1, 2}) {
    for (auto [p, q] : std::vector<std::pair<double, double>>{{2.0, 1.0}, {kInf, 2.0},
                                                              {1.0, 0.5}}) {
      double lo = 1e300, hi = 0.0;
      for (int pr = 0; pr < 20; ++pr) {
        // random prism: shape jitter plus a size sweep over several decades
        Prism el;
        const double size = std::pow(10.0, -3.0 + 4.0 * (pr / 19.0));
        el.time = {U(rng), 0, 0};
        el.time.b = el.time.a + size * S(rng);
        Simplex base = reference_simplex(d);
        for (int i = 0; i <= d; ++i)
          for (int j = 0; j < d; ++j) base.v[i][j] = base.v[i][j] * S(rng) + 0.3 * U(rng);
        if (base.measure() < 1e-8) continue;
        for (int i = 0; i <= d; ++i) base.v[i] = vscale(size, base.v[i]);
        el.space = base;

        const QuadratureRule rule = prism_rule(el.time, el.space, 4, 6);
        const double measure = el.measure();
        std::vector<double> weights;
        weights.reserve(rule.size());
        for (std::size_t i = 0; i < rule.t_nodes.size(); ++i)
          for (std::size_t j = 0; j < rule.x_nodes.size(); ++j)
            weights.push_back(rule.t_weights[i] * rule.x_weights[j]);

        for (int pe = 0; pe < 200; ++pe) {
          const AnisoPolynomial L = random_poly(r1, r2, d, rng);
          const AffineMap to_local = element_to_reference(el);
          std::vector<double> values;
          values.reserve(rule.size());
          for (std::size_t i = 0; i < rule.t_nodes.size(); ++i)
            for (std::size_t j = 0; j < rule.x_nodes.size(); ++j)
              values.push_back(
                  L.evaluate(to_local.map_time(rule.t_nodes[i]),
                             to_local.map_space(rule.x_nodes[j])));
          const double np = node_norm(values, weights, p);
          const double nq = node_norm(values, weights, q);
          if (nq <= 1e-14) continue;
          const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
          const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
          const double ratio = np / (std::pow(measure, inv_p - inv_q) * nq);
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);

          // joint scaling leaves the ratio unchanged
          if (pe % 50 == 0) {
            Prism el2 = el;
            const double a = 3.0, c = 0.5;
            el2.time = {a * el.time.a + 0.7, a * el.time.b + 0.7, 0};
            for (int i = 0; i <= d; ++i) {
              el2.space.v[i] = vscale(c, el.space.v[i]);
              el2.space.v[i][0] += 0.2;
            }
            const QuadratureRule rule2 = prism_rule(el2.time, el2.space, 4, 6);
            const AffineMap to_local2 = element_to_reference(el2);
            std::vector<double> w2, v2;
            for (std::size_t i = 0; i < rule2.t_nodes.size(); ++i)
              for (std::size_t j = 0; j < rule2.x_nodes.size(); ++j) {
                w2.push_back(rule2.t_weights[i] * rule2.x_weights[j]);
                v2.push_back(L.evaluate(to_local2.map_time(rule2.t_nodes[i]),
                                        to_local2.map_space(rule2.x_nodes[j])));
              }
            const double np2 = node_norm(v2, w2, p);
            const double nq2 = node_norm(v2, w2, q);
            const double ratio2 =
                np2 / (std::pow(el2.measure(), inv_p - inv_q) * nq2);
            out.require(std::abs(ratio - ratio2) <= 1e-8 * std::max(1.0, ratio),
                        "scaling invariance broken: " + fmt(ratio) + " vs " + fmt(ratio2));
          }
        }
      }
      out.note("d=" + std::to_string(d) + " (p,q)=(" + fmt(p) + "," + fmt(q) +
               ") bracket [" + fmt(lo) + "," + fmt(hi) + "]");
      out.require(hi / lo <= 20.0,
                  "bracket spread " + fmt(hi / lo) + " too wide for a norm equivalence");
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4() {
  Outcome out;
  std::mt19937_64 rng(40004);
  const auto up = [](double x) { return static_cast<long long>(std::ceil(x - 1e-12)); };

  for (const auto& [d, s1, s2] : std::vector<std::tuple<int, double, double>>{
           {2, 0.5, 2.0}, {1, 1.0, 1.0}, {1, 1.0, 0.5}, {2, 1.0, 2.7}, {3, 1.0, 1.0}}) {
    const Cylinder cyl = unit_cylinder(d);
    Partition P = make_tensor_partition(cyl, 1, s1, s2);
    const double a0 = anisotropy_ratio(P);
    std::vector<Prism> frontier = P.elements;
    const bool figure_case = d == 2 && s2 == 4 * s1;

    for (int round = 1; round <= 10; ++round) {
      std::vector<Prism> next;
      for (const Prism& el : frontier) {
        const auto children = atomic_split(el, s1, s2);
        const int n = el.space.level + 1;
        const long long m = up(n * s2 / (s1 * d)) - up((n - 1) * s2 / (s1 * d));
        out.require(children.size() == (1ull << (m + 1)),
                    "child count " + std::to_string(children.size()) + " != 2^{m+1}");
        if (figure_case)
          out.require(children.size() == 8, "figure case must give 8 children");

        double sum = 0.0;
        for (const Prism& c : children) sum += c.measure();
        out.require(std::abs(sum - el.measure()) <= 1e-14 * el.measure(),
                    "measure conservation broken");
        for (const Prism& c : children) {
          out.require(c.space.level == c.level, "space level identity broken");
          out.require(c.time.level == up(c.level * s2 / (s1 * d)),
                      "time level ceiling identity broken");
          out.require(element_anisotropy(c, s1, s2) <= 4.0 * a0,
                      "anisotropy drifted past 4x the root value");
          next.push_back(c);
        }
      }
      // keep a bounded, deterministic frontier
      if (next.size() > 128) {
        std::shuffle(next.begin(), next.end(), rng);
        next.resize(128);
      }
      frontier.swap(next);
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5() {
  Outcome out;
  const Cylinder cyl = unit_cylinder(1);
  Partition P0 = make_tensor_partition(cyl, 1, 1.0, 1.0);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  RefinementConfig rc;
  rc.d = 1;
  rc.delta = 1e-3;
  rc.threads = 2;
  const GreedyResult res = greedy(f, P0, rc);
  out.require(res.trace.terminated, "greedy did not terminate");
  for (const GreedyRound& round : res.trace.rounds)
    if (round.marked > 0)
      out.require(round.elements_after > round.elements_before,
                  "element count did not grow in a marking round");
  const GreedyAudit audit = audit_greedy(f, res, rc);
  out.require(audit.max_same_rule <= rc.delta * (1.0 + 1e-8),
              "audited error " + fmt(audit.max_same_rule) + " above delta");
  out.note("elements=" + std::to_string(res.partition.elements.size()) +
           " audit_max=" + fmt(audit.max_same_rule) + " fine_gap=" + fmt(audit.gap_ratio));
  return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6() {
  Outcome out;
  SamplingConfig cfg;
  cfg.threads = static_cast<int>(resolve_threads(0));
  const Cylinder cyl = unit_cylinder(1);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  Partition P = make_tensor_partition(cyl, 1, 1.0, 1.0);

  std::vector<double> measures, normalized;
  for (int level = 0; level <= 6; ++level) {
    std::vector<std::size_t> sample;
    for (std::size_t i = 0; i < P.elements.size() && sample.size() < 48; ++i)
      sample.push_back(i);
    std::vector<WhitneyReport> reps(sample.size());
    parallel_for(sample.size(), cfg.threads, [&](std::size_t k) {
      SamplingConfig one = cfg;
      one.threads = 1;
      reps[k] = whitney_check(f, P.elements[sample[k]], 1.0, 1.0, 2.0, 2.0, one, 10);
    });
    std::vector<double> ratios;
    for (const WhitneyReport& rep : reps)
      if (rep.lhs > 0 && rep.local_seminorm > 0)
        ratios.push_back(rep.lhs / rep.local_seminorm);
    if (!ratios.empty()) {
      std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
      measures.push_back(P.elements.front().measure());
      normalized.push_back(ratios[ratios.size() / 2]);
    }
    if (level == 6) break;
    std::vector<Prism> next;
    for (const Prism& el : P.elements)
      for (const Prism& c : atomic_split(el, 1.0, 1.0)) {
        Prism e = c;
        e.id = P.next_id++;
        next.push_back(e);
      }
    P.elements.swap(next);
  }
  const SlopeFit fit = fit_loglog_slope(measures, normalized);
  out.note("fitted exponent " + fmt(fit.slope) + " over " + std::to_string(fit.points) +
           " levels (target 0.5)");
  out.require(std::abs(fit.slope - 0.5) <= 0.075,
              "exponent " + fmt(fit.slope) + " outside 0.5 +- 0.075");
  return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7() {
  Outcome out;
  const Cylinder cyl = unit_cylinder(1);
  const ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  RefinementConfig rc;
  rc.d = 1;
  rc.r1 = rc.r2 = 2;
  rc.s1 = rc.s2 = 1.0;
  rc.p = rc.q = 2.0;
  rc.threads = static_cast<int>(resolve_threads(0));

  std::vector<double> inv_eps, added, c2s;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    rc.epsilon = eps;
    Partition P0 = make_tensor_partition(cyl, 1, rc.s1, rc.s2);
    const DirectRunRecord rec = direct_theorem_run(f, P0, rc);
    out.require(rec.terminated, "greedy hit the round cap");
    const double c2 = rec.global_error / (eps * rec.seminorm);
    out.note("eps=" + fmt(eps) + " added=" + std::to_string(rec.p_size - rec.p0_size) +
             " c2=" + fmt(c2));
    if (rec.p_size > rec.p0_size) {
      inv_eps.push_back(1.0 / eps);
      added.push_back(static_cast<double>(rec.p_size - rec.p0_size));
      c2s.push_back(c2);
    }
  }
  const SlopeFit fit = fit_loglog_slope(inv_eps, added);
  out.note("fitted complexity exponent " + fmt(fit.slope) + " (target 2 +- 0.4)");
  out.require(std::abs(fit.slope - 2.0) <= 0.4,
              "complexity exponent " + fmt(fit.slope) + " outside 2 +- 0.4");
  double c2_lo = 1e300, c2_hi = 0.0;
  for (double v : c2s) {
    c2_lo = std::min(c2_lo, v);
    c2_hi = std::max(c2_hi, v);
  }
  out.note("c2 spread " + fmt(c2_hi / c2_lo));
  out.require(c2_hi / c2_lo <= 3.0,
              "c2 spread " + fmt(c2_hi / c2_lo) + " exceeds the factor-3 stability budget");
  return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8() {
  Outcome out;
  const char* bin = std::getenv("ANISO_ST_BIN");
  if (bin == nullptr) {
    out.require(false, "ANISO_ST_BIN not set (points at the aniso_st binary)");
    return out;
  }
  const std::filesystem::path work =
      std::filesystem::temp_directory_path() / "anisost_determinism";
  std::filesystem::remove_all(work);
  std::filesystem::create_directories(work);

  const auto run = [&](const std::string& dir, int threads) {
    std::ostringstream cmd;
    cmd << '"' << bin << '"'
        << " rates --field smooth_wave --d 1 --s1 1 --s2 1 --r1 2 --r2 2 --p 2 --q 2"
        << " --eps-list 0.2,0.1,0.05 --seed 777 --threads " << threads << " --out "
        << (work / dir) << " > /dev/null";
    return std::system(cmd.str().c_str());
  };
  const auto csv_bytes = [&](const std::string& dir) {
    for (const auto& entry : std::filesystem::directory_iterator(work / dir))
      if (entry.path().extension() == ".csv") {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
      }
    return std::string{};
  };

  out.require(run("a", 2) == 0, "first run failed");
  out.require(run("b", 2) == 0, "second run failed");
  out.require(run("c", 4) == 0, "third run failed");
  const std::string a = csv_bytes("a"), b = csv_bytes("b"), c = csv_bytes("c");
  out.require(!a.empty(), "no csv produced");
  out.require(a == b, "repeated run with identical config+seed differs");
  out.require(a == c, "thread count changed the csv bytes");
  return out;
}

struct Criterion {
  const char* key;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"c1", "polynomial exactness chain", 10.0, criterion1},
      {"c2", "moduli property suite", 60.0, criterion2},
      {"c3", "norm-equivalence bracket", 30.0, criterion3},
      {"c4", "atomic split combinatorics", 10.0, criterion4},
      {"c5", "greedy postcondition", 60.0, criterion5},
      {"c6", "whitney exponent reproduction", 120.0, criterion6},
      {"c7", "direct-theorem rate", 600.0, criterion7},
      {"c8", "determinism", 60.0, criterion8},
  };

  std::vector<std::string> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(argv[i]);

  bool all_pass = true;
  for (const Criterion& crit : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), crit.key) == wanted.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = crit.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.note(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > crit.budget_seconds) {
      out.pass = false;
      out.note("runtime " + fmt(elapsed) + "s over budget " + fmt(crit.budget_seconds) + "s");
    }
    std::printf("%s %s: %s [%.2fs]%s%s\n", out.pass ? "PASS" : "FAIL", crit.key,
                crit.name, elapsed, out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
