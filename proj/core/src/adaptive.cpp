#include "anisost/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "anisost/errors.hpp"
#include "anisost/parallel.hpp"

namespace anisost {

int atomic_split_temporal_rounds(int new_level, double s1, double s2, int d) {
  const double e = s2 / (s1 * d);
  const auto up = [](double x) { return static_cast<long long>(std::ceil(x - 1e-12)); };
  return static_cast<int>(up(new_level * e) - up((new_level - 1) * e));
}

double atomic_split_child_bound(double s1, double s2, int d) {
  // the ceiling difference reaches ceil(s2/(s1 d)) for fractional ratios,
  // so the sharp cap carries the ceiling in the exponent
  return std::pow(2.0, std::ceil(s2 / (s1 * d) - 1e-12) + 1.0);
}

std::vector<Prism> atomic_split(const Prism& el, double s1, double s2) {
  const int d = el.space.dim;
  const int n = el.space.level + 1;
  const int m = atomic_split_temporal_rounds(n, s1, s2, d);

  std::vector<Interval> times{el.time};
  for (int round = 0; round < m; ++round) {
    std::vector<Interval> next;
    next.reserve(2 * times.size());
    for (const Interval& J : times) {
      auto [l, r] = bisect_interval(J);
      next.push_back(l);
      next.push_back(r);
    }
    times.swap(next);
  }
  auto [s_left, s_right] = bisect_simplex(el.space);

  std::vector<Prism> children;
  children.reserve(2 * times.size());
  for (const Interval& J : times)
    for (const Simplex* S : {&s_left, &s_right}) {
      Prism c;
      c.time = J;
      c.space = *S;
      c.level = n;
      children.push_back(c);
    }
  return children;
}

double GreedyResult::global_error(double p) const {
  if (std::isinf(p)) return max_local_error();
  double acc = 0.0;
  for (const LocalFit& fit : fits) acc += std::pow(fit.error, p);
  return std::pow(acc, 1.0 / p);
}

double GreedyResult::max_local_error() const {
  double m = 0.0;
  for (const LocalFit& fit : fits) m = std::max(m, fit.error);
  return m;
}

namespace {

LocalFit fit_element(const ScalarField& f, const Prism& el, const RefinementConfig& cfg) {
  const QuadratureRule rule =
      prism_rule(el.time, el.space, std::max(cfg.r1 + 1, 2), 2 * cfg.r2);
  return best_fit(f, el, cfg.r1, cfg.r2, cfg.p, rule);
}

}  // namespace

GreedyResult greedy(const ScalarField& f, const Partition& P0, const RefinementConfig& cfg) {
  if (!(cfg.delta > 0.0)) throw ConfigError("greedy: delta must be positive");

  GreedyResult res;
  res.partition = P0;
  res.partition.s1 = cfg.s1;
  res.partition.s2 = cfg.s2;

  auto& elements = res.partition.elements;
  res.fits.resize(elements.size());
  std::vector<char> has_fit(elements.size(), 0);

  for (int k = 0; k < cfg.max_rounds; ++k) {
    // fit every element that does not have a cached fit yet
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (!has_fit[i]) todo.push_back(i);
    parallel_for(todo.size(), cfg.threads,
                 [&](std::size_t j) { res.fits[todo[j]] = fit_element(f, elements[todo[j]], cfg); });
    for (std::size_t i : todo) has_fit[i] = 1;

    GreedyRound round;
    round.k = k;
    round.elements_before = elements.size();
    std::vector<char> marked(elements.size(), 0);
    for (std::size_t i = 0; i < elements.size(); ++i) {
      round.max_error = std::max(round.max_error, res.fits[i].error);
      if (res.fits[i].error > cfg.delta) {
        marked[i] = 1;
        ++round.marked;
      }
    }

    if (round.marked == 0) {
      round.elements_after = elements.size();
      res.trace.rounds.push_back(round);
      res.trace.terminated = true;
      return res;
    }

    std::vector<Prism> next_elements;
    std::vector<LocalFit> next_fits;
    std::vector<char> next_has;
    next_elements.reserve(elements.size() * 2);
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (!marked[i]) {
        next_elements.push_back(elements[i]);
        next_fits.push_back(res.fits[i]);
        next_has.push_back(1);
        continue;
      }
      std::vector<Prism> children = atomic_split(elements[i], cfg.s1, cfg.s2);
      res.trace.total_splits += 1;
      for (Prism& c : children) {
        c.id = res.partition.next_id++;
        next_elements.push_back(c);
        next_fits.emplace_back();
        next_has.push_back(0);
      }
      if (next_elements.size() > cfg.element_cap)
        throw ElementCapExceeded("greedy: element cap exceeded");
    }

    round.elements_after = next_elements.size();
    res.trace.rounds.push_back(round);
    res.trace.marked_sum += round.marked;
    elements.swap(next_elements);
    res.fits.swap(next_fits);
    has_fit.swap(next_has);
  }

  // out of rounds: fit whatever is missing so the result is usable
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (!has_fit[i]) todo.push_back(i);
  parallel_for(todo.size(), cfg.threads,
               [&](std::size_t j) { res.fits[todo[j]] = fit_element(f, elements[todo[j]], cfg); });
  res.trace.terminated = false;
  return res;
}

GreedyAudit audit_greedy(const ScalarField& f, const GreedyResult& res,
                         const RefinementConfig& cfg) {
  GreedyAudit audit;
  std::vector<double> same(res.partition.elements.size(), 0.0);
  std::vector<double> fine(res.partition.elements.size(), 0.0);
  parallel_for(res.partition.elements.size(), cfg.threads, [&](std::size_t i) {
    const Prism& el = res.partition.elements[i];
    same[i] = fit_element(f, el, cfg).error;
    // keep the fitted polynomial, re-measure the residual one level finer
    const auto [jl, jr] = bisect_interval(el.time);
    const auto [sl, sr] = bisect_simplex(el.space);
    double acc = 0.0, vmax = 0.0;
    for (const Interval* J : {&jl, &jr})
      for (const Simplex* S : {&sl, &sr}) {
        const QuadratureRule rule = prism_rule(*J, *S, std::max(cfg.r1 + 1, 2), 2 * cfg.r2);
        const double v = fit_residual_norm(f, res.fits[i], cfg.p, rule);
        if (std::isinf(cfg.p))
          vmax = std::max(vmax, v);
        else
          acc += std::pow(v, cfg.p);
      }
    fine[i] = std::isinf(cfg.p) ? vmax : std::pow(acc, 1.0 / cfg.p);
  });
  for (std::size_t i = 0; i < same.size(); ++i) {
    audit.max_same_rule = std::max(audit.max_same_rule, same[i]);
    audit.max_fine_rule = std::max(audit.max_fine_rule, fine[i]);
  }
  audit.gap_ratio =
      audit.max_same_rule > 0.0 ? audit.max_fine_rule / audit.max_same_rule : 1.0;
  return audit;
}

DirectRunRecord direct_theorem_run(const ScalarField& f, const Partition& P0,
                                   RefinementConfig cfg, GreedyResult* out_result) {
  if (!(cfg.epsilon > 0.0)) throw ConfigError("direct_theorem_run: epsilon must be positive");
  if (cfg.r1 <= cfg.s1 || cfg.r2 <= cfg.s2)
    throw ConfigError("direct_theorem_run: orders must exceed smoothness parameters");
  if (!(whitney_exponent(cfg.s1, cfg.s2, cfg.d, cfg.p, cfg.q) > 0.0))
    throw PreconditionViolated("direct_theorem_run: exponent must be positive");

  DirectRunRecord rec;
  rec.epsilon = cfg.epsilon;
  rec.p0_size = P0.elements.size();

  SamplingConfig scfg = cfg.sampling;
  scfg.threads = cfg.threads;
  const BesovEstimate B = besov_seminorm(f, P0.domain, cfg.s1, cfg.s2, cfg.q, cfg.q,
                                         cfg.besov_n_max, scfg, ModulusKind::averaged, nullptr,
                                         cfg.node_build);
  rec.seminorm = B.seminorm;

  if (rec.seminorm <= 1e-11) {
    rec.zero_seminorm = true;
    rec.p_size = rec.p0_size;
    rec.rounds = 0;
    rec.global_error = 0.0;
    if (out_result != nullptr) {
      out_result->partition = P0;
      out_result->trace.terminated = true;
    }
    return rec;
  }

  const double inv_p = std::isinf(cfg.p) ? 0.0 : 1.0 / cfg.p;
  cfg.delta = std::pow(cfg.epsilon, 1.0 + inv_p / cfg.s1 + cfg.d * inv_p / cfg.s2) *
              rec.seminorm;
  rec.delta = cfg.delta;

  GreedyResult res = greedy(f, P0, cfg);
  rec.p_size = res.partition.elements.size();
  rec.rounds = static_cast<int>(res.trace.rounds.size());
  rec.terminated = res.trace.terminated;
  rec.global_error = res.global_error(cfg.p);
  if (out_result != nullptr) *out_result = std::move(res);
  return rec;
}

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  fit.points = static_cast<int>(lx.size());
  if (fit.points < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= fit.points;
  my /= fit.points;
  double cov = 0.0, var = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    cov += (lx[i] - mx) * (ly[i] - my);
    var += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.slope = var > 0.0 ? cov / var : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace anisost
