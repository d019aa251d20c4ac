#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anisost/adaptive.hpp"
#include "anisost/approx.hpp"
#include "anisost/besov.hpp"
#include "anisost/errors.hpp"
#include "anisost/field.hpp"
#include "anisost/moduli.hpp"
#include "anisost/parallel.hpp"
#include "anisost/serialization.hpp"

using namespace anisost;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string field = "smooth_wave";
  std::string field_params = "{}";
  int d = 1;
  int time_cells = 1;
  int r1 = 2, r2 = 2;
  double s1 = 1.0, s2 = 1.0;
  double p = 2.0, q = 2.0;
  std::vector<double> eps_list;
  std::vector<double> delta_list;
  int levels = 6;
  int n_max = 10;
  int n_mag = 16;
  int n_dir = 0;
  int quad_time_cells = 4;
  int quad_temporal_order = 3;
  int quad_spatial_degree = 5;
  int quad_subdivide = 1;
  std::uint64_t seed = 24243;
  int threads = 0;
  int max_rounds = 30;
  std::string out_dir = "out";
  bool plot = false;
};

json config_to_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["field"] = cfg.field;
  j["field_params"] = json::parse(cfg.field_params);
  j["d"] = cfg.d;
  j["time_cells"] = cfg.time_cells;
  j["r1"] = cfg.r1;
  j["r2"] = cfg.r2;
  j["s1"] = cfg.s1;
  j["s2"] = cfg.s2;
  j["p"] = cfg.p;
  j["q"] = cfg.q;
  j["eps_list"] = cfg.eps_list;
  j["delta_list"] = cfg.delta_list;
  j["levels"] = cfg.levels;
  j["n_max"] = cfg.n_max;
  j["sampling"] = {{"n_mag", cfg.n_mag},
                   {"n_dir", cfg.n_dir},
                   {"seed", cfg.seed},
                   {"quad_time_cells", cfg.quad_time_cells},
                   {"quad_temporal_order", cfg.quad_temporal_order},
                   {"quad_spatial_degree", cfg.quad_spatial_degree},
                   {"quad_subdivide", cfg.quad_subdivide}};
  j["max_rounds"] = cfg.max_rounds;
  return j;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  in >> j;
  const auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("field", cfg.field);
  if (j.contains("field_params")) cfg.field_params = j.at("field_params").dump();
  get("d", cfg.d);
  get("time_cells", cfg.time_cells);
  get("r1", cfg.r1);
  get("r2", cfg.r2);
  get("s1", cfg.s1);
  get("s2", cfg.s2);
  get("p", cfg.p);
  get("q", cfg.q);
  get("eps_list", cfg.eps_list);
  get("delta_list", cfg.delta_list);
  get("levels", cfg.levels);
  get("n_max", cfg.n_max);
  get("seed", cfg.seed);
  get("threads", cfg.threads);
  get("max_rounds", cfg.max_rounds);
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    if (s.contains("n_mag")) cfg.n_mag = s.at("n_mag").get<int>();
    if (s.contains("n_dir")) cfg.n_dir = s.at("n_dir").get<int>();
    if (s.contains("seed")) cfg.seed = s.at("seed").get<std::uint64_t>();
    if (s.contains("quad_time_cells")) cfg.quad_time_cells = s.at("quad_time_cells").get<int>();
    if (s.contains("quad_temporal_order"))
      cfg.quad_temporal_order = s.at("quad_temporal_order").get<int>();
    if (s.contains("quad_spatial_degree"))
      cfg.quad_spatial_degree = s.at("quad_spatial_degree").get<int>();
    if (s.contains("quad_subdivide")) cfg.quad_subdivide = s.at("quad_subdivide").get<int>();
  }
}

void validate(const RunConfig& cfg) {
  std::vector<std::string> problems;
  if (cfg.d < 1 || cfg.d > 3) problems.push_back("d: must be 1, 2 or 3");
  if (cfg.r1 < 1) problems.push_back("r1: must be >= 1");
  if (cfg.r2 < 1) problems.push_back("r2: must be >= 1");
  if (!(cfg.s1 > 0)) problems.push_back("s1: must be positive");
  if (!(cfg.s2 > 0)) problems.push_back("s2: must be positive");
  if (!(cfg.p > 0)) problems.push_back("p: must be positive");
  if (!(cfg.q > 0)) problems.push_back("q: must be positive");
  if (cfg.time_cells < 1) problems.push_back("time_cells: must be >= 1");
  if (cfg.levels < 1) problems.push_back("levels: must be >= 1");
  if (cfg.n_max < 1) problems.push_back("n_max: must be >= 1");
  if (cfg.n_mag < 1) problems.push_back("n_mag: must be >= 1");
  if (cfg.max_rounds < 1) problems.push_back("max_rounds: must be >= 1");
  for (double e : cfg.eps_list)
    if (!(e > 0)) problems.push_back("eps-list: entries must be positive");
  for (double v : cfg.delta_list)
    if (!(v > 0)) problems.push_back("delta-list: entries must be positive");
  if (cfg.subcommand == "rates" && cfg.eps_list.empty())
    problems.push_back("eps-list: required for rates");
  if (cfg.subcommand == "rates" &&
      (cfg.r1 <= cfg.s1 || cfg.r2 <= cfg.s2))
    problems.push_back("r1/r2: must exceed s1/s2 for rates");
  if (cfg.subcommand == "whitney" &&
      !(whitney_exponent(cfg.s1, cfg.s2, cfg.d, cfg.p, cfg.q) > 0))
    problems.push_back("s1/s2/p/q: whitney exponent must be positive");
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const std::string& s : problems) msg += "\n  " + s;
    throw ConfigError(msg);
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string run_id(const json& echo) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(echo.dump()));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw ConfigError("cannot open output file " + path.string());
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

// minimal log-log scatter with a fitted line, decoration only
void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::vector<double>& x, const std::vector<double>& y,
               const SlopeFit& fit) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  if (lx.size() < 2) return;
  double x0 = lx[0], x1 = lx[0], y0 = ly[0], y1 = ly[0];
  for (std::size_t i = 0; i < lx.size(); ++i) {
    x0 = std::min(x0, lx[i]);
    x1 = std::max(x1, lx[i]);
    y0 = std::min(y0, ly[i]);
    y1 = std::max(y1, ly[i]);
  }
  const double W = 480, H = 360, m = 48;
  const auto X = [&](double v) { return m + (W - 2 * m) * (v - x0) / std::max(1e-12, x1 - x0); };
  const auto Y = [&](double v) { return H - m - (H - 2 * m) * (v - y0) / std::max(1e-12, y1 - y0); };
  std::ofstream svg(path);
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << m << "' y='20' font-size='13'>" << title
      << " (log-log, slope " << fmt(fit.slope) << ")</text>\n";
  const double ln10 = std::log(10.0);
  svg << "<polyline fill='none' stroke='steelblue' points='";
  for (double v : {x0, x1})
    svg << X(v) << "," << Y((fit.intercept + fit.slope * v * ln10) / ln10) << " ";
  svg << "'/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i)
    svg << "<circle cx='" << X(lx[i]) << "' cy='" << Y(ly[i]) << "' r='3' fill='crimson'/>\n";
  svg << "</svg>\n";
}

FieldParams parse_field_params(const std::string& text) {
  FieldParams params;
  const json j = json::parse(text);
  for (const auto& [key, value] : j.items()) {
    if (key == "coeffs")
      params.coeffs = value.get<std::vector<double>>();
    else if (key == "r1")
      params.r1 = value.get<int>();
    else if (key == "r2")
      params.r2 = value.get<int>();
    else
      params.scalars[key] = value.get<double>();
  }
  return params;
}

struct RunContext {
  RunConfig cfg;
  json echo;
  std::string id;
  std::filesystem::path dir;
  ScalarField field;
  Cylinder domain;
  SamplingConfig sampling;
  NodeBuildParams build;
};

RunContext make_context(const RunConfig& cfg) {
  RunContext ctx;
  ctx.cfg = cfg;
  ctx.echo = config_to_json(cfg);
  ctx.id = run_id(ctx.echo);
  ctx.echo["run_id"] = ctx.id;
  ctx.dir = cfg.out_dir;
  std::filesystem::create_directories(ctx.dir);
  ctx.field = builtin_field(cfg.field, parse_field_params(cfg.field_params), cfg.d);
  ctx.domain = unit_cylinder(cfg.d);
  ctx.sampling.n_mag = cfg.n_mag;
  ctx.sampling.n_dir = cfg.n_dir;
  ctx.sampling.seed = cfg.seed;
  ctx.sampling.threads = static_cast<int>(resolve_threads(cfg.threads));
  // cusp-type integrands get two extra dyadic levels under the rules
  ctx.build = NodeBuildParams{cfg.quad_time_cells * (ctx.field.rough ? 2 : 1),
                              cfg.quad_temporal_order, cfg.quad_spatial_degree,
                              cfg.quad_subdivide + (ctx.field.rough ? 2 : 0)};

  std::ofstream meta(ctx.dir / ("run_" + ctx.id + ".json"));
  meta << ctx.echo.dump(2) << "\n";
  return ctx;
}

RefinementConfig refinement_config(const RunContext& ctx) {
  RefinementConfig rc;
  rc.s1 = ctx.cfg.s1;
  rc.s2 = ctx.cfg.s2;
  rc.d = ctx.cfg.d;
  rc.r1 = ctx.cfg.r1;
  rc.r2 = ctx.cfg.r2;
  rc.p = ctx.cfg.p;
  rc.q = ctx.cfg.q;
  rc.max_rounds = ctx.cfg.max_rounds;
  rc.besov_n_max = ctx.cfg.n_max;
  rc.sampling = ctx.sampling;
  rc.node_build = ctx.build;
  rc.threads = ctx.sampling.threads;
  return rc;
}

int run_moduli(const RunContext& ctx) {
  const NodeSet nodes = quadrature_nodes(ctx.domain, ctx.build);
  std::vector<double> deltas;
  for (int n = 0; n <= ctx.cfg.levels; ++n) deltas.push_back(std::pow(2.0, -n));

  CsvWriter csv(ctx.dir / ("moduli_" + ctx.id + ".csv"),
                "direction,kind,order,p,delta,value");
  for (auto [dir, r, label] :
       {std::tuple<Direction, int, const char*>{Direction::temporal, ctx.cfg.r1, "temporal"},
        std::tuple<Direction, int, const char*>{Direction::spatial, ctx.cfg.r2, "spatial"}}) {
    const auto sup =
        sup_modulus_ladder(ctx.field, ctx.domain, nodes, dir, r, deltas, ctx.cfg.p, ctx.sampling);
    for (const ModulusEstimate& est : sup)
      csv.row({label, "sup", std::to_string(r), fmt(ctx.cfg.p), fmt(est.delta),
               fmt(est.value)});
    for (double delta : deltas) {
      const ModulusEstimate est = averaged_modulus(ctx.field, ctx.domain, nodes, dir, r,
                                                   delta, ctx.cfg.p, ctx.sampling);
      csv.row({label, "averaged", std::to_string(r), fmt(ctx.cfg.p), fmt(est.delta),
               fmt(est.value)});
    }
    if (r >= 2) {
      const MarchaudDiagnostic diag = marchaud_diagnostic(
          ctx.field, ctx.domain, nodes, dir, r - 1, r, deltas[ctx.cfg.levels / 2],
          ctx.cfg.p, ctx.sampling);
      std::cout << label << " lower-order tail bound at delta=" << fmt(diag.delta)
                << ": lhs=" << fmt(diag.lhs) << " rhs=" << fmt(diag.rhs)
                << " ratio=" << fmt(diag.ratio) << "\n";
    }
  }
  std::cout << "moduli table written for field " << ctx.cfg.field << " (run " << ctx.id
            << ")\n";
  return 0;
}

int run_besov(const RunContext& ctx) {
  const BesovEstimate est =
      besov_seminorm(ctx.field, ctx.domain, ctx.cfg.s1, ctx.cfg.s2, ctx.cfg.p, ctx.cfg.q,
                     ctx.cfg.n_max, ctx.sampling, ModulusKind::sup, nullptr, ctx.build);
  CsvWriter csv(ctx.dir / ("besov_" + ctx.id + ".csv"),
                "n,delta_t,delta_x,temporal_term,spatial_term");
  std::vector<double> inv_delta, totals;
  for (const BesovLevel& lev : est.per_level) {
    csv.row({std::to_string(lev.n), fmt(lev.delta_t), fmt(lev.delta_x),
             fmt(lev.temporal_term), fmt(lev.spatial_term)});
    if (lev.n >= 2) {
      inv_delta.push_back(1.0 / lev.delta_t);
      totals.push_back(lev.temporal_term + lev.spatial_term);
    }
  }
  const SlopeFit fit = fit_loglog_slope(inv_delta, totals);
  std::ofstream extra(ctx.dir / ("besov_" + ctx.id + ".json"));
  extra << besov_to_json(est) << "\n";
  std::cout << "seminorm=" << fmt(est.seminorm) << " level_slope=" << fmt(fit.slope)
            << (est.truncation_warning ? " (levels not decaying: truncated tail unreliable)"
                                       : "")
            << "\n";
  if (ctx.cfg.plot)
    write_svg(ctx.dir / ("plot_" + ctx.id + ".svg"), "level terms", inv_delta, totals, fit);
  return 0;
}

int run_jackson(const RunContext& ctx) {
  CsvWriter csv(ctx.dir / ("jackson_" + ctx.id + ".csv"),
                "level,measure,delta_t,delta_x,lhs,rhs,ratio");
  json rows = json::array();
  Prism el;
  el.time = ctx.domain.time();
  el.space = ctx.domain.space().front();
  for (int level = 0; level < ctx.cfg.levels; ++level) {
    const JacksonReport rep =
        jackson_check(ctx.field, el, ctx.cfg.r1, ctx.cfg.r2, ctx.cfg.p, ctx.sampling, ctx.build);
    csv.row({std::to_string(level), fmt(el.measure()), fmt(rep.delta_t), fmt(rep.delta_x),
             fmt(rep.lhs), fmt(rep.rhs), fmt(rep.ratio)});
    rows.push_back({{"element_id", level},
                    {"lhs", rep.lhs},
                    {"rhs", rep.rhs},
                    {"ratio", rep.ratio},
                    {"meta",
                     {{"measure", el.measure()},
                      {"delta_t", rep.delta_t},
                      {"delta_x", rep.delta_x},
                      {"exact_case", rep.exact_case}}}});
    std::cout << "level " << level << ": lhs=" << fmt(rep.lhs) << " rhs=" << fmt(rep.rhs)
              << " ratio=" << fmt(rep.ratio)
              << (rep.exact_case ? " (exact reproduction)" : "") << "\n";
    auto [jl, jr] = bisect_interval(el.time);
    auto [sl, sr] = bisect_simplex(el.space);
    el.time = jl;
    el.space = sl;
    el.level += 1;
  }
  std::ofstream jrows(ctx.dir / ("jackson_" + ctx.id + ".json"));
  jrows << rows.dump(2) << "\n";
  std::cout << "sup-form moduli are sampled from below, so ratios are conservative\n";
  return 0;
}

int run_whitney(const RunContext& ctx) {
  const double target = whitney_exponent(ctx.cfg.s1, ctx.cfg.s2, ctx.cfg.d, ctx.cfg.p, ctx.cfg.q);
  CsvWriter csv(ctx.dir / ("whitney_" + ctx.id + ".csv"),
                "level,element_id,measure,lhs,local_seminorm,rhs,ratio");
  Partition P = make_tensor_partition(ctx.domain, ctx.cfg.time_cells, ctx.cfg.s1, ctx.cfg.s2);

  json rows = json::array();
  std::vector<double> measures, normalized;
  for (int level = 0; level <= ctx.cfg.levels; ++level) {
    std::vector<std::size_t> sample;
    for (std::size_t i = 0; i < P.elements.size(); ++i)
      if (sample.size() < 48) sample.push_back(i);
    std::vector<WhitneyReport> reps(sample.size());
    parallel_for(sample.size(), ctx.sampling.threads, [&](std::size_t k) {
      SamplingConfig one = ctx.sampling;
      one.threads = 1;
      reps[k] = whitney_check(ctx.field, P.elements[sample[k]], ctx.cfg.s1, ctx.cfg.s2,
                              ctx.cfg.p, ctx.cfg.q, one, ctx.cfg.n_max, ctx.build);
    });
    std::vector<double> level_norm;
    for (std::size_t k = 0; k < sample.size(); ++k) {
      const WhitneyReport& rep = reps[k];
      csv.row({std::to_string(level), std::to_string(P.elements[sample[k]].id),
               fmt(rep.measure), fmt(rep.lhs), fmt(rep.local_seminorm), fmt(rep.rhs),
               fmt(rep.ratio)});
      rows.push_back({{"element_id", P.elements[sample[k]].id},
                      {"lhs", rep.lhs},
                      {"rhs", rep.rhs},
                      {"ratio", rep.ratio},
                      {"meta",
                       {{"level", level},
                        {"measure", rep.measure},
                        {"local_seminorm", rep.local_seminorm},
                        {"exponent", rep.exponent}}}});
      if (rep.local_seminorm > 0 && rep.lhs > 0)
        level_norm.push_back(rep.lhs / rep.local_seminorm);
    }
    if (!level_norm.empty()) {
      std::nth_element(level_norm.begin(), level_norm.begin() + level_norm.size() / 2,
                       level_norm.end());
      measures.push_back(P.elements.front().measure());
      normalized.push_back(level_norm[level_norm.size() / 2]);
    }
    if (level == ctx.cfg.levels) break;
    std::vector<Prism> next;
    for (const Prism& el : P.elements)
      for (const Prism& c : atomic_split(el, ctx.cfg.s1, ctx.cfg.s2)) {
        Prism e = c;
        e.id = P.next_id++;
        next.push_back(e);
      }
    P.elements.swap(next);
  }
  std::ofstream jrows(ctx.dir / ("whitney_" + ctx.id + ".json"));
  jrows << rows.dump(2) << "\n";
  const SlopeFit fit = fit_loglog_slope(measures, normalized);
  std::cout << "target_exponent=" << fmt(target) << " fitted_exponent=" << fmt(fit.slope)
            << " (per-level median of error/seminorm vs measure, " << fit.points
            << " levels)\n";
  if (ctx.cfg.plot)
    write_svg(ctx.dir / ("plot_" + ctx.id + ".svg"), "normalized local error", measures,
              normalized, fit);
  return 0;
}

int run_greedy(const RunContext& ctx) {
  if (ctx.cfg.delta_list.empty())
    throw ConfigError("delta-list: at least one threshold required for greedy");
  RefinementConfig rc = refinement_config(ctx);
  CsvWriter csv(ctx.dir / ("greedy_" + ctx.id + ".csv"),
                "delta,round,marked,elements_before,elements_after,max_error");
  for (double delta : ctx.cfg.delta_list) {
    rc.delta = delta;
    Partition P0 = make_tensor_partition(ctx.domain, ctx.cfg.time_cells, rc.s1, rc.s2);
    const GreedyResult res = greedy(ctx.field, P0, rc);
    for (const GreedyRound& round : res.trace.rounds)
      csv.row({fmt(delta), std::to_string(round.k), std::to_string(round.marked),
               std::to_string(round.elements_before), std::to_string(round.elements_after),
               fmt(round.max_error)});
    const GreedyAudit audit = audit_greedy(ctx.field, res, rc);
    std::ofstream trace(ctx.dir / ("greedy_" + ctx.id + "_delta" + fmt(delta) + ".json"));
    trace << trace_to_json(res.trace) << "\n";
    std::cout << "delta=" << fmt(delta) << ": elements=" << res.partition.elements.size()
              << " rounds=" << res.trace.rounds.size()
              << " terminated=" << (res.trace.terminated ? "yes" : "no")
              << " audit_max=" << fmt(audit.max_same_rule)
              << " fine_gap=" << fmt(audit.gap_ratio) << "\n";
  }
  return 0;
}

int run_rates(const RunContext& ctx) {
  RefinementConfig rc = refinement_config(ctx);
  CsvWriter csv(ctx.dir / ("rates_" + ctx.id + ".csv"),
                "eps,delta,seminorm,p0_size,p_size,added,rounds,terminated,global_error,c2");
  json records = json::array();
  std::vector<double> inv_eps, added;
  std::vector<double> c2s;
  for (double eps : ctx.cfg.eps_list) {
    rc.epsilon = eps;
    Partition P0 = make_tensor_partition(ctx.domain, ctx.cfg.time_cells, rc.s1, rc.s2);
    const DirectRunRecord rec = direct_theorem_run(ctx.field, P0, rc);
    const double c2 =
        rec.seminorm > 0 ? rec.global_error / (eps * rec.seminorm) : 0.0;
    csv.row({fmt(eps), fmt(rec.delta), fmt(rec.seminorm), std::to_string(rec.p0_size),
             std::to_string(rec.p_size), std::to_string(rec.p_size - rec.p0_size),
             std::to_string(rec.rounds), rec.terminated ? "1" : "0",
             fmt(rec.global_error), fmt(c2)});
    records.push_back({{"eps", rec.epsilon},
                       {"delta", rec.delta},
                       {"seminorm", rec.seminorm},
                       {"p0_size", rec.p0_size},
                       {"p_size", rec.p_size},
                       {"rounds", rec.rounds},
                       {"terminated", rec.terminated},
                       {"zero_seminorm", rec.zero_seminorm},
                       {"global_error", rec.global_error},
                       {"c2", c2}});
    if (rec.zero_seminorm) {
      std::cout << "eps=" << fmt(eps) << ": exact reproduction, 0 refinements\n";
      continue;
    }
    std::cout << "eps=" << fmt(eps) << ": delta=" << fmt(rec.delta)
              << " added=" << rec.p_size - rec.p0_size << " error=" << fmt(rec.global_error)
              << " c2=" << fmt(c2) << "\n";
    if (rec.p_size > rec.p0_size) {
      inv_eps.push_back(1.0 / eps);
      added.push_back(static_cast<double>(rec.p_size - rec.p0_size));
      c2s.push_back(c2);
    }
  }
  std::ofstream jrec(ctx.dir / ("rates_" + ctx.id + ".json"));
  jrec << records.dump(2) << "\n";
  if (inv_eps.size() >= 2) {
    const SlopeFit fit = fit_loglog_slope(inv_eps, added);
    const double target = 1.0 / ctx.cfg.s1 + ctx.cfg.d / ctx.cfg.s2;
    double c2_lo = c2s[0], c2_hi = c2s[0];
    for (double v : c2s) {
      c2_lo = std::min(c2_lo, v);
      c2_hi = std::max(c2_hi, v);
    }
    std::cout << "fitted_complexity_exponent=" << fmt(fit.slope)
              << " target=" << fmt(target) << " c2_range=[" << fmt(c2_lo) << ","
              << fmt(c2_hi) << "]\n";
    if (ctx.cfg.plot)
      write_svg(ctx.dir / ("plot_" + ctx.id + ".svg"), "elements added vs 1/eps", inv_eps,
                added, fit);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive space-time approximation experiments"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<std::string, CLI::App*>> subs;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override)");
    sub->add_option("--field", flags.field, "field name");
    sub->add_option("--field-params", flags.field_params, "field parameters as JSON");
    sub->add_option("--d", flags.d, "space dimension");
    sub->add_option("--time-cells", flags.time_cells, "root partition time cells");
    sub->add_option("--r1", flags.r1, "temporal order");
    sub->add_option("--r2", flags.r2, "spatial order");
    sub->add_option("--s1", flags.s1, "temporal smoothness");
    sub->add_option("--s2", flags.s2, "spatial smoothness");
    sub->add_option("--p", flags.p, "error exponent");
    sub->add_option("--q", flags.q, "seminorm exponent");
    sub->add_option("--eps-list", flags.eps_list, "accuracy sweep")->delimiter(',');
    sub->add_option("--delta-list", flags.delta_list, "threshold sweep")->delimiter(',');
    sub->add_option("--levels", flags.levels, "refinement or ladder levels");
    sub->add_option("--n-max", flags.n_max, "dyadic truncation level");
    sub->add_option("--n-mag", flags.n_mag, "shift magnitudes per delta");
    sub->add_option("--n-dir", flags.n_dir, "shift directions (0 = default)");
    sub->add_option("--quad-order", flags.quad_spatial_degree, "spatial quadrature degree");
    sub->add_option("--seed", flags.seed, "sampling seed");
    sub->add_option("--threads", flags.threads, "worker threads (0 = auto)");
    sub->add_option("--max-rounds", flags.max_rounds, "greedy round cap");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_flag("--plot", flags.plot, "write an svg plot");
  };

  for (const char* name : {"moduli", "besov", "jackson", "whitney", "greedy", "rates"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    subs.emplace_back(name, sub);
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* active = app.get_subcommands().front();

  try {
    RunConfig cfg;
    cfg.subcommand = active->get_name();
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    // explicit flags win over config-file values
    const auto was_set = [&](const char* opt) { return active->count(opt) > 0; };
    if (was_set("--field")) cfg.field = flags.field;
    if (was_set("--field-params")) cfg.field_params = flags.field_params;
    if (was_set("--d")) cfg.d = flags.d;
    if (was_set("--time-cells")) cfg.time_cells = flags.time_cells;
    if (was_set("--r1")) cfg.r1 = flags.r1;
    if (was_set("--r2")) cfg.r2 = flags.r2;
    if (was_set("--s1")) cfg.s1 = flags.s1;
    if (was_set("--s2")) cfg.s2 = flags.s2;
    if (was_set("--p")) cfg.p = flags.p;
    if (was_set("--q")) cfg.q = flags.q;
    if (was_set("--eps-list")) cfg.eps_list = flags.eps_list;
    if (was_set("--delta-list")) cfg.delta_list = flags.delta_list;
    if (was_set("--levels")) cfg.levels = flags.levels;
    if (was_set("--n-max")) cfg.n_max = flags.n_max;
    if (was_set("--n-mag")) cfg.n_mag = flags.n_mag;
    if (was_set("--n-dir")) cfg.n_dir = flags.n_dir;
    if (was_set("--quad-order")) cfg.quad_spatial_degree = flags.quad_spatial_degree;
    if (was_set("--seed")) cfg.seed = flags.seed;
    if (was_set("--threads")) cfg.threads = flags.threads;
    if (was_set("--max-rounds")) cfg.max_rounds = flags.max_rounds;
    if (was_set("--out")) cfg.out_dir = flags.out_dir;
    if (was_set("--plot")) cfg.plot = flags.plot;
    validate(cfg);
    const RunContext ctx = make_context(cfg);
    if (cfg.subcommand == "moduli") return run_moduli(ctx);
    if (cfg.subcommand == "besov") return run_besov(ctx);
    if (cfg.subcommand == "jackson") return run_jackson(ctx);
    if (cfg.subcommand == "whitney") return run_whitney(ctx);
    if (cfg.subcommand == "greedy") return run_greedy(ctx);
    if (cfg.subcommand == "rates") return run_rates(ctx);
    throw ConfigError("unknown subcommand " + cfg.subcommand);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
