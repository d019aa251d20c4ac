#include "anisost/serialization.hpp"

#include "json.hpp"

#include "anisost/errors.hpp"

namespace anisost {

using nlohmann::json;

std::string partition_to_json(const Partition& P) {
  json j;
  j["s1"] = P.s1;
  j["s2"] = P.s2;
  json els = json::array();
  for (const Prism& el : P.elements) {
    json e;
    e["time"] = {el.time.a, el.time.b};
    json verts = json::array();
    for (int i = 0; i <= el.space.dim; ++i) {
      json v = json::array();
      for (int c = 0; c < el.space.dim; ++c) v.push_back(el.space.v[i][c]);
      verts.push_back(v);
    }
    e["vertices"] = verts;
    e["levels"] = {{"prism", el.level}, {"time", el.time.level}, {"space", el.space.level}};
    e["tag"] = el.space.tag;
    e["id"] = el.id;
    els.push_back(e);
  }
  j["elements"] = els;
  return j.dump(2);
}

Partition partition_from_json(const std::string& text) {
  const json j = json::parse(text);
  Partition P;
  P.s1 = j.at("s1").get<double>();
  P.s2 = j.at("s2").get<double>();
  for (const json& e : j.at("elements")) {
    Prism el;
    el.time.a = e.at("time").at(0).get<double>();
    el.time.b = e.at("time").at(1).get<double>();
    const json& verts = e.at("vertices");
    el.space.dim = static_cast<int>(verts.size()) - 1;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      Vec v{0, 0, 0};
      for (std::size_t c = 0; c < verts[i].size(); ++c) v[c] = verts[i][c].get<double>();
      el.space.v[i] = v;
    }
    el.level = e.at("levels").at("prism").get<int>();
    el.time.level = e.at("levels").at("time").get<int>();
    el.space.level = e.at("levels").at("space").get<int>();
    el.space.tag = e.at("tag").get<int>();
    el.id = e.value("id", std::uint64_t{0});
    P.elements.push_back(el);
    P.next_id = std::max(P.next_id, el.id + 1);
  }
  return P;
}

std::string polynomial_to_json(const AnisoPolynomial& P) {
  json j;
  j["r1"] = P.r1;
  j["r2"] = P.r2;
  j["d"] = P.d;
  j["coeffs"] = P.coeffs;
  return j.dump();
}

AnisoPolynomial polynomial_from_json(const std::string& text) {
  const json j = json::parse(text);
  AnisoPolynomial P(j.at("r1").get<int>(), j.at("r2").get<int>(), j.at("d").get<int>());
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  if (coeffs.size() != P.coeffs.size())
    throw ConfigError("polynomial_from_json: coefficient count mismatch");
  P.coeffs = coeffs;
  return P;
}

std::string besov_to_json(const BesovEstimate& est) {
  json j;
  j["seminorm"] = est.seminorm;
  j["s1"] = est.s1;
  j["s2"] = est.s2;
  j["p"] = est.p;
  j["q"] = est.q;
  j["r1"] = est.r1;
  j["r2"] = est.r2;
  j["n_max"] = est.n_max;
  j["kind"] = est.kind == ModulusKind::sup ? "sup" : "averaged";
  j["truncation_warning"] = est.truncation_warning;
  j["scale_t"] = est.scale_t;
  j["scale_x"] = est.scale_x;
  json levels = json::array();
  for (const BesovLevel& lev : est.per_level)
    levels.push_back({{"n", lev.n},
                      {"delta_t", lev.delta_t},
                      {"delta_x", lev.delta_x},
                      {"temporal_term", lev.temporal_term},
                      {"spatial_term", lev.spatial_term}});
  j["per_level"] = levels;
  j["meta"] = {{"n_dir", est.meta.n_dir},
               {"n_mag", est.meta.n_mag},
               {"seed", est.meta.seed},
               {"sigma_standin", est.meta.sigma_standin}};
  return j.dump(2);
}

std::string trace_to_json(const GreedyTrace& trace) {
  json j;
  j["terminated"] = trace.terminated;
  j["total_splits"] = trace.total_splits;
  j["marked_sum"] = trace.marked_sum;
  json rounds = json::array();
  for (const GreedyRound& r : trace.rounds)
    rounds.push_back({{"k", r.k},
                      {"marked", r.marked},
                      {"elements_before", r.elements_before},
                      {"elements_after", r.elements_after},
                      {"max_error", r.max_error}});
  j["rounds"] = rounds;
  return j.dump(2);
}

}  // namespace anisost
