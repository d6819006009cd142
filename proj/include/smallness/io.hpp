#pragma once

// JSON file formats: families, graphs, covers, certificates, rationals.
// Rationals are written as {"num", "den", "approx"}; inputs also accept plain
// "num/den" / decimal strings and integers.

#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "smallness/cover.hpp"
#include "smallness/family.hpp"
#include "smallness/graph.hpp"
#include "smallness/rational.hpp"
#include "smallness/solvers.hpp"
#include "smallness/subset.hpp"

namespace smallness {

using nlohmann::json;

inline json rat_to_json(const Rat& x) {
  return json{{"num", x.get_num().get_str()},
              {"den", x.get_den().get_str()},
              {"approx", rat_approx(x)}};
}

inline Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_object() && j.contains("num") && j.contains("den"))
    return rat(Int(j.at("num").get<std::string>()), Int(j.at("den").get<std::string>()));
  throw std::invalid_argument("cannot parse rational from JSON value: " + j.dump());
}

inline json subset_to_json(Mask m) { return json(mask_to_indices(m)); }

inline Mask subset_from_json(const json& j, int n) {
  return indices_to_mask(j.get<std::vector<int>>(), n);
}

inline json family_to_json(const IncreasingFamily& fam) {
  json sets = json::array();
  for (Mask g : fam.minimal_sets()) sets.push_back(subset_to_json(g));
  return json{{"n", fam.n()}, {"minimal_sets", sets}};
}

inline IncreasingFamily family_from_json(const json& j) {
  int n = j.at("n").get<int>();
  std::vector<Mask> gens;
  for (const auto& s : j.at("minimal_sets")) gens.push_back(subset_from_json(s, n));
  return IncreasingFamily::from_generators(n, std::move(gens));
}

inline json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) {
    if (e.w == 1)
      edges.push_back(json::array({e.u, e.v}));
    else
      edges.push_back(json::array({e.u, e.v, rat_str(e.w)}));
  }
  return json{{"n", g.n()}, {"edges", edges}};
}

inline WeightedGraph graph_from_json(const json& j) {
  int n = j.at("n").get<int>();
  std::vector<WeightedGraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3)
      throw std::invalid_argument("edge must be [u, v] or [u, v, weight]");
    Rat w = e.size() == 3 ? rat_from_json(e[2]) : Rat(1);
    edges.push_back({e[0].get<int>(), e[1].get<int>(), w});
  }
  return WeightedGraph(n, std::move(edges));
}

inline json cover_part_to_json(const CoverPart& part) {
  if (auto* el = std::get_if<ExplicitList>(&part)) {
    json sets = json::array();
    for (Mask s : el->sets) sets.push_back(subset_to_json(s));
    return json{{"kind", "explicit"}, {"sets", sets}};
  }
  if (auto* pb = std::get_if<PrefixBinomial>(&part)) {
    return json{{"kind", "prefix_binomial"}, {"order", pb->order}, {"a", pb->a}, {"kmax", pb->kmax}};
  }
  const auto& sf = std::get<StarForestFamily>(part);
  return json{{"kind", "star_forest"}, {"graph", graph_to_json(*sf.graph)},
              {"b", sf.b},            {"L", sf.L},
              {"J", rat_to_json(sf.J)}, {"p", rat_to_json(sf.p)}};
}

inline CoverPart cover_part_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    ExplicitList el;
    // Ground set size is implicit here; indices must fit a 64-bit mask.
    for (const auto& s : j.at("sets")) el.sets.push_back(subset_from_json(s, kMaxGroundSet));
    return el;
  }
  if (kind == "prefix_binomial") {
    PrefixBinomial pb;
    pb.order = j.at("order").get<std::vector<int>>();
    pb.a = j.at("a").get<long>();
    pb.kmax = j.at("kmax").get<int>();
    return pb;
  }
  if (kind == "star_forest") {
    StarForestFamily sf;
    sf.graph = std::make_shared<const WeightedGraph>(graph_from_json(j.at("graph")));
    sf.b = j.at("b").get<long>();
    sf.L = j.at("L").get<long>();
    sf.J = rat_from_json(j.at("J"));
    sf.p = rat_from_json(j.at("p"));
    return sf;
  }
  throw std::invalid_argument("unknown cover part kind: " + kind);
}

inline json cover_to_json(const Cover& cov) {
  json parts = json::array();
  for (const auto& p : cov.parts) parts.push_back(cover_part_to_json(p));
  return json{{"parts", parts}};
}

inline Cover cover_from_json(const json& j) {
  Cover cov;
  for (const auto& p : j.at("parts")) cov.parts.push_back(cover_part_from_json(p));
  return cov;
}

inline json fractional_certificate_to_json(const FractionalCertificate& c) {
  json lam = json::array();
  for (auto& [s, l] : c.lambda) lam.push_back(json::array({subset_to_json(s), rat_to_json(l)}));
  return json{{"p", rat_to_json(c.p)}, {"lambda", lam}, {"objective", rat_to_json(c.objective)}};
}

inline FractionalCertificate fractional_certificate_from_json(const json& j) {
  FractionalCertificate c;
  c.p = rat_from_json(j.at("p"));
  for (const auto& e : j.at("lambda"))
    c.lambda.emplace_back(subset_from_json(e.at(0), kMaxGroundSet), rat_from_json(e.at(1)));
  c.objective = rat_from_json(j.at("objective"));
  return c;
}

inline json integral_certificate_to_json(const IntegralCertificate& c) {
  json cov = json::array();
  for (Mask s : c.cover) cov.push_back(subset_to_json(s));
  return json{{"p", rat_to_json(c.p)}, {"cover", cov}, {"cost", rat_to_json(c.cost)}};
}

inline IntegralCertificate integral_certificate_from_json(const json& j) {
  IntegralCertificate c;
  c.p = rat_from_json(j.at("p"));
  for (const auto& s : j.at("cover")) c.cover.push_back(subset_from_json(s, kMaxGroundSet));
  c.cost = rat_from_json(j.at("cost"));
  return c;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return json::parse(in);
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace smallness
