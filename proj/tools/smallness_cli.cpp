// Command-line front end: thresholds, cover construction/verification for the
// three cover engines, a random chain-property battery, fixture emission, and
// certificate re-checking. Reports go to stdout (or --out); logs to stderr.
// Exit codes: 0 success, 1 verification failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smallness/io.hpp"
#include "smallness/pipeline.hpp"
#include "smallness/singleton.hpp"
#include "smallness/solvers.hpp"
#include "smallness/star_forest.hpp"

using namespace smallness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitConfigError = 2;

struct CsvRow {
  std::string id;
  int n = 0;
  Rat p;
  Rat bound;
  std::optional<Rat> exact;
  std::string verdict;
};

void emit(const std::string& out_path, const std::string& format, const json& report,
          const std::vector<CsvRow>& rows) {
  std::ostringstream body;
  if (format == "csv") {
    body << "instance_id,n,p,bound,exact,verdict\n";
    for (const auto& r : rows) {
      body << r.id << "," << r.n << "," << rat_str(r.p) << "," << rat_str(r.bound) << ","
           << (r.exact ? rat_str(*r.exact) : "") << "," << r.verdict << "\n";
    }
  } else {
    body << report.dump(2) << "\n";
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write output file: " + out_path);
    f << body.str();
  }
}

json interval_json(const RatInterval& iv) {
  return json{{"lo", rat_to_json(iv.lo)}, {"hi", rat_to_json(iv.hi)}};
}

int run_thresholds(const std::string& family_path, const Rat& tol, const std::string& out,
                   const std::string& format) {
  auto fam = family_from_json(load_json_file(family_path));
  fam.require_proper();
  std::fprintf(stderr, "thresholds: n=%d, %zu minimal sets, tol=%s\n", fam.n(),
               fam.minimal_sets().size(), rat_str(tol).c_str());
  auto pc = p_c(fam, tol);
  auto q = q_threshold(fam, tol);
  auto qf = q_f(fam, tol);
  json rep{{"n", fam.n()},
           {"p_c", interval_json(pc)},
           {"q", interval_json(q.interval)},
           {"q_f", interval_json(qf.interval)}};
  if (q.certificate) rep["q_certificate"] = integral_certificate_to_json(*q.certificate);
  if (qf.certificate) rep["q_f_certificate"] = fractional_certificate_to_json(*qf.certificate);
  bool chain_ok = q.interval.lo <= qf.interval.hi && qf.interval.lo <= pc.hi;
  rep["chain_ok"] = chain_ok;
  std::vector<CsvRow> rows{
      {"q", fam.n(), q.interval.lo, q.interval.hi, q.interval.lo, chain_ok ? "ok" : "violated"},
      {"q_f", fam.n(), qf.interval.lo, qf.interval.hi, qf.interval.lo, chain_ok ? "ok" : "violated"},
      {"p_c", fam.n(), pc.lo, pc.hi, pc.lo, chain_ok ? "ok" : "violated"}};
  emit(out, format, rep, rows);
  return chain_ok ? kExitOk : kExitVerificationFailed;
}

int run_cover_singleton(const std::string& graph_path, const std::string& zeta_path, const Rat& p,
                        const Rat& J, bool verify, const std::string& out,
                        const std::string& format, int workers) {
  std::vector<Rat> zeta;
  if (!zeta_path.empty()) {
    auto j = load_json_file(zeta_path);
    for (const auto& z : j.at("zeta")) zeta.push_back(rat_from_json(z));
  } else {
    auto g = graph_from_json(load_json_file(graph_path));
    for (int v = 0; v < g.n(); ++v) zeta.push_back(g.boundary_weight(Mask{1} << v));
  }
  SingletonInstance inst{zeta, p, J};
  auto cover = build_singleton_cover(inst);
  int n = static_cast<int>(zeta.size());
  json rep{{"n", n},
           {"p", rat_to_json(p)},
           {"J", rat_to_json(J)},
           {"empty_target", cover.empty_target},
           {"a", cover.a},
           {"order", cover.order},
           {"cover", cover_to_json(cover.cover)},
           {"cost", rat_to_json(cover.cost.exact ? *cover.cost.exact : cover.cost.upper_bound)},
           {"cost_bound", rat_to_json(cover.closed_bound)}};
  bool ok = true;
  Rat cost_val = cover.cost.exact ? *cover.cost.exact : cover.cost.upper_bound;
  ok = ok && cost_val < cover.closed_bound;
  if (verify) {
    if (n > kMaxGroundSet || n > 16) throw CLI::ValidationError("--verify requires n <= 16");
    auto res = verify_coverage(
        cover.cover, [&](Mask u) { return in_singleton_target(inst, u); }, n, workers);
    rep["coverage_ok"] = res.covered;
    if (!res.covered) rep["counterexample"] = subset_to_json(res.counterexample);
    ok = ok && res.covered;
  }
  rep["verdict"] = ok ? "ok" : "failed";
  emit(out, format, rep,
       {{"singleton", n, p, cover.closed_bound, cost_val, ok ? "ok" : "failed"}});
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_cover_graph(const std::string& graph_path, const Rat& p, const Rat& J, const Rat& T,
                    std::optional<Rat> mu_opt, bool verify, const std::string& out,
                    const std::string& format, int workers) {
  auto g = graph_from_json(load_json_file(graph_path));
  Rat mu = mu_opt ? *mu_opt : Rat(g.edge_count()) * p * p;
  json rep{{"n", g.n()}, {"edges", g.edge_count()}, {"p", rat_to_json(p)},
           {"J", rat_to_json(J)}, {"T", rat_to_json(T)}, {"mu", rat_to_json(mu)}};
  std::vector<CsvRow> rows;
  bool ok = true;
  auto red = reduce_T(T);
  Cover cover;
  if (!red) {
    rep["mode"] = "trivial-edges";
    ExplicitList el;
    for (const auto& e : g.edges()) el.sets.push_back((Mask{1} << e.u) | (Mask{1} << e.v));
    cover.parts.push_back(el);
    Rat c = Rat(g.edge_count()) * p * p;
    rep["cost"] = rat_to_json(c);
    rows.push_back({"edges", g.n(), p, c, c, "ok"});
  } else {
    rep["mode"] = "star-forest";
    rep["k"] = red->k;
    rep["T0"] = red->T0;
    auto sched = build_schedule(red->k);
    json sched_json = json::array();
    for (const auto& row : sched.rows)
      sched_json.push_back(json{{"L", row.L}, {"delta", rat_to_json(row.delta)}, {"b", row.b}});
    rep["schedule"] = sched_json;
    for (const auto& row : sched.rows) {
      StarForestFamily sf{std::make_shared<const WeightedGraph>(g), row.b, row.L, J, p};
      cover.parts.push_back(sf);
    }
    auto chain = cost_bound(g, J, p, mu, sched);  // throws if a guard or link fails
    json chain_json = json::array();
    for (const auto& cc : chain.per_class) {
      chain_json.push_back(json{{"L", cc.L},
                                {"b", cc.b},
                                {"q_sum", rat_to_json(cc.q_sum)},
                                {"phi_bound", rat_to_json(cc.phi_bound)},
                                {"e_b", rat_to_json(cc.esym)},
                                {"analytic", rat_to_json(cc.analytic)},
                                {"closed", rat_to_json(cc.closed)}});
      rows.push_back({"class_L" + std::to_string(cc.L), g.n(), p, cc.closed, cc.esym, "ok"});
    }
    rep["cost_chain"] = chain_json;
    rep["closed_total"] = rat_to_json(chain.closed_total);
    rep["theorem_total"] = rat_to_json(chain.theorem_total);
  }
  if (verify) {
    if (g.n() > 16) throw CLI::ValidationError("--verify requires n <= 16");
    CoverageResult res;
    if (!red) {
      res = verify_coverage(
          cover, [&](Mask u) { return in_unweighted_target(g, u, T, J, p); }, g.n(), workers);
    } else {
      auto sched = build_schedule(red->k);
      auto fails = [&](Mask u) {
        return in_unweighted_target(g, u, T, J, p) && !find_witness(g, J, p, sched, u).found;
      };
      auto bad = first_mask_where(full_mask(g.n()), fails, workers);
      if (bad) res = {false, *bad};
    }
    rep["coverage_ok"] = res.covered;
    if (!res.covered) rep["counterexample"] = subset_to_json(res.counterexample);
    ok = ok && res.covered;
  }
  rep["verdict"] = ok ? "ok" : "failed";
  emit(out, format, rep, rows);
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_cover_weighted(const std::string& graph_path, const Rat& p, const Rat& R,
                       const std::string& verify_mode, bool reduced_guard, const std::string& out,
                       const std::string& format, int workers) {
  auto g = graph_from_json(load_json_file(graph_path));
  PipelineInstance inst{g, p, R, reduced_guard};
  auto res = build_weighted_cover(inst);
  json classes = json::array();
  std::vector<CsvRow> rows;
  for (const auto& plan : res.classes) {
    const char* kind = plan.kind == ClassPlan::Kind::TrivialEdges   ? "trivial-edges"
                       : plan.kind == ClassPlan::Kind::StarForest   ? "star-forest"
                                                                    : "empty-target";
    json c{{"i", plan.i},       {"edges", plan.edge_count}, {"E_i", rat_to_json(plan.Ei)},
           {"alpha", plan.alpha}, {"beta", plan.beta},       {"T", rat_to_json(plan.T)},
           {"kind", kind},      {"bound", rat_to_json(plan.bound)}};
    if (plan.kind == ClassPlan::Kind::StarForest) {
      c["k"] = plan.k;
      c["T0"] = plan.T0;
    }
    classes.push_back(c);
    rows.push_back({"class_" + std::to_string(plan.i), g.n(), p, plan.bound, std::nullopt, kind});
  }
  json rep{{"n", g.n()},
           {"p", rat_to_json(p)},
           {"R", rat_to_json(R)},
           {"R_prime", rat_to_json(res.Rp)},
           {"scale", rat_to_json(res.scale)},
           {"reduced_guard", reduced_guard},
           {"classes", classes},
           {"singleton_cost",
            rat_to_json(res.singleton.cost.exact ? *res.singleton.cost.exact
                                                 : res.singleton.cost.upper_bound)},
           {"singleton_cap", rat_to_json(res.singleton_cap)},
           {"trivial_total", rat_to_json(res.trivial_total)},
           {"trivial_cap", rat_to_json(res.trivial_cap)}};
  if (!reduced_guard) {
    rep["star_total"] = rat_to_json(res.star_total);
    rep["star_cap"] = rat_to_json(res.star_cap);
  }
  bool ok = true;
  if (!verify_mode.empty()) {
    PipelineVerification ver;
    if (verify_mode == "exhaustive") {
      if (g.n() > 12) throw CLI::ValidationError("exhaustive verification requires n <= 12");
      ver = verify_pipeline(inst, res, true, 0, 0, workers);
    } else if (verify_mode.rfind("sampled:", 0) == 0) {
      auto rest = verify_mode.substr(8);
      auto colon = rest.find(':');
      if (colon == std::string::npos)
        throw CLI::ValidationError("--verify sampled takes the form sampled:COUNT:SEED");
      long count = std::stol(rest.substr(0, colon));
      std::uint64_t seed = std::stoull(rest.substr(colon + 1));
      ver = verify_pipeline(inst, res, false, count, seed, workers);
    } else {
      throw CLI::ValidationError("--verify must be 'exhaustive' or 'sampled:COUNT:SEED'");
    }
    rep["verification"] = json{{"exhaustive", ver.exhaustive},
                               {"coverage_ok", ver.coverage_ok},
                               {"targets_checked", ver.targets_checked},
                               {"claim_ok", ver.claim_ok},
                               {"singleton_cap_ok", ver.singleton_cap_ok},
                               {"trivial_cap_ok", ver.trivial_cap_ok},
                               {"star_cap_ok", ver.star_cap_ok}};
    if (!ver.coverage_ok) rep["counterexample"] = subset_to_json(ver.counterexample);
    ok = ver.coverage_ok && ver.claim_ok && ver.singleton_cap_ok && ver.trivial_cap_ok &&
         ver.star_cap_ok;
  }
  rep["verdict"] = ok ? "ok" : "failed";
  emit(out, format, rep, rows);
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_verify_chain(int n, int trials, std::uint64_t seed, const Rat& tol,
                     const std::string& out, const std::string& format) {
  if (n < 2 || n > 10) throw CLI::ValidationError("--n must be in [2, 10]");
  std::mt19937_64 rng(seed);
  long done = 0, bad = 0;
  std::vector<CsvRow> rows;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Mask> gens;
    int count = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < count; ++t) {
      int size = 1 + static_cast<int>(rng() % 4);
      Mask m = 0;
      for (int s = 0; s < size; ++s) m |= Mask{1} << (rng() % n);
      gens.push_back(m);
    }
    auto fam = IncreasingFamily::from_generators(n, gens);
    if (!fam.proper()) continue;
    auto q = q_threshold(fam, tol);
    auto qf = q_f(fam, tol);
    auto pc = p_c(fam, tol);
    bool ok = q.interval.lo <= qf.interval.hi && qf.interval.lo <= pc.hi;
    if (!ok) ++bad;
    ++done;
    rows.push_back({"trial_" + std::to_string(trial), n, q.interval.lo, qf.interval.hi,
                    std::nullopt, ok ? "ok" : "violated"});
  }
  std::fprintf(stderr, "verify-chain: %ld families checked, %ld violations\n", done, bad);
  json rep{{"n", n}, {"trials", trials}, {"families_checked", done}, {"violations", bad},
           {"tol", rat_to_json(tol)}};
  rep["verdict"] = bad == 0 ? "ok" : "failed";
  emit(out, format, rep, rows);
  return bad == 0 ? kExitOk : kExitVerificationFailed;
}

int run_fixtures(const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const json& j) {
    save_json_file(dir + "/" + name, j);
    std::fprintf(stderr, "wrote %s/%s\n", dir.c_str(), name.c_str());
  };
  // Small reference families.
  put("family_pair.json", family_to_json(IncreasingFamily::from_generators(2, {0b11})));
  put("family_triangle.json",
      family_to_json(IncreasingFamily::from_generators(3, {0b011, 0b101, 0b110})));
  // Union of two K_{1,6}: with p = 1/2 and T = 3 this is the example showing
  // that without the boundary side-condition the cover cost cannot drop below
  // 1/K (here K = 1): minimal members are a center plus three of its leaves.
  std::vector<WeightedGraph::Edge> star_edges;
  std::vector<Mask> gens;
  for (int copy = 0; copy < 2; ++copy) {
    int c = copy * 7;
    for (int l = 1; l <= 6; ++l) star_edges.push_back({c, c + l, Rat(1)});
    for (int a = 1; a <= 6; ++a)
      for (int b = a + 1; b <= 6; ++b)
        for (int e = b + 1; e <= 6; ++e)
          gens.push_back((Mask{1} << c) | (Mask{1} << (c + a)) | (Mask{1} << (c + b)) |
                         (Mask{1} << (c + e)));
  }
  put("necessity_graph.json", graph_to_json(WeightedGraph(14, star_edges)));
  json nec = family_to_json(IncreasingFamily::from_generators(14, gens));
  nec["p"] = rat_to_json(rat(1, 2));
  nec["K"] = 1;
  nec["T"] = rat_to_json(Rat(3));
  put("necessity_family.json", nec);
  // A weighted example for the pipeline commands.
  put("weighted_path.json",
      graph_to_json(WeightedGraph(5, {{0, 1, Rat(1)}, {1, 2, rat(2, 5)}, {2, 3, Rat(1)},
                                      {3, 4, rat(2, 5)}})));
  // A zeta weight file for cover-singleton.
  json zeta{{"zeta", json::array()}};
  for (int v = 0; v < 9; ++v) zeta["zeta"].push_back(rat_to_json(Rat(1)));
  put("zeta_uniform9.json", zeta);
  return kExitOk;
}

int run_check(const std::string& family_path, const std::string& cert_path,
              const std::string& kind) {
  auto fam = family_from_json(load_json_file(family_path));
  auto j = load_json_file(cert_path);
  try {
    if (kind == "fractional") {
      verify_fractional(fam, fractional_certificate_from_json(j));
    } else if (kind == "integral") {
      verify_integral(fam, integral_certificate_from_json(j));
    } else {
      throw CLI::ValidationError("--kind must be 'fractional' or 'integral'");
    }
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "certificate rejected: %s\n", e.what());
    std::printf("{\"verdict\": \"failed\", \"reason\": \"%s\"}\n", e.what());
    return kExitVerificationFailed;
  }
  std::printf("{\"verdict\": \"ok\"}\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified covers and thresholds for increasing set systems"};
  app.require_subcommand(1);

  std::string out, format = "json";
  int workers = 0;
  app.add_option("--out", out, "write the report to a file instead of stdout");
  app.add_option("--format", format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", workers,
                 "worker threads for exhaustive sweeps (0 = SMALLNESS_LAB_WORKERS or all cores)");

  std::string family_path, graph_path, zeta_path, cert_path, kind = "fractional";
  std::string p_str = "1/2", J_str = "22", T_str = "32", R_str = "15747", tol_str, mu_str;
  std::string verify_mode;
  bool verify = false, reduced_guard = false;
  int chain_n = 8, chain_trials = 100;
  std::uint64_t chain_seed = 1;
  std::string fixtures_dir = "fixtures";

  auto* th = app.add_subcommand("thresholds", "p_c, q and q_f with certificates");
  th->add_option("--family", family_path, "family JSON file")->required();
  th->add_option("--tol", tol_str, "bisection tolerance (default 2^-30)");

  auto* cs = app.add_subcommand("cover-singleton", "prefix-binomial cover for vertex weights");
  cs->add_option("--graph", graph_path, "graph JSON (zeta from weighted degrees)");
  cs->add_option("--zeta", zeta_path, "vertex weight JSON file");
  cs->add_option("--p", p_str, "probability parameter")->required();
  cs->add_option("--J", J_str, "margin parameter (> 2e)")->required();
  cs->add_flag("--verify", verify, "exhaustive coverage check (n <= 16)");

  auto* cg = app.add_subcommand("cover-graph", "star-forest cover of an unweighted target");
  cg->add_option("--graph", graph_path, "graph JSON file")->required();
  cg->add_option("--p", p_str, "probability parameter")->required();
  cg->add_option("--J", J_str, "margin parameter")->required();
  cg->add_option("--T", T_str, "edge-count target")->required();
  cg->add_option("--mu", mu_str, "mu with |G| p^2 <= mu (default |G| p^2)");
  cg->add_flag("--verify", verify, "exhaustive coverage check (n <= 16)");

  auto* cw = app.add_subcommand("cover-weighted", "full weighted pipeline");
  cw->add_option("--graph", graph_path, "weighted graph JSON file")->required();
  cw->add_option("--p", p_str, "probability parameter")->required();
  cw->add_option("--R", R_str, "threshold ratio parameter")->required();
  cw->add_option("--verify", verify_mode, "'exhaustive' or 'sampled:COUNT:SEED'");
  cw->add_flag("--reduced-guard", reduced_guard,
               "accept R >= 32 (coverage verified, cost caps not asserted)");

  auto* vc = app.add_subcommand("verify-chain", "q <= q_f <= p_c on random families");
  vc->add_option("--n", chain_n, "ground set size (2..10)");
  vc->add_option("--trials", chain_trials, "number of random families");
  vc->add_option("--seed", chain_seed, "RNG seed");
  vc->add_option("--tol", tol_str, "bisection tolerance (default 2^-16)");

  auto* fx = app.add_subcommand("fixtures", "emit the built-in test instances");
  fx->add_option("--dir", fixtures_dir, "output directory (default ./fixtures)");

  auto* ck = app.add_subcommand("check", "re-verify an emitted certificate");
  ck->add_option("--family", family_path, "family JSON file")->required();
  ck->add_option("--certificate", cert_path, "certificate JSON file")->required();
  ck->add_option("--kind", kind, "fractional or integral")->required();

  for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (th->parsed()) {
      Rat tol = tol_str.empty() ? pow2(-30) : parse_rat(tol_str);
      return run_thresholds(family_path, tol, out, format);
    }
    if (cs->parsed()) {
      if (graph_path.empty() == zeta_path.empty())
        throw CLI::ValidationError("provide exactly one of --graph / --zeta");
      return run_cover_singleton(graph_path, zeta_path, parse_rat(p_str), parse_rat(J_str),
                                 verify, out, format, workers);
    }
    if (cg->parsed()) {
      std::optional<Rat> mu;
      if (!mu_str.empty()) mu = parse_rat(mu_str);
      return run_cover_graph(graph_path, parse_rat(p_str), parse_rat(J_str), parse_rat(T_str), mu,
                             verify, out, format, workers);
    }
    if (cw->parsed())
      return run_cover_weighted(graph_path, parse_rat(p_str), parse_rat(R_str), verify_mode,
                                reduced_guard, out, format, workers);
    if (vc->parsed()) {
      Rat tol = tol_str.empty() ? pow2(-16) : parse_rat(tol_str);
      return run_verify_chain(chain_n, chain_trials, chain_seed, tol, out, format);
    }
    if (fx->parsed()) return run_fixtures(fixtures_dir);
    if (ck->parsed()) return run_check(family_path, cert_path, kind);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: malformed JSON input (%s)\n", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerificationFailed;
  }
  return kExitConfigError;
}
