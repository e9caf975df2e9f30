// boxmind: command-line front end for the tactical-analytics library.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boxmind/advisor.hpp"
#include "boxmind/diff_core.hpp"
#include "boxmind/event_model.hpp"
#include "boxmind/graph.hpp"
#include "boxmind/indicators.hpp"
#include "boxmind/predictor.hpp"
#include "boxmind/ratings.hpp"
#include "boxmind/synth.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

using json = nlohmann::json;
using namespace boxmind;

namespace {

constexpr const char* kToolVersion = "1.0.0";

// Exit-code contract: 0 success, 1 usage error, 2 data error.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_flat_config(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty())
    if (const char* env = std::getenv("BOXMIND_CONFIG")) path = env;
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw DataError("config file not readable: " + path);
  json doc = json::parse(in, nullptr, true, true);
  if (!doc.is_object()) throw DataError("config file must hold a flat object: " + path);
  return doc;
}

// Flags win over config-file values; config values win over built-in defaults.
template <typename T>
void fill_from_config(const CLI::Option* opt, const json& cfg, const std::string& key,
                      T& value) {
  if (opt && opt->count() > 0) return;
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_report(const std::string& path, json report) {
  report["tool_version"] = kToolVersion;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report: " + path);
  out << report.dump(2) << "\n";
}

std::vector<MatchRecord> load_events(const std::string& path) {
  if (path.empty()) throw DataError("no event-log path given (--events)");
  return parse_event_log_file(path);
}

BoxerGraph load_graph_checked(const std::string& path) {
  if (path.empty()) throw DataError("no graph path given (--graph)");
  return load_graph(path);
}

PredictorModel load_checkpoint_checked(const std::string& path) {
  if (path.empty()) throw DataError("no checkpoint path given (--checkpoint)");
  return load_checkpoint(path);
}

json named_vec18(const Vec18& v) {
  json out = json::object();
  for (int k = 0; k < kNumIndicators; ++k) out[indicator_names()[k]] = v[k];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boxing tactical-analytics toolkit"};
  app.require_subcommand(1);

  std::string config_path, events, graph_path, checkpoint, report_path, out_path;
  std::string truth_path, cutoff = "2023-07-01", mode = "unified", system = "elo";
  std::string boxer_arg, opponent_arg, date_arg, boxer_filter;
  int dim_d = 8, order_c = 2, epochs = 800, indicator_arg = 0;
  std::vector<int> hidden = {64, 32};
  double lr = 0.02, weight_decay = 1e-5, alpha = 0.02, beta = 1.0;
  std::uint64_t seed = 0;
  int sim_boxers = 40, sim_matches = 500, sim_rounds = 2, sim_punches = 120;
  double sim_duration = 420.0, sim_footage = 0.85;
  int gradcheck_trials = 20;

  app.add_option("--config", config_path,
                 "flat key-value config file (default: $BOXMIND_CONFIG)");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--report", report_path, "report output path");
  };
  auto add_seed = [&](CLI::App* cmd) {
    return cmd->add_option("--seed", seed, "random seed");
  };

  auto* c_ingest = app.add_subcommand("ingest", "parse and validate an event log");
  c_ingest->add_option("--events", events);
  add_common(c_ingest);

  auto* c_ind = app.add_subcommand("indicators", "per-boxer indicator profiles");
  c_ind->add_option("--events", events);
  c_ind->add_option("--boxer", boxer_filter, "restrict to one boxer");
  add_common(c_ind);

  auto* c_graph = app.add_subcommand("graph", "graph operations");
  c_graph->require_subcommand(1);
  auto* c_build = c_graph->add_subcommand("build", "build a boxer graph from an event log");
  c_build->add_option("--events", events);
  c_build->add_option("--out", out_path, "graph output path");
  c_build->add_option("--d", dim_d, "embedding dimension");
  c_build->add_option("--c", order_c, "polynomial order");
  add_seed(c_build);
  add_common(c_build);

  auto* c_train = app.add_subcommand("train", "train the outcome predictor");
  c_train->add_option("--graph", graph_path);
  c_train->add_option("--out", out_path, "checkpoint output path");
  c_train->add_option("--mode", mode, "unified|indicators-only|embeddings-only");
  c_train->add_option("--cutoff", cutoff, "temporal split date (train < cutoff)");
  c_train->add_option("--lr", lr);
  c_train->add_option("--epochs", epochs);
  c_train->add_option("--weight-decay", weight_decay);
  c_train->add_option("--alpha", alpha);
  c_train->add_option("--beta", beta);
  c_train->add_option("--hidden", hidden);
  add_seed(c_train);
  add_common(c_train);

  auto* c_eval = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
  c_eval->add_option("--graph", graph_path);
  c_eval->add_option("--checkpoint", checkpoint);
  c_eval->add_option("--cutoff", cutoff);
  add_common(c_eval);

  auto* c_base = app.add_subcommand("baseline", "walk-forward scalar rating baseline");
  c_base->add_option("--graph", graph_path);
  c_base->add_option("--system", system, "elo|glicko|whr");
  c_base->add_option("--cutoff", cutoff);
  add_common(c_base);

  auto* c_pred = app.add_subcommand("predict", "predict one match-up");
  c_pred->add_option("boxer", boxer_arg)->required();
  c_pred->add_option("opponent", opponent_arg)->required();
  c_pred->add_option("--date", date_arg)->required();
  c_pred->add_option("--graph", graph_path);
  c_pred->add_option("--checkpoint", checkpoint);
  add_common(c_pred);

  auto* c_rec = app.add_subcommand("recommend", "top indicator recommendations");
  c_rec->add_option("boxer", boxer_arg)->required();
  c_rec->add_option("opponent", opponent_arg)->required();
  c_rec->add_option("--date", date_arg)->required();
  c_rec->add_option("--graph", graph_path);
  c_rec->add_option("--checkpoint", checkpoint);
  add_common(c_rec);

  auto* c_adv = app.add_subcommand("advantage", "KDE advantage labels for one boxer");
  c_adv->add_option("boxer", boxer_arg)->required();
  c_adv->add_option("--graph", graph_path);
  c_adv->add_option("--indicator", indicator_arg, "1..18, 0 = all");
  add_common(c_adv);

  auto* c_sim = app.add_subcommand("simulate", "generate a synthetic world");
  c_sim->add_option("--out", out_path, "event-log output path");
  c_sim->add_option("--truth", truth_path, "ground-truth sidecar path");
  c_sim->add_option("--boxers", sim_boxers);
  c_sim->add_option("--matches", sim_matches);
  c_sim->add_option("--rounds", sim_rounds);
  c_sim->add_option("--round-duration", sim_duration);
  c_sim->add_option("--punches", sim_punches);
  c_sim->add_option("--footage", sim_footage);
  add_seed(c_sim);
  add_common(c_sim);

  auto* c_gc = app.add_subcommand("gradcheck", "finite-difference gradient check");
  c_gc->add_option("--trials", gradcheck_trials);
  c_gc->add_option("--d", dim_d);
  c_gc->add_option("--hidden", hidden);
  add_seed(c_gc);
  add_common(c_gc);

  // let --config appear after the subcommand name
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
    sc->fallthrough();
    for (CLI::App* nested : sc->get_subcommands([](const CLI::App*) { return true; }))
      nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage to stderr
    return 1;
  }

  try {
    const json cfg = load_flat_config(config_path);
    auto cfgfill = [&](CLI::App* cmd, const char* flag, const std::string& key, auto& value) {
      const CLI::Option* opt = cmd->count_all() ? cmd->get_option_no_throw(flag) : nullptr;
      fill_from_config(opt, cfg, key, value);
    };
    CLI::App* active = app.get_subcommands().front();
    CLI::App* leaf = active->get_subcommands().empty() ? active
                                                       : active->get_subcommands().front();
    cfgfill(leaf, "--events", "events", events);
    cfgfill(leaf, "--graph", "graph", graph_path);
    cfgfill(leaf, "--checkpoint", "checkpoint", checkpoint);
    cfgfill(leaf, "--report", "report", report_path);
    cfgfill(leaf, "--out", "out", out_path);
    cfgfill(leaf, "--cutoff", "cutoff", cutoff);
    cfgfill(leaf, "--mode", "mode", mode);
    cfgfill(leaf, "--system", "system", system);
    cfgfill(leaf, "--d", "d", dim_d);
    cfgfill(leaf, "--c", "c", order_c);
    cfgfill(leaf, "--hidden", "hidden", hidden);
    cfgfill(leaf, "--lr", "lr", lr);
    cfgfill(leaf, "--epochs", "epochs", epochs);
    cfgfill(leaf, "--weight-decay", "weight_decay", weight_decay);
    cfgfill(leaf, "--alpha", "alpha", alpha);
    cfgfill(leaf, "--beta", "beta", beta);
    cfgfill(leaf, "--seed", "seed", seed);

    json resolved{{"cutoff", cutoff},
                  {"mode", mode},
                  {"system", system},
                  {"d", dim_d},
                  {"c", order_c},
                  {"lr", lr},
                  {"epochs", epochs},
                  {"weight_decay", weight_decay},
                  {"alpha", alpha},
                  {"beta", beta},
                  {"seed", seed}};

    if (*c_ingest) {
      const auto matches = load_events(events);
      std::set<std::string> boxers;
      int n_events = 0, n_footage = 0;
      json violations = json::array();
      for (const auto& m : matches) {
        boxers.insert(m.boxer_a);
        boxers.insert(m.boxer_b);
        n_footage += !m.rounds.empty();
        for (const auto& r : m.rounds) n_events += int(r.events.size());
        for (const auto& v : validate_match(m))
          violations.push_back(m.match_id + ": " + v);
      }
      json report{{"subcommand", "ingest"},
                  {"config", resolved},
                  {"matches", matches.size()},
                  {"boxers", boxers.size()},
                  {"events", n_events},
                  {"footage_matches", n_footage},
                  {"violations", violations}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "ingest: " << matches.size() << " matches, " << boxers.size()
                << " boxers, " << n_events << " events, " << violations.size()
                << " violations\n";
      if (!violations.empty()) throw DataError("event log has invariant violations");
    } else if (*c_ind) {
      const auto matches = load_events(events);
      std::map<std::string, std::vector<RoundRecord>> rounds_by_boxer;
      for (const auto& m : matches)
        for (const std::string* id : {&m.boxer_a, &m.boxer_b})
          if (boxer_filter.empty() || *id == boxer_filter)
            rounds_by_boxer[*id].insert(rounds_by_boxer[*id].end(), m.rounds.begin(),
                                        m.rounds.end());
      if (rounds_by_boxer.empty()) throw DataError("no matching boxer in the event log");
      json profiles = json::object();
      for (const auto& [id, rounds] : rounds_by_boxer) {
        if (rounds.empty()) continue;
        const auto prof = aggregate_indicators(rounds, id);
        profiles[id] = {{"indicators", named_vec18(prof.values)},
                        {"punch_count", prof.punch_count},
                        {"footage_minutes", prof.footage_minutes},
                        {"sparse", prof.sparse}};
      }
      json report{{"subcommand", "indicators"}, {"config", resolved}, {"profiles", profiles}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "indicators: profiles for " << profiles.size() << " boxers\n";
    } else if (*c_build) {
      const auto matches = load_events(events);
      if (out_path.empty()) throw DataError("graph build requires --out");
      const auto graph = build_graph(matches, dim_d, order_c, seed);
      save_graph(graph, out_path);
      json report{{"subcommand", "graph build"},
                  {"config", resolved},
                  {"nodes", graph.nodes.size()},
                  {"edges", graph.edges.size()},
                  {"span_days", graph.span_days}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "graph build: " << graph.nodes.size() << " nodes, "
                << graph.edges.size() << " edges -> " << out_path << "\n";
    } else if (*c_train) {
      if (out_path.empty()) throw DataError("train requires --out");
      const auto graph = load_graph_checked(graph_path);
      const auto [train_edges, test_edges] =
          temporal_split(graph, Date{parse_date(cutoff)});
      if (train_edges.empty()) throw DataError("empty train split before " + cutoff);
      TrainConfig tc;
      tc.lr = lr;
      tc.epochs = epochs;
      tc.weight_decay = weight_decay;
      tc.alpha = alpha;
      tc.beta = beta;
      tc.seed = seed;
      tc.hidden = hidden;
      const auto [model, losses] =
          train(graph, train_edges, tc, predictor_mode_from_string(mode));
      save_checkpoint(model, out_path);
      json report{{"subcommand", "train"},
                  {"config", resolved},
                  {"train_edges", train_edges.size()},
                  {"test_edges", test_edges.size()},
                  {"first_loss", losses.front()},
                  {"final_loss", losses.back()}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "train: " << train_edges.size() << " edges, " << losses.size()
                << " epochs, final loss " << losses.back() << " -> " << out_path << "\n";
    } else if (*c_eval) {
      const auto graph = load_graph_checked(graph_path);
      const auto model = load_checkpoint_checked(checkpoint);
      const auto [train_edges, test_edges] =
          temporal_split(graph, Date{parse_date(cutoff)});
      if (test_edges.empty()) throw DataError("empty test split from " + cutoff);
      const auto rep = evaluate(model, graph, test_edges);
      json pearson = json::object();
      for (int k = 0; k < kNumIndicators; ++k)
        pearson[indicator_names()[k]] =
            rep.pearson[k] ? json(*rep.pearson[k]) : json(nullptr);
      json report{{"subcommand", "eval"},
                  {"config", resolved},
                  {"accuracy", rep.accuracy},
                  {"correct", rep.correct},
                  {"total", rep.total},
                  {"ties", rep.ties},
                  {"confusion", {{rep.confusion[0][0], rep.confusion[0][1]},
                                 {rep.confusion[1][0], rep.confusion[1][1]}}},
                  {"indicator_pearson", pearson}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "eval: accuracy " << rep.accuracy << " (" << rep.correct << "/"
                << rep.total << ", " << rep.ties << " ties)\n";
    } else if (*c_base) {
      const auto graph = load_graph_checked(graph_path);
      BaselineConfig bc;
      bc.system = rating_system_from_string(system);
      const auto res = walk_forward(graph.edges, Date{parse_date(cutoff)}, bc);
      json ratings = json::object();
      for (const auto& [id, r] : res.final_ratings) ratings[id] = r;
      json report{{"subcommand", "baseline"},
                  {"config", resolved},
                  {"accuracy", res.accuracy},
                  {"correct", res.correct},
                  {"total", res.total},
                  {"ties", res.ties},
                  {"final_ratings", ratings}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "baseline " << system << ": accuracy " << res.accuracy << " ("
                << res.correct << "/" << res.total << ")\n";
    } else if (*c_pred) {
      const auto graph = load_graph_checked(graph_path);
      const auto model = load_checkpoint_checked(checkpoint);
      const double t = graph.normalize_time(Date{parse_date(date_arg)});
      if (!graph.nodes.count(boxer_arg) || !graph.nodes.count(opponent_arg))
        throw DataError("boxer not in graph");
      const auto pred = predict(graph, model, boxer_arg, opponent_arg, t);
      json report{{"subcommand", "predict"},
                  {"config", resolved},
                  {"boxer", boxer_arg},
                  {"opponent", opponent_arg},
                  {"date", date_arg},
                  {"t", t},
                  {"win_probability", pred.win_probability}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "predict: P(" << boxer_arg << " beats " << opponent_arg << " on "
                << date_arg << ") = " << pred.win_probability << "\n";
    } else if (*c_rec) {
      const auto graph = load_graph_checked(graph_path);
      const auto model = load_checkpoint_checked(checkpoint);
      const double t = graph.normalize_time(Date{parse_date(date_arg)});
      if (!graph.nodes.count(boxer_arg) || !graph.nodes.count(opponent_arg))
        throw DataError("boxer not in graph");
      const auto rep = win_gradient(model, graph, boxer_arg, opponent_arg, t);
      json top = json::array();
      for (const auto& r : rep.top)
        top.push_back({{"indicator", r.index1},
                       {"name", indicator_names()[r.index1 - 1]},
                       {"gradient", r.gradient}});
      json report{{"subcommand", "recommend"},
                  {"config", resolved},
                  {"boxer", boxer_arg},
                  {"opponent", opponent_arg},
                  {"date", date_arg},
                  {"recommendations", top},
                  {"gradient_std", named_vec18(rep.grad_std)},
                  {"gradient_raw", named_vec18(rep.grad_raw)}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "recommend: " << top.size() << " indicators for " << boxer_arg
                << " vs " << opponent_arg << "\n";
    } else if (*c_adv) {
      const auto graph = load_graph_checked(graph_path);
      if (indicator_arg < 0 || indicator_arg > kNumIndicators)
        throw DataError("indicator index must be 1..18 (or 0 for all)");
      json per = json::object();
      int labeled = 0;
      for (int k = 1; k <= kNumIndicators; ++k) {
        if (indicator_arg != 0 && k != indicator_arg) continue;
        AdvantageQuery query;
        for (const auto& e : graph.edges) {
          if (!e.footage) continue;
          const bool is_a = e.boxer_a == boxer_arg;
          const bool is_b = e.boxer_b == boxer_arg;
          const double va = e.ind_a ? (*e.ind_a)[k - 1] : 0.0;
          const double vb = e.ind_b ? (*e.ind_b)[k - 1] : 0.0;
          if (is_a && e.ind_a) query.boxer_samples.push_back(va);
          if (is_b && e.ind_b) query.boxer_samples.push_back(vb);
          if (is_a && e.ind_a && e.ind_b) query.paired.emplace_back(va, vb);
          if (is_b && e.ind_a && e.ind_b) query.paired.emplace_back(vb, va);
          if (!is_a && e.ind_a) query.level_samples.push_back(va);
          if (!is_b && e.ind_b) query.level_samples.push_back(vb);
        }
        if (query.boxer_samples.size() < 2 || query.level_samples.size() < 2)
          throw DataError("advantage: fewer than two footage samples for " + boxer_arg);
        if (query.paired.size() < 2) query.paired.clear();
        const double p = advantage_probability(query);
        per[indicator_names()[k - 1]] = {{"probability", p}, {"label", p > 0.5 ? 1 : 0}};
        labeled += p > 0.5;
      }
      json report{{"subcommand", "advantage"},
                  {"config", resolved},
                  {"boxer", boxer_arg},
                  {"indicators", per}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "advantage: " << labeled << "/" << per.size()
                << " indicators labeled 1 for " << boxer_arg << "\n";
    } else if (*c_sim) {
      if (out_path.empty()) throw DataError("simulate requires --out");
      WorldConfig wc;
      wc.n_boxers = sim_boxers;
      wc.n_matches = sim_matches;
      wc.rounds_per_match = sim_rounds;
      wc.round_duration = sim_duration;
      wc.punch_budget = sim_punches;
      wc.footage_fraction = sim_footage;
      wc.seed = seed;
      const auto [matches, truth] = generate_world(wc);
      std::ofstream out(out_path);
      if (!out) throw DataError("cannot write event log: " + out_path);
      serialize_event_log(matches, out);
      if (!truth_path.empty()) {
        std::ofstream tout(truth_path);
        if (!tout) throw DataError("cannot write ground truth: " + truth_path);
        tout << ground_truth_to_json(truth);
      }
      json report{{"subcommand", "simulate"},
                  {"config", resolved},
                  {"boxers", sim_boxers},
                  {"matches", matches.size()}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "simulate: " << matches.size() << " matches for " << sim_boxers
                << " boxers -> " << out_path << "\n";
    } else if (*c_gc) {
      MlpSpec spec;
      spec.widths.push_back(2 * (kNumIndicators + dim_d));
      for (int h : hidden) spec.widths.push_back(h);
      spec.widths.push_back(2 + 2 * kNumIndicators);
      double worst = 0.0;
      for (int trial = 0; trial < gradcheck_trials; ++trial)
        worst = std::max(worst, grad_check(spec, seed + std::uint64_t(trial)));
      json report{{"subcommand", "gradcheck"},
                  {"config", resolved},
                  {"trials", gradcheck_trials},
                  {"max_relative_error", worst}};
      if (!report_path.empty()) write_report(report_path, report);
      std::cout << "gradcheck: max relative error " << worst << " over "
                << gradcheck_trials << " trials\n";
      if (worst >= 1e-5) throw DataError("gradient check failed");
    }
    return 0;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
