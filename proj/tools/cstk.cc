/*
 * Copyright 2026 The cstk Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// cstk: command-line front end for the cybersickness toolkit.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "cstk/advisor.h"
#include "cstk/dataset.h"
#include "cstk/errors.h"
#include "cstk/eval.h"
#include "cstk/heat.h"
#include "cstk/model_io.h"
#include "cstk/serve.h"
#include "cstk/session_io.h"
#include "cstk/synth.h"
#include "cstk/tables.h"

namespace {

using Json = nlohmann::ordered_json;

// Usage problems detected after CLI11 parsing (bad enum text, bad
// combination of flags) are reported with exit code 2 like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to the named file, or to stdout for "-" or an empty path.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void close() {
    if (!file_.is_open()) return;
    file_.close();
    if (file_.fail()) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream file_;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename F>
auto parse_or_usage(F&& f, const std::string& what) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(what + ": " + e.what());
  }
}

struct DataOptions {
  std::string data;
  std::string scenario = "A";
  std::string scheme = "binary";

  void add(CLI::App* cmd, bool need_labels) {
    cmd->add_option("--data", data, "Session corpus (JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
    if (!need_labels) return;
    cmd->add_option("--scenario", scenario, "A (race), B (flight) or C (both)")
        ->capture_default_str();
    cmd->add_option("--scheme", scheme, "binary or quarterly")->capture_default_str();
  }
  cstk::Scenario parsed_scenario() const {
    return parse_or_usage([&] { return cstk::parse_scenario(scenario); }, "--scenario");
  }
  cstk::LabelScheme parsed_scheme() const {
    return parse_or_usage([&] { return cstk::parse_scheme(scheme); }, "--scheme");
  }
  std::vector<cstk::SessionRecord> sessions() const {
    return cstk::parse_sessions_file(data);
  }
  cstk::Dataset dataset() const {
    const auto s = sessions();
    return cstk::build_dataset(s, parsed_scenario(), parsed_scheme());
  }
};

struct LearnerOverrides {
  std::optional<int> trees, max_depth, min_leaf, mtry;
  std::optional<std::string> criterion;
  std::optional<double> prune_fraction;

  void add(CLI::App* cmd) {
    cmd->add_option("--trees", trees, "Forest size")->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", max_depth, "Maximum tree depth")->check(CLI::PositiveNumber);
    cmd->add_option("--min-leaf", min_leaf, "Minimum rows per leaf")->check(CLI::PositiveNumber);
    cmd->add_option("--mtry", mtry, "Attributes tried per forest node (0 = sqrt)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--criterion", criterion, "gini or info_gain");
    cmd->add_option("--prune-fraction", prune_fraction, "Holdout share for pruning")
        ->check(CLI::Range(0.0, 0.5));
  }
  void apply(cstk::LearnerSpec& spec) const {
    auto& c = spec.config;
    if (trees) c.n_trees = *trees;
    if (max_depth) c.max_depth = *max_depth;
    if (min_leaf) c.min_leaf = *min_leaf;
    if (mtry) c.mtry = *mtry;
    if (criterion) {
      c.criterion = parse_or_usage([&] { return cstk::parse_criterion(*criterion); },
                                   "--criterion");
    }
    if (prune_fraction) c.prune_fraction = *prune_fraction;
    c.validate();
  }
};

cstk::LearnerSpec learner_or_usage(const std::string& name) {
  try {
    return cstk::parse_learner(name);
  } catch (const cstk::LookupError& e) {
    throw UsageError(std::string("--learner: ") + e.what());
  }
}

// "race:20,flight:27" -> session counts per game.
cstk::CorpusSpec parse_games(const std::string& text) {
  cstk::CorpusSpec spec{0, 0, 0, 0};
  bool seen_race = false, seen_flight = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--games: expected game:count, got '" + item + "'");
    const auto game = parse_or_usage([&] { return cstk::parse_game(item.substr(0, colon)); }, "--games");
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item.substr(colon + 1), &used);
      if (used != item.size() - colon - 1 || v < 0) throw std::invalid_argument("count");
      count = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw UsageError("--games: bad count in '" + item + "'");
    }
    bool& seen = game == cstk::Game::kRace ? seen_race : seen_flight;
    if (seen) throw UsageError("--games: game listed twice");
    seen = true;
    (game == cstk::Game::kRace ? spec.race_sessions : spec.flight_sessions) = count;
  }
  if (spec.race_sessions + spec.flight_sessions == 0) throw UsageError("--games: no sessions requested");
  return spec;
}

// Default frame budget keeps the per-session length of the reference corpus.
std::size_t scaled_rows(std::size_t sessions, std::size_t ref_sessions, std::size_t ref_rows) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(ref_rows) *
                                               static_cast<double>(sessions) /
                                               static_cast<double>(ref_sessions)));
}

Json suggestions_json(const std::vector<cstk::Suggestion>& suggestions) {
  Json out = Json::array();
  for (const auto& s : suggestions) {
    Json strategies = Json::array();
    for (const auto st : s.strategies) strategies.push_back(std::string(cstk::to_string(st)));
    Json evidence = Json::array();
    for (const auto& e : s.evidence) evidence.push_back({{"attribute", e.attribute}, {"note", e.note}});
    out.push_back({{"cause", std::string(cstk::to_string(s.cause))},
                   {"strategies", strategies},
                   {"evidence", evidence}});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cybersickness telemetry toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cstk 0.1.0");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic session corpus");
  std::string games = "race:20,flight:27";
  std::uint64_t seed = 7;
  std::string out;
  std::string format = "jsonl";
  std::optional<std::size_t> race_rows, flight_rows;
  std::string synth_weights;
  bool no_trace = false;
  DataOptions synth_labels;
  synth->add_option("--games", games, "Sessions per game, e.g. race:20,flight:27")->capture_default_str();
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--out", out, "Output path")->required();
  synth->add_option("--format", format, "jsonl (sessions) or csv (feature rows)")->capture_default_str();
  synth->add_option("--race-rows", race_rows, "Total race frames");
  synth->add_option("--flight-rows", flight_rows, "Total flight frames");
  synth->add_option("--weights", synth_weights, "Risk weights time,rotation,acceleration,profile");
  synth->add_option("--scenario", synth_labels.scenario, "Scenario for --format csv")->capture_default_str();
  synth->add_option("--scheme", synth_labels.scheme, "Label scheme for --format csv")->capture_default_str();
  synth->add_flag("--no-trace", no_trace, "Skip the <out>.trace.csv sidecar");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and assemble feature rows");
  DataOptions ingest_data;
  std::string ingest_format = "csv";
  ingest_data.add(ingest, true);
  ingest->add_option("--format", ingest_format, "csv (feature rows) or jsonl (validated sessions)")
      ->capture_default_str();
  ingest->add_option("--out", out, "Output path (default stdout)");

  // train
  auto* train = app.add_subcommand("train", "Train a model and save it");
  DataOptions train_data;
  std::string learner_name = "forest";
  LearnerOverrides overrides;
  bool attach_rank = false;
  train_data.add(train, true);
  train->add_option("--learner", learner_name, "stump, tree, reptree or forest")->capture_default_str();
  train->add_option("--seed", seed, "Random seed")->capture_default_str();
  train->add_option("--out", out, "Model file")->required();
  train->add_flag("--rank", attach_rank, "Attach an attribute ranking for the advisor");
  overrides.add(train);

  // eval
  auto* eval = app.add_subcommand("eval", "Cross-validate learners");
  DataOptions eval_data;
  std::string learners = "stump,tree,reptree,forest";
  std::size_t k = 10;
  std::optional<std::string> eval_scenario, eval_scheme;
  eval->add_option("--data", eval_data.data, "Session corpus (JSONL)")->required()->check(CLI::ExistingFile);
  eval->add_option("--learners", learners, "Comma-separated learner list")->capture_default_str();
  eval->add_option("--k", k, "Fold count")->check(CLI::Range(2, 1000))->capture_default_str();
  eval->add_option("--seed", seed, "Random seed")->capture_default_str();
  eval->add_option("--scenario", eval_scenario, "Run one scenario instead of the full grid");
  eval->add_option("--scheme", eval_scheme, "Run one scheme instead of the full grid");
  eval->add_option("--out", out, "Output JSON (default stdout)");
  LearnerOverrides eval_overrides;
  eval_overrides.add(eval);

  // rank
  auto* rank = app.add_subcommand("rank", "Rank attributes by leave-one-out impact");
  DataOptions rank_data;
  std::optional<std::string> rank_learner;
  std::optional<std::string> noise;
  std::string rank_format = "table";
  rank_data.add(rank, true);
  rank->add_option("--learner", rank_learner, "Learner (default: depth-4 tree, min leaf 50)");
  rank->add_option("--seed", seed, "Random seed")->capture_default_str();
  rank->add_option("--noise", noise, "Append a uniform-noise attribute with this name");
  rank->add_option("--format", rank_format, "table or json")->capture_default_str();
  rank->add_option("--out", out, "Output path (default stdout)");
  LearnerOverrides rank_overrides;
  rank_overrides.add(rank);

  // predict
  auto* predict = app.add_subcommand("predict", "Score feature rows with a saved model");
  std::string model_path;
  DataOptions predict_data;
  predict->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  predict->add_option("--data", predict_data.data, "Session corpus (JSONL)")->required()->check(CLI::ExistingFile);
  predict->add_option("--scenario", predict_data.scenario, "A, B or C")->capture_default_str();
  predict->add_option("--out", out, "Predictions CSV (default stdout)");

  // advise
  auto* advise = app.add_subcommand("advise", "Suggest mitigation strategies per session");
  std::string advise_model, ranking_path, mapping_path, session_id, export_matrix, write_mapping;
  std::size_t top_n = 5;
  double threshold = cstk::kDefaultAdviceThreshold;
  std::string advise_data;
  advise->add_option("--model", advise_model, "Model file with an attached ranking")->check(CLI::ExistingFile);
  advise->add_option("--ranking", ranking_path, "Ranking JSON from 'rank --format json'")->check(CLI::ExistingFile);
  advise->add_option("--data", advise_data, "Session corpus (JSONL)")->check(CLI::ExistingFile);
  advise->add_option("--session", session_id, "Only this session id");
  advise->add_option("--mapping", mapping_path, "Attribute-to-cause mapping file")->check(CLI::ExistingFile);
  advise->add_option("--top-n", top_n, "Ranked attributes considered")->capture_default_str();
  advise->add_option("--threshold", threshold, "Discomfort probability cutoff")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  advise->add_option("--export-matrix", export_matrix, "Write the cause-strategy matrix as CSV");
  advise->add_option("--write-mapping", write_mapping, "Write the default mapping file");
  advise->add_option("--out", out, "Output JSONL (default stdout)");

  // viz
  auto* viz = app.add_subcommand("viz", "Render heat maps and result tables");
  viz->require_subcommand(1);
  auto* viz_heat = viz->add_subcommand("heat", "Track heat grid of carried-forward labels");
  std::string heat_data, svg_out;
  std::size_t nx = cstk::kDefaultHeatResolution, nz = cstk::kDefaultHeatResolution;
  double cell_px = 8.0;
  viz_heat->add_option("--data", heat_data, "Session corpus (JSONL)")->required()->check(CLI::ExistingFile);
  std::string heat_game = "race";
  viz_heat->add_option("--only", heat_game, "race, flight or all")->capture_default_str();
  std::string facet_by;
  viz_heat->add_option("--facet", facet_by, "Split by profile field (gender, age, posture, ...)");
  viz_heat->add_option("--nx", nx, "Columns")->check(CLI::PositiveNumber)->capture_default_str();
  viz_heat->add_option("--nz", nz, "Rows")->check(CLI::PositiveNumber)->capture_default_str();
  viz_heat->add_option("--csv", out, "CSV output (default stdout)");
  viz_heat->add_option("--svg", svg_out, "SVG output");
  viz_heat->add_option("--cell-px", cell_px, "SVG cell size")->check(CLI::PositiveNumber);
  auto* viz_tables = viz->add_subcommand("tables", "Accuracy/kappa tables from grid JSON");
  std::string grid_path;
  viz_tables->add_option("--grid", grid_path, "Grid JSON from 'eval'")->required()->check(CLI::ExistingFile);
  viz_tables->add_option("--out", out, "Output (default stdout)");
  auto* viz_ranking = viz->add_subcommand("ranking", "Ranking table from ranking JSON");
  viz_ranking->add_option("--ranking", ranking_path, "Ranking JSON")->required()->check(CLI::ExistingFile);
  viz_ranking->add_option("--out", out, "Output (default stdout)");

  // serve
  auto* serve = app.add_subcommand("serve", "Stream predictions and suggestions");
  std::string serve_model, serve_mapping, host = "127.0.0.1";
  std::uint16_t port = 7878;
  bool use_stdio = false;
  std::size_t refresh_every = 100;
  serve->add_option("--model", serve_model, "Model file")->required()->check(CLI::ExistingFile);
  serve->add_option("--mapping", serve_mapping, "Attribute-to-cause mapping file")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "TCP port (0 picks a free port)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_flag("--stdio", use_stdio, "Serve one stream on stdin/stdout");
  serve->add_option("--top-n", top_n, "Ranked attributes considered")->capture_default_str();
  serve->add_option("--threshold", threshold, "Discomfort probability cutoff")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  serve->add_option("--refresh-every", refresh_every, "Frames between cause refreshes")
      ->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cstk: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*synth) {
      cstk::CorpusSpec spec = parse_games(games);
      spec.race_rows = race_rows.value_or(scaled_rows(spec.race_sessions, 20, 3993));
      spec.flight_rows = flight_rows.value_or(scaled_rows(spec.flight_sessions, 27, 5397));
      cstk::SimParams params;
      if (!synth_weights.empty()) {
        std::vector<double> w;
        std::stringstream ss(synth_weights);
        std::string item;
        while (std::getline(ss, item, ',')) {
          try {
            w.push_back(std::stod(item));
          } catch (const std::exception&) {
            throw UsageError("--weights: bad number '" + item + "'");
          }
        }
        if (w.size() != 4) throw UsageError("--weights: expected four values");
        params.weights = {w[0], w[1], w[2], w[3]};
      }
      const auto fmt = parse_or_usage([&] { return cstk::parse_format(format); }, "--format");
      const cstk::Corpus corpus = cstk::generate_corpus(spec, seed, params);
      Output o(out);
      if (fmt == cstk::DataFormat::kJsonl) {
        cstk::write_sessions_jsonl(o.stream(), corpus.sessions);
      } else {
        cstk::write_features_csv(o.stream(),
                                 cstk::build_dataset(corpus.sessions, synth_labels.parsed_scenario(),
                                                     synth_labels.parsed_scheme()));
      }
      o.close();
      if (!no_trace) {
        Output t(out + ".trace.csv");
        cstk::write_trace_csv(t.stream(), corpus.sessions, corpus.traces);
        t.close();
      }
      std::cerr << fmt::format("wrote {} sessions to {}\n", corpus.sessions.size(), out);
    } else if (*ingest) {
      const auto fmt = parse_or_usage([&] { return cstk::parse_format(ingest_format); }, "--format");
      const auto sessions = ingest_data.sessions();
      Output o(out);
      if (fmt == cstk::DataFormat::kJsonl) {
        const auto kept = cstk::filter_scenario(sessions, ingest_data.parsed_scenario());
        cstk::write_sessions_jsonl(o.stream(), kept);
      } else {
        const auto ds = cstk::build_dataset(sessions, ingest_data.parsed_scenario(), ingest_data.parsed_scheme());
        cstk::write_features_csv(o.stream(), ds);
        const auto dist = cstk::class_distribution(ds);
        std::string counts;
        for (std::size_t c = 0; c < dist.counts.size(); ++c) {
          counts += fmt::format("{}{}={}", c ? " " : "", c, dist.counts[c]);
        }
        std::cerr << fmt::format("{} rows from {} sessions; classes {}\n", ds.rows.size(),
                                 ds.provenance.size(), counts);
      }
      o.close();
    } else if (*train) {
      cstk::LearnerSpec spec = learner_or_usage(learner_name);
      overrides.apply(spec);
      const cstk::Dataset ds = train_data.dataset();
      cstk::SavedModel saved{spec, cstk::train_learner(spec, ds, seed), std::nullopt};
      if (attach_rank) saved.ranking = cstk::rank_attributes(cstk::default_ranking_learner(), ds, seed);
      cstk::save_model_file(out, saved);
      std::cerr << fmt::format("trained {} on {} rows\n", spec.name, ds.rows.size());
    } else if (*eval) {
      auto specs = parse_or_usage([&] { return cstk::parse_learner_list(learners); }, "--learners");
      for (auto& s : specs) eval_overrides.apply(s);
      eval_data.scenario = eval_scenario.value_or("A");
      eval_data.scheme = eval_scheme.value_or("binary");
      Output o(out);
      if (eval_scenario || eval_scheme) {
        if (specs.size() != 1) throw UsageError("a single-cell run takes exactly one learner");
        const auto ds = eval_data.dataset();
        o.stream() << cstk::to_json(cstk::cross_validate(specs.front(), ds, k, seed)) << "\n";
      } else {
        const auto sessions = eval_data.sessions();
        o.stream() << cstk::to_json(cstk::run_experiment_grid(sessions, specs, k, seed)) << "\n";
      }
      o.close();
    } else if (*rank) {
      cstk::LearnerSpec spec = rank_learner ? learner_or_usage(*rank_learner) : cstk::default_ranking_learner();
      rank_overrides.apply(spec);
      if (rank_format != "table" && rank_format != "json") throw UsageError("--format: expected table or json");
      cstk::Dataset ds = rank_data.dataset();
      if (noise) ds = cstk::append_noise_attribute(ds, *noise, seed);
      const auto ranking = cstk::rank_attributes(spec, ds, seed);
      Output o(out);
      o.stream() << (rank_format == "json" ? cstk::to_json(ranking) + "\n" : cstk::emit_ranking_table(ranking));
      o.close();
    } else if (*predict) {
      const cstk::SavedModel saved = cstk::load_model_file(model_path);
      predict_data.scheme = std::string(cstk::to_string(cstk::model_scheme(saved.model)));
      const cstk::Dataset ds = predict_data.dataset();
      const auto labels = cstk::predict_labels(saved.model, ds);
      Output o(out);
      auto& os = o.stream();
      os << "session_id,timestamp,label,predicted";
      for (std::size_t c = 0; c < ds.num_classes(); ++c) os << ",p" << c;
      os << "\n";
      std::size_t correct = 0;
      for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        const auto& row = ds.rows[i];
        const auto dist = cstk::predict_distribution(saved.model, row.values);
        os << row.session_id << ',' << cstk::format_double(row.frame_timestamp) << ',' << row.label << ','
           << labels[i];
        for (const double p : dist) os << ',' << cstk::format_double(p);
        os << "\n";
        correct += labels[i] == row.label;
      }
      o.close();
      if (!ds.rows.empty()) {
        std::cerr << fmt::format("accuracy {:.4f} on {} rows\n",
                                 static_cast<double>(correct) / static_cast<double>(ds.rows.size()),
                                 ds.rows.size());
      }
    } else if (*advise) {
      bool did_something = false;
      if (!export_matrix.empty()) {
        Output m(export_matrix);
        m.stream() << cstk::matrix_to_csv(cstk::builtin_matrix());
        m.close();
        did_something = true;
      }
      if (!write_mapping.empty()) {
        Output m(write_mapping);
        m.stream() << cstk::CauseMapping::defaults().to_config();
        m.close();
        did_something = true;
      }
      if (advise_data.empty()) {
        if (!did_something) throw UsageError("advise needs --data, --export-matrix or --write-mapping");
        return 0;
      }
      if (advise_model.empty()) throw UsageError("advise needs --model to score sessions");
      const cstk::SavedModel saved = cstk::load_model_file(advise_model);
      std::optional<cstk::AttributeRanking> ranking = saved.ranking;
      if (!ranking_path.empty()) ranking = cstk::ranking_from_json(read_text(ranking_path));
      if (!ranking) throw UsageError("no ranking: train with --rank or pass --ranking");
      const auto mapping = mapping_path.empty() ? cstk::CauseMapping::defaults()
                                                : cstk::CauseMapping::parse_file(mapping_path);
      const auto sessions = cstk::parse_sessions_file(advise_data);
      Output o(out);
      bool found = session_id.empty();
      for (const auto& session : sessions) {
        if (!session_id.empty() && session.session_id != session_id) continue;
        found = true;
        const auto inference = cstk::infer_causes(*ranking, cstk::frame_statistics(session), top_n, mapping);
        for (const auto& w : inference.warnings) std::cerr << "cstk: warning: " << w << "\n";
        // Session-level prediction: mean class distribution over its frames.
        std::vector<double> mean(cstk::class_count(cstk::model_scheme(saved.model)), 0.0);
        for (const auto& frame : session.frames) {
          const auto d = cstk::predict_distribution(saved.model, cstk::encode_features(session, frame));
          for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += d[c];
        }
        if (!session.frames.empty()) {
          for (auto& v : mean) v /= static_cast<double>(session.frames.size());
        }
        const auto suggestions = cstk::advise(mean, inference.causes, threshold);
        Json line = {{"session_id", session.session_id},
                     {"distribution", mean},
                     {"discomfort_probability", cstk::discomfort_probability(mean)},
                     {"suggestions", suggestions_json(suggestions)}};
        o.stream() << line.dump() << "\n";
      }
      o.close();
      if (!found) throw std::runtime_error("session '" + session_id + "' not found");
    } else if (*viz) {
      if (*viz_heat) {
        auto sessions = cstk::parse_sessions_file(heat_data);
        if (heat_game != "all") {
          const auto game = parse_or_usage([&] { return cstk::parse_game(heat_game); }, "--only");
          std::erase_if(sessions, [&](const cstk::SessionRecord& s) { return s.game != game; });
        }
        std::map<std::string, cstk::HeatGrid> grids;
        if (facet_by.empty()) {
          grids.emplace("", cstk::aggregate_track_heat(sessions, nx, nz));
        } else {
          grids = cstk::facet_by(sessions, facet_by, nx, nz);
        }
        const auto suffixed = [](const std::string& path, const std::string& key) {
          if (key.empty() || path.empty() || path == "-") return path;
          const auto dot = path.rfind('.');
          return dot == std::string::npos ? path + "." + key : path.substr(0, dot) + "." + key + path.substr(dot);
        };
        for (const auto& [key, grid] : grids) {
          Output c(suffixed(out, key));
          if (!key.empty() && (out.empty() || out == "-")) c.stream() << "# facet " << key << "\n";
          c.stream() << cstk::export_heat_csv(grid);
          c.close();
          if (!svg_out.empty()) {
            Output s(suffixed(svg_out, key));
            s.stream() << cstk::export_heat_svg(grid, cstk::default_palette(), cell_px);
            s.close();
          }
        }
      } else if (*viz_tables) {
        Output o(out);
        o.stream() << cstk::emit_grid_tables(cstk::experiment_grid_from_json(read_text(grid_path)));
        o.close();
      } else {
        Output o(out);
        o.stream() << cstk::emit_ranking_table(cstk::ranking_from_json(read_text(ranking_path)));
        o.close();
      }
    } else if (*serve) {
      cstk::ServeContext ctx{cstk::load_model_file(serve_model),
                             serve_mapping.empty() ? cstk::CauseMapping::defaults()
                                                   : cstk::CauseMapping::parse_file(serve_mapping),
                             top_n, threshold, refresh_every};
      cstk::check_servable(ctx);
      if (use_stdio) {
        cstk::serve_stream(ctx, std::cin, std::cout);
      } else {
        cstk::TcpServer server(ctx, port, host);
        std::cerr << fmt::format("listening on {}:{}\n", host, server.port());
        server.run();
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "cstk: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cstk: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
