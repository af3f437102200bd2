// hetrec: graph-based recommender over heterogeneous interaction logs.
// Subcommands: stats, optimize, evaluate, recommend, convert.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hetrec/hetrec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PhaseTimer {
  using Clock = std::chrono::steady_clock;
  Clock::time_point start = Clock::now();
  std::map<std::string, std::int64_t>* sink = nullptr;
  std::string phase;

  void begin(std::string name) {
    finish();
    phase = std::move(name);
    start = Clock::now();
  }
  void finish() {
    if (!sink || phase.empty()) return;
    (*sink)[phase] =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    phase.clear();
  }
};

bool g_verbose = false;

void note(const std::string& msg) {
  if (g_verbose) std::cerr << "hetrec: " << msg << "\n";
}

std::vector<hetrec::InteractionRecord> load_dataset(const fs::path& dataset,
                                                    const hetrec::EdgeTypeRegistry& registry,
                                                    bool filter_unknown) {
  auto records = hetrec::load_interactions_csv(dataset);
  if (filter_unknown) {
    const std::size_t dropped = hetrec::filter_known(records, registry);
    if (dropped > 0) note("dropped " + std::to_string(dropped) + " unknown/invalid records");
  } else {
    hetrec::bind_records(records, registry, dataset.string() + ": ");
  }
  return records;
}

std::string format_share(std::size_t count, std::size_t total) {
  char buf[64];
  const double share = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
  std::snprintf(buf, sizeof(buf), "%zu (%.2f%%)", count, share);
  return buf;
}

// ---------------------------------------------------------------- stats ----

int cmd_stats(const fs::path& dataset, const fs::path& schema_path, const std::string& split_kind,
              const std::string& split_interaction, const std::string& split_tag,
              double split_fraction, const fs::path& out_dir) {
  auto registry = hetrec::register_schema(hetrec::InteractionSchema::load(schema_path));
  auto records = load_dataset(dataset, registry, /*filter_unknown=*/false);
  auto stats = hetrec::dataset_stats(records, registry);

  json out = stats.to_json();

  std::printf("dataset: %s\n", dataset.string().c_str());
  std::printf("users: %zu  objects: %zu  interactions: %zu  sparsity: %.3f\n", stats.user_count,
              stats.object_count, stats.interaction_count, stats.sparsity);
  std::printf("\n%-28s %s\n", "interaction", "count (share)");
  for (const auto& [name, count] : stats.per_interaction)
    std::printf("%-28s %s\n", name.c_str(), format_share(count, stats.interaction_count).c_str());

  if (!split_kind.empty()) {
    hetrec::SplitSpec spec;
    if (split_kind == "leave_one_out") {
      spec.kind = hetrec::SplitSpec::Kind::LeaveOneOut;
    } else if (split_kind == "temporal") {
      spec.kind = hetrec::SplitSpec::Kind::Temporal;
    } else {
      throw hetrec::ConfigError("--split-kind must be leave_one_out or temporal");
    }
    spec.interaction = split_interaction;
    spec.tag = split_tag;
    spec.fraction = split_fraction;
    auto split = hetrec::make_split(records, spec);
    auto sstats = hetrec::split_stats(split);
    std::size_t total = sstats.validation_cases + sstats.test_cases;
    for (const auto& [_, c] : sstats.train_per_interaction) total += c;
    std::printf("\nsplit on '%s':\n%-28s %-18s %-18s %s\n", split_interaction.c_str(),
                "interaction", "train", "validation", "test");
    for (const auto& [name, count] : sstats.train_per_interaction) {
      std::string val = "-", test = "-";
      if (name == split_interaction) {
        val = format_share(sstats.validation_cases, total);
        test = format_share(sstats.test_cases, total);
      }
      std::printf("%-28s %-18s %-18s %s\n", name.c_str(), format_share(count, total).c_str(),
                  val.c_str(), test.c_str());
    }
    out["split"] = sstats.to_json();
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    hetrec::write_file_atomic(out_dir / "stats.json", out.dump(2) + "\n");
    hetrec::RunManifest manifest;
    manifest.command = "stats";
    manifest.config_hash = hetrec::sha256_file(schema_path);
    manifest.dataset_hash = hetrec::sha256_file(dataset);
    manifest.outputs["stats.json"] = hetrec::sha256_hex((out.dump(2) + "\n"));
    manifest.write(out_dir / "manifest.json");
  }
  return 0;
}

// ------------------------------------------------------------- optimize ----

int cmd_optimize(const fs::path& config_path, std::optional<int> seeds_override,
                 std::optional<bool> undirected_override, const fs::path& out_dir) {
  auto config = hetrec::ExperimentConfig::load(config_path);
  if (seeds_override) config.opt_seeds = *seeds_override;
  if (undirected_override) config.undirected = *undirected_override;
  if (config.opt_seeds < 1) throw hetrec::ConfigError("--seeds must be >= 1");

  auto registry = hetrec::register_schema(hetrec::InteractionSchema::load(config.schema));
  std::map<std::string, std::int64_t> timings;
  PhaseTimer timer;
  timer.sink = &timings;

  timer.begin("load");
  auto records = load_dataset(config.dataset, registry, /*filter_unknown=*/true);

  timer.begin("optimize");
  hetrec::GaObserver observer;
  if (g_verbose) {
    observer = [](int gen, const std::vector<hetrec::Genome>&, std::span<const double> fitness) {
      double best = *std::max_element(fitness.begin(), fitness.end());
      std::cerr << "hetrec: generation " << gen << " best " << best << "\n";
    };
  }
  auto result = hetrec::optimize_weights(records, registry, config, observer);
  timer.begin("write");

  fs::create_directories(out_dir);
  const auto averaged =
      hetrec::WeightVector::from_genes(registry, result.averaged, config.undirected);

  json weights_json;
  if (config.undirected) {
    weights_json = json::object();
    const auto& names = registry.interaction_names();
    for (std::size_t i = 0; i < names.size(); ++i) weights_json[names[i]] = result.averaged[i];
  } else {
    weights_json = averaged.to_json(registry);
  }
  hetrec::RunManifest manifest;
  manifest.command = "optimize";
  manifest.config_hash = hetrec::sha256_file(config_path);
  manifest.dataset_hash = hetrec::sha256_file(config.dataset);

  const std::string weights_str = weights_json.dump(2) + "\n";
  hetrec::write_file_atomic(out_dir / "weights.json", weights_str);
  manifest.outputs["weights.json"] = hetrec::sha256_hex(weights_str);

  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& run = result.runs[i];
    manifest.seeds.push_back(run.seed);
    const std::string tag = "run" + std::to_string(i);

    json run_weights;
    if (config.undirected) {
      run_weights = json::object();
      const auto& names = registry.interaction_names();
      for (std::size_t k = 0; k < names.size(); ++k) run_weights[names[k]] = run.result.best[k];
    } else {
      run_weights = hetrec::WeightVector::from_genes(registry, run.result.best, false)
                        .to_json(registry);
    }
    const std::string rw = run_weights.dump(2) + "\n";
    hetrec::write_file_atomic(out_dir / ("weights_" + tag + ".json"), rw);
    manifest.outputs["weights_" + tag + ".json"] = hetrec::sha256_hex(rw);

    const std::string hist = hetrec::history_csv(run.result);
    hetrec::write_file_atomic(out_dir / ("history_" + tag + ".csv"), hist);
    manifest.outputs["history_" + tag + ".csv"] = hetrec::sha256_hex(hist);
    note("seed " + std::to_string(run.seed) + ": best fitness " +
         std::to_string(run.result.best_fitness) + " after " +
         std::to_string(run.result.generations_run) + " generations");
  }
  timer.finish();
  manifest.timings_ms = timings;
  manifest.write(out_dir / "manifest.json");
  std::printf("wrote %s (%d genes, %zu runs)\n", (out_dir / "weights.json").string().c_str(),
              result.gene_count, result.runs.size());
  return 0;
}

// ------------------------------------------------------------- evaluate ----

json report_to_json(const std::vector<hetrec::ModelReport>& reports) {
  json models = json::array();
  for (const auto& r : reports) models.push_back(r.to_json());
  return models;
}

int cmd_evaluate(const fs::path& config_path, const std::vector<std::string>& model_override,
                 const fs::path& weights_override, std::optional<double> sample_fraction,
                 int sample_seeds, const fs::path& out_dir) {
  auto config = hetrec::ExperimentConfig::load(config_path);
  if (!model_override.empty()) {
    config.models.clear();
    for (const auto& name : model_override) {
      hetrec::ModelSpec spec;
      spec.name = name;
      spec.kind = hetrec::model_kind_from_string(name);
      spec.weights = weights_override;
      config.models.push_back(std::move(spec));
    }
  }
  if (sample_fraction) config.sample_fraction = *sample_fraction;
  if (sample_seeds < 1) throw hetrec::ConfigError("--sample-seeds must be >= 1");

  auto registry = hetrec::register_schema(hetrec::InteractionSchema::load(config.schema));
  std::map<std::string, std::int64_t> timings;
  PhaseTimer timer;
  timer.sink = &timings;
  timer.begin("load");
  auto records = load_dataset(config.dataset, registry, /*filter_unknown=*/true);

  timer.begin("evaluate");
  const bool sampled = config.sample_fraction < 1.0 && sample_seeds > 1;
  std::vector<std::vector<hetrec::ModelReport>> all_reports;
  for (int s = 0; s < (sampled ? sample_seeds : 1); ++s) {
    auto result = hetrec::run_experiment(records, registry, config, config.seed + static_cast<std::uint64_t>(s));
    if (s == 0)
      note("split: " + std::to_string(result.split.test.size()) + " test cases, " +
           std::to_string(result.split.validation.size()) + " validation cases");
    all_reports.push_back(std::move(result.reports));
  }
  timer.begin("write");

  json out;
  out["reports"] = report_to_json(all_reports[0]);
  if (sampled) {
    // Mean/std of each aggregate across the sample seeds.
    json summary = json::array();
    for (std::size_t m = 0; m < all_reports[0].size(); ++m) {
      json per_model{{"model", all_reports[0][m].model}};
      json cutoffs = json::object();
      for (int k : all_reports[0][m].cutoffs) {
        auto moments = [&](auto getter) {
          double mean = 0.0, var = 0.0;
          for (const auto& reports : all_reports) mean += getter(reports[m], k);
          mean /= static_cast<double>(all_reports.size());
          for (const auto& reports : all_reports) {
            const double d = getter(reports[m], k) - mean;
            var += d * d;
          }
          var /= static_cast<double>(all_reports.size());
          return std::pair<double, double>(mean, std::sqrt(var));
        };
        auto [mrr_mean, mrr_std] =
            moments([](const hetrec::ModelReport& r, int kk) { return r.mrr.at(kk); });
        auto [hr_mean, hr_std] =
            moments([](const hetrec::ModelReport& r, int kk) { return r.hr.at(kk); });
        cutoffs[std::to_string(k)] = {{"mrr_mean", mrr_mean},
                                      {"mrr_std", mrr_std},
                                      {"hr_mean", hr_mean},
                                      {"hr_std", hr_std}};
      }
      per_model["cutoffs"] = cutoffs;
      per_model["samples"] = all_reports.size();
      summary.push_back(per_model);
    }
    out["sample_summary"] = summary;
    json sample_reports = json::array();
    for (const auto& reports : all_reports) sample_reports.push_back(report_to_json(reports));
    out["sample_reports"] = sample_reports;
  }

  for (const auto& report : all_reports[0]) {
    for (int k : report.cutoffs)
      std::printf("%-20s MRR@%-3d %.4f   HR@%-3d %.4f\n", report.model.c_str(), k,
                  report.mrr.at(k), k, report.hr.at(k));
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    hetrec::RunManifest manifest;
    manifest.command = "evaluate";
    manifest.config_hash = hetrec::sha256_file(config_path);
    manifest.dataset_hash = hetrec::sha256_file(config.dataset);
    manifest.seeds = {config.seed};
    const std::string report_str = out.dump(2) + "\n";
    hetrec::write_file_atomic(out_dir / "report.json", report_str);
    manifest.outputs["report.json"] = hetrec::sha256_hex(report_str);
    const std::string csv = hetrec::per_user_csv(all_reports[0]);
    hetrec::write_file_atomic(out_dir / "per_user.csv", csv);
    manifest.outputs["per_user.csv"] = hetrec::sha256_hex(csv);
    timer.finish();
    manifest.timings_ms = timings;
    manifest.write(out_dir / "manifest.json");
  }
  return 0;
}

// ------------------------------------------------------------ recommend ----

int cmd_recommend(const fs::path& dataset, const fs::path& schema_path, const fs::path& weights_path,
                  std::vector<std::string> users, const fs::path& users_file,
                  const std::string& target_tag, const std::string& mode_name, double alpha, int k,
                  int neighbors, bool fallback_popular, const fs::path& filters_path,
                  const fs::path& out_file) {
  if (k < 1) throw hetrec::ConfigError("--k must be >= 1");
  auto registry = hetrec::register_schema(hetrec::InteractionSchema::load(schema_path));
  auto records = load_dataset(dataset, registry, /*filter_unknown=*/false);

  if (!users_file.empty()) {
    for (const auto& line : hetrec::csv::read_lines(users_file.string()))
      if (!line.empty()) users.push_back(line);
  }
  if (users.empty()) throw hetrec::ConfigError("no users given (use --user or --users-file)");

  // Bare (direction-free) keys in the weight file already cover both directions.
  const hetrec::WeightVector weights = weights_path.empty()
                                           ? hetrec::WeightVector::uniform(registry)
                                           : hetrec::WeightVector::load(registry, weights_path);

  hetrec::RecommendationRequest request;
  request.target_tag = target_tag;
  request.k = k;
  request.neighbor_count = neighbors;
  if (mode_name == "direct") {
    request.mode = hetrec::RecMode::DirectRank;
  } else if (mode_name == "neighbors") {
    request.mode = hetrec::RecMode::NeighborFrequency;
  } else {
    throw hetrec::ConfigError("--mode must be direct or neighbors");
  }
  if (!filters_path.empty()) {
    std::ifstream in(filters_path);
    if (!in) throw hetrec::ConfigError("cannot open filters file: " + filters_path.string());
    json j;
    in >> j;
    request.filters = hetrec::filters_from_json(j);
  }

  auto graph = hetrec::build_graph(records, registry);
  auto matrix = hetrec::build_transition(graph, weights);
  hetrec::SolverConfig solver;
  solver.alpha = alpha;
  hetrec::InteractionMatrixView view;
  if (fallback_popular) view = hetrec::InteractionMatrixView(records, registry);

  std::string csv = "user_id,rank,item_id,score\n";
  char buf[64];
  for (const auto& user : users) {
    request.user_id = user;
    hetrec::RankedList list;
    try {
      list = hetrec::recommend_with(matrix, graph, request, solver);
    } catch (const hetrec::UnknownUserError&) {
      if (!fallback_popular) throw;
      list = hetrec::most_popular(view, target_tag, request);
      list.used_fallback = true;
      note("user '" + user + "' not in graph; popularity fallback");
    }
    int rank = 1;
    for (const auto& item : list.items) {
      std::snprintf(buf, sizeof(buf), "%.10g", item.score);
      csv += hetrec::csv::escape_field(user) + "," + std::to_string(rank++) + "," +
             hetrec::csv::escape_field(item.id) + "," + buf + "\n";
    }
  }
  if (out_file.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    hetrec::write_file_atomic(out_file, csv);
  }
  return 0;
}

// -------------------------------------------------------------- convert ----

// Mapping-driven adapter: each input file contributes records whose fields
// come either from a named column or from a constant. Guards against silent
// upstream drift via optional per-file sha256 pins.
int cmd_convert(const fs::path& adapter_path, const fs::path& out_path) {
  std::ifstream in(adapter_path);
  if (!in) throw hetrec::ConfigError("cannot open adapter config: " + adapter_path.string());
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw hetrec::ConfigError(adapter_path.string() + ": " + e.what());
  }

  std::vector<hetrec::InteractionRecord> records;
  for (const auto& input : spec.at("inputs")) {
    fs::path file = input.at("file").get<std::string>();
    if (file.is_relative()) file = adapter_path.parent_path() / file;
    if (input.contains("sha256")) {
      const std::string expected = input.at("sha256").get<std::string>();
      const std::string actual = hetrec::sha256_file(file);
      if (actual != expected)
        throw hetrec::DataError(file.string() + ": content hash mismatch (expected " + expected +
                                ", got " + actual + "); upstream layout may have changed");
    }
    const std::string delim_str = input.value("delimiter", std::string(","));
    if (delim_str.size() != 1) throw hetrec::ConfigError("delimiter must be one character");
    const char delim = delim_str[0];
    const std::string ts_format = input.value("timestamp_format", std::string("iso8601"));

    const auto lines = hetrec::csv::read_lines(file.string());
    if (lines.empty()) throw hetrec::DataError(file.string() + ": empty input");
    auto header = hetrec::csv::split_line(lines[0], delim);
    std::map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < header.size(); ++i) column_index[header[i]] = i;

    const json columns = input.value("columns", json::object());
    const json constants = input.value("constants", json::object());
    auto field = [&](const std::string& name, const std::vector<std::string>& row,
                     std::size_t line_no) -> std::string {
      if (constants.contains(name)) return constants.at(name).get<std::string>();
      if (!columns.contains(name))
        throw hetrec::ConfigError(file.string() + ": field '" + name +
                                  "' has neither a column mapping nor a constant");
      const std::string col = columns.at(name).get<std::string>();
      auto it = column_index.find(col);
      if (it == column_index.end())
        throw hetrec::DataError(file.string() + ": column '" + col + "' not in header");
      if (it->second >= row.size())
        throw hetrec::DataError(file.string() + ":" + std::to_string(line_no) + ": short row");
      return row[it->second];
    };

    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto row = hetrec::csv::split_line(lines[i], delim);
      hetrec::InteractionRecord r;
      r.user_id = field("user_id", row, i + 1);
      r.object_id = field("object_id", row, i + 1);
      r.object_tag = field("object_tag", row, i + 1);
      r.interaction = field("interaction", row, i + 1);
      const std::string ts = field("timestamp", row, i + 1);
      try {
        if (ts_format == "iso8601") {
          r.timestamp = hetrec::parse_iso8601_utc(ts);
        } else if (ts_format == "epoch_seconds") {
          r.timestamp = std::stoll(ts);
        } else if (ts_format == "epoch_millis") {
          r.timestamp = std::stoll(ts) / 1000;
        } else {
          throw hetrec::ConfigError("unknown timestamp_format '" + ts_format + "'");
        }
      } catch (const std::invalid_argument&) {
        throw hetrec::DataError(file.string() + ":" + std::to_string(i + 1) +
                                ": unparseable timestamp '" + ts + "'");
      }
      records.push_back(std::move(r));
    }
    note(file.string() + ": " + std::to_string(lines.size() - 1) + " rows");
  }
  hetrec::save_interactions_csv(out_path, records);
  std::printf("wrote %s (%zu records)\n", out_path.string().c_str(), records.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-based recommender for sparse heterogeneous interaction data"};
  app.set_version_flag("--version", std::string(hetrec::kVersion));
  app.require_subcommand(1);
  app.add_flag("--verbose", g_verbose, "diagnostic output on stderr");

  // stats
  auto* stats = app.add_subcommand("stats", "dataset statistics (counts, shares, sparsity)");
  fs::path st_dataset, st_schema, st_out;
  std::string st_split_kind, st_split_interaction, st_split_tag;
  double st_split_fraction = 0.1;
  stats->add_option("--dataset", st_dataset, "interaction log CSV")->required();
  stats->add_option("--schema", st_schema, "schema JSON")->required();
  stats->add_option("--split-kind", st_split_kind, "leave_one_out | temporal");
  stats->add_option("--split-interaction", st_split_interaction, "target interaction");
  stats->add_option("--split-tag", st_split_tag, "target tag (leave_one_out)");
  stats->add_option("--split-fraction", st_split_fraction, "test share (temporal)");
  stats->add_option("--out-dir", st_out, "write stats.json and manifest.json here");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "learn edge weights with the genetic algorithm");
  fs::path op_config, op_out = "out";
  int op_seeds = -1;
  bool op_undirected = false;
  optimize->add_option("--config", op_config, "experiment config JSON")->required();
  optimize->add_option("--seeds", op_seeds, "independent seeded runs (averaged weights)");
  optimize->add_flag("--undirected", op_undirected, "one weight per interaction, tied directions");
  optimize->add_option("--out-dir", op_out, "output directory");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "run the evaluation protocol over models");
  fs::path ev_config, ev_weights, ev_out;
  std::vector<std::string> ev_models;
  double ev_sample_fraction = -1.0;
  int ev_sample_seeds = 1;
  evaluate->add_option("--config", ev_config, "experiment config JSON")->required();
  evaluate->add_option("--model", ev_models, "override the config's model list (repeatable)");
  evaluate->add_option("--weights", ev_weights, "weight file for overridden weighted models");
  evaluate->add_option("--sample-fraction", ev_sample_fraction, "training subsample share");
  evaluate->add_option("--sample-seeds", ev_sample_seeds, "number of subsample repetitions");
  evaluate->add_option("--out-dir", ev_out, "write report.json, per_user.csv, manifest.json");

  // recommend
  auto* recommend = app.add_subcommand("recommend", "ranked recommendations for users");
  fs::path rc_dataset, rc_schema, rc_weights, rc_users_file, rc_filters, rc_out;
  std::vector<std::string> rc_users;
  std::string rc_tag = "course", rc_mode = "direct";
  double rc_alpha = 0.3;
  int rc_k = 10, rc_neighbors = 90;
  bool rc_fallback = false;
  recommend->add_option("--dataset", rc_dataset, "interaction log CSV")->required();
  recommend->add_option("--schema", rc_schema, "schema JSON")->required();
  recommend->add_option("--weights", rc_weights, "weight file (uniform when omitted)");
  recommend->add_option("--user", rc_users, "user id (repeatable)");
  recommend->add_option("--users-file", rc_users_file, "file with one user id per line");
  recommend->add_option("--target-tag", rc_tag, "recommendable content tag");
  recommend->add_option("--mode", rc_mode, "direct | neighbors");
  recommend->add_option("--alpha", rc_alpha, "walk termination probability");
  recommend->add_option("--k", rc_k, "list length");
  recommend->add_option("--neighbors", rc_neighbors, "neighborhood size (neighbors mode)");
  recommend->add_flag("--fallback-popular", rc_fallback, "serve unknown users the popular list");
  recommend->add_option("--filters", rc_filters, "filter rules JSON");
  recommend->add_option("--out", rc_out, "output CSV (stdout when omitted)");

  // convert
  auto* convert = app.add_subcommand("convert", "convert upstream logs to the canonical CSV");
  fs::path cv_adapter, cv_out;
  convert->add_option("--adapter", cv_adapter, "adapter config JSON")->required();
  convert->add_option("--out", cv_out, "canonical CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (stats->parsed())
      return cmd_stats(st_dataset, st_schema, st_split_kind, st_split_interaction, st_split_tag,
                       st_split_fraction, st_out);
    if (optimize->parsed())
      return cmd_optimize(op_config, op_seeds >= 0 ? std::optional<int>(op_seeds) : std::nullopt,
                          op_undirected ? std::optional<bool>(true) : std::nullopt, op_out);
    if (evaluate->parsed())
      return cmd_evaluate(ev_config, ev_models, ev_weights,
                          ev_sample_fraction >= 0.0 ? std::optional<double>(ev_sample_fraction)
                                                    : std::nullopt,
                          ev_sample_seeds, ev_out);
    if (recommend->parsed())
      return cmd_recommend(rc_dataset, rc_schema, rc_weights, rc_users, rc_users_file, rc_tag,
                           rc_mode, rc_alpha, rc_k, rc_neighbors, rc_fallback, rc_filters,
                           rc_out);
    if (convert->parsed()) return cmd_convert(cv_adapter, cv_out);
  } catch (const hetrec::ConfigError& e) {
    std::cerr << "hetrec: config error: " << e.what() << "\n";
    return 1;
  } catch (const hetrec::DataError& e) {
    std::cerr << "hetrec: data error: " << e.what() << "\n";
    return 2;
  } catch (const hetrec::ComputeError& e) {
    std::cerr << "hetrec: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "hetrec: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
