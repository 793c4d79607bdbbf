// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "support.hpp"

namespace {

using segmap::cli::Config;
using segmap::cli::ConfigError;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissingArtifact = 3;

// Per-subcommand flags that override config keys: --min-cocitations sets
// min_cocitations, and so on.
class KeyFlags {
 public:
  void add(CLI::App* sub, const std::vector<std::string>& keys) {
    for (const auto& key : keys) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      std::string help;
      for (const auto& k : segmap::cli::config_keys()) {
        if (k.name == key) help = k.help;
      }
      options_.push_back({key, sub->add_option(flag, values_[key], help + " [config: " + key + "]")});
    }
  }

  void apply(Config& cfg) const {
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) cfg.set(key, values_.at(key));
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"segmap: extraction, coding, indices and networks for anchor-token term forms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sm_version()));

  std::string config_file;
  std::vector<std::string> assignments;
  std::string out_dir, threads, seed;
  app.add_option("-c,--config", config_file, "TOML-style key = value configuration file");
  app.add_option("--set", assignments, "override one configuration key (key=value); repeatable");
  app.add_option("-o,--out-dir", out_dir, "artifact directory [config: out_dir]");
  app.add_option("--threads", threads, "worker threads, 0 = all cores [config: threads]");
  app.add_option("--seed", seed, "community detection seed [config: seed]");
  app.fallthrough();

  KeyFlags flags;
  auto* ingest = app.add_subcommand("ingest", "load a bibliographic CSV export into the corpus store");
  flags.add(ingest, {"corpus", "anchor", "column_map"});
  auto* extract = app.add_subcommand("extract", "extract candidate bigrams and trigrams ending in the anchor");
  flags.add(extract, {"lexicon_dir", "anchor"});

  segmap::cli::CodeArgs code_args;
  auto* code = app.add_subcommand("code", "coding journal: import, decide, resolve, stats, discrepancies, export");
  code->require_subcommand(1);
  flags.add(code, {"journal", "min_coders", "require_all_registered"});
  auto* c_import = code->add_subcommand("import", "mark forms valid through an import override");
  c_import->add_option("--terms", code_args.terms_file, "file with one form per line");
  c_import->add_flag("--all", code_args.all, "mark every candidate valid");
  c_import->add_option("--note", code_args.note, "override note recorded in the journal");
  auto* c_decide = code->add_subcommand("decide", "record one coder verdict");
  c_decide->add_option("--term", code_args.term)->required();
  c_decide->add_option("--coder", code_args.coder)->required();
  c_decide->add_option("--verdict", code_args.verdict, "valid, invalid or discuss")->required();
  c_decide->add_option("--comment", code_args.comment);
  c_decide->add_option("--round", code_args.round, "defaults to the open round");
  auto* c_resolve = code->add_subcommand("resolve", "close the open round");
  c_resolve->add_option("--resolve", code_args.accept, "term=verdict for a discrepancy; repeatable");
  c_resolve->add_option("--defer", code_args.defer, "carry a discrepancy into the next round; repeatable");
  c_resolve->add_option("--changelog", code_args.changelog);
  auto* c_stats = code->add_subcommand("stats", "progress summary");
  auto* c_disc = code->add_subcommand("discrepancies", "forms whose coders disagree in the open round");
  auto* c_export = code->add_subcommand("export", "write the validated form set");
  for (auto* c : {c_import, c_decide, c_resolve, c_stats, c_disc, c_export}) {
    c->callback([&code_args, c] { code_args.action = c->get_name(); });
  }

  auto* metrics = app.add_subcommand("metrics", "yearly indices, fits, disciplinarity and intersectionality");
  flags.add(metrics, {"forms_source", "positions", "discipline_universe", "moving_average_window"});
  auto* conet = app.add_subcommand("conet", "form co-occurrence network, centralities and communities");
  flags.add(conet, {"forms_source", "conet_min_weight", "resolution", "slice_years"});
  auto* schol = app.add_subcommand("schol", "co-citation, bibliographic coupling and country networks");
  flags.add(schol, {"min_cocitations", "coupling_min", "country_min_docs", "top_k", "cocitation_exclude", "resolution"});
  auto* ontology = app.add_subcommand("ontology", "cluster forms and build the type network");
  flags.add(ontology, {"forms_source", "embeddings", "n_clusters", "cut_distance", "cluster_labels", "label_overrides",
                       "types", "anchor"});
  auto* serve = app.add_subcommand("serve", "HTTP API for coding and label review");
  flags.add(serve, {"host", "port", "token", "journal", "min_coders", "require_all_registered"});

  segmap::cli::ExportArgs export_args;
  auto* exp = app.add_subcommand("export", "re-export an artifact with figure filters");
  exp->add_option("--graph", export_args.graph, "conet, cocitation, coupling or countries");
  exp->add_option("--format", export_args.format, "graph format: json, graphml, centrality_csv, node_csv")
      ->check(CLI::IsMember({"json", "graphml", "centrality_csv", "node_csv"}));
  exp->add_option("--plot", export_args.plot, "comma-separated metrics series to plot as SVG");
  exp->add_option("--ontology", export_args.ontology, "labeling, ontology_json or graphml")
      ->check(CLI::IsMember({"labeling", "ontology_json", "graphml"}));
  exp->add_flag("--forms", export_args.forms, "validated forms CSV");
  exp->add_option("--output", export_args.output, "output file (default under <out_dir>/exports)");
  flags.add(exp, {"forms_source", "min_edge_weight", "min_degree", "resolution"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Config cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    for (const auto& a : assignments) cfg.set_assignment(a);
    if (!out_dir.empty()) cfg.set("out_dir", out_dir);
    if (!threads.empty()) cfg.set("threads", threads);
    if (!seed.empty()) cfg.set("seed", seed);
    flags.apply(cfg);

    if (name == "ingest") segmap::cli::run_ingest(cfg);
    if (name == "extract") segmap::cli::run_extract(cfg);
    if (name == "code") segmap::cli::run_code(cfg, code_args);
    if (name == "metrics") segmap::cli::run_metrics(cfg);
    if (name == "conet") segmap::cli::run_conet(cfg);
    if (name == "schol") segmap::cli::run_schol(cfg);
    if (name == "ontology") segmap::cli::run_ontology(cfg);
    if (name == "serve") segmap::cli::run_serve(cfg);
    if (name == "export") segmap::cli::run_export(cfg, export_args);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "segmap " << name << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const segmap::cli::MissingArtifact& e) {
    std::cerr << "segmap " << name << ": " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const std::exception& e) {
    std::cerr << "segmap " << name << ": error: " << e.what() << "\n";
    return kExitFailure;
  }
}
