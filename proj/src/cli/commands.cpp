// Copyright 2026 The ACAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acav/cli/commands.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acav/cli/config.hpp"
#include "acav/cli/hash.hpp"
#include "acav/cli/pipeline.hpp"
#include "acav/core/error.hpp"
#include "acav/core/log.hpp"
#include "acav/nn/checkpoint.hpp"
#include "acav/nn/selftest.hpp"
#include "acav/probe/metrics.hpp"
#include "acav/probe/report.hpp"

namespace acav::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Options {
  std::string config;
  std::string out;
  std::string checkpoint;
  std::string data;
  std::string format = "md";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  std::vector<std::string> reports;
  std::size_t models = 100;
  std::size_t cases = 100;
};

class RunManifest {
 public:
  RunManifest(std::string command, std::string config_hash, std::uint64_t seed)
      : command_(std::move(command)), config_hash_(std::move(config_hash)), seed_(seed) {}

  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }
  void timing(const std::string& name, Clock::time_point start) {
    timings_.emplace_back(name, std::chrono::duration<double>(Clock::now() - start).count());
  }
  void note(const std::string& key, ordered_json value) { extra_[key] = std::move(value); }

  fs::path write(const fs::path& dir) const {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["tool"] = "acav";
    doc["tool_version"] = ACAV_VERSION;
    doc["command"] = command_;
    doc["config_hash"] = config_hash_;
    doc["seed"] = seed_;
    doc["threads"] = omp_get_max_threads();
    doc["inputs"] = files(inputs_);
    doc["outputs"] = files(outputs_);
    ordered_json t = ordered_json::object();
    for (const auto& [name, s] : timings_) t[name] = s;
    doc["timings_s"] = std::move(t);
    for (const auto& [k, v] : extra_.items()) doc[k] = v;
    const fs::path path = dir / ("run_" + command_ + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write run manifest " + path.string());
    out << doc.dump(2) << "\n";
    return path;
  }

 private:
  static ordered_json files(const std::vector<fs::path>& paths) {
    ordered_json list = ordered_json::array();
    for (const auto& p : paths) list.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    return list;
  }

  std::string command_;
  std::string config_hash_;
  std::uint64_t seed_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
  std::vector<std::pair<std::string, double>> timings_;
  ordered_json extra_ = ordered_json::object();
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

ExperimentConfig config_of(const Options& o) {
  return load_config(o.config, o.seed_given ? std::optional<std::uint64_t>(o.seed) : std::nullopt);
}

fs::path dataset_dir(const Options& o, const ExperimentConfig& c) {
  if (!o.data.empty()) return o.data;
  if (c.data_dir) return *c.data_dir;
  throw ConfigError("no dataset given: pass --data or set data_dir in the config");
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string csv_as_markdown(const std::string& csv) {
  const auto rows = split_csv(csv);
  if (rows.empty()) return "";
  std::ostringstream md;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    md << "|";
    for (const auto& c : rows[r]) md << " " << c << " |";
    md << "\n";
    if (r == 0) {
      md << "|";
      for (std::size_t i = 0; i < rows[0].size(); ++i) md << "---|";
      md << "\n";
    }
  }
  return md.str();
}

std::string csv_as_json(const std::string& csv) {
  const auto rows = split_csv(csv);
  ordered_json list = ordered_json::array();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < rows[0].size() && i < rows[r].size(); ++i) obj[rows[0][i]] = rows[r][i];
    list.push_back(std::move(obj));
  }
  return list.dump(2) + "\n";
}

std::string entropy_of(const std::map<synth::ConceptKind, double>& weights) {
  double total = 0.0;
  for (const auto& [k, w] : weights) total += w;
  if (total <= 0.0) return "n/a";
  std::vector<double> p;
  for (const auto& [k, w] : weights) p.push_back(w / total);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", probe::pattern_entropy(p));
  return buf;
}

int cmd_gen_data(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto config = config_of(o);
  RunManifest run("gen-data", config.hash, config.seed);
  run.input(o.config);
  const fs::path dir = o.out;
  make_dir(dir);

  const auto t1 = Clock::now();
  const auto data = synth::gen_dataset(config.dataset);
  run.timing("generate", t1);
  const auto t2 = Clock::now();
  synth::write_dataset(data, dir, config.hash);
  run.timing("write", t2);

  run.output(dir / "manifest.json");
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "sample_%05zu", i);
    run.output(dir / "images" / (std::string(stem) + (synth::channels_of(data.scene) == 3 ? ".ppm" : ".pgm")));
    run.output(dir / "masks" / (std::string(stem) + "_mask.pgm"));
  }

  std::map<synth::ConceptKind, double> empirical;
  for (const auto& [k, n] : data.totals()) empirical[k] = static_cast<double>(n);
  out << "healthy: " << data.count(synth::Label::healthy) << "\n"
      << "diseased: " << data.count(synth::Label::diseased) << "\n";
  for (const auto& [k, n] : data.totals()) out << "patterns." << synth::to_string(k) << ": " << n << "\n";
  out << "entropy_spec_nats: " << entropy_of(config.dataset.diseased_frequency) << "\n"
      << "entropy_empirical_nats: " << entropy_of(empirical) << "\n";
  run.timing("total", t0);
  run.write(dir);
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const auto config = config_of(o);
  const fs::path data_dir = dataset_dir(o, config);
  if (!fs::exists(data_dir / "manifest.json")) {
    throw IoError("dataset not found: " + (data_dir / "manifest.json").string());
  }
  RunManifest run("train", config.hash, config.seed);
  run.input(o.config);
  run.input(data_dir / "manifest.json");
  const fs::path dir = o.out;
  make_dir(dir);

  const auto t1 = Clock::now();
  const auto data = synth::read_dataset(data_dir);
  run.timing("load", t1);
  const auto t2 = Clock::now();
  const auto trained = train_model(config, data);
  run.timing("train", t2);

  const nn::TrainingMetadata meta{config.seed, config.train.epochs,
                                  trained.loss_history.empty() ? 0.0 : trained.loss_history.back()};
  const fs::path ckpt = dir / "model.ckpt";
  nn::save_checkpoint(trained.model, meta, ckpt);
  run.output(ckpt);

  std::ostringstream csv;
  csv << "epoch,loss,config_hash,seed\n";
  for (std::size_t e = 0; e < trained.loss_history.size(); ++e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", trained.loss_history[e]);
    csv << e + 1 << "," << buf << "," << config.hash << "," << config.seed << "\n";
  }
  write_text(dir / "loss_history.csv", csv.str());
  run.output(dir / "loss_history.csv");

  const bool decreasing = early_loss_decreasing(trained.loss_history);
  if (!decreasing) err << "warning: loss did not decrease strictly over the first 3 epochs; run flagged\n";
  run.note("loss_flagged", !decreasing);
  run.note("train_accuracy", trained.train_accuracy);
  out << "epochs: " << trained.loss_history.size() << "\n"
      << "final_loss: " << meta.final_loss << "\n"
      << "train_accuracy: " << trained.train_accuracy << "\n"
      << "checkpoint: " << ckpt.string() << "\n";
  run.timing("total", t0);
  run.write(dir);
  return kExitOk;
}

int cmd_probe(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto config = config_of(o);
  RunManifest run("probe", config.hash, config.seed);
  run.input(o.config);
  run.input(o.checkpoint);
  const auto ckpt = nn::load_checkpoint(o.checkpoint);

  std::map<synth::ConceptKind, double> weights;
  if (!o.data.empty() || config.data_dir) {
    const auto dir = dataset_dir(o, config);
    weights = manifest_totals(dir);
    run.input(dir / "manifest.json");
    run.note("entropy_source", "manifest");
  } else {
    weights = config.dataset.diseased_frequency;
    run.note("entropy_source", "spec");
  }

  const fs::path dir = o.out;
  make_dir(dir);
  const auto t1 = Clock::now();
  const auto report = probe_model(config, ckpt.model, weights);
  run.timing("probe", t1);
  const auto files = probe::write_report(report, dir, "report");
  run.output(files.csv);
  run.output(files.markdown);
  run.output(files.footer);
  run.note("eligible", report.eligible);

  if (o.format == "csv") {
    out << probe::report_csv(report);
  } else if (o.format == "json") {
    out << probe::report_footer_json(report);
  } else {
    out << probe::report_markdown(report);
  }
  run.timing("total", t0);
  run.write(dir);
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const auto t0 = Clock::now();
  std::vector<probe::ReportTable> tables;
  for (const auto& f : o.reports) tables.push_back(probe::read_report_csv(f));
  const auto merged = probe::merge_reports(tables);

  std::string hashes;
  for (const auto& t : tables) {
    const auto& h = t.rows.empty() ? std::string() : t.rows.front()[t.column("config_hash")];
    if (hashes.find(h) == std::string::npos) hashes += (hashes.empty() ? "" : "+") + h;
  }
  RunManifest run("report", hashes, 0);
  for (const auto& f : o.reports) run.input(f);
  const fs::path dir = o.out;
  make_dir(dir);
  write_text(dir / "merged.csv", merged.merged_csv);
  write_text(dir / "angle_vs_scale.csv", merged.angle_vs_scale_csv);
  write_text(dir / "deviation_vs_count.csv", merged.deviation_vs_count_csv);
  run.output(dir / "merged.csv");
  run.output(dir / "angle_vs_scale.csv");
  run.output(dir / "deviation_vs_count.csv");
  run.note("runs", merged.runs);

  if (o.format == "csv") {
    out << merged.merged_csv;
  } else if (o.format == "json") {
    out << csv_as_json(merged.merged_csv);
  } else {
    out << csv_as_markdown(merged.merged_csv);
  }
  run.timing("total", t0);
  run.write(dir);
  return kExitOk;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  const std::uint64_t seed = o.seed_given ? o.seed : 2026;
  const auto g = nn::gradient_suite(seed, o.models);
  const bool grad_ok = g.failures == 0;
  out << (grad_ok ? "PASS" : "FAIL") << " gradient check: " << g.models << " models, " << g.checked
      << " parameters, " << g.failures << " failures, " << g.skipped_kinks
      << " kink-skipped, max rel err " << g.max_relative_error << ", " << g.seconds << " s\n";
  const auto c = nn::conv_oracle_suite(seed, o.cases);
  const bool conv_ok = c.mismatches == 0;
  out << (conv_ok ? "PASS" : "FAIL") << " conv oracle: " << c.cases << " cases, " << c.mismatches
      << " mismatches, " << c.seconds << " s\n";
  return grad_ok && conv_ok ? kExitOk : kExitInternal;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"ACAV toolkit: synthetic data, training and concept probing"};
  app.set_version_flag("--version", std::string(ACAV_VERSION));
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker thread cap (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    auto* seed = sub->add_option("--seed", o.seed, "Override the master seed");
    seed->each([&](const std::string&) { o.seed_given = true; });
  };
  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory")->required();
    common(sub);
  };

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  with_config(gen);
  auto* train = app.add_subcommand("train", "Train the classifier on a dataset");
  with_config(train);
  train->add_option("--data", o.data, "Dataset directory (overrides data_dir)");
  auto* probe_cmd = app.add_subcommand("probe", "Run the concept augmentation sweeps");
  with_config(probe_cmd);
  probe_cmd->add_option("--checkpoint", o.checkpoint, "Trained model")->required()->check(CLI::ExistingFile);
  probe_cmd->add_option("--data", o.data, "Training dataset, for the pattern entropy");
  probe_cmd->add_option("--format", o.format, "Stdout format")->check(CLI::IsMember({"csv", "md", "json"}));
  auto* report = app.add_subcommand("report", "Merge report CSVs");
  report->add_option("files", o.reports, "Report CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", o.out, "Output directory")->required();
  report->add_option("--format", o.format, "Stdout format")->check(CLI::IsMember({"csv", "md", "json"}));
  common(report);
  auto* self = app.add_subcommand("selftest", "Gradient check and convolution oracle");
  self->add_option("--models", o.models, "Toy models for the gradient check");
  self->add_option("--cases", o.cases, "Random shapes for the convolution oracle");
  common(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUser;
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);

  try {
    if (*gen) return cmd_gen_data(o, out);
    if (*train) return cmd_train(o, out, err);
    if (*probe_cmd) return cmd_probe(o, out);
    if (*report) return cmd_report(o, out);
    if (*self) return cmd_selftest(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUser;
  } catch (const TrainingDivergedError& e) {
    err << "training diverged: " << e.what() << "\n";
    return kExitUser;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitUser;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kExitUser;
  } catch (const VersionError& e) {
    err << "version error: " << e.what() << "\n";
    return kExitUser;
  } catch (const MergeError& e) {
    err << "merge error: " << e.what() << "\n";
    return kExitUser;
  } catch (const EmptyReferenceError& e) {
    err << "empty reference: " << e.what() << "\n";
    return kExitUser;
  } catch (const NoDecisionError& e) {
    err << "no decision: " << e.what() << "\n";
    return kExitUser;
  } catch (const ProbeError& e) {
    err << "probe error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace acav::cli
