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

#include "acav/probe/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "acav/core/error.hpp"

namespace acav::probe {
namespace {

std::string real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const char* kColumns[] = {"schema",        "config_hash",    "seed",
                          "concept",       "kinds",          "count",
                          "scale",         "intensity",      "layer",
                          "layer_index",   "n",              "sim_original",
                          "sim_augmented", "abs_deviation",  "delta_v",
                          "flip_rate",     "literal_ratio",  "flipped",
                          "preserved",     "aug_abstained",  "angle_healthy",
                          "angle_diseased", "angle_original_healthy", "angle_original_diseased"};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string report_csv(const AcavReport& report) {
  std::string out;
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out += (i ? "," : "") + std::string(kColumns[i]);
  out += '\n';
  for (const auto& r : report.rows) {
    const std::string cells[] = {std::to_string(kReportSchema),
                                 report.config_hash,
                                 std::to_string(report.seed),
                                 r.concept_name,
                                 r.kinds,
                                 std::to_string(r.count),
                                 r.scale,
                                 real(r.intensity),
                                 r.layer,
                                 std::to_string(r.layer_index),
                                 std::to_string(r.samples),
                                 real(r.sim_original),
                                 real(r.sim_augmented),
                                 real(r.abs_deviation),
                                 real(r.delta_v),
                                 real(r.flip_rate),
                                 real(r.literal_ratio),
                                 std::to_string(r.flipped),
                                 std::to_string(r.preserved),
                                 std::to_string(r.aug_abstained),
                                 real(r.angle_healthy),
                                 real(r.angle_diseased),
                                 real(r.angle_original_healthy),
                                 real(r.angle_original_diseased)};
    for (std::size_t i = 0; i < std::size(cells); ++i) {
      if (cells[i].find_first_of(",\n\"") != std::string::npos) {
        throw ConfigError("report field contains a comma or quote: " + cells[i]);
      }
      out += (i ? "," : "") + cells[i];
    }
    out += '\n';
  }
  return out;
}

std::string report_markdown(const AcavReport& report) {
  std::string md;
  md += "| Augmented Pattern Type | Layer | Average Norm Vector Original Image | Average Norm Vector Augmented Image "
        "| Average Absolute Deviation | Mean dV | Flip Rate | n |\n";
  md += "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    md += "| " + r.concept_name + " | " + r.layer + " | " + fixed(r.sim_original, 3) + " | " +
          fixed(r.sim_augmented, 3) + " | " + fixed(r.abs_deviation, 2) + " | " + fixed(r.delta_v, 3) + " | " +
          fixed(r.flip_rate, 2) + " | " + std::to_string(r.samples) + " |\n";
  }
  md += "\n| Concept | Layer | Reference Vector | Angle (degrees) |\n|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    md += "| " + r.concept_name + " | " + r.layer + " | Healthy | " + fixed(r.angle_healthy, 1) + " |\n";
    md += "| " + r.concept_name + " | " + r.layer + " | Diseased | " + fixed(r.angle_diseased, 1) + " |\n";
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "\nPattern entropy H = %.4f nats; seed %llu; config %s\n", report.entropy,
                static_cast<unsigned long long>(report.seed), report.config_hash.c_str());
  md += buf;
  return md;
}

std::string report_footer_json(const AcavReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchema;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  j["entropy"] = report.entropy;
  j["entropy_base"] = "e";
  nlohmann::ordered_json props = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.proportions) props[k] = v;
  j["proportions"] = std::move(props);
  j["margin"] = report.margin;
  j["pool_size"] = report.pool_size;
  j["eligible"] = report.eligible;
  j["rows"] = report.rows.size();
  return j.dump(2) + "\n";
}

ReportFiles write_report(const AcavReport& report, const std::filesystem::path& dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  ReportFiles files{dir / (stem + ".csv"), dir / (stem + ".md"), dir / (stem + ".json")};
  const std::pair<const std::filesystem::path*, std::string> outputs[] = {
      {&files.csv, report_csv(report)},
      {&files.markdown, report_markdown(report)},
      {&files.footer, report_footer_json(report)}};
  for (const auto& [path, text] : outputs) {
    std::ofstream out(*path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path->string());
    out << text;
  }
  return files;
}

std::size_t ReportTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw MergeError("report is missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

ReportTable parse_report_csv(const std::string& text) {
  ReportTable t;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw MergeError("empty report file");
  t.header = split(line, ',');
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw MergeError("report row has " + std::to_string(cells.size()) +
                                                          " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  const std::size_t schema = t.column("schema");
  for (const auto& r : t.rows) {
    if (r[schema] != std::to_string(kReportSchema)) {
      throw MergeError("report schema version " + r[schema] + " does not match " + std::to_string(kReportSchema));
    }
  }
  return t;
}

ReportTable read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_report_csv(ss.str());
}

MergedReport merge_reports(const std::vector<ReportTable>& tables) {
  if (tables.empty()) throw MergeError("nothing to merge");

  struct Row {
    std::string concept_name, kinds, layer, scale;
    long count = 0;
    std::map<std::string, std::string> metrics;
  };
  using RunKey = std::pair<std::string, std::string>;  // (seed, config hash)
  std::map<RunKey, std::vector<Row>> runs;
  const char* metric_names[] = {"abs_deviation", "delta_v", "flip_rate", "angle_healthy", "angle_diseased"};

  for (const auto& t : tables) {
    const std::size_t c_hash = t.column("config_hash"), c_seed = t.column("seed"), c_concept = t.column("concept"),
                      c_kinds = t.column("kinds"), c_layer = t.column("layer"), c_scale = t.column("scale"),
                      c_count = t.column("count");
    std::map<RunKey, std::vector<Row>> local;
    for (const auto& r : t.rows) {
      Row row{r[c_concept], r[c_kinds], r[c_layer], r[c_scale], std::stol(r[c_count]), {}};
      for (const char* m : metric_names) row.metrics[m] = r[t.column(m)];
      local[{r[c_seed], r[c_hash]}].push_back(std::move(row));
    }
    for (auto& [key, rows] : local) runs.try_emplace(key, std::move(rows));
  }

  // Column label per run: the seed, plus a hash prefix when a seed repeats.
  std::map<std::string, int> seed_uses;
  for (const auto& [key, rows] : runs) ++seed_uses[key.first];
  std::map<RunKey, std::string> label;
  for (const auto& [key, rows] : runs) {
    label[key] = "s" + key.first + (seed_uses[key.first] > 1 ? "_" + key.second.substr(0, 8) : "");
  }

  MergedReport out;
  out.runs = runs.size();
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>> merged;
  for (const auto& [key, rows] : runs) {
    for (const auto& row : rows) {
      auto& cells = merged[{row.concept_name, row.layer}];
      for (const auto& [m, v] : row.metrics) cells[m + "@" + label[key]] = v;
    }
  }
  std::string& csv = out.merged_csv;
  csv = "concept,layer";
  for (const auto& [key, rows] : runs)
    for (const char* m : metric_names) csv += std::string(",") + m + "@" + label[key];
  csv += '\n';
  for (const auto& [ck, cells] : merged) {
    csv += ck.first + "," + ck.second;
    for (const auto& [key, rows] : runs) {
      for (const char* m : metric_names) {
        const auto it = cells.find(std::string(m) + "@" + label[key]);
        csv += "," + (it == cells.end() ? std::string() : it->second);
      }
    }
    csv += '\n';
  }

  auto scale_rank = [](const std::string& s) { return s == "small" ? 0 : s == "medium" ? 1 : s == "large" ? 2 : 3; };
  std::vector<std::tuple<std::string, std::string, std::string, int, std::string, std::string, std::string>> angle;
  std::vector<std::tuple<std::string, std::string, std::string, long, std::string, std::string>> dev;
  for (const auto& [key, rows] : runs) {
    for (const auto& row : rows) {
      angle.emplace_back(row.kinds, row.layer, label[key], scale_rank(row.scale), row.scale,
                         row.metrics.at("angle_healthy"), row.metrics.at("angle_diseased"));
      dev.emplace_back(row.kinds, row.layer, label[key], row.count, row.metrics.at("abs_deviation"),
                       row.metrics.at("delta_v"));
    }
  }
  std::sort(angle.begin(), angle.end());
  std::sort(dev.begin(), dev.end());
  out.angle_vs_scale_csv = "series,layer,run,scale_rank,scale,angle_healthy,angle_diseased\n";
  for (const auto& [series, layer, run, rank, scale, ah, ad] : angle) {
    out.angle_vs_scale_csv += series + "," + layer + "," + run + "," + std::to_string(rank) + "," + scale + "," + ah +
                              "," + ad + "\n";
  }
  out.deviation_vs_count_csv = "series,layer,run,count,abs_deviation,delta_v\n";
  for (const auto& [series, layer, run, count, ad, dv] : dev) {
    out.deviation_vs_count_csv +=
        series + "," + layer + "," + run + "," + std::to_string(count) + "," + ad + "," + dv + "\n";
  }
  return out;
}

}  // namespace acav::probe
