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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "acav/probe/experiment.hpp"

namespace acav::probe {

inline constexpr int kReportSchema = 1;

/// One CSV row per concept x layer. Reals use %.17g, so the CSV round-trips
/// exactly; an unbounded literal ratio is written as "inf".
std::string report_csv(const AcavReport& report);

/// Deviation table (original / augmented similarity, absolute deviation)
/// followed by an angle table against both reference vectors.
std::string report_markdown(const AcavReport& report);

/// Entropy, proportions and run metadata.
std::string report_footer_json(const AcavReport& report);

struct ReportFiles {
  std::filesystem::path csv;
  std::filesystem::path markdown;
  std::filesystem::path footer;
};

ReportFiles write_report(const AcavReport& report, const std::filesystem::path& dir, const std::string& stem);

/// A report CSV read back, with the run keys it carries.
struct ReportTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws MergeError if absent
};

ReportTable read_report_csv(const std::filesystem::path& path);
ReportTable parse_report_csv(const std::string& text);

struct MergedReport {
  std::string merged_csv;          // one row per (concept, layer), metric columns per run
  std::string angle_vs_scale_csv;  // long format, one series per concept kind set
  std::string deviation_vs_count_csv;
  std::size_t runs = 0;
};

/// Rows of identical runs (same config hash and seed) are merged once.
/// Throws MergeError on schema mismatch.
MergedReport merge_reports(const std::vector<ReportTable>& tables);

}  // namespace acav::probe
