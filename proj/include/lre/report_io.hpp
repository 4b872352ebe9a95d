// include/lre/report_io.hpp

// Copyright 2026  lre-eval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Machine-readable outputs. TSV numbers use %.6f; JSON numbers are
// written at full round-trip precision, with non-finite thresholds as
// the strings "inf" / "-inf".

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lre/analysis.hpp"
#include "lre/scoring.hpp"

namespace lre {

std::string format_fixed(double value);

std::string report_json(const ScoreReport& report);
ScoreReport parse_report_json(const std::string& text);
ScoreReport read_report_json(const std::filesystem::path& path);

/// Writes <id>.json, <id>.pairs.tsv and <id>.languages.tsv under `dir`
/// (created if needed) and returns the paths.
std::vector<std::filesystem::path> write_report(
    const ScoreReport& report, const std::filesystem::path& dir);

void write_leaderboard(const std::filesystem::path& path,
                       std::span<const LeaderboardRow> rows);

/// N+1 rows by N+1 columns including the header row and label column.
void write_confusion(const std::filesystem::path& path,
                     const ConfusionMatrix& matrix);

/// One row per scored cell per system, cells in partition order.
void write_partition_tsv(const std::filesystem::path& path,
                         std::span<const PartitionResult> results);
void write_partition_json(const std::filesystem::path& path,
                          std::span<const PartitionResult> results);

void write_dispersion(const std::filesystem::path& path,
                      std::span<const DispersionRow> rows);

/// File-name-safe form of a system id.
std::string file_stem(const std::string& system_id);

}  // namespace lre
