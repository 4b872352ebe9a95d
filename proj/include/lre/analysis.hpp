// include/lre/analysis.hpp

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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lre/score_set.hpp"
#include "lre/scoring.hpp"
#include "lre/trial_model.hpp"

namespace lre {

/// cells(i, i) = P_Miss of language i; cells(i, j) = P_FA with i as the
/// target and j as the non-target. All at the Bayes threshold of `app`.
struct ConfusionMatrix {
  LanguageSet languages;
  ApplicationParams app;
  Eigen::MatrixXd cells;
};

ConfusionMatrix confusion(const ScoreSet& scores, const TrialKey& key,
                          const ApplicationParams& app = {1.0, 1.0, 0.5});

struct LeaderboardRow {
  std::string system_id;
  std::string condition_tag;
  double act_c_primary = 0;
  double min_c_primary = 0;
  double calibration_gap = 0;
};

/// Ascending by act_c_primary, ties by system_id.
std::vector<LeaderboardRow> leaderboard(std::span<const ScoreReport> reports);

struct PartitionReport {
  std::string label;
  std::size_t n_segments = 0;
  ScoreReport report;
};

struct SkippedCell {
  std::string label;
  std::size_t n_segments = 0;
  std::string reason;
};

struct PartitionResult {
  std::vector<PartitionReport> cells;
  std::vector<SkippedCell> skipped;
  std::vector<std::size_t> unassigned;  // key rows outside every cell
};

/// Scores each partition cell as its own key. Pairs whose classes are
/// absent from a cell are dropped from that cell's means; cells with
/// fewer than two populated languages are skipped.
PartitionResult partition_scores(
    const ScoreSet& scores, const TrialKey& key, const ApplicationSet& apps,
    const PartitionSpec& spec,
    ThresholdScope scope = ThresholdScope::kPerTarget);

struct DispersionRow {
  std::string system_id;
  std::string language;
  double act = 0;
};

/// Long-format per-language actual C_Primary, one row per (system,
/// language), in input order.
std::vector<DispersionRow> language_dispersion(
    std::span<const ScoreReport> reports);

}  // namespace lre
