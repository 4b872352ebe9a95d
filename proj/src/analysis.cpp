// src/analysis.cpp

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

#include "lre/analysis.hpp"

#include <algorithm>
#include <tuple>

#include "lre/error.hpp"

namespace lre {

ConfusionMatrix confusion(const ScoreSet& scores, const TrialKey& key,
                          const ApplicationParams& app) {
  app.validate();
  check_aligned(scores, key);
  const LlrMatrix llrs = llr_matrix(scores.scores);
  const std::size_t n = key.languages().size();
  const double threshold = bayes_threshold(app);
  ConfusionMatrix out{key.languages(), app, Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const PairRates r = pair_rates(llrs, key, i, j, threshold);
      out.cells(i, j) = r.p_fa;
      out.cells(i, i) = r.p_miss;
    }
  }
  return out;
}

std::vector<LeaderboardRow> leaderboard(std::span<const ScoreReport> reports) {
  std::vector<LeaderboardRow> rows;
  rows.reserve(reports.size());
  for (const ScoreReport& r : reports)
    rows.push_back({r.system_id, r.condition_tag, r.act_c_primary,
                    r.min_c_primary, r.calibration_gap});
  std::sort(rows.begin(), rows.end(),
            [](const LeaderboardRow& a, const LeaderboardRow& b) {
              return std::tie(a.act_c_primary, a.system_id, a.min_c_primary,
                              a.condition_tag) <
                     std::tie(b.act_c_primary, b.system_id, b.min_c_primary,
                              b.condition_tag);
            });
  return rows;
}

namespace {

ScoreSet subset_scores(const ScoreSet& scores,
                       std::span<const std::size_t> rows) {
  ScoreMatrix picked(static_cast<Eigen::Index>(rows.size()),
                     scores.scores.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    picked.row(static_cast<Eigen::Index>(i)) =
        scores.scores.row(static_cast<Eigen::Index>(rows[i]));
  return {scores.system_id, scores.condition_tag, scores.languages,
          std::move(picked)};
}

}  // namespace

PartitionResult partition_scores(const ScoreSet& scores, const TrialKey& key,
                                 const ApplicationSet& apps,
                                 const PartitionSpec& spec,
                                 ThresholdScope scope) {
  check_aligned(scores, key);
  Partition parts = partition(key, spec);
  PartitionResult out;
  out.unassigned = std::move(parts.unassigned);
  for (PartitionCell& cell : parts.cells) {
    const TrialKey sub_key = key.subset(cell.rows);
    const auto counts = sub_key.language_counts();
    const auto populated =
        std::count_if(counts.begin(), counts.end(),
                      [](std::size_t c) { return c > 0; });
    if (populated < 2) {
      out.skipped.push_back({cell.label, cell.rows.size(),
                             "fewer than two languages have trials"});
      continue;
    }
    ScoreReport report = c_primary(subset_scores(scores, cell.rows), sub_key,
                                   apps, scope, EmptyClassPolicy::kDropPairs);
    out.cells.push_back({cell.label, cell.rows.size(), std::move(report)});
  }
  return out;
}

std::vector<DispersionRow> language_dispersion(
    std::span<const ScoreReport> reports) {
  std::vector<DispersionRow> rows;
  for (const ScoreReport& r : reports)
    for (const LanguageCost& lc : r.per_language)
      rows.push_back({r.system_id, r.languages.at(lc.language), lc.act});
  return rows;
}

}  // namespace lre
