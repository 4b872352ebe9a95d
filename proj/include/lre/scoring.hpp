// include/lre/scoring.hpp

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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lre/score_set.hpp"
#include "lre/trial_model.hpp"

namespace lre {

/// One operating point of the detection cost model.
struct ApplicationParams {
  double c_miss = 1.0;
  double c_fa = 1.0;
  double p_target = 0.5;

  double miss_weight() const { return c_miss * p_target; }
  double fa_weight() const { return c_fa * (1.0 - p_target); }
  /// Cost of the better of accept-all / reject-all.
  double no_information_cost() const {
    return std::min(miss_weight(), fa_weight());
  }

  /// Throws kInvalidArgument.
  void validate() const;
};

using ApplicationSet = std::vector<ApplicationParams>;

/// (1, 1, 0.5) and (1, 1, 0.1).
ApplicationSet default_applications();
void validate_applications(const ApplicationSet& apps);

enum class ThresholdScope { kGlobal, kPerTarget, kPerPair };

std::string_view to_string(ThresholdScope scope);
/// "global" | "target" | "pair"; throws kInvalidArgument.
ThresholdScope parse_scope(std::string_view text);

/// Segments x languages; column t holds every segment's LLR for target t.
using LlrMatrix = Eigen::MatrixXd;

/// Log-likelihood ratio of `target` against the uniform mixture of the
/// other languages:
///   s[t] - log( sum_{j != t} exp(s[j]) / (N - 1) )
template <typename Derived>
typename Derived::Scalar llr(const Eigen::MatrixBase<Derived>& scores,
                             Eigen::Index target) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = scores.size();
  const Scalar own = scores(target);
  // Work on differences to the target score so a constant added to the
  // whole row cancels before any rounding.
  Scalar peak = -std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index j = 0; j < n; ++j)
    if (j != target) peak = std::max(peak, Scalar(scores(j) - own));
  Scalar sum(0);
  for (Eigen::Index j = 0; j < n; ++j)
    if (j != target) sum += std::exp((scores(j) - own) - peak);
  // log(N - 1) appears twice so all-equal rows give exactly zero.
  return std::log(static_cast<Scalar>(n - 1)) - (peak + std::log(sum));
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
llr_matrix(const Eigen::MatrixBase<Derived>& scores) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      scores.rows(), scores.cols());
  for (Eigen::Index r = 0; r < scores.rows(); ++r)
    for (Eigen::Index t = 0; t < scores.cols(); ++t)
      out(r, t) = llr(scores.row(r), t);
  return out;
}

LlrMatrix llr_matrix(const ScoreSet& set);

/// ln( c_fa (1 - p_target) / (c_miss p_target) ).
double bayes_threshold(const ApplicationParams& app);

struct PairRates {
  std::size_t target = 0;
  std::size_t nontarget = 0;
  double p_miss = 0;
  double p_fa = 0;
  std::size_t n_target_trials = 0;
  std::size_t n_nontarget_trials = 0;
};

/// Accept iff llr >= threshold. Throws kEmptyClass when either language
/// has no trials.
PairRates pair_rates(const LlrMatrix& llrs, const TrialKey& key,
                     std::size_t target, std::size_t nontarget,
                     double threshold);

/// Weighted miss/false-alarm cost divided by the no-information cost.
double normalized_cost(double p_miss, double p_fa,
                       const ApplicationParams& app);
double pair_cost(const PairRates& rates, const ApplicationParams& app);

struct MinCost {
  double threshold = 0;
  double cost = 0;
};

/// A target together with the non-targets it is evaluated against.
struct TargetPairs {
  std::size_t target = 0;
  std::vector<std::size_t> nontargets;
};

/// One shared threshold for every pair in `group`; minimizes the mean
/// normalized cost over those pairs. Candidates are -inf, +inf and
/// midpoints between consecutive distinct LLRs; ties go to the smallest
/// threshold.
MinCost min_pair_cost(const LlrMatrix& llrs, const TrialKey& key,
                      std::span<const TargetPairs> group,
                      const ApplicationParams& app);

/// Convenience form: the group implied by `scope` around `target`
/// (`nontarget` is required for kPerPair and ignored otherwise).
MinCost min_pair_cost(const LlrMatrix& llrs, const TrialKey& key,
                      std::size_t target, ThresholdScope scope,
                      const ApplicationParams& app,
                      std::size_t nontarget = static_cast<std::size_t>(-1));

struct PairResult {
  PairRates actual;  // at the Bayes threshold
  double act_cost = 0;
  PairRates at_min;  // at the minimizing threshold
  double min_threshold = 0;
  double min_cost = 0;
};

struct LanguageCost {
  std::size_t language = 0;
  double act = 0;
  double min = 0;
};

struct AppReport {
  ApplicationParams params;
  double bayes_threshold = 0;
  std::vector<PairResult> pairs;  // (target, nontarget) lexicographic
  std::vector<LanguageCost> per_language;
  double act = 0;
  double min = 0;
};

struct ScoreReport {
  std::string system_id;
  std::string condition_tag;
  ThresholdScope scope = ThresholdScope::kPerTarget;
  std::vector<std::string> languages;
  std::size_t n_segments = 0;
  std::vector<AppReport> apps;
  std::vector<LanguageCost> per_language;  // averaged over apps
  // Pairs left out because a class had no trials (kDropPairs only).
  std::vector<std::pair<std::size_t, std::size_t>> dropped_pairs;
  double act_c_primary = 0;
  double min_c_primary = 0;
  double calibration_gap = 0;
};

enum class EmptyClassPolicy { kError, kDropPairs };

/// Scores a system at every application and averages. Pair costs are
/// summed per target in non-target order, then over targets in index
/// order, so results do not depend on how callers parallelize.
ScoreReport c_primary(const ScoreSet& scores, const TrialKey& key,
                      const ApplicationSet& apps = default_applications(),
                      ThresholdScope scope = ThresholdScope::kPerTarget,
                      EmptyClassPolicy policy = EmptyClassPolicy::kError);

/// Same metric starting from precomputed LLRs.
ScoreReport c_primary_llr(const LlrMatrix& llrs, const TrialKey& key,
                          const ApplicationSet& apps, ThresholdScope scope,
                          EmptyClassPolicy policy = EmptyClassPolicy::kError,
                          std::string system_id = {});

}  // namespace lre
