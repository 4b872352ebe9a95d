// src/scoring.cpp

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

#include "lre/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <numeric>

#include "lre/error.hpp"

namespace lre {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using RowsByLanguage = std::vector<std::vector<std::size_t>>;

RowsByLanguage rows_by_language(const TrialKey& key) {
  RowsByLanguage rows(key.languages().size());
  for (std::size_t r = 0; r < key.size(); ++r)
    rows[key.entry(r).language].push_back(r);
  return rows;
}

[[noreturn]] void empty_class(const TrialKey& key, std::size_t language) {
  throw Error(ErrorCode::kEmptyClass,
              "language '" + key.languages().code(language) +
                  "' has no trials");
}

// Rows of `column` with llr < threshold (misses when the rows are targets).
std::size_t count_below(const LlrMatrix& llrs, std::size_t column,
                        const std::vector<std::size_t>& rows,
                        double threshold) {
  const auto col = llrs.col(static_cast<Eigen::Index>(column));
  std::size_t below = 0;
  for (std::size_t r : rows)
    if (col(static_cast<Eigen::Index>(r)) < threshold) ++below;
  return below;
}

PairRates rates_from_rows(const LlrMatrix& llrs, const RowsByLanguage& rows,
                          std::size_t target, std::size_t nontarget,
                          double threshold) {
  const auto& t_rows = rows[target];
  const auto& n_rows = rows[nontarget];
  PairRates out;
  out.target = target;
  out.nontarget = nontarget;
  out.n_target_trials = t_rows.size();
  out.n_nontarget_trials = n_rows.size();
  const std::size_t misses = count_below(llrs, target, t_rows, threshold);
  const std::size_t accepted =
      n_rows.size() - count_below(llrs, target, n_rows, threshold);
  out.p_miss = static_cast<double>(misses) / static_cast<double>(t_rows.size());
  out.p_fa = static_cast<double>(accepted) / static_cast<double>(n_rows.size());
  return out;
}

// Threshold sweep over one group of pairs that share a threshold. The
// sort is done once; evaluate() is called per application.
class SortedGroup {
 public:
  SortedGroup(const LlrMatrix& llrs, const RowsByLanguage& rows,
              std::span<const TargetPairs> group)
      : group_(group.begin(), group.end()) {
    std::size_t total = 0;
    for (std::size_t s = 0; s < group_.size(); ++s) {
      const TargetPairs& tp = group_[s];
      n_target_.push_back(rows[tp.target].size());
      std::vector<std::size_t> n_non;
      total += rows[tp.target].size();
      for (std::size_t k = 0; k < tp.nontargets.size(); ++k) {
        n_non.push_back(rows[tp.nontargets[k]].size());
        total += rows[tp.nontargets[k]].size();
      }
      n_nontarget_.push_back(std::move(n_non));
      n_pairs_ += tp.nontargets.size();
    }
    elements_.reserve(total);
    for (std::size_t s = 0; s < group_.size(); ++s) {
      const TargetPairs& tp = group_[s];
      const auto col = llrs.col(static_cast<Eigen::Index>(tp.target));
      for (std::size_t r : rows[tp.target])
        elements_.push_back({col(static_cast<Eigen::Index>(r)),
                             static_cast<std::uint32_t>(s), -1});
      for (std::size_t k = 0; k < tp.nontargets.size(); ++k)
        for (std::size_t r : rows[tp.nontargets[k]])
          elements_.push_back({col(static_cast<Eigen::Index>(r)),
                               static_cast<std::uint32_t>(s),
                               static_cast<std::int32_t>(k)});
    }
    std::sort(elements_.begin(), elements_.end(),
              [](const Element& a, const Element& b) { return a.value < b.value; });
  }

  MinCost evaluate(const ApplicationParams& app) const {
    const std::size_t n_slots = group_.size();
    std::vector<std::size_t> misses(n_slots, 0);
    std::vector<std::vector<std::size_t>> accepted = n_nontarget_;
    std::vector<double> slot_cost(n_slots);
    std::vector<char> dirty(n_slots, 0);
    std::vector<std::size_t> dirty_list;

    auto cost_of = [&](std::size_t s) {
      double sum = 0;
      const double p_miss = static_cast<double>(misses[s]) /
                            static_cast<double>(n_target_[s]);
      for (std::size_t k = 0; k < accepted[s].size(); ++k)
        sum += normalized_cost(p_miss,
                               static_cast<double>(accepted[s][k]) /
                                   static_cast<double>(n_nontarget_[s][k]),
                               app);
      return sum;
    };
    auto objective = [&]() {
      double sum = 0;
      for (double c : slot_cost) sum += c;
      return sum / static_cast<double>(n_pairs_);
    };

    for (std::size_t s = 0; s < n_slots; ++s) slot_cost[s] = cost_of(s);
    MinCost best{-kInf, objective()};

    std::size_t i = 0;
    while (i < elements_.size()) {
      const double v = elements_[i].value;
      std::size_t j = i;
      for (; j < elements_.size() && elements_[j].value == v; ++j) {
        const Element& e = elements_[j];
        if (e.position < 0)
          ++misses[e.slot];
        else
          --accepted[e.slot][static_cast<std::size_t>(e.position)];
        if (!dirty[e.slot]) {
          dirty[e.slot] = 1;
          dirty_list.push_back(e.slot);
        }
      }
      for (std::size_t s : dirty_list) {
        slot_cost[s] = cost_of(s);
        dirty[s] = 0;
      }
      dirty_list.clear();

      double threshold = kInf;
      if (j < elements_.size()) {
        const double next = elements_[j].value;
        threshold = std::midpoint(v, next);
        // Adjacent doubles: the midpoint may round onto v, which would
        // accept v again.
        if (!(threshold > v)) threshold = next;
      }
      const double cost = objective();
      if (cost < best.cost) best = {threshold, cost};
      i = j;
    }
    return best;
  }

  const std::vector<TargetPairs>& group() const { return group_; }

 private:
  struct Element {
    double value;
    std::uint32_t slot;
    std::int32_t position;  // -1: target trial, else index into nontargets
  };

  std::vector<TargetPairs> group_;
  std::vector<std::size_t> n_target_;
  std::vector<std::vector<std::size_t>> n_nontarget_;
  std::size_t n_pairs_ = 0;
  std::vector<Element> elements_;
};

void check_group(const TrialKey& key, const RowsByLanguage& rows,
                 std::span<const TargetPairs> group) {
  const std::size_t n = key.languages().size();
  std::size_t pairs = 0;
  for (const TargetPairs& tp : group) {
    if (tp.target >= n)
      throw Error(ErrorCode::kInvalidArgument, "target index out of range");
    if (rows[tp.target].empty()) empty_class(key, tp.target);
    for (std::size_t nt : tp.nontargets) {
      if (nt >= n || nt == tp.target)
        throw Error(ErrorCode::kInvalidArgument,
                    "non-target index out of range or equal to the target");
      if (rows[nt].empty()) empty_class(key, nt);
    }
    pairs += tp.nontargets.size();
  }
  if (pairs == 0)
    throw Error(ErrorCode::kInvalidArgument, "threshold group has no pairs");
}

}  // namespace

void ApplicationParams::validate() const {
  if (!(std::isfinite(c_miss) && c_miss > 0))
    throw Error(ErrorCode::kInvalidArgument, "c_miss must be positive");
  if (!(std::isfinite(c_fa) && c_fa > 0))
    throw Error(ErrorCode::kInvalidArgument, "c_fa must be positive");
  if (!(p_target > 0 && p_target < 1))
    throw Error(ErrorCode::kInvalidArgument,
                "p_target must lie strictly inside (0, 1)");
}

ApplicationSet default_applications() {
  return {{1.0, 1.0, 0.5}, {1.0, 1.0, 0.1}};
}

void validate_applications(const ApplicationSet& apps) {
  if (apps.empty())
    throw Error(ErrorCode::kInvalidArgument,
                "at least one application is required");
  for (const auto& app : apps) app.validate();
}

std::string_view to_string(ThresholdScope scope) {
  switch (scope) {
    case ThresholdScope::kGlobal: return "global";
    case ThresholdScope::kPerTarget: return "target";
    case ThresholdScope::kPerPair: return "pair";
  }
  return "target";
}

ThresholdScope parse_scope(std::string_view text) {
  if (text == "global") return ThresholdScope::kGlobal;
  if (text == "target") return ThresholdScope::kPerTarget;
  if (text == "pair") return ThresholdScope::kPerPair;
  throw Error(ErrorCode::kInvalidArgument,
              "scope must be global, target or pair, not '" +
                  std::string(text) + "'");
}

LlrMatrix llr_matrix(const ScoreSet& set) { return llr_matrix(set.scores); }

double bayes_threshold(const ApplicationParams& app) {
  return std::log(app.fa_weight() / app.miss_weight());
}

PairRates pair_rates(const LlrMatrix& llrs, const TrialKey& key,
                     std::size_t target, std::size_t nontarget,
                     double threshold) {
  const std::size_t n = key.languages().size();
  if (target >= n || nontarget >= n)
    throw Error(ErrorCode::kInvalidArgument, "language index out of range");
  const RowsByLanguage rows = rows_by_language(key);
  if (rows[target].empty()) empty_class(key, target);
  if (rows[nontarget].empty()) empty_class(key, nontarget);
  return rates_from_rows(llrs, rows, target, nontarget, threshold);
}

double normalized_cost(double p_miss, double p_fa,
                       const ApplicationParams& app) {
  return (app.miss_weight() * p_miss + app.fa_weight() * p_fa) /
         app.no_information_cost();
}

double pair_cost(const PairRates& rates, const ApplicationParams& app) {
  return normalized_cost(rates.p_miss, rates.p_fa, app);
}

MinCost min_pair_cost(const LlrMatrix& llrs, const TrialKey& key,
                      std::span<const TargetPairs> group,
                      const ApplicationParams& app) {
  app.validate();
  const RowsByLanguage rows = rows_by_language(key);
  check_group(key, rows, group);
  return SortedGroup(llrs, rows, group).evaluate(app);
}

MinCost min_pair_cost(const LlrMatrix& llrs, const TrialKey& key,
                      std::size_t target, ThresholdScope scope,
                      const ApplicationParams& app, std::size_t nontarget) {
  const std::size_t n = key.languages().size();
  std::vector<TargetPairs> group;
  auto all_others = [n](std::size_t t) {
    TargetPairs tp{t, {}};
    for (std::size_t j = 0; j < n; ++j)
      if (j != t) tp.nontargets.push_back(j);
    return tp;
  };
  switch (scope) {
    case ThresholdScope::kGlobal:
      for (std::size_t t = 0; t < n; ++t) group.push_back(all_others(t));
      break;
    case ThresholdScope::kPerTarget:
      group.push_back(all_others(target));
      break;
    case ThresholdScope::kPerPair:
      group.push_back({target, {nontarget}});
      break;
  }
  return min_pair_cost(llrs, key, group, app);
}

ScoreReport c_primary(const ScoreSet& scores, const TrialKey& key,
                      const ApplicationSet& apps, ThresholdScope scope,
                      EmptyClassPolicy policy) {
  check_aligned(scores, key);
  ScoreReport report = c_primary_llr(llr_matrix(scores.scores), key, apps,
                                     scope, policy, scores.system_id);
  report.condition_tag = scores.condition_tag;
  return report;
}

ScoreReport c_primary_llr(const LlrMatrix& llrs, const TrialKey& key,
                          const ApplicationSet& apps, ThresholdScope scope,
                          EmptyClassPolicy policy, std::string system_id) {
  validate_applications(apps);
  const std::size_t n = key.languages().size();
  if (static_cast<std::size_t>(llrs.rows()) != key.size() ||
      static_cast<std::size_t>(llrs.cols()) != n)
    throw Error(ErrorCode::kLanguageMismatch,
                "LLR matrix shape does not match the key");

  const RowsByLanguage rows = rows_by_language(key);
  ScoreReport report;
  report.system_id = std::move(system_id);
  report.scope = scope;
  report.languages = key.languages().codes();
  report.n_segments = key.size();

  // Valid pairs per target, in lexicographic order.
  std::vector<TargetPairs> targets;
  for (std::size_t t = 0; t < n; ++t) {
    TargetPairs tp{t, {}};
    for (std::size_t j = 0; j < n; ++j) {
      if (j == t) continue;
      if (rows[t].empty() || rows[j].empty()) {
        if (policy == EmptyClassPolicy::kError)
          empty_class(key, rows[t].empty() ? t : j);
        report.dropped_pairs.emplace_back(t, j);
        continue;
      }
      tp.nontargets.push_back(j);
    }
    if (!tp.nontargets.empty()) targets.push_back(std::move(tp));
  }
  if (targets.empty())
    throw Error(ErrorCode::kEmptyClass,
                "fewer than two languages have trials");

  std::size_t n_pairs = 0;
  for (const auto& tp : targets) n_pairs += tp.nontargets.size();

  // Threshold groups. Each entry maps a group to the (target slot,
  // nontarget position) pairs it decides.
  std::vector<SortedGroup> groups;
  std::vector<std::size_t> group_of_pair;  // flattened pair index -> group
  switch (scope) {
    case ThresholdScope::kGlobal:
      groups.emplace_back(llrs, rows, targets);
      group_of_pair.assign(n_pairs, 0);
      break;
    case ThresholdScope::kPerTarget:
      for (const auto& tp : targets) {
        groups.emplace_back(llrs, rows, std::span(&tp, 1));
        group_of_pair.insert(group_of_pair.end(), tp.nontargets.size(),
                             groups.size() - 1);
      }
      break;
    case ThresholdScope::kPerPair:
      for (const auto& tp : targets)
        for (std::size_t nt : tp.nontargets) {
          const TargetPairs single{tp.target, {nt}};
          groups.emplace_back(llrs, rows, std::span(&single, 1));
          group_of_pair.push_back(groups.size() - 1);
        }
      break;
  }

  for (const ApplicationParams& app : apps) {
    AppReport ar;
    ar.params = app;
    ar.bayes_threshold = bayes_threshold(app);
    std::vector<MinCost> group_min;
    group_min.reserve(groups.size());
    for (const auto& g : groups) group_min.push_back(g.evaluate(app));

    double act_total = 0;
    double min_total = 0;
    std::size_t pair_index = 0;
    for (const auto& tp : targets) {
      double act_sum = 0;
      double min_sum = 0;
      for (std::size_t nt : tp.nontargets) {
        PairResult pr;
        pr.actual = rates_from_rows(llrs, rows, tp.target, nt,
                                    ar.bayes_threshold);
        pr.act_cost = pair_cost(pr.actual, app);
        pr.min_threshold = group_min[group_of_pair[pair_index]].threshold;
        pr.at_min =
            rates_from_rows(llrs, rows, tp.target, nt, pr.min_threshold);
        pr.min_cost = pair_cost(pr.at_min, app);
        act_sum += pr.act_cost;
        min_sum += pr.min_cost;
        ar.pairs.push_back(pr);
        ++pair_index;
      }
      const double k = static_cast<double>(tp.nontargets.size());
      ar.per_language.push_back({tp.target, act_sum / k, min_sum / k});
      act_total += act_sum;
      min_total += min_sum;
    }
    ar.act = act_total / static_cast<double>(n_pairs);
    ar.min = min_total / static_cast<double>(n_pairs);
    report.apps.push_back(std::move(ar));
  }

  double act = 0;
  double min = 0;
  for (const auto& ar : report.apps) {
    act += ar.act;
    min += ar.min;
  }
  const double n_apps = static_cast<double>(report.apps.size());
  report.act_c_primary = act / n_apps;
  report.min_c_primary = min / n_apps;
  report.calibration_gap = report.act_c_primary - report.min_c_primary;

  for (std::size_t i = 0; i < targets.size(); ++i) {
    LanguageCost lc{targets[i].target, 0, 0};
    for (const auto& ar : report.apps) {
      lc.act += ar.per_language[i].act;
      lc.min += ar.per_language[i].min;
    }
    lc.act /= n_apps;
    lc.min /= n_apps;
    report.per_language.push_back(lc);
  }
  return report;
}

}  // namespace lre
