// tests/oracle.hpp

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

// Straight-line reference implementation of the cost metric: direct
// formulas, exhaustive threshold enumeration, no sorting or sweeps.

#include <cmath>
#include <limits>
#include <vector>

#include "lre/score_set.hpp"
#include "lre/scoring.hpp"
#include "lre/trial_model.hpp"

namespace lre::oracle {

inline double naive_llr(const ScoreMatrix& s, Eigen::Index row,
                        Eigen::Index target) {
  const Eigen::Index n = s.cols();
  double mix = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    if (j != target) mix += std::exp(s(row, j)) / static_cast<double>(n - 1);
  return s(row, target) - std::log(mix);
}

struct Table {
  std::size_t langs = 0;
  std::vector<std::size_t> truth;
  std::vector<std::vector<double>> llr;  // [row][target]
};

inline Table table(const ScoreSet& set, const TrialKey& key) {
  Table t;
  t.langs = key.languages().size();
  for (std::size_t r = 0; r < key.size(); ++r) {
    t.truth.push_back(key.entry(r).language);
    std::vector<double> row;
    for (std::size_t c = 0; c < t.langs; ++c)
      row.push_back(naive_llr(set.scores, static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(c)));
    t.llr.push_back(row);
  }
  return t;
}

inline double cost_at(const Table& t, std::size_t target,
                      std::size_t nontarget, double threshold,
                      const ApplicationParams& app) {
  double tar = 0, miss = 0, non = 0, fa = 0;
  for (std::size_t r = 0; r < t.truth.size(); ++r) {
    const bool accept = t.llr[r][target] >= threshold;
    if (t.truth[r] == target) {
      tar += 1;
      if (!accept) miss += 1;
    } else if (t.truth[r] == nontarget) {
      non += 1;
      if (accept) fa += 1;
    }
  }
  const double p_miss = miss / tar, p_fa = fa / non;
  const double raw = app.c_miss * app.p_target * p_miss +
                     app.c_fa * (1 - app.p_target) * p_fa;
  return raw / std::min(app.c_miss * app.p_target,
                        app.c_fa * (1 - app.p_target));
}

/// Sum over ordered pairs of the cost at the Bayes threshold.
inline double actual_sum(const Table& t, const ApplicationParams& app) {
  const double thr = std::log(app.c_fa * (1 - app.p_target) /
                              (app.c_miss * app.p_target));
  double act = 0;
  for (std::size_t a = 0; a < t.langs; ++a)
    for (std::size_t b = 0; b < t.langs; ++b)
      if (a != b) act += cost_at(t, a, b, thr, app);
  return act;
}

inline double actual_c_primary(const Table& t, const ApplicationSet& apps) {
  const double pairs = static_cast<double>(t.langs * (t.langs - 1));
  double total = 0;
  for (const ApplicationParams& app : apps) total += actual_sum(t, app) / pairs;
  return total / static_cast<double>(apps.size());
}

struct Result {
  double act = 0;
  double min = 0;
};

/// Every llr value in the matrix plus +inf is a candidate; together they
/// realise every achievable accept set for every pair.
inline Result c_primary(const Table& t, const ApplicationSet& apps,
                        ThresholdScope scope) {
  std::vector<double> candidates{std::numeric_limits<double>::infinity()};
  for (const auto& row : t.llr)
    for (double v : row) candidates.push_back(v);

  const std::size_t n = t.langs;
  const double pairs = static_cast<double>(n * (n - 1));
  Result total;
  for (const ApplicationParams& app : apps) {
    const double act = actual_sum(t, app);

    double min = 0;
    // Global sweeps every value; narrower scopes only need the target
    // column, which already covers every accept set of their pairs.
    auto best_over = [&](auto&& group_cost, std::size_t column) {
      double best = std::numeric_limits<double>::infinity();
      if (column == n) {
        for (double c : candidates) best = std::min(best, group_cost(c));
      } else {
        best = group_cost(std::numeric_limits<double>::infinity());
        for (const auto& row : t.llr)
          best = std::min(best, group_cost(row[column]));
      }
      return best;
    };
    if (scope == ThresholdScope::kGlobal) {
      min = best_over([&](double c) {
        double s = 0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (a != b) s += cost_at(t, a, b, c, app);
        return s;
      }, n);
    } else if (scope == ThresholdScope::kPerTarget) {
      for (std::size_t a = 0; a < n; ++a)
        min += best_over([&](double c) {
          double s = 0;
          for (std::size_t b = 0; b < n; ++b)
            if (a != b) s += cost_at(t, a, b, c, app);
          return s;
        }, a);
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b)
            min += best_over(
                [&](double c) { return cost_at(t, a, b, c, app); }, a);
    }
    total.act += act / pairs;
    total.min += min / pairs;
  }
  total.act /= static_cast<double>(apps.size());
  total.min /= static_cast<double>(apps.size());
  return total;
}

inline Result c_primary(const ScoreSet& set, const TrialKey& key,
                        const ApplicationSet& apps, ThresholdScope scope) {
  return c_primary(table(set, key), apps, scope);
}

}  // namespace lre::oracle
