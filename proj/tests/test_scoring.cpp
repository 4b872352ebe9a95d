// tests/test_scoring.cpp

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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lre/error.hpp"
#include "lre/parallel.hpp"
#include "lre/scoring.hpp"
#include "lre/simulator.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace lre;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Two-language key with a column of target LLRs for language 0: the
/// first `tar.size()` rows are language 0, the rest language 1.
struct Fixture {
  TrialKey key;
  LlrMatrix llrs;
};

Fixture two_class(const std::vector<double>& tar,
                  const std::vector<double>& non) {
  Fixture f{test::make_key(test::codes(2), {0, 0}), {}};
  std::vector<TrialEntry> entries;
  std::vector<double> col;
  for (double v : tar) {
    entries.push_back({"t" + std::to_string(entries.size()), 0, {}});
    col.push_back(v);
  }
  for (double v : non) {
    entries.push_back({"n" + std::to_string(entries.size()), 1, {}});
    col.push_back(v);
  }
  f.key = TrialKey(test::codes(2), std::move(entries));
  f.llrs = LlrMatrix::Zero(static_cast<Eigen::Index>(col.size()), 2);
  for (std::size_t i = 0; i < col.size(); ++i)
    f.llrs(static_cast<Eigen::Index>(i), 0) = col[i];
  return f;
}

ErrorCode thrown(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no Error thrown");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("llr examples") {
  Eigen::RowVectorXd flat = Eigen::RowVectorXd::Constant(5, 3.25);
  for (Eigen::Index t = 0; t < 5; ++t) CHECK(llr(flat, t) == 0.0);

  Eigen::RowVector2d two(1.0, 0.0);
  CHECK(llr(two, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(llr(two, 1) == doctest::Approx(-1.0).epsilon(1e-15));

  Eigen::RowVector3d three(0.0, 0.0, std::log(2.0));
  CHECK(llr(three, 0) == doctest::Approx(-std::log(1.5)).epsilon(1e-14));
  CHECK(llr(three, 0) == doctest::Approx(-0.4054651).epsilon(1e-7));

  // Large magnitudes stay finite.
  Eigen::RowVector3d big(-1e4, -2e4, -3e4);
  CHECK(std::isfinite(llr(big, 0)));
  CHECK(llr(big, 0) == doctest::Approx(1e4 + std::log(2.0)));

  // Templated on the scalar type.
  Eigen::RowVector3f f(0.0f, 0.0f, std::log(2.0f));
  CHECK(llr(f, 0) == doctest::Approx(-std::log(1.5)).epsilon(1e-6));
}

TEST_CASE("llr matrix matches the naive formula") {
  std::mt19937_64 rng(1);
  const TrialKey key = test::make_key(test::codes(5), {4, 4, 4, 4, 4});
  const ScoreSet set = test::random_set(key, rng, 1.0, 3.0);
  const LlrMatrix m = llr_matrix(set);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      CHECK(m(r, c) ==
            doctest::Approx(oracle::naive_llr(set.scores, r, c)).epsilon(1e-12));
}

TEST_CASE("bayes threshold") {
  CHECK(bayes_threshold({1, 1, 0.5}) == 0.0);
  CHECK(bayes_threshold({1, 1, 0.1}) == doctest::Approx(2.1972246));
  CHECK(bayes_threshold({10, 1, 0.5}) == doctest::Approx(-2.3025851));
}

TEST_CASE("pair rates") {
  const Fixture f = two_class({1.2, -0.3, 2.0}, {-1.0, 0.5});
  const PairRates r = pair_rates(f.llrs, f.key, 0, 1, 0.0);
  CHECK(r.p_miss == doctest::Approx(1.0 / 3));
  CHECK(r.p_fa == doctest::Approx(0.5));
  CHECK(r.n_target_trials == 3);
  CHECK(r.n_nontarget_trials == 2);

  const PairRates perfect = pair_rates(f.llrs, f.key, 0, 1, 0.6);
  CHECK(perfect.p_miss == doctest::Approx(1.0 / 3));
  const Fixture g = two_class({1.0, 2.0}, {-1.0, -2.0});
  const PairRates sep = pair_rates(g.llrs, g.key, 0, 1, 0.0);
  CHECK(sep.p_miss == 0.0);
  CHECK(sep.p_fa == 0.0);

  const PairRates lo = pair_rates(f.llrs, f.key, 0, 1, -kInf);
  CHECK(lo.p_miss == 0.0);
  CHECK(lo.p_fa == 1.0);
  const PairRates hi = pair_rates(f.llrs, f.key, 0, 1, kInf);
  CHECK(hi.p_miss == 1.0);
  CHECK(hi.p_fa == 0.0);

  // Ties accept.
  const Fixture t = two_class({0.0}, {0.0});
  const PairRates tie = pair_rates(t.llrs, t.key, 0, 1, 0.0);
  CHECK(tie.p_miss == 0.0);
  CHECK(tie.p_fa == 1.0);

  const Fixture empty = two_class({1.0}, {});
  CHECK(thrown([&] { pair_rates(empty.llrs, empty.key, 0, 1, 0.0); }) ==
        ErrorCode::kEmptyClass);
}

TEST_CASE("pair cost") {
  const ApplicationParams eq{1, 1, 0.5};
  CHECK(normalized_cost(1.0 / 3, 0.5, eq) == doctest::Approx(0.8333333));
  CHECK(normalized_cost(1.0 / 3, 0.5, eq) * eq.no_information_cost() ==
        doctest::Approx(0.4166667));
  CHECK(normalized_cost(0, 0, eq) == 0.0);
  CHECK(normalized_cost(0, 0, {1, 1, 0.1}) == 0.0);
  CHECK(normalized_cost(1, 0, {1, 1, 0.1}) == doctest::Approx(1.0));
  CHECK(normalized_cost(1, 0, {1, 1, 0.1}) * 0.1 == doctest::Approx(0.1));
  PairRates r;
  r.p_miss = 0.25;
  r.p_fa = 0.5;
  CHECK(pair_cost(r, {2, 1, 0.3}) ==
        doctest::Approx((2 * 0.3 * 0.25 + 0.7 * 0.5) / 0.6));
}

TEST_CASE("application validation") {
  CHECK(default_applications().size() == 2);
  CHECK(default_applications()[1].p_target == 0.1);
  CHECK(thrown([] { ApplicationParams{1, 1, 0.0}.validate(); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(thrown([] { ApplicationParams{1, 1, 1.0}.validate(); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(thrown([] { ApplicationParams{0, 1, 0.5}.validate(); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(thrown([] { ApplicationParams{1, -1, 0.5}.validate(); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(thrown([] { validate_applications({}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(parse_scope("global") == ThresholdScope::kGlobal);
  CHECK(parse_scope("target") == ThresholdScope::kPerTarget);
  CHECK(parse_scope("pair") == ThresholdScope::kPerPair);
  CHECK(thrown([] { parse_scope("segment"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("min pair cost examples") {
  const ApplicationParams eq{1, 1, 0.5};
  const Fixture f = two_class({1, 2}, {0});
  const MinCost m = min_pair_cost(f.llrs, f.key, 0, ThresholdScope::kPerPair, eq, 1);
  CHECK(m.cost == 0.0);
  CHECK(m.threshold == 0.5);

  const Fixture flat = two_class({0.7, 0.7, 0.7}, {0.7, 0.7});
  for (ThresholdScope s : {ThresholdScope::kPerPair, ThresholdScope::kPerTarget})
    CHECK(min_pair_cost(flat.llrs, flat.key, 0, s, eq, 1).cost == 1.0);
  // Ties between accept-all and reject-all go to the smaller threshold.
  CHECK(min_pair_cost(flat.llrs, flat.key, 0, ThresholdScope::kPerPair, eq, 1)
            .threshold == -kInf);

  // Reject-all is the optimum when targets sit below non-targets.
  const Fixture rev = two_class({-1}, {1});
  const MinCost r = min_pair_cost(rev.llrs, rev.key, 0, ThresholdScope::kPerPair,
                                  {1, 1, 0.1}, 1);
  CHECK(r.cost == doctest::Approx(1.0));
}

TEST_CASE("min pair cost equals exhaustive enumeration") {
  std::mt19937_64 rng(20);
  std::normal_distribution<double> z(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> tar, non;
    for (int i = 0; i < 20; ++i) {
      // Coarse values so ties are common.
      const double v = std::round(z(rng) * 4) / 4;
      (i % 3 == 0 ? tar : non).push_back(i % 3 == 0 ? v + 0.5 : v);
    }
    const Fixture f = two_class(tar, non);
    for (const ApplicationParams& app :
         {ApplicationParams{1, 1, 0.5}, ApplicationParams{1, 1, 0.1},
          ApplicationParams{3, 1, 0.2}}) {
      double best = kInf;
      std::vector<double> cand = tar;
      cand.insert(cand.end(), non.begin(), non.end());
      cand.push_back(kInf);
      for (double c : cand) {
        double miss = 0, fa = 0;
        for (double v : tar) miss += v < c;
        for (double v : non) fa += v >= c;
        best = std::min(best, normalized_cost(miss / tar.size(),
                                              fa / non.size(), app));
      }
      const MinCost m =
          min_pair_cost(f.llrs, f.key, 0, ThresholdScope::kPerPair, app, 1);
      CHECK(m.cost == doctest::Approx(best).epsilon(1e-14));
      // The reported threshold achieves the reported cost.
      CHECK(pair_cost(pair_rates(f.llrs, f.key, 0, 1, m.threshold), app) ==
            doctest::Approx(m.cost).epsilon(1e-14));
    }
  }
}

TEST_CASE("no-information and perfect systems") {
  for (std::size_t n : {2u, 3u, 14u}) {
    const TrialKey key = test::make_key(test::codes(n), std::vector<std::size_t>(n, 3));
    for (ThresholdScope scope : {ThresholdScope::kGlobal, ThresholdScope::kPerTarget,
                                 ThresholdScope::kPerPair}) {
      const ScoreReport zero =
          c_primary(test::zero_set(key), key, default_applications(), scope);
      CHECK(zero.act_c_primary == 1.0);
      CHECK(zero.min_c_primary == 1.0);
      const ScoreReport perfect =
          c_primary(test::oracle_set(key), key, default_applications(), scope);
      CHECK(perfect.act_c_primary == 0.0);
      CHECK(perfect.min_c_primary == 0.0);
    }
  }
}

TEST_CASE("report structure") {
  std::mt19937_64 rng(3);
  const TrialKey key = test::make_key(test::codes(4), {5, 6, 7, 8});
  const ScoreReport r = c_primary(test::random_set(key, rng), key);
  CHECK(r.system_id == "random");
  CHECK(r.n_segments == key.size());
  CHECK(r.languages == key.languages().codes());
  REQUIRE(r.apps.size() == 2);
  for (const AppReport& app : r.apps) {
    REQUIRE(app.pairs.size() == 12);
    // Lexicographic (target, nontarget) order.
    std::size_t i = 0;
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t n = 0; n < 4; ++n)
        if (t != n) {
          CHECK(app.pairs[i].actual.target == t);
          CHECK(app.pairs[i].actual.nontarget == n);
          ++i;
        }
    // Per-language costs average to the aggregate.
    double act = 0, min = 0;
    for (const LanguageCost& lc : app.per_language) {
      act += lc.act;
      min += lc.min;
    }
    CHECK(act / 4 == doctest::Approx(app.act).epsilon(1e-12));
    CHECK(min / 4 == doctest::Approx(app.min).epsilon(1e-12));
    CHECK(app.min <= app.act);
  }
  CHECK(r.act_c_primary == doctest::Approx((r.apps[0].act + r.apps[1].act) / 2));
  CHECK(r.calibration_gap == r.act_c_primary - r.min_c_primary);
  REQUIRE(r.per_language.size() == 4);
  CHECK(r.per_language[2].act ==
        doctest::Approx((r.apps[0].per_language[2].act +
                         r.apps[1].per_language[2].act) / 2));
}

TEST_CASE("c_primary matches the straight-line oracle") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> langs(2, 5), count(1, 12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(langs(rng));
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) counts.push_back(count(rng));
    const TrialKey key = test::make_key(test::codes(n), counts);
    const ScoreSet set = test::random_set(key, rng, 1.0, 1.5);
    const ApplicationSet apps = {{1, 1, 0.5}, {1, 1, 0.1}, {2, 1, 0.3}};
    for (ThresholdScope scope : {ThresholdScope::kGlobal, ThresholdScope::kPerTarget,
                                 ThresholdScope::kPerPair}) {
      const ScoreReport r = c_primary(set, key, apps, scope);
      const oracle::Result o = oracle::c_primary(set, key, apps, scope);
      CHECK(std::abs(r.act_c_primary - o.act) <= 1e-12);
      CHECK(std::abs(r.min_c_primary - o.min) <= 1e-12);
    }
  }
}

TEST_CASE("seeded simulation matches the oracle") {
  SimConfig config = sim_preset("dev-like");
  config.seed = 42;
  const SimCampaign camp = simulate_campaign(config, 4);
  const ScoreReport r = c_primary(camp.scoresets[0], camp.key);
  const oracle::Result o = oracle::c_primary(
      camp.scoresets[0], camp.key, default_applications(),
      ThresholdScope::kPerTarget);
  CHECK(std::abs(r.act_c_primary - o.act) <= 1e-12);
  CHECK(std::abs(r.min_c_primary - o.min) <= 1e-12);
}

TEST_CASE("minimum cost shrinks as the scope narrows") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const TrialKey key = test::make_key(test::codes(4), {10, 8, 6, 12});
    const ScoreSet set = test::random_set(key, rng, 1.0, 2.0);
    const double g = c_primary(set, key, default_applications(),
                               ThresholdScope::kGlobal).min_c_primary;
    const double t = c_primary(set, key, default_applications(),
                               ThresholdScope::kPerTarget).min_c_primary;
    const double p = c_primary(set, key, default_applications(),
                               ThresholdScope::kPerPair).min_c_primary;
    CHECK(t <= g);
    CHECK(p <= t);
  }
}

TEST_CASE("empty classes") {
  const TrialKey key = test::make_key(test::codes(3), {3, 0, 2});
  const ScoreSet set = test::zero_set(key);
  CHECK(thrown([&] { c_primary(set, key); }) == ErrorCode::kEmptyClass);
  const ScoreReport r = c_primary(set, key, default_applications(),
                                  ThresholdScope::kPerTarget,
                                  EmptyClassPolicy::kDropPairs);
  // Pairs touching language 1 are gone: (0,1), (1,0), (1,2), (2,1).
  CHECK(r.dropped_pairs.size() == 4);
  CHECK(r.apps[0].pairs.size() == 2);
  CHECK(r.act_c_primary == 1.0);
}

TEST_CASE("misaligned inputs") {
  const TrialKey key = test::make_key(test::codes(3), {2, 2, 2});
  ScoreSet other = test::zero_set(key);
  other.languages = LanguageSet({"l0-x", "l2-x", "l1-x"});
  CHECK(thrown([&] { c_primary(other, key); }) == ErrorCode::kLanguageMismatch);
  ScoreSet short_set = test::zero_set(key);
  short_set.scores.conservativeResize(5, 3);
  CHECK(thrown([&] { c_primary(short_set, key); }) ==
        ErrorCode::kInvalidArgument);
  ScoreSet nan = test::zero_set(key);
  nan.scores(1, 1) = std::nan("");
  CHECK(thrown([&] { c_primary(nan, key); }) == ErrorCode::kNonFiniteScore);
}

TEST_CASE("row offsets leave every output bit-identical") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> off(-50, 50);
  const TrialKey key = test::make_key(test::codes(4), {9, 9, 9, 9});
  const ScoreSet set = test::random_set(key, rng);
  ScoreSet shifted = set;
  for (Eigen::Index r = 0; r < shifted.scores.rows(); ++r)
    shifted.scores.row(r).array() += off(rng);
  const ScoreReport a = c_primary(set, key);
  const ScoreReport b = c_primary(shifted, key);
  CHECK(a.act_c_primary == b.act_c_primary);
  CHECK(a.min_c_primary == b.min_c_primary);
}

TEST_CASE("results do not depend on the caller's threading") {
  SimConfig config = sim_preset("ladder");
  const SimCampaign camp = simulate_campaign(config, 4);
  std::vector<ScoreReport> serial, parallel(camp.scoresets.size());
  for (const auto& s : camp.scoresets) serial.push_back(c_primary(s, camp.key));
  parallel_for(camp.scoresets.size(), 3, [&](std::size_t i) {
    parallel[i] = c_primary(camp.scoresets[i], camp.key);
  });
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].act_c_primary == parallel[i].act_c_primary);
    CHECK(serial[i].min_c_primary == parallel[i].min_c_primary);
  }
}
