// include/lre/simulator.hpp

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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lre/score_set.hpp"
#include "lre/trial_model.hpp"

namespace lre {

/// Per-system overrides of the shared generative model.
struct SystemSpec {
  std::string name;
  std::optional<double> noise_sigma;
  std::optional<double> miscal_scale;
  std::optional<double> miscal_offset;
  std::string condition_tag;
};

/// Gaussian prototype model. A trial of language L with duration d draws
///   x = means.row(L) + sigma_t * z,   z ~ N(0, I)
///   sigma_t = noise_sigma * (duration_ref / d)^duration_exponent
///             * (1 + cts_extra_sigma * [CTS])
/// and emits s[L'] = -|x - means.row(L')|^2 / (2 sigma_t^2). Up to a per-row
/// constant these are exact log-likelihoods, so the default transform
/// (scale 1, offset 0) is calibrated. The miscalibration transform is
///   s <- miscal_scale * s + miscal_offset * [L' has an even index].
/// An offset applied to every column would cancel in the LLR.
struct SimConfig {
  LanguageSet languages = LanguageSet::lre22();
  std::vector<std::size_t> counts;
  Eigen::MatrixXd means;  // languages x embed_dim
  double noise_sigma = 1.0;
  double duration_lo = 3.0;
  double duration_hi = 35.0;
  double duration_ref = 15.0;
  double duration_exponent = 0.5;
  double cts_fraction = 0.5;
  double cts_extra_sigma = 0.0;
  double miscal_scale = 1.0;
  double miscal_offset = 0.0;
  std::uint64_t seed = 0;
  std::vector<SystemSpec> systems;

  std::size_t embed_dim() const {
    return static_cast<std::size_t>(means.cols());
  }

  /// Throws kInvalidArgument.
  void validate() const;
};

/// Clustered prototypes for the fourteen LRE22 languages: the Arabic
/// varieties, the two South African Englishes and the five Bantu
/// languages form confusable groups (xho/zul closest), orm and tir sit
/// apart. Scaled so that noise_sigma = 1 gives actual C_Primary near 0.2.
Eigen::MatrixXd lre22_prototypes();

/// Deterministic standard-normal prototypes times `spread`, independent
/// of the simulation seed.
Eigen::MatrixXd random_prototypes(std::size_t languages, std::size_t dim,
                                  double spread = 4.0);

/// "dev-like" (default: 14 x 300), "test-like" (14 languages, 26,473
/// segments, 383..2,769 per language), "ladder" (dev-like with systems at
/// noise 0.5, 1, 2).
SimConfig sim_preset(std::string_view name);
std::vector<std::string> sim_preset_names();

/// Flat `key = value` lines; see README for the keys. Throws kMalformed
/// or kInvalidArgument.
SimConfig parse_sim_config(std::string_view text);
SimConfig load_sim_config(const std::filesystem::path& path);
/// Inverse of parse_sim_config (values at round-trip precision).
std::string format_sim_config(const SimConfig& config);

TrialKey simulate_key(const SimConfig& config);

/// Uses the key's true languages and metadata; unknown durations count
/// as duration_ref and unknown source types as non-CTS. Rows are
/// generated from independent per-segment streams, so `jobs` does not
/// change the result.
ScoreSet simulate_scores(const SimConfig& config, const TrialKey& key,
                         std::string_view system_label, unsigned jobs = 1);

struct SimCampaign {
  TrialKey key;
  std::vector<ScoreSet> scoresets;
};

/// One score set per spec on a shared key. An empty spec list yields one
/// system named "sys1" with the config's own parameters.
SimCampaign simulate_campaign(const SimConfig& config,
                              std::span<const SystemSpec> systems,
                              unsigned jobs = 1);
SimCampaign simulate_campaign(const SimConfig& config, unsigned jobs = 1);

}  // namespace lre
