// include/lre/score_set.hpp

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

#include <string>

#include <Eigen/Dense>

#include "lre/trial_model.hpp"

namespace lre {

/// Segments x languages, one row per segment.
template <typename Scalar>
using ScoreMatrixT =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ScoreMatrix = ScoreMatrixT<double>;

/// One system's raw log-likelihoods. Rows follow key order and columns
/// follow the language set order.
struct ScoreSet {
  std::string system_id;
  std::string condition_tag;
  LanguageSet languages;
  ScoreMatrix scores;
};

/// Throws kLanguageMismatch or kInvalidArgument when `set` cannot be
/// scored against `key`; kNonFiniteScore on NaN/Inf.
void check_aligned(const ScoreSet& set, const TrialKey& key);

}  // namespace lre
