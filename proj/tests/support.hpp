// tests/support.hpp

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
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lre/score_set.hpp"
#include "lre/trial_model.hpp"

namespace lre::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("lre-test-" + tag + "-" + std::to_string(rd()) + "-" +
             std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline LanguageSet codes(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string c = "l" + std::to_string(i) + "-x";
    out.push_back(c);
  }
  return LanguageSet(out);
}

/// Key with counts[i] segments of language i, interleaved.
inline TrialKey make_key(const LanguageSet& langs,
                         const std::vector<std::size_t>& counts) {
  std::vector<TrialEntry> entries;
  std::vector<std::size_t> left = counts;
  bool any = true;
  while (any) {
    any = false;
    for (std::size_t l = 0; l < left.size(); ++l) {
      if (left[l] == 0) continue;
      --left[l];
      any = true;
      TrialEntry e;
      e.segment_id = "seg" + std::to_string(entries.size() + 1);
      e.language = l;
      entries.push_back(std::move(e));
    }
  }
  return TrialKey(langs, std::move(entries));
}

inline ScoreSet make_set(const TrialKey& key, ScoreMatrix m,
                         std::string id = "sys") {
  return ScoreSet{std::move(id), "", key.languages(), std::move(m)};
}

/// +1000 on the true language, 0 elsewhere.
inline ScoreSet oracle_set(const TrialKey& key) {
  ScoreMatrix m = ScoreMatrix::Zero(static_cast<Eigen::Index>(key.size()),
                                    static_cast<Eigen::Index>(key.languages().size()));
  for (std::size_t r = 0; r < key.size(); ++r)
    m(static_cast<Eigen::Index>(r),
      static_cast<Eigen::Index>(key.entry(r).language)) = 1000.0;
  return make_set(key, std::move(m), "oracle");
}

inline ScoreSet zero_set(const TrialKey& key) {
  return make_set(key,
                  ScoreMatrix::Zero(static_cast<Eigen::Index>(key.size()),
                                    static_cast<Eigen::Index>(key.languages().size())),
                  "zero");
}

/// Noisy scores: the true language gets a bonus of `separation`.
inline ScoreSet random_set(const TrialKey& key, std::mt19937_64& rng,
                           double separation = 1.5, double spread = 1.0) {
  std::normal_distribution<double> z(0.0, spread);
  const auto n = static_cast<Eigen::Index>(key.languages().size());
  ScoreMatrix m(static_cast<Eigen::Index>(key.size()), n);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = z(rng);
    m(r, static_cast<Eigen::Index>(key.entry(static_cast<std::size_t>(r)).language)) +=
        separation;
  }
  return make_set(key, std::move(m), "random");
}

}  // namespace lre::test
