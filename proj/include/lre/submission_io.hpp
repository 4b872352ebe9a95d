// include/lre/submission_io.hpp

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

// Strict TSV formats (UTF-8, LF, one TAB between fields):
//
//   key:        segmentid<TAB>language
//   metadata:   segmentid<TAB>source_type<TAB>sad_duration[<TAB>NAME...]
//               source_type is CTS|BNBS|OTHER, '-' marks an unknown value
//   submission: segmentid<TAB>code1<TAB>...<TAB>codeN
//               codes in key language order, one row per key segment
//
// Every file starts with its header line. A missing final newline is
// accepted; blank lines, CR characters and padded fields are not.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lre/error.hpp"
#include "lre/score_set.hpp"
#include "lre/trial_model.hpp"

namespace lre {

enum class Severity { kError, kWarning };

std::string_view to_string(Severity severity);

struct Issue {
  Severity severity = Severity::kError;
  ErrorCode code = ErrorCode::kMalformed;
  std::string message;
  Location where;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const;
  std::size_t count(Severity severity) const;
};

struct ParsedKey {
  TrialKey key;
  std::vector<Issue> warnings;
};

/// Without `declared`, the language set is the sorted set of codes seen
/// in the key. Metadata rows naming segments absent from the key become
/// warnings. Throws Error (kIo, kMalformed, kDuplicateSegment,
/// kUnknownLanguage).
ParsedKey parse_key(const std::filesystem::path& key_path,
                    const std::optional<std::filesystem::path>& meta_path = {},
                    const std::optional<LanguageSet>& declared = {});

/// Rows come back in key order whatever the file order. `system_id`
/// defaults to the file stem. Throws the first content error found.
ScoreSet parse_submission(const std::filesystem::path& path,
                          const TrialKey& key, std::string system_id = {},
                          std::string condition_tag = {});

struct CheckedSubmission {
  ValidationReport report;
  std::optional<ScoreSet> scores;  // present iff report.ok()
};

/// Validation and parsing in one pass.
CheckedSubmission load_submission(const std::filesystem::path& path,
                                  const TrialKey& key,
                                  std::string system_id = {},
                                  std::string condition_tag = {});

/// Collects every problem instead of stopping at the first. Only I/O
/// failure throws.
ValidationReport validate(const std::filesystem::path& path,
                          const TrialKey& key);

void write_key(const std::filesystem::path& path, const TrialKey& key);
void write_metadata(const std::filesystem::path& path, const TrialKey& key);
/// Values are written with 17 significant digits so they round-trip.
void write_submission(const std::filesystem::path& path, const ScoreSet& set,
                      const TrialKey& key);

}  // namespace lre
