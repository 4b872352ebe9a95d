// include/lre/trial_model.hpp

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

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lre {

/// Ordered set of language codes. The order fixes every matrix column
/// and every (target, non-target) pair index downstream.
class LanguageSet {
 public:
  /// Throws kInvalidArgument on duplicates, empty or whitespace-bearing
  /// codes, or fewer than two codes.
  explicit LanguageSet(std::vector<std::string> codes);

  /// The fourteen LRE22 target languages, in code order.
  static LanguageSet lre22();

  std::size_t size() const noexcept { return codes_.size(); }
  const std::string& code(std::size_t i) const { return codes_.at(i); }
  const std::vector<std::string>& codes() const noexcept { return codes_; }

  std::optional<std::size_t> find(std::string_view code) const;
  /// Throws kUnknownLanguage.
  std::size_t index(std::string_view code) const;

  bool operator==(const LanguageSet& other) const {
    return codes_ == other.codes_;
  }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class SourceType { kCts, kBnbs, kOther };

std::string_view to_string(SourceType type);
std::optional<SourceType> parse_source_type(std::string_view text);

// Unknown values stay unknown; nothing here is defaulted.
struct SegmentMeta {
  std::optional<SourceType> source_type;
  std::optional<double> sad_duration;  // seconds, > 0 when present
  std::map<std::string, std::string> extra;
};

struct TrialEntry {
  std::string segment_id;
  std::size_t language = 0;
  SegmentMeta meta;
};

/// Ground truth: one true language per segment, in input order.
class TrialKey {
 public:
  /// Throws kDuplicateSegment, kInvalidArgument (index out of range or
  /// non-positive duration).
  TrialKey(LanguageSet languages, std::vector<TrialEntry> entries);

  const LanguageSet& languages() const noexcept { return languages_; }
  const std::vector<TrialEntry>& entries() const noexcept { return entries_; }
  const TrialEntry& entry(std::size_t row) const { return entries_.at(row); }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<std::size_t> find(std::string_view segment_id) const;

  std::vector<std::size_t> language_counts() const;

  /// Key restricted to the given rows (in the given order), same languages.
  TrialKey subset(std::span<const std::size_t> rows) const;

 private:
  LanguageSet languages_;
  std::vector<TrialEntry> entries_;
  std::unordered_map<std::string, std::size_t> row_of_;
};

struct KeyRow {
  std::string segment_id;
  std::string language;
  SegmentMeta meta;
};

/// Throws kDuplicateSegment, kUnknownLanguage.
TrialKey build_key(const LanguageSet& languages, std::span<const KeyRow> rows);

struct PartitionSpec {
  enum class Kind { kSourceType, kDurationBins, kExtraField };

  Kind kind = Kind::kSourceType;
  std::vector<double> bin_edges;  // kDurationBins only
  std::string field;              // kExtraField only

  static PartitionSpec by_source_type();
  static PartitionSpec by_duration(std::vector<double> edges);
  static PartitionSpec by_duration();
  static PartitionSpec by_field(std::string name);

  /// Throws kInvalidArgument.
  void validate() const;
};

/// 3, 5, 10, ..., 35 seconds.
std::vector<double> default_duration_edges();

struct PartitionCell {
  std::string label;
  std::vector<std::size_t> rows;  // key rows, ascending
};

struct Partition {
  std::vector<PartitionCell> cells;    // non-empty cells only
  std::vector<std::size_t> unassigned;  // rows matching no cell
};

/// Source-type cells come out as CTS, BNBS, OTHER; duration cells in bin
/// order with labels "[lo,hi)" (the last bin also holds its upper edge);
/// extra-field cells in lexicographic label order. Throws
/// kMissingDuration when a duration partition meets an unknown duration.
Partition partition(const TrialKey& key, const PartitionSpec& spec);

std::vector<std::string> segment_ids(const TrialKey& key,
                                     std::span<const std::size_t> rows);

/// Formats a bin edge the way partition labels do ("3", "2.5").
std::string format_edge(double edge);

}  // namespace lre
