// src/trial_model.cpp

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

#include "lre/trial_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lre/error.hpp"

namespace lre {

namespace {

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

}  // namespace

LanguageSet::LanguageSet(std::vector<std::string> codes)
    : codes_(std::move(codes)) {
  if (codes_.size() < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "a language set needs at least two languages");
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    const std::string& c = codes_[i];
    if (c.empty() || has_space(c))
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid language code '" + c + "'");
    if (!index_.emplace(c, i).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate language code '" + c + "'");
  }
}

LanguageSet LanguageSet::lre22() {
  return LanguageSet({"afr-afr", "ara-aeb", "ara-arq", "ara-ayl", "eng-ens",
                      "eng-iaf", "fra-ntf", "nbl-nbl", "orm-orm", "tir-tir",
                      "tso-tso", "ven-ven", "xho-xho", "zul-zul"});
}

std::optional<std::size_t> LanguageSet::find(std::string_view code) const {
  auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LanguageSet::index(std::string_view code) const {
  if (auto i = find(code)) return *i;
  throw Error(ErrorCode::kUnknownLanguage,
              "language '" + std::string(code) + "' is not in the set");
}

std::string_view to_string(SourceType type) {
  switch (type) {
    case SourceType::kCts: return "CTS";
    case SourceType::kBnbs: return "BNBS";
    case SourceType::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<SourceType> parse_source_type(std::string_view text) {
  if (text == "CTS") return SourceType::kCts;
  if (text == "BNBS") return SourceType::kBnbs;
  if (text == "OTHER") return SourceType::kOther;
  return std::nullopt;
}

TrialKey::TrialKey(LanguageSet languages, std::vector<TrialEntry> entries)
    : languages_(std::move(languages)), entries_(std::move(entries)) {
  row_of_.reserve(entries_.size());
  for (std::size_t row = 0; row < entries_.size(); ++row) {
    const TrialEntry& e = entries_[row];
    if (e.language >= languages_.size())
      throw Error(ErrorCode::kInvalidArgument,
                  "language index out of range", {0, e.segment_id, {}});
    if (e.meta.sad_duration &&
        !(std::isfinite(*e.meta.sad_duration) && *e.meta.sad_duration > 0))
      throw Error(ErrorCode::kInvalidArgument,
                  "sad_duration must be positive", {0, e.segment_id, {}});
    if (!row_of_.emplace(e.segment_id, row).second)
      throw Error(ErrorCode::kDuplicateSegment,
                  "segment '" + e.segment_id + "' appears more than once",
                  {0, e.segment_id, {}});
  }
}

std::optional<std::size_t> TrialKey::find(std::string_view segment_id) const {
  auto it = row_of_.find(std::string(segment_id));
  if (it == row_of_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> TrialKey::language_counts() const {
  std::vector<std::size_t> counts(languages_.size(), 0);
  for (const TrialEntry& e : entries_) ++counts[e.language];
  return counts;
}

TrialKey TrialKey::subset(std::span<const std::size_t> rows) const {
  std::vector<TrialEntry> picked;
  picked.reserve(rows.size());
  for (std::size_t r : rows) picked.push_back(entries_.at(r));
  return TrialKey(languages_, std::move(picked));
}

TrialKey build_key(const LanguageSet& languages, std::span<const KeyRow> rows) {
  std::vector<TrialEntry> entries;
  entries.reserve(rows.size());
  for (const KeyRow& row : rows) {
    auto lang = languages.find(row.language);
    if (!lang)
      throw Error(ErrorCode::kUnknownLanguage,
                  "language '" + row.language + "' is not declared",
                  {0, row.segment_id, {}});
    entries.push_back({row.segment_id, *lang, row.meta});
  }
  return TrialKey(languages, std::move(entries));
}

PartitionSpec PartitionSpec::by_source_type() { return {}; }

PartitionSpec PartitionSpec::by_duration(std::vector<double> edges) {
  PartitionSpec spec;
  spec.kind = Kind::kDurationBins;
  spec.bin_edges = std::move(edges);
  return spec;
}

PartitionSpec PartitionSpec::by_duration() {
  return by_duration(default_duration_edges());
}

PartitionSpec PartitionSpec::by_field(std::string name) {
  PartitionSpec spec;
  spec.kind = Kind::kExtraField;
  spec.field = std::move(name);
  return spec;
}

void PartitionSpec::validate() const {
  switch (kind) {
    case Kind::kSourceType:
      return;
    case Kind::kExtraField:
      if (field.empty())
        throw Error(ErrorCode::kInvalidArgument,
                    "field partition needs a field name");
      return;
    case Kind::kDurationBins:
      if (bin_edges.size() < 2)
        throw Error(ErrorCode::kInvalidArgument,
                    "duration partition needs at least two bin edges");
      for (std::size_t i = 0; i < bin_edges.size(); ++i) {
        if (!std::isfinite(bin_edges[i]))
          throw Error(ErrorCode::kInvalidArgument, "bin edges must be finite");
        if (i > 0 && !(bin_edges[i - 1] < bin_edges[i]))
          throw Error(ErrorCode::kInvalidArgument,
                      "bin edges must be strictly ascending");
      }
      return;
  }
}

std::vector<double> default_duration_edges() {
  return {3, 5, 10, 15, 20, 25, 30, 35};
}

std::string format_edge(double edge) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", edge);
  return buf;
}

namespace {

Partition by_source(const TrialKey& key) {
  constexpr SourceType kOrder[] = {SourceType::kCts, SourceType::kBnbs,
                                   SourceType::kOther};
  Partition out;
  std::vector<std::size_t> rows[3];
  for (std::size_t r = 0; r < key.size(); ++r) {
    const auto& type = key.entry(r).meta.source_type;
    if (!type) {
      out.unassigned.push_back(r);
      continue;
    }
    rows[static_cast<int>(*type)].push_back(r);
  }
  for (SourceType t : kOrder) {
    auto& cell_rows = rows[static_cast<int>(t)];
    if (!cell_rows.empty())
      out.cells.push_back({std::string(to_string(t)), std::move(cell_rows)});
  }
  return out;
}

Partition by_duration(const TrialKey& key, const std::vector<double>& edges) {
  const std::size_t nbins = edges.size() - 1;
  std::vector<std::vector<std::size_t>> rows(nbins);
  Partition out;
  for (std::size_t r = 0; r < key.size(); ++r) {
    const TrialEntry& e = key.entry(r);
    if (!e.meta.sad_duration)
      throw Error(ErrorCode::kMissingDuration,
                  "duration partition needs a known sad_duration",
                  {0, e.segment_id, {}});
    const double d = *e.meta.sad_duration;
    if (d < edges.front() || d > edges.back()) {
      out.unassigned.push_back(r);
      continue;
    }
    // First edge strictly greater than d; the final bin is closed above.
    auto it = std::upper_bound(edges.begin(), edges.end(), d);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= nbins) bin = nbins - 1;
    rows[bin].push_back(r);
  }
  for (std::size_t b = 0; b < nbins; ++b) {
    if (rows[b].empty()) continue;
    out.cells.push_back(
        {"[" + format_edge(edges[b]) + "," + format_edge(edges[b + 1]) + ")",
         std::move(rows[b])});
  }
  return out;
}

Partition by_field(const TrialKey& key, const std::string& field) {
  std::map<std::string, std::vector<std::size_t>> rows;
  Partition out;
  for (std::size_t r = 0; r < key.size(); ++r) {
    const auto& extra = key.entry(r).meta.extra;
    auto it = extra.find(field);
    if (it == extra.end()) {
      out.unassigned.push_back(r);
      continue;
    }
    rows[it->second].push_back(r);
  }
  for (auto& [label, cell_rows] : rows)
    out.cells.push_back({label, std::move(cell_rows)});
  return out;
}

}  // namespace

Partition partition(const TrialKey& key, const PartitionSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case PartitionSpec::Kind::kSourceType: return by_source(key);
    case PartitionSpec::Kind::kDurationBins:
      return by_duration(key, spec.bin_edges);
    case PartitionSpec::Kind::kExtraField: return by_field(key, spec.field);
  }
  return {};
}

std::vector<std::string> segment_ids(const TrialKey& key,
                                     std::span<const std::size_t> rows) {
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (std::size_t r : rows) ids.push_back(key.entry(r).segment_id);
  return ids;
}

}  // namespace lre
