// src/submission_io.cpp

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

#include "lre/submission_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace lre {

namespace fs = std::filesystem;

std::string_view to_string(Severity severity) {
  return severity == Severity::kError ? "ERROR" : "WARNING";
}

bool ValidationReport::ok() const { return count(Severity::kError) == 0; }

std::size_t ValidationReport::count(Severity severity) const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(),
                    [&](const Issue& i) { return i.severity == severity; }));
}

void check_aligned(const ScoreSet& set, const TrialKey& key) {
  if (!(set.languages == key.languages()))
    throw Error(ErrorCode::kLanguageMismatch,
                "score columns do not match the key languages");
  if (static_cast<std::size_t>(set.scores.rows()) != key.size() ||
      static_cast<std::size_t>(set.scores.cols()) != key.languages().size())
    throw Error(ErrorCode::kInvalidArgument,
                "score matrix shape does not match the key");
  if (!set.scores.allFinite())
    throw Error(ErrorCode::kNonFiniteScore, "score matrix has NaN or Inf");
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw Error(ErrorCode::kIo, "read failed on '" + path.string() + "'");
  return std::move(buf).str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw Error(ErrorCode::kIo, "write failed on '" + path.string() + "'");
}

// Lines of a file; a trailing LF does not start an extra line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

// Returns an error message, or empty when the line is structurally fine.
std::string line_problem(std::string_view line,
                         const std::vector<std::string_view>& fields) {
  if (line.empty()) return "blank line";
  if (line.find('\r') != std::string_view::npos)
    return "carriage return in line (LF line endings required)";
  for (std::string_view f : fields) {
    if (f.empty()) return "empty field (fields are separated by one TAB)";
    if (f.front() == ' ' || f.back() == ' ')
      return "field has leading or trailing spaces";
  }
  return {};
}

enum class NumberStatus { kOk, kMalformed, kNonFinite };

NumberStatus parse_double(std::string_view text, double& value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ptr != last) return NumberStatus::kMalformed;
  if (ec == std::errc::result_out_of_range) {
    // from_chars leaves value unspecified; strtod gives HUGE_VAL or a
    // (possibly denormal) small value.
    value = std::strtod(std::string(text).c_str(), nullptr);
  } else if (ec != std::errc()) {
    return NumberStatus::kMalformed;
  }
  return std::isfinite(value) ? NumberStatus::kOk : NumberStatus::kNonFinite;
}

std::string join(const std::vector<std::string_view>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += "<TAB>";
    out += fields[i];
  }
  return out;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general,
                           17);
  out.append(buf, res.ptr);
}

struct SubmissionParse {
  std::optional<ScoreSet> set;
  std::vector<Issue> issues;
};

void add_error(std::vector<Issue>& issues, ErrorCode code, std::string msg,
               Location where) {
  issues.push_back({Severity::kError, code, std::move(msg), std::move(where)});
}

SubmissionParse parse_submission_collect(const fs::path& path,
                                         const TrialKey& key,
                                         std::string system_id,
                                         std::string condition_tag) {
  SubmissionParse out;
  auto& issues = out.issues;
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  const LanguageSet& langs = key.languages();
  const std::size_t n = langs.size();

  if (lines.empty()) {
    add_error(issues, ErrorCode::kMalformed, "empty file, header missing",
              {1, {}, {}});
    return out;
  }
  {
    const auto header = split_fields(lines[0]);
    bool match = header.size() == n + 1 && header[0] == "segmentid";
    for (std::size_t j = 0; match && j < n; ++j)
      match = header[j + 1] == langs.code(j);
    if (!match) {
      std::string expected = "segmentid";
      for (const auto& c : langs.codes()) expected += "<TAB>" + c;
      add_error(issues, ErrorCode::kHeaderMismatch,
                "header '" + join(header) + "' does not match expected '" +
                    expected + "'",
                {1, {}, {}});
      return out;
    }
  }

  ScoreMatrix scores(static_cast<Eigen::Index>(key.size()),
                     static_cast<Eigen::Index>(n));
  std::vector<std::size_t> seen_at(key.size(), 0);  // line number, 0 = unseen

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const std::string_view line = lines[li];
    const auto fields = split_fields(line);
    if (std::string problem = line_problem(line, fields); !problem.empty()) {
      add_error(issues, ErrorCode::kMalformed, problem, {line_no, {}, {}});
      continue;
    }
    const std::string seg(fields[0]);
    if (fields.size() != n + 1) {
      add_error(issues, ErrorCode::kMalformed,
                "expected " + std::to_string(n + 1) + " fields, found " +
                    std::to_string(fields.size()),
                {line_no, seg, {}});
      continue;
    }
    auto row = key.find(seg);
    if (!row) {
      add_error(issues, ErrorCode::kUnknownSegment,
                "segment '" + seg + "' is not in the key", {line_no, seg, {}});
      continue;
    }
    if (seen_at[*row] != 0) {
      add_error(issues, ErrorCode::kDuplicateSegment,
                "segment '" + seg + "' already given on line " +
                    std::to_string(seen_at[*row]),
                {line_no, seg, {}});
      continue;
    }
    seen_at[*row] = line_no;
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0;
      switch (parse_double(fields[j + 1], v)) {
        case NumberStatus::kOk:
          scores(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(j)) =
              v;
          break;
        case NumberStatus::kMalformed:
          add_error(issues, ErrorCode::kMalformed,
                    "'" + std::string(fields[j + 1]) + "' is not a number",
                    {line_no, seg, langs.code(j)});
          break;
        case NumberStatus::kNonFinite:
          add_error(issues, ErrorCode::kNonFiniteScore,
                    "score '" + std::string(fields[j + 1]) + "' is not finite",
                    {line_no, seg, langs.code(j)});
          break;
      }
    }
  }
  for (std::size_t r = 0; r < key.size(); ++r) {
    if (seen_at[r] == 0) {
      const std::string& seg = key.entry(r).segment_id;
      add_error(issues, ErrorCode::kMissingSegment,
                "segment '" + seg + "' has no scores", {0, seg, {}});
    }
  }
  const bool failed = std::any_of(issues.begin(), issues.end(), [](auto& i) {
    return i.severity == Severity::kError;
  });
  if (!failed) {
    if (system_id.empty()) system_id = path.stem().string();
    out.set = ScoreSet{std::move(system_id), std::move(condition_tag), langs,
                       std::move(scores)};
  }
  return out;
}

[[noreturn]] void throw_issue(const Issue& issue) {
  throw Error(issue.code, issue.message, issue.where);
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why,
                            std::string segment = {}) {
  throw Error(ErrorCode::kMalformed, why, {line_no, std::move(segment), {}});
}

std::vector<std::string_view> checked_fields(std::string_view line,
                                             std::size_t line_no) {
  auto fields = split_fields(line);
  if (std::string problem = line_problem(line, fields); !problem.empty())
    malformed(line_no, problem);
  return fields;
}

void join_metadata(const fs::path& meta_path, std::vector<TrialEntry>& entries,
                   const std::unordered_map<std::string, std::size_t>& row_of,
                   std::vector<Issue>& warnings) {
  const std::string text = read_file(meta_path);
  const auto lines = split_lines(text);
  if (lines.empty()) malformed(1, "empty metadata file, header missing");
  const auto header = checked_fields(lines[0], 1);
  if (header.size() < 3 || header[0] != "segmentid" ||
      header[1] != "source_type" || header[2] != "sad_duration")
    malformed(1, "metadata header must start with "
                 "segmentid<TAB>source_type<TAB>sad_duration");
  std::vector<std::string> extra_names;
  for (std::size_t i = 3; i < header.size(); ++i) {
    std::string name(header[i]);
    if (std::find(extra_names.begin(), extra_names.end(), name) !=
        extra_names.end())
      malformed(1, "duplicate metadata column '" + name + "'");
    extra_names.push_back(std::move(name));
  }

  std::vector<std::size_t> seen_at(entries.size(), 0);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = checked_fields(lines[li], line_no);
    const std::string seg(fields[0]);
    if (fields.size() != header.size())
      malformed(line_no,
                "expected " + std::to_string(header.size()) +
                    " fields, found " + std::to_string(fields.size()),
                seg);
    SegmentMeta meta;
    if (fields[1] != "-") {
      meta.source_type = parse_source_type(fields[1]);
      if (!meta.source_type)
        malformed(line_no,
                  "unknown source_type '" + std::string(fields[1]) + "'", seg);
    }
    if (fields[2] != "-") {
      double d = 0;
      if (parse_double(fields[2], d) != NumberStatus::kOk || !(d > 0))
        malformed(line_no,
                  "sad_duration '" + std::string(fields[2]) +
                      "' is not a positive number",
                  seg);
      meta.sad_duration = d;
    }
    for (std::size_t i = 3; i < fields.size(); ++i)
      if (fields[i] != "-") meta.extra[extra_names[i - 3]] = fields[i];

    auto it = row_of.find(seg);
    if (it == row_of.end()) {
      warnings.push_back({Severity::kWarning,
                          ErrorCode::kUnknownMetadataSegment,
                          "metadata for segment '" + seg +
                              "' which is not in the key; row ignored",
                          {line_no, seg, {}}});
      continue;
    }
    if (seen_at[it->second] != 0)
      throw Error(ErrorCode::kDuplicateSegment,
                  "metadata for segment '" + seg + "' already given on line " +
                      std::to_string(seen_at[it->second]),
                  {line_no, seg, {}});
    seen_at[it->second] = line_no;
    entries[it->second].meta = std::move(meta);
  }
}

}  // namespace

ParsedKey parse_key(const fs::path& key_path,
                    const std::optional<fs::path>& meta_path,
                    const std::optional<LanguageSet>& declared) {
  const std::string text = read_file(key_path);
  const auto lines = split_lines(text);
  if (lines.empty()) malformed(1, "empty key file, header missing");
  const auto header = checked_fields(lines[0], 1);
  if (header.size() != 2 || header[0] != "segmentid" ||
      header[1] != "language")
    malformed(1, "key header must be segmentid<TAB>language");

  struct Row {
    std::string segment;
    std::string language;
    std::size_t line_no;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size());
  std::unordered_map<std::string, std::size_t> row_of;
  row_of.reserve(lines.size());
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = checked_fields(lines[li], line_no);
    if (fields.size() != 2)
      malformed(line_no, "expected 2 fields, found " +
                             std::to_string(fields.size()));
    std::string seg(fields[0]);
    if (auto [it, fresh] = row_of.emplace(seg, rows.size()); !fresh)
      throw Error(ErrorCode::kDuplicateSegment,
                  "segment '" + seg + "' already given on line " +
                      std::to_string(rows[it->second].line_no),
                  {line_no, seg, {}});
    rows.push_back({std::move(seg), std::string(fields[1]), line_no});
  }

  std::optional<LanguageSet> langs = declared;
  if (!langs) {
    std::set<std::string> codes;
    for (const Row& r : rows) codes.insert(r.language);
    if (codes.size() < 2)
      throw Error(ErrorCode::kInvalidArgument,
                  "key has fewer than two languages; declare the language set");
    langs.emplace(std::vector<std::string>(codes.begin(), codes.end()));
  }

  std::vector<TrialEntry> entries;
  entries.reserve(rows.size());
  for (Row& r : rows) {
    auto lang = langs->find(r.language);
    if (!lang)
      throw Error(ErrorCode::kUnknownLanguage,
                  "language '" + r.language + "' is not declared",
                  {r.line_no, r.segment, {}});
    entries.push_back({std::move(r.segment), *lang, {}});
  }

  std::vector<Issue> warnings;
  if (meta_path) join_metadata(*meta_path, entries, row_of, warnings);
  return {TrialKey(std::move(*langs), std::move(entries)), std::move(warnings)};
}

ScoreSet parse_submission(const fs::path& path, const TrialKey& key,
                          std::string system_id, std::string condition_tag) {
  SubmissionParse parsed = parse_submission_collect(
      path, key, std::move(system_id), std::move(condition_tag));
  for (const Issue& issue : parsed.issues)
    if (issue.severity == Severity::kError) throw_issue(issue);
  return std::move(*parsed.set);
}

CheckedSubmission load_submission(const fs::path& path, const TrialKey& key,
                                  std::string system_id,
                                  std::string condition_tag) {
  SubmissionParse parsed = parse_submission_collect(
      path, key, std::move(system_id), std::move(condition_tag));
  CheckedSubmission out{{std::move(parsed.issues)}, std::move(parsed.set)};
  if (out.scores && out.scores->scores.rows() > 0) {
    const ScoreMatrix& s = out.scores->scores;
    std::string constant;
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if ((s.col(j).array() == s(0, j)).all()) {
        if (!constant.empty()) constant += ",";
        constant += key.languages().code(static_cast<std::size_t>(j));
      }
    }
    if (!constant.empty())
      out.report.issues.push_back(
          {Severity::kWarning, ErrorCode::kConstantScores,
           "zero variance in columns " + constant, {0, {}, constant}});
  }
  return out;
}

ValidationReport validate(const fs::path& path, const TrialKey& key) {
  return load_submission(path, key).report;
}

void write_key(const fs::path& path, const TrialKey& key) {
  std::string out = "segmentid\tlanguage\n";
  for (const TrialEntry& e : key.entries()) {
    out += e.segment_id;
    out += '\t';
    out += key.languages().code(e.language);
    out += '\n';
  }
  write_file(path, out);
}

void write_metadata(const fs::path& path, const TrialKey& key) {
  std::set<std::string> names;
  for (const TrialEntry& e : key.entries())
    for (const auto& [name, value] : e.meta.extra) names.insert(name);
  std::string out = "segmentid\tsource_type\tsad_duration";
  for (const auto& name : names) out += "\t" + name;
  out += '\n';
  for (const TrialEntry& e : key.entries()) {
    out += e.segment_id;
    out += '\t';
    out += e.meta.source_type ? std::string(to_string(*e.meta.source_type))
                              : std::string("-");
    out += '\t';
    if (e.meta.sad_duration)
      append_double(out, *e.meta.sad_duration);
    else
      out += '-';
    for (const auto& name : names) {
      out += '\t';
      auto it = e.meta.extra.find(name);
      out += it == e.meta.extra.end() ? std::string("-") : it->second;
    }
    out += '\n';
  }
  write_file(path, out);
}

void write_submission(const fs::path& path, const ScoreSet& set,
                      const TrialKey& key) {
  check_aligned(set, key);
  std::string out = "segmentid";
  for (const auto& code : set.languages.codes()) out += "\t" + code;
  out += '\n';
  out.reserve(out.size() * (key.size() + 1) +
              key.size() * static_cast<std::size_t>(set.scores.cols()) * 24);
  for (std::size_t r = 0; r < key.size(); ++r) {
    out += key.entry(r).segment_id;
    for (Eigen::Index j = 0; j < set.scores.cols(); ++j) {
      out += '\t';
      append_double(out, set.scores(static_cast<Eigen::Index>(r), j));
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace lre
