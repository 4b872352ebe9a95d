// src/report_io.cpp

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

#include "lre/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lre/error.hpp"

namespace lre {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      throw Error(ErrorCode::kIo, "cannot create directory '" +
                                      path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  out << text;
  if (!out)
    throw Error(ErrorCode::kIo, "write failed on '" + path.string() + "'");
}

json threshold_json(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  return t;
}

double threshold_value(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw Error(ErrorCode::kMalformed, "bad threshold '" + s + "'");
  }
  return j.get<double>();
}

json app_json(const AppReport& ar, const std::vector<std::string>& langs) {
  json pairs = json::array();
  for (const PairResult& p : ar.pairs) {
    pairs.push_back({
        {"target", langs.at(p.actual.target)},
        {"nontarget", langs.at(p.actual.nontarget)},
        {"n_target", p.actual.n_target_trials},
        {"n_nontarget", p.actual.n_nontarget_trials},
        {"act", {{"p_miss", p.actual.p_miss},
                 {"p_fa", p.actual.p_fa},
                 {"cost", p.act_cost}}},
        {"min", {{"threshold", threshold_json(p.min_threshold)},
                 {"p_miss", p.at_min.p_miss},
                 {"p_fa", p.at_min.p_fa},
                 {"cost", p.min_cost}}},
    });
  }
  json per_language = json::array();
  for (const LanguageCost& lc : ar.per_language)
    per_language.push_back({{"language", langs.at(lc.language)},
                            {"act", lc.act},
                            {"min", lc.min}});
  return {
      {"params", {{"c_miss", ar.params.c_miss},
                  {"c_fa", ar.params.c_fa},
                  {"p_target", ar.params.p_target}}},
      {"bayes_threshold", ar.bayes_threshold},
      {"pairs", std::move(pairs)},
      {"per_language", std::move(per_language)},
      {"aggregate", {{"act", ar.act}, {"min", ar.min}}},
  };
}

json report_to_json(const ScoreReport& r) {
  json apps = json::array();
  for (const AppReport& ar : r.apps) apps.push_back(app_json(ar, r.languages));
  json per_language = json::array();
  for (const LanguageCost& lc : r.per_language)
    per_language.push_back({{"language", r.languages.at(lc.language)},
                            {"act", lc.act},
                            {"min", lc.min}});
  json dropped = json::array();
  for (const auto& [t, n] : r.dropped_pairs)
    dropped.push_back(json::array({r.languages.at(t), r.languages.at(n)}));
  return {
      {"system_id", r.system_id},
      {"condition_tag", r.condition_tag},
      {"scope", std::string(to_string(r.scope))},
      {"languages", r.languages},
      {"n_segments", r.n_segments},
      {"apps", std::move(apps)},
      {"per_language", std::move(per_language)},
      {"dropped_pairs", std::move(dropped)},
      {"act_c_primary", r.act_c_primary},
      {"min_c_primary", r.min_c_primary},
      {"calibration_gap", r.calibration_gap},
  };
}

std::size_t language_index(const std::vector<std::string>& langs,
                           const std::string& code) {
  for (std::size_t i = 0; i < langs.size(); ++i)
    if (langs[i] == code) return i;
  throw Error(ErrorCode::kUnknownLanguage, "language '" + code + "'");
}

LanguageCost language_cost(const json& j,
                           const std::vector<std::string>& langs) {
  return {language_index(langs, j.at("language").get<std::string>()),
          j.at("act").get<double>(), j.at("min").get<double>()};
}

ScoreReport report_from_json(const json& j) {
  ScoreReport r;
  r.system_id = j.at("system_id").get<std::string>();
  r.condition_tag = j.at("condition_tag").get<std::string>();
  r.scope = parse_scope(j.at("scope").get<std::string>());
  r.languages = j.at("languages").get<std::vector<std::string>>();
  r.n_segments = j.at("n_segments").get<std::size_t>();
  for (const json& ja : j.at("apps")) {
    AppReport ar;
    const json& p = ja.at("params");
    ar.params = {p.at("c_miss").get<double>(), p.at("c_fa").get<double>(),
                 p.at("p_target").get<double>()};
    ar.bayes_threshold = ja.at("bayes_threshold").get<double>();
    for (const json& jp : ja.at("pairs")) {
      PairResult pr;
      pr.actual.target =
          language_index(r.languages, jp.at("target").get<std::string>());
      pr.actual.nontarget =
          language_index(r.languages, jp.at("nontarget").get<std::string>());
      pr.actual.n_target_trials = jp.at("n_target").get<std::size_t>();
      pr.actual.n_nontarget_trials = jp.at("n_nontarget").get<std::size_t>();
      pr.at_min = pr.actual;
      pr.actual.p_miss = jp.at("act").at("p_miss").get<double>();
      pr.actual.p_fa = jp.at("act").at("p_fa").get<double>();
      pr.act_cost = jp.at("act").at("cost").get<double>();
      pr.min_threshold = threshold_value(jp.at("min").at("threshold"));
      pr.at_min.p_miss = jp.at("min").at("p_miss").get<double>();
      pr.at_min.p_fa = jp.at("min").at("p_fa").get<double>();
      pr.min_cost = jp.at("min").at("cost").get<double>();
      ar.pairs.push_back(pr);
    }
    for (const json& jl : ja.at("per_language"))
      ar.per_language.push_back(language_cost(jl, r.languages));
    ar.act = ja.at("aggregate").at("act").get<double>();
    ar.min = ja.at("aggregate").at("min").get<double>();
    r.apps.push_back(std::move(ar));
  }
  for (const json& jl : j.at("per_language"))
    r.per_language.push_back(language_cost(jl, r.languages));
  for (const json& jd : j.at("dropped_pairs"))
    r.dropped_pairs.emplace_back(
        language_index(r.languages, jd.at(0).get<std::string>()),
        language_index(r.languages, jd.at(1).get<std::string>()));
  r.act_c_primary = j.at("act_c_primary").get<double>();
  r.min_c_primary = j.at("min_c_primary").get<double>();
  r.calibration_gap = j.at("calibration_gap").get<double>();
  return r;
}

}  // namespace

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string file_stem(const std::string& system_id) {
  std::string out = system_id.empty() ? "system" : system_id;
  for (char& c : out)
    if (c == '/' || c == '\\' || c == '\0' || c == ' ' || c == '\t') c = '_';
  return out;
}

std::string report_json(const ScoreReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

ScoreReport parse_report_json(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformed, std::string("report JSON: ") + e.what());
  }
}

ScoreReport read_report_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report_json(buf.str());
}

std::vector<fs::path> write_report(const ScoreReport& report,
                                   const fs::path& dir) {
  const std::string stem = file_stem(report.system_id);
  const fs::path json_path = dir / (stem + ".json");
  const fs::path pairs_path = dir / (stem + ".pairs.tsv");
  const fs::path lang_path = dir / (stem + ".languages.tsv");

  write_text(json_path, report_json(report));

  std::string pairs =
      "app\tc_miss\tc_fa\tp_target\ttarget\tnontarget\tn_target\t"
      "n_nontarget\tact_p_miss\tact_p_fa\tact_cost\tmin_threshold\t"
      "min_p_miss\tmin_p_fa\tmin_cost\n";
  for (std::size_t a = 0; a < report.apps.size(); ++a) {
    const AppReport& ar = report.apps[a];
    for (const PairResult& p : ar.pairs) {
      pairs += std::to_string(a + 1) + "\t" + format_fixed(ar.params.c_miss) +
               "\t" + format_fixed(ar.params.c_fa) + "\t" +
               format_fixed(ar.params.p_target) + "\t" +
               report.languages.at(p.actual.target) + "\t" +
               report.languages.at(p.actual.nontarget) + "\t" +
               std::to_string(p.actual.n_target_trials) + "\t" +
               std::to_string(p.actual.n_nontarget_trials) + "\t" +
               format_fixed(p.actual.p_miss) + "\t" +
               format_fixed(p.actual.p_fa) + "\t" + format_fixed(p.act_cost) +
               "\t" + format_fixed(p.min_threshold) + "\t" +
               format_fixed(p.at_min.p_miss) + "\t" +
               format_fixed(p.at_min.p_fa) + "\t" + format_fixed(p.min_cost) +
               "\n";
    }
  }
  write_text(pairs_path, pairs);

  std::string langs = "application\tlanguage\tact\tmin\n";
  for (std::size_t a = 0; a < report.apps.size(); ++a)
    for (const LanguageCost& lc : report.apps[a].per_language)
      langs += std::to_string(a + 1) + "\t" +
               report.languages.at(lc.language) + "\t" + format_fixed(lc.act) +
               "\t" + format_fixed(lc.min) + "\n";
  for (const LanguageCost& lc : report.per_language)
    langs += "primary\t" + report.languages.at(lc.language) + "\t" +
             format_fixed(lc.act) + "\t" + format_fixed(lc.min) + "\n";
  write_text(lang_path, langs);

  return {json_path, pairs_path, lang_path};
}

void write_leaderboard(const fs::path& path,
                       std::span<const LeaderboardRow> rows) {
  std::string out =
      "rank\tsystem_id\tcondition\tact_c_primary\tmin_c_primary\t"
      "calibration_gap\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LeaderboardRow& r = rows[i];
    out += std::to_string(i + 1) + "\t" + r.system_id + "\t" +
           (r.condition_tag.empty() ? std::string("-") : r.condition_tag) +
           "\t" + format_fixed(r.act_c_primary) + "\t" +
           format_fixed(r.min_c_primary) + "\t" +
           format_fixed(r.calibration_gap) + "\n";
  }
  write_text(path, out);
}

void write_confusion(const fs::path& path, const ConfusionMatrix& m) {
  std::string out = "target";
  for (const auto& code : m.languages.codes()) out += "\t" + code;
  out += "\n";
  for (Eigen::Index i = 0; i < m.cells.rows(); ++i) {
    out += m.languages.code(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m.cells.cols(); ++j)
      out += "\t" + format_fixed(m.cells(i, j));
    out += "\n";
  }
  write_text(path, out);
}

void write_partition_tsv(const fs::path& path,
                         std::span<const PartitionResult> results) {
  std::string out =
      "label\tsystem_id\tn_segments\tact_c_primary\tmin_c_primary\t"
      "calibration_gap\n";
  for (const PartitionResult& result : results)
    for (const PartitionReport& cell : result.cells)
      out += cell.label + "\t" + cell.report.system_id + "\t" +
             std::to_string(cell.n_segments) + "\t" +
             format_fixed(cell.report.act_c_primary) + "\t" +
             format_fixed(cell.report.min_c_primary) + "\t" +
             format_fixed(cell.report.calibration_gap) + "\n";
  write_text(path, out);
}

void write_partition_json(const fs::path& path,
                          std::span<const PartitionResult> results) {
  json systems = json::array();
  for (const PartitionResult& result : results) {
    json cells = json::array();
    for (const PartitionReport& cell : result.cells)
      cells.push_back({{"label", cell.label},
                       {"n_segments", cell.n_segments},
                       {"report", report_to_json(cell.report)}});
    json skipped = json::array();
    for (const SkippedCell& s : result.skipped)
      skipped.push_back({{"label", s.label},
                         {"n_segments", s.n_segments},
                         {"reason", s.reason}});
    systems.push_back({{"cells", std::move(cells)},
                       {"skipped", std::move(skipped)},
                       {"unassigned", result.unassigned.size()}});
  }
  write_text(path, json{{"partitions", std::move(systems)}}.dump(2) + "\n");
}

void write_dispersion(const fs::path& path,
                      std::span<const DispersionRow> rows) {
  std::string out = "system_id\tlanguage\tact_c_primary\n";
  for (const DispersionRow& r : rows)
    out += r.system_id + "\t" + r.language + "\t" + format_fixed(r.act) + "\n";
  write_text(path, out);
}

}  // namespace lre
