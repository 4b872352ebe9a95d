// tools/cli.cpp

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

#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "lre/analysis.hpp"
#include "lre/error.hpp"
#include "lre/parallel.hpp"
#include "lre/report_io.hpp"
#include "lre/scoring.hpp"
#include "lre/simulator.hpp"
#include "lre/submission_io.hpp"

namespace lre::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string key;
  std::string meta;
  std::string out_dir;
  std::string apps = "1:1:0.5,1:1:0.1";
  std::string scope = "target";
  std::string partition;
  std::string bins;
  std::string preset;
  bool confusion = false;
  bool keep_going = false;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw UsageError(what + ": '" + text + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

ApplicationSet parse_apps(const std::string& text) {
  ApplicationSet apps;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3)
      throw UsageError("--apps entries look like c_miss:c_fa:p_target, not '" +
                       item + "'");
    apps.push_back({parse_number(parts[0], "--apps"),
                    parse_number(parts[1], "--apps"),
                    parse_number(parts[2], "--apps")});
  }
  try {
    validate_applications(apps);
  } catch (const Error& e) {
    throw UsageError(std::string("--apps: ") + e.detail());
  }
  return apps;
}

ThresholdScope scope_of(const std::string& text) {
  try {
    return parse_scope(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--scope: ") + e.detail());
  }
}

PartitionSpec partition_of(const RunConfig& rc) {
  PartitionSpec spec;
  if (rc.partition == "source_type") {
    spec = PartitionSpec::by_source_type();
  } else if (rc.partition == "duration") {
    spec = PartitionSpec::by_duration();
    if (!rc.bins.empty()) {
      spec.bin_edges.clear();
      for (const auto& e : split(rc.bins, ','))
        spec.bin_edges.push_back(parse_number(e, "--bins"));
    }
  } else if (rc.partition.rfind("field:", 0) == 0 && rc.partition.size() > 6) {
    spec = PartitionSpec::by_field(rc.partition.substr(6));
  } else {
    throw UsageError("--partition must be source_type, duration or field:NAME");
  }
  if (!rc.bins.empty() && spec.kind != PartitionSpec::Kind::kDurationBins)
    throw UsageError("--bins only applies to --partition duration");
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("--bins: ") + e.detail());
  }
  return spec;
}

unsigned jobs_of(const RunConfig& rc) {
  return rc.jobs == 0 ? default_jobs() : rc.jobs;
}

std::optional<fs::path> meta_of(const RunConfig& rc) {
  if (rc.meta.empty()) return std::nullopt;
  return fs::path(rc.meta);
}

TrialKey load_key(const RunConfig& rc, std::ostream& err) {
  ParsedKey parsed = parse_key(rc.key, meta_of(rc));
  for (const Issue& w : parsed.warnings)
    err << "warning: " << to_string(w.code) << " " << w.message << " ("
        << w.where.str() << ")\n";
  return std::move(parsed.key);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory '" + dir + "'");
}

void print_issues(std::ostream& os, const std::string& path,
                  const ValidationReport& report) {
  os << path << ": " << (report.ok() ? "OK" : "FAILED") << " ("
     << report.count(Severity::kError) << " errors, "
     << report.count(Severity::kWarning) << " warnings)\n";
  for (const Issue& i : report.issues) {
    os << "  " << to_string(i.severity) << " " << to_string(i.code);
    const std::string loc = i.where.str();
    if (!loc.empty()) os << " [" << loc << "]";
    os << ": " << i.message << "\n";
  }
}

std::string validation_json(const std::string& path,
                            const ValidationReport& report) {
  nlohmann::ordered_json issues = nlohmann::ordered_json::array();
  for (const Issue& i : report.issues)
    issues.push_back({{"severity", std::string(to_string(i.severity))},
                      {"code", std::string(to_string(i.code))},
                      {"message", i.message},
                      {"line", i.where.line},
                      {"segment_id", i.where.segment_id},
                      {"column", i.where.column}});
  nlohmann::ordered_json j = {
      {"path", path}, {"ok", report.ok()}, {"issues", std::move(issues)}};
  return j.dump(2) + "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok)
    throw Error(ErrorCode::kIo, "write failed on '" + path.string() + "'");
}

void print_leaderboard(std::ostream& os,
                       const std::vector<LeaderboardRow>& rows) {
  os << "rank\tsystem_id\tact_c_primary\tmin_c_primary\tcalibration_gap\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    os << i + 1 << "\t" << rows[i].system_id << "\t"
       << format_fixed(rows[i].act_c_primary) << "\t"
       << format_fixed(rows[i].min_c_primary) << "\t"
       << format_fixed(rows[i].calibration_gap) << "\n";
}

int cmd_validate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const TrialKey key = load_key(rc, err);
  const std::string& path = rc.inputs.front();
  const ValidationReport report = validate(path, key);
  print_issues(out, path, report);
  const std::string json = validation_json(path, report);
  if (rc.out_dir.empty()) {
    out << json;
  } else {
    ensure_dir(rc.out_dir);
    write_text(fs::path(rc.out_dir) /
                   (fs::path(path).stem().string() + ".validation.json"),
               json);
  }
  return report.ok() ? kOk : kContentFailure;
}

// Loads every submission; failures are reported and left empty.
std::vector<std::optional<ScoreSet>> load_all(const RunConfig& rc,
                                              const TrialKey& key,
                                              std::ostream& out,
                                              bool& any_failed) {
  const std::size_t n = rc.inputs.size();
  std::vector<CheckedSubmission> checked(n);
  parallel_for(n, jobs_of(rc), [&](std::size_t i) {
    checked[i] = load_submission(rc.inputs[i], key);
  });
  std::vector<std::optional<ScoreSet>> sets(n);
  any_failed = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!checked[i].report.ok()) {
      print_issues(out, rc.inputs[i], checked[i].report);
      any_failed = true;
    }
    sets[i] = std::move(checked[i].scores);
  }
  return sets;
}

int cmd_score(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const ApplicationSet apps = parse_apps(rc.apps);
  const ThresholdScope scope = scope_of(rc.scope);
  const TrialKey key = load_key(rc, err);
  bool any_failed = false;
  auto sets = load_all(rc, key, out, any_failed);
  if (any_failed && !rc.keep_going) {
    err << "error: submissions failed validation; nothing scored "
           "(use --keep-going to score the rest)\n";
    return kContentFailure;
  }

  std::vector<std::optional<ScoreReport>> slots(sets.size());
  parallel_for(sets.size(), jobs_of(rc), [&](std::size_t i) {
    if (sets[i]) slots[i] = c_primary(*sets[i], key, apps, scope);
  });
  std::vector<ScoreReport> reports;
  for (auto& s : slots)
    if (s) reports.push_back(std::move(*s));

  const auto board = leaderboard(reports);
  print_leaderboard(out, board);
  if (!rc.out_dir.empty()) {
    ensure_dir(rc.out_dir);
    for (const ScoreReport& r : reports) write_report(r, rc.out_dir);
    write_leaderboard(fs::path(rc.out_dir) / "leaderboard.tsv", board);
  }
  return any_failed ? kContentFailure : kOk;
}

int cmd_analyze(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const ApplicationSet apps = parse_apps(rc.apps);
  const ThresholdScope scope = scope_of(rc.scope);
  std::optional<PartitionSpec> spec;
  if (!rc.partition.empty()) spec = partition_of(rc);
  else if (!rc.bins.empty())
    throw UsageError("--bins requires --partition duration");
  const TrialKey key = load_key(rc, err);
  bool any_failed = false;
  auto sets = load_all(rc, key, out, any_failed);
  if (any_failed) return kContentFailure;

  const std::size_t n = sets.size();
  std::vector<std::optional<ScoreReport>> reports(n);
  std::vector<std::optional<ConfusionMatrix>> confusions(n);
  std::vector<std::optional<PartitionResult>> partitions(n);
  parallel_for(n, jobs_of(rc), [&](std::size_t i) {
    reports[i] = c_primary(*sets[i], key, apps, scope);
    if (rc.confusion) confusions[i] = confusion(*sets[i], key, apps.front());
    if (spec) partitions[i] = partition_scores(*sets[i], key, apps, *spec, scope);
  });

  ensure_dir(rc.out_dir);
  std::vector<ScoreReport> all;
  for (auto& r : reports) all.push_back(std::move(*r));
  for (const ScoreReport& r : all) write_report(r, rc.out_dir);
  print_leaderboard(out, leaderboard(all));
  write_dispersion(fs::path(rc.out_dir) / "dispersion.tsv",
                   language_dispersion(all));

  if (rc.confusion)
    for (std::size_t i = 0; i < n; ++i)
      write_confusion(fs::path(rc.out_dir) /
                          (file_stem(all[i].system_id) + ".confusion.tsv"),
                      *confusions[i]);

  if (spec) {
    std::vector<PartitionResult> parts;
    for (auto& p : partitions) parts.push_back(std::move(*p));
    out << "\nlabel\tsystem_id\tn_segments\tact_c_primary\tmin_c_primary\n";
    for (const PartitionResult& p : parts) {
      for (const PartitionReport& c : p.cells)
        out << c.label << "\t" << c.report.system_id << "\t" << c.n_segments
            << "\t" << format_fixed(c.report.act_c_primary) << "\t"
            << format_fixed(c.report.min_c_primary) << "\n";
      for (const SkippedCell& s : p.skipped)
        err << "warning: partition cell " << s.label << " skipped ("
            << s.n_segments << " segments): " << s.reason << "\n";
    }
    if (!parts.empty() && !parts.front().unassigned.empty())
      err << "warning: " << parts.front().unassigned.size()
          << " segments fall outside every partition cell\n";
    write_partition_tsv(fs::path(rc.out_dir) / "partition.tsv", parts);
    write_partition_json(fs::path(rc.out_dir) / "partition.json", parts);
  }
  return kOk;
}

int cmd_simulate(const RunConfig& rc, std::ostream& out) {
  SimConfig config;
  try {
    if (!rc.inputs.empty()) {
      if (!rc.preset.empty())
        throw UsageError("give either a config file or --preset, not both");
      config = load_sim_config(rc.inputs.front());
    } else {
      config = sim_preset(rc.preset.empty() ? "dev-like" : rc.preset);
    }
    if (rc.seed) config.seed = *rc.seed;
    config.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const SimCampaign campaign = simulate_campaign(config, jobs_of(rc));
  const fs::path dir(rc.out_dir);
  ensure_dir(rc.out_dir);
  write_key(dir / "key.tsv", campaign.key);
  write_metadata(dir / "meta.tsv", campaign.key);
  write_text(dir / "config.txt", format_sim_config(config));
  parallel_for(campaign.scoresets.size(), jobs_of(rc), [&](std::size_t i) {
    const ScoreSet& s = campaign.scoresets[i];
    write_submission(dir / (file_stem(s.system_id) + ".tsv"), s, campaign.key);
  });
  out << "wrote " << campaign.key.size() << " segments, "
      << config.languages.size() << " languages, "
      << campaign.scoresets.size() << " systems to " << rc.out_dir << "\n";
  return kOk;
}

void add_key_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--key", rc.key, "Trial key TSV")->required();
  cmd->add_option("--meta", rc.meta, "Segment metadata TSV");
}

void add_scoring_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--apps", rc.apps,
                  "Applications as c_miss:c_fa:p_target[,...]")
      ->capture_default_str();
  cmd->add_option("--scope", rc.scope,
                  "Minimum-cost threshold scope: global|target|pair")
      ->capture_default_str();
  cmd->add_option("--jobs", rc.jobs, "Worker threads (0 = all cores)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Language detection evaluation toolkit", "lre-eval"};
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Check a submission file");
  validate_cmd->add_option("submission", rc.inputs, "Submission TSV")
      ->required()
      ->expected(1);
  add_key_options(validate_cmd, rc);
  validate_cmd->add_option("--out", rc.out_dir, "Directory for the JSON report");

  auto* score_cmd = app.add_subcommand("score", "Score submissions");
  score_cmd->add_option("submissions", rc.inputs, "Submission TSVs")->required();
  add_key_options(score_cmd, rc);
  add_scoring_options(score_cmd, rc);
  score_cmd->add_option("--out", rc.out_dir, "Output directory");
  score_cmd->add_flag("--keep-going", rc.keep_going,
                      "Score valid submissions even if others fail");

  auto* analyze_cmd =
      app.add_subcommand("analyze", "Confusion, partition and dispersion data");
  analyze_cmd->add_option("submissions", rc.inputs, "Submission TSVs")
      ->required();
  add_key_options(analyze_cmd, rc);
  add_scoring_options(analyze_cmd, rc);
  analyze_cmd->add_option("--out", rc.out_dir, "Output directory")->required();
  analyze_cmd->add_option("--partition", rc.partition,
                          "source_type | duration | field:NAME");
  analyze_cmd->add_option("--bins", rc.bins,
                          "Duration bin edges in seconds, e.g. 3,5,10,35");
  analyze_cmd->add_flag("--confusion", rc.confusion,
                        "Write confusion matrices");

  auto* simulate_cmd =
      app.add_subcommand("simulate", "Generate a synthetic campaign");
  simulate_cmd->add_option("config", rc.inputs, "Simulation config file")
      ->expected(0, 1);
  simulate_cmd->add_option("--preset", rc.preset,
                           "dev-like | test-like | ladder");
  simulate_cmd->add_option("--seed", rc.seed, "Override the config seed");
  simulate_cmd->add_option("--out", rc.out_dir, "Output directory")->required();
  simulate_cmd->add_option("--jobs", rc.jobs, "Worker threads (0 = all cores)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrIo;
  }

  try {
    if (*validate_cmd) return cmd_validate(rc, out, err);
    if (*score_cmd) return cmd_score(rc, out, err);
    if (*analyze_cmd) return cmd_analyze(rc, out, err);
    if (*simulate_cmd) return cmd_simulate(rc, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? kUsageOrIo : kContentFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  }
  return kUsageOrIo;
}

}  // namespace lre::cli
