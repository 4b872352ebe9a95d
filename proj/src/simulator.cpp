// src/simulator.cpp

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

#include "lre/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "lre/error.hpp"
#include "lre/parallel.hpp"

namespace lre {

namespace {

constexpr std::uint64_t kStreamOrder = 0x6f72646572ULL;
constexpr std::uint64_t kStreamMeta = 0x6d657461ULL;
constexpr std::uint64_t kPrototypeSeed = 0x70726f746fULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::size_t> test_like_counts() {
  return {1540, 2769, 1460, 2190, 1330, 1050, 2370,
          2010, 383,  1272, 2450, 2290, 2590, 2769};
}

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "simulation config: " + why);
  };
  const std::size_t n = languages.size();
  if (counts.size() != n) fail("counts must list one value per language");
  for (std::size_t c : counts)
    if (c < 1) fail("every language needs at least one segment");
  if (static_cast<std::size_t>(means.rows()) != n)
    fail("means must have one row per language");
  if (means.cols() < 1) fail("embed_dim must be positive");
  if (!means.allFinite()) fail("means must be finite");
  if (!(noise_sigma > 0 && std::isfinite(noise_sigma)))
    fail("noise_sigma must be positive");
  if (!(duration_lo > 0 && duration_lo < duration_hi &&
        std::isfinite(duration_hi)))
    fail("duration range must satisfy 0 < lo < hi");
  if (!(duration_ref > 0 && std::isfinite(duration_ref)))
    fail("duration_ref must be positive");
  if (!std::isfinite(duration_exponent)) fail("duration_exponent must be finite");
  if (!(cts_fraction >= 0 && cts_fraction <= 1))
    fail("cts_fraction must lie in [0, 1]");
  if (!(cts_extra_sigma >= 0 && std::isfinite(cts_extra_sigma)))
    fail("cts_extra_sigma must be non-negative");
  if (!(miscal_scale > 0 && std::isfinite(miscal_scale)))
    fail("miscal_scale must be positive");
  if (!std::isfinite(miscal_offset)) fail("miscal_offset must be finite");
  for (const SystemSpec& s : systems) {
    if (s.name.empty()) fail("system names must be non-empty");
    if (s.noise_sigma && !(*s.noise_sigma > 0))
      fail("system " + s.name + ": noise_sigma must be positive");
    if (s.miscal_scale && !(*s.miscal_scale > 0))
      fail("system " + s.name + ": miscal_scale must be positive");
    if (s.miscal_offset && !std::isfinite(*s.miscal_offset))
      fail("system " + s.name + ": miscal_offset must be finite");
  }
}

Eigen::MatrixXd lre22_prototypes() {
  // Rows follow LanguageSet::lre22(). Unit layout: group centres four
  // units apart on separate axes, members spread around their centre.
  Eigen::MatrixXd m(14, 4);
  m << 0.0, 4.0, 0.0, 1.8,     // afr-afr
      4.0, 0.0, 0.9, 0.0,      // ara-aeb
      4.0, 0.78, -0.45, 0.0,   // ara-arq
      4.0, -0.78, -0.45, 0.0,  // ara-ayl
      0.0, 4.0, 0.8, 0.0,      // eng-ens
      0.0, 4.0, -0.8, 0.0,     // eng-iaf
      4.0, 0.0, 0.0, 1.8,      // fra-ntf
      0.0, 0.0, 4.0, 1.1,      // nbl-nbl
      -4.0, 0.0, 0.0, 0.0,     // orm-orm
      0.0, 0.0, 0.0, -4.0,     // tir-tir
      1.2, 0.0, 4.0, -1.0,     // tso-tso
      -1.2, 0.0, 4.0, -1.0,    // ven-ven
      0.0, 0.55, 4.0, 0.0,     // xho-xho
      0.0, -0.55, 4.0, 0.0;    // zul-zul
  return 1.5 * m;
}

Eigen::MatrixXd random_prototypes(std::size_t languages, std::size_t dim,
                                  double spread) {
  std::mt19937_64 rng(mix(kPrototypeSeed, languages, dim));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(languages, dim);
  for (std::size_t i = 0; i < languages; ++i)
    for (std::size_t d = 0; d < dim; ++d) m(i, d) = spread * normal(rng);
  return m;
}

SimConfig sim_preset(std::string_view name) {
  SimConfig config;
  config.means = lre22_prototypes();
  config.counts.assign(config.languages.size(), 300);
  if (name == "dev-like") return config;
  if (name == "test-like") {
    config.counts = test_like_counts();
    return config;
  }
  if (name == "ladder") {
    config.systems = {{"sigma-0.5", 0.5, {}, {}, {}},
                      {"sigma-1", 1.0, {}, {}, {}},
                      {"sigma-2", 2.0, {}, {}, {}}};
    return config;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> sim_preset_names() {
  return {"dev-like", "test-like", "ladder"};
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    out.push_back(trim(value.substr(start, comma - start)));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformed, "simulation config: " + why,
              {line_no, {}, {}});
}

double to_double(const std::string& text, std::size_t line_no) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(v))
    bad_line(line_no, "'" + text + "' is not a finite number");
  return v;
}

std::uint64_t to_uint(const std::string& text, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    bad_line(line_no, "'" + text + "' is not a non-negative integer");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

SimConfig parse_sim_config(std::string_view text) {
  struct Line {
    std::size_t no;
    std::string key;
    std::string value;
  };
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string body = trim(raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) bad_line(line_no, "expected key = value");
    Line l{line_no, trim(body.substr(0, eq)), trim(body.substr(eq + 1))};
    if (l.key.empty() || l.value.empty())
      bad_line(line_no, "expected key = value");
    lines.push_back(std::move(l));
  }

  SimConfig config = sim_preset("dev-like");
  for (const Line& l : lines)
    if (l.key == "preset") config = sim_preset(l.value);

  bool languages_set = false;
  std::optional<std::vector<std::size_t>> counts;
  std::optional<std::size_t> embed_dim;
  std::optional<double> spread;
  std::map<std::string, std::pair<std::size_t, std::vector<double>>> means;
  auto system = [&config](const std::string& name) -> SystemSpec& {
    for (SystemSpec& s : config.systems)
      if (s.name == name) return s;
    config.systems.push_back({name, {}, {}, {}, {}});
    return config.systems.back();
  };
  bool systems_cleared = false;

  for (const Line& l : lines) {
    const std::string& k = l.key;
    const std::string& v = l.value;
    if (k == "preset") continue;
    if (k == "seed") config.seed = to_uint(v, l.no);
    else if (k == "languages") {
      config.languages = LanguageSet(split_list(v));
      languages_set = true;
    } else if (k == "counts") {
      std::vector<std::size_t> c;
      for (const auto& item : split_list(v))
        c.push_back(static_cast<std::size_t>(to_uint(item, l.no)));
      counts = std::move(c);
    } else if (k == "embed_dim") {
      embed_dim = static_cast<std::size_t>(to_uint(v, l.no));
      if (*embed_dim == 0) bad_line(l.no, "embed_dim must be positive");
    } else if (k == "prototype_spread") spread = to_double(v, l.no);
    else if (k.rfind("mean.", 0) == 0) {
      std::vector<double> row;
      for (const auto& item : split_list(v)) row.push_back(to_double(item, l.no));
      means[k.substr(5)] = {l.no, std::move(row)};
    } else if (k == "noise_sigma") config.noise_sigma = to_double(v, l.no);
    else if (k == "duration_lo") config.duration_lo = to_double(v, l.no);
    else if (k == "duration_hi") config.duration_hi = to_double(v, l.no);
    else if (k == "duration_ref") config.duration_ref = to_double(v, l.no);
    else if (k == "duration_exponent")
      config.duration_exponent = to_double(v, l.no);
    else if (k == "cts_fraction") config.cts_fraction = to_double(v, l.no);
    else if (k == "cts_extra_sigma") config.cts_extra_sigma = to_double(v, l.no);
    else if (k == "miscal_scale") config.miscal_scale = to_double(v, l.no);
    else if (k == "miscal_offset") config.miscal_offset = to_double(v, l.no);
    else if (k.rfind("system.", 0) == 0) {
      // A config that declares systems replaces the preset's list.
      if (!systems_cleared) {
        config.systems.clear();
        systems_cleared = true;
      }
      const auto dot = k.rfind('.');
      if (dot <= 7) bad_line(l.no, "expected system.NAME.FIELD");
      const std::string name = k.substr(7, dot - 7);
      const std::string field = k.substr(dot + 1);
      SystemSpec& s = system(name);
      if (field == "noise_sigma") s.noise_sigma = to_double(v, l.no);
      else if (field == "miscal_scale") s.miscal_scale = to_double(v, l.no);
      else if (field == "miscal_offset") s.miscal_offset = to_double(v, l.no);
      else if (field == "condition") s.condition_tag = v;
      else if (field == "enabled") {
        if (v != "true") bad_line(l.no, "system.NAME.enabled takes 'true'");
      } else
        bad_line(l.no, "unknown system field '" + field + "'");
    } else
      bad_line(l.no, "unknown key '" + k + "'");
  }

  const std::size_t n = config.languages.size();
  if (languages_set || embed_dim || spread) {
    const bool canned = config.languages == LanguageSet::lre22() &&
                        !embed_dim && !spread;
    config.means =
        canned ? lre22_prototypes()
               : random_prototypes(n, embed_dim.value_or(4), spread.value_or(4.0));
  }
  if (counts) {
    if (counts->size() == 1) counts->assign(n, counts->front());
    config.counts = *counts;
  } else if (config.counts.size() != n) {
    config.counts.assign(n, 300);
  }
  for (const auto& [code, entry] : means) {
    const auto& [no, row] = entry;
    auto idx = config.languages.find(code);
    if (!idx) bad_line(no, "mean for unknown language '" + code + "'");
    if (row.size() != config.embed_dim())
      bad_line(no, "mean." + code + " needs " +
                       std::to_string(config.embed_dim()) + " values");
    for (std::size_t d = 0; d < row.size(); ++d)
      config.means(static_cast<Eigen::Index>(*idx), static_cast<Eigen::Index>(d)) =
          row[d];
  }
  config.validate();
  return config;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str());
}

std::string format_sim_config(const SimConfig& c) {
  std::ostringstream out;
  auto list = [](const auto& values, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ",";
      s += fmt(values[i]);
    }
    return s;
  };
  out << "seed = " << c.seed << "\n";
  out << "languages = "
      << list(c.languages.codes(), [](const std::string& s) { return s; })
      << "\n";
  out << "counts = "
      << list(c.counts, [](std::size_t v) { return std::to_string(v); }) << "\n";
  out << "embed_dim = " << c.embed_dim() << "\n";
  for (std::size_t i = 0; i < c.languages.size(); ++i) {
    std::vector<double> row(c.embed_dim());
    for (std::size_t d = 0; d < row.size(); ++d)
      row[d] = c.means(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
    out << "mean." << c.languages.code(i) << " = " << list(row, format_double)
        << "\n";
  }
  out << "noise_sigma = " << format_double(c.noise_sigma) << "\n";
  out << "duration_lo = " << format_double(c.duration_lo) << "\n";
  out << "duration_hi = " << format_double(c.duration_hi) << "\n";
  out << "duration_ref = " << format_double(c.duration_ref) << "\n";
  out << "duration_exponent = " << format_double(c.duration_exponent) << "\n";
  out << "cts_fraction = " << format_double(c.cts_fraction) << "\n";
  out << "cts_extra_sigma = " << format_double(c.cts_extra_sigma) << "\n";
  out << "miscal_scale = " << format_double(c.miscal_scale) << "\n";
  out << "miscal_offset = " << format_double(c.miscal_offset) << "\n";
  for (const SystemSpec& s : c.systems) {
    const std::string p = "system." + s.name + ".";
    out << p << "enabled = true\n";
    if (s.noise_sigma)
      out << p << "noise_sigma = " << format_double(*s.noise_sigma) << "\n";
    if (s.miscal_scale)
      out << p << "miscal_scale = " << format_double(*s.miscal_scale) << "\n";
    if (s.miscal_offset)
      out << p << "miscal_offset = " << format_double(*s.miscal_offset) << "\n";
    if (!s.condition_tag.empty())
      out << p << "condition = " << s.condition_tag << "\n";
  }
  return out.str();
}

TrialKey simulate_key(const SimConfig& config) {
  config.validate();
  std::vector<std::size_t> labels;
  for (std::size_t l = 0; l < config.counts.size(); ++l)
    labels.insert(labels.end(), config.counts[l], l);
  std::mt19937_64 order_rng(mix(config.seed, kStreamOrder));
  std::shuffle(labels.begin(), labels.end(), order_rng);

  const std::size_t width = std::max<std::size_t>(
      6, std::to_string(labels.size()).size());
  std::vector<TrialEntry> entries;
  entries.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::mt19937_64 rng(mix(config.seed, kStreamMeta, i));
    std::uniform_real_distribution<double> duration(config.duration_lo,
                                                    config.duration_hi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SegmentMeta meta;
    meta.sad_duration = duration(rng);
    meta.source_type =
        unit(rng) < config.cts_fraction ? SourceType::kCts : SourceType::kBnbs;
    std::string num = std::to_string(i + 1);
    if (num.size() < width) num.insert(0, width - num.size(), '0');
    entries.push_back({"sim_" + num, labels[i], std::move(meta)});
  }
  return TrialKey(config.languages, std::move(entries));
}

ScoreSet simulate_scores(const SimConfig& config, const TrialKey& key,
                         std::string_view system_label, unsigned jobs) {
  config.validate();
  if (!(key.languages() == config.languages))
    throw Error(ErrorCode::kLanguageMismatch,
                "key languages differ from the simulation config");
  const Eigen::Index n = static_cast<Eigen::Index>(config.languages.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(config.embed_dim());
  const std::uint64_t stream = mix(config.seed, fnv1a(system_label));

  ScoreMatrix scores(static_cast<Eigen::Index>(key.size()), n);
  parallel_for(key.size(), jobs, [&](std::size_t row) {
    const TrialEntry& e = key.entry(row);
    const double duration = e.meta.sad_duration.value_or(config.duration_ref);
    const bool cts = e.meta.source_type == SourceType::kCts;
    const double sigma =
        config.noise_sigma *
        std::pow(config.duration_ref / duration, config.duration_exponent) *
        (1.0 + (cts ? config.cts_extra_sigma : 0.0));

    std::mt19937_64 rng(mix(stream, row));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x = config.means.row(static_cast<Eigen::Index>(e.language))
                            .transpose();
    for (Eigen::Index d = 0; d < dim; ++d) x(d) += sigma * normal(rng);

    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (Eigen::Index l = 0; l < n; ++l) {
      const double s =
          -(x - config.means.row(l).transpose()).squaredNorm() * inv;
      scores(static_cast<Eigen::Index>(row), l) =
          config.miscal_scale * s + (l % 2 == 0 ? config.miscal_offset : 0.0);
    }
  });
  return {std::string(system_label), {}, config.languages, std::move(scores)};
}

SimCampaign simulate_campaign(const SimConfig& config,
                              std::span<const SystemSpec> systems,
                              unsigned jobs) {
  SimCampaign campaign{simulate_key(config), {}};
  if (systems.empty()) {
    campaign.scoresets.push_back(
        simulate_scores(config, campaign.key, "sys1", jobs));
    return campaign;
  }
  for (const SystemSpec& spec : systems) {
    SimConfig sys = config;
    if (spec.noise_sigma) sys.noise_sigma = *spec.noise_sigma;
    if (spec.miscal_scale) sys.miscal_scale = *spec.miscal_scale;
    if (spec.miscal_offset) sys.miscal_offset = *spec.miscal_offset;
    ScoreSet set = simulate_scores(sys, campaign.key, spec.name, jobs);
    set.condition_tag = spec.condition_tag;
    campaign.scoresets.push_back(std::move(set));
  }
  return campaign;
}

SimCampaign simulate_campaign(const SimConfig& config, unsigned jobs) {
  return simulate_campaign(config, config.systems, jobs);
}

}  // namespace lre
