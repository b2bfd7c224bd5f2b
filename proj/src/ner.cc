// Copyright 2026 The embeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embeval/ner.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "embeval/corpus.h"
#include "embeval/error.h"
#include "embeval/kernels.h"

namespace embeval::ner {

namespace {

constexpr std::string_view kLabelNames[kNumLabels] = {"PER", "LOC", "ORG", "O"};
constexpr std::string_view kBioPrefixes[] = {"B-", "I-", "E-", "S-", "L-", "U-"};

double safe_ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

nlohmann::json summary_json(const ScoreSummary &s) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t c = 0; c < kNumEntities; ++c) {
    j[std::string(kLabelNames[c])] = s.f1[c];
  }
  j["macro_f1"] = s.macro_f1;
  return j;
}

ScoreSummary summary_from_json(const nlohmann::json &j) {
  ScoreSummary s;
  for (std::size_t c = 0; c < kNumEntities; ++c) {
    s.f1[c] = j.at(std::string(kLabelNames[c])).get<double>();
  }
  s.macro_f1 = j.at("macro_f1").get<double>();
  return s;
}

ScoreSummary summarize(const RunScore &r) {
  ScoreSummary s;
  for (std::size_t c = 0; c < kNumEntities; ++c) s.f1[c] = r.classes[c].f1;
  s.macro_f1 = r.macro_f1;
  return s;
}

std::string fmt_optional(const std::optional<double> &v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("NA");
}

}  // namespace

std::string_view label_name(NerLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<NerLabel> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) return static_cast<NerLabel>(i);
  }
  return std::nullopt;
}

LabelMap LabelMap::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  LabelMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim_cr(line);
    const auto fields = corpus::split_whitespace(text);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2) {
      throw FormatError(path.string(), lineno, "expected source and target label");
    }
    const auto target = parse_label(fields[1]);
    if (!target) {
      throw FormatError(path.string(), lineno,
                        "target must be PER, LOC, ORG or O, got '" +
                            std::string(fields[1]) + "'");
    }
    map.set(std::string(fields[0]), *target);
  }
  return map;
}

void LabelMap::set(std::string source, NerLabel target) {
  entries_.insert_or_assign(std::move(source), target);
}

NerLabel LabelMap::apply(std::string_view raw, bool *unmapped) const {
  if (unmapped) *unmapped = false;
  if (auto it = entries_.find(raw); it != entries_.end()) return it->second;
  std::string_view core = raw;
  for (const std::string_view prefix : kBioPrefixes) {
    if (core.starts_with(prefix)) {
      core.remove_prefix(prefix.size());
      break;
    }
  }
  if (auto label = parse_label(core)) return *label;
  if (unmapped) *unmapped = true;
  return NerLabel::kO;
}

ParseResult parse_ner(std::istream &in, const std::string &source,
                      const LabelMap &map) {
  ParseResult result;
  NerSentence current;
  const auto finish = [&] {
    if (current.tokens.empty()) return;
    result.sentences.push_back(std::move(current));
    current = {};
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = corpus::split_whitespace(trim_cr(line));
    if (fields.empty()) {
      finish();
      continue;
    }
    if (fields.size() != 2) {
      throw FormatError(source, lineno,
                        "expected 2 columns, got " + std::to_string(fields.size()));
    }
    bool unmapped = false;
    const NerLabel label = map.apply(fields[1], &unmapped);
    if (unmapped) {
      ++result.unmapped;
      ++result.unmapped_labels[std::string(fields[1])];
    }
    current.tokens.emplace_back(fields[0]);
    current.labels.push_back(label);
  }
  if (in.bad()) throw IoError("read error: " + source);
  finish();
  for (const auto &[label, count] : result.unmapped_labels) {
    spdlog::warn("{}: label '{}' mapped to O ({} tokens)", source, label, count);
  }
  return result;
}

ParseResult parse_ner(const std::filesystem::path &path, const LabelMap &map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_ner(in, path.string(), map);
}

void write_ner(std::span<const NerSentence> sentences, std::ostream &out) {
  for (const NerSentence &s : sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out << s.tokens[i] << '\t' << label_name(s.labels[i]) << '\n';
    }
    out << '\n';
  }
}

void write_ner(std::span<const NerSentence> sentences,
               const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_ner(sentences, out);
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json LabelStats::to_json() const {
  return {{"PER", per},
          {"LOC", loc},
          {"ORG", org},
          {"tokens", n},
          {"sentences", sentences},
          {"density", density}};
}

LabelStats LabelStats::from_json(const nlohmann::json &j) {
  LabelStats s;
  s.per = j.at("PER").get<std::size_t>();
  s.loc = j.at("LOC").get<std::size_t>();
  s.org = j.at("ORG").get<std::size_t>();
  s.n = j.at("tokens").get<std::size_t>();
  s.sentences = j.value("sentences", std::size_t{0});
  s.density = j.at("density").get<double>();
  return s;
}

LabelStats label_stats(std::span<const NerSentence> sentences) {
  std::array<std::size_t, kNumLabels> counts{};
  std::size_t n = 0;
  for (const NerSentence &s : sentences) {
    for (const NerLabel l : s.labels) ++counts[static_cast<std::size_t>(l)];
    n += s.labels.size();
  }
  LabelStats stats = label_stats(counts[0], counts[1], counts[2], n);
  stats.sentences = sentences.size();
  return stats;
}

LabelStats label_stats(std::size_t per, std::size_t loc, std::size_t org,
                       std::size_t n) {
  if (per + loc + org > n) {
    throw ArgumentError("entity counts exceed the token count");
  }
  LabelStats s;
  s.per = per;
  s.loc = loc;
  s.org = org;
  s.n = n;
  s.density = n == 0 ? 0.0
                     : static_cast<double>(per + loc + org) /
                           static_cast<double>(n);
  return s;
}

void SplitSpec::validate() const {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ArgumentError("train fraction must be in (0, 1)");
  }
}

std::size_t test_size(std::size_t n, double fraction) {
  if (n < 2) throw ArgumentError("splitting needs at least 2 sentences");
  // The epsilon keeps exact halves such as 0.1 * 95 = 9.4999... rounding up.
  const double exact = (1.0 - fraction) * static_cast<double>(n);
  const auto rounded = static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
  return std::clamp<std::size_t>(rounded, 1, n - 1);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const SplitSpec &spec) {
  spec.validate();
  const std::size_t k = test_size(n, spec.fraction);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates on the raw engine output; std::shuffle and the standard
  // distributions differ between library implementations.
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> test(order.begin(), order.begin() + k);
  std::vector<std::size_t> train(order.begin() + k, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(test)};
}

Split split(std::span<const NerSentence> sentences, const SplitSpec &spec) {
  const auto [train, test] = split_indices(sentences.size(), spec);
  Split out;
  out.train.reserve(train.size());
  out.test.reserve(test.size());
  for (const std::size_t i : train) out.train.push_back(sentences[i]);
  for (const std::size_t i : test) out.test.push_back(sentences[i]);
  return out;
}

RunScore macro_f1(std::span<const NerSentence> gold,
                  std::span<const NerSentence> pred, int run) {
  if (gold.size() != pred.size()) {
    throw ArgumentError(fmt::format(
        "prediction has {} sentences, gold has {}; first missing sentence {}",
        pred.size(), gold.size(), std::min(gold.size(), pred.size()) + 1));
  }
  std::vector<std::uint8_t> g, p;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const NerSentence &a = gold[s];
    const NerSentence &b = pred[s];
    const std::size_t common = std::min(a.tokens.size(), b.tokens.size());
    for (std::size_t t = 0; t < common; ++t) {
      if (a.tokens[t] != b.tokens[t]) {
        throw ArgumentError(fmt::format(
            "sentence {} token {}: gold '{}' but prediction '{}'", s + 1, t + 1,
            a.tokens[t], b.tokens[t]));
      }
    }
    if (a.tokens.size() != b.tokens.size()) {
      throw ArgumentError(fmt::format(
          "sentence {} token {}: gold has {} tokens, prediction {}", s + 1,
          common + 1, a.tokens.size(), b.tokens.size()));
    }
    for (std::size_t t = 0; t < common; ++t) {
      g.push_back(static_cast<std::uint8_t>(a.labels[t]));
      p.push_back(static_cast<std::uint8_t>(b.labels[t]));
    }
  }

  const auto m = kernels::confusion_counts(g, p, kNumLabels);
  RunScore score;
  score.run = run;
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumEntities; ++c) {
    std::uint64_t row = 0, col = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      row += m[c * kNumLabels + k];
      col += m[k * kNumLabels + c];
    }
    ClassScore &cs = score.classes[c];
    cs.tp = m[c * kNumLabels + c];
    cs.fp = col - cs.tp;
    cs.fn = row - cs.tp;
    cs.precision = safe_ratio(cs.tp, cs.tp + cs.fp);
    cs.recall = safe_ratio(cs.tp, cs.tp + cs.fn);
    const double pr = cs.precision + cs.recall;
    cs.f1 = pr == 0.0 ? 0.0 : 2.0 * cs.precision * cs.recall / pr;
    sum += cs.f1;
  }
  score.macro_f1 = sum / static_cast<double>(kNumEntities);
  return score;
}

RunAggregate aggregate_runs(std::span<const RunScore> runs) {
  if (runs.empty()) throw ArgumentError("no runs to aggregate");
  RunAggregate out;
  out.runs.assign(runs.begin(), runs.end());
  const double n = static_cast<double>(runs.size());
  const auto component = [](const ScoreSummary &s, std::size_t i) {
    return i < kNumEntities ? s.f1[i] : s.macro_f1;
  };
  const auto set = [](ScoreSummary &s, std::size_t i, double v) {
    if (i < kNumEntities) {
      s.f1[i] = v;
    } else {
      s.macro_f1 = v;
    }
  };
  std::vector<ScoreSummary> summaries;
  for (const RunScore &r : runs) summaries.push_back(summarize(r));
  for (std::size_t i = 0; i <= kNumEntities; ++i) {
    double sum = 0.0;
    for (const auto &s : summaries) sum += component(s, i);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto &s : summaries) {
      const double d = component(s, i) - mean;
      ss += d * d;
    }
    set(out.mean, i, mean);
    set(out.stddev, i, runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
  }
  return out;
}

double relative_difference(double a, double b) {
  if (!(b > 0.0)) {
    throw ArgumentError("relative difference is undefined for baseline " +
                        fmt::format("{}", b));
  }
  return (a - b) / b;
}

nlohmann::json to_json(const ScoreReport &report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const RunScore &r : report.result.runs) {
    nlohmann::json run = {{"run", r.run}, {"macro_f1", r.macro_f1}};
    for (std::size_t c = 0; c < kNumEntities; ++c) {
      const ClassScore &cs = r.classes[c];
      run[std::string(kLabelNames[c])] = {{"tp", cs.tp},
                                          {"fp", cs.fp},
                                          {"fn", cs.fn},
                                          {"precision", cs.precision},
                                          {"recall", cs.recall},
                                          {"f1", cs.f1}};
    }
    runs.push_back(std::move(run));
  }
  nlohmann::json j = {{"language", report.language},
                      {"system", report.system},
                      {"runs", runs},
                      {"mean", summary_json(report.result.mean)},
                      {"stddev", summary_json(report.result.stddev)}};
  if (report.seed) j["seed"] = *report.seed;
  return j;
}

ScoreReport score_report_from_json(const nlohmann::json &j) {
  ScoreReport report;
  report.language = j.value("language", std::string());
  report.system = j.value("system", std::string());
  if (j.contains("seed")) report.seed = j.at("seed").get<std::uint64_t>();
  for (const auto &item : j.at("runs")) {
    RunScore r;
    r.run = item.at("run").get<int>();
    r.macro_f1 = item.at("macro_f1").get<double>();
    for (std::size_t c = 0; c < kNumEntities; ++c) {
      const auto &cj = item.at(std::string(kLabelNames[c]));
      ClassScore &cs = r.classes[c];
      cs.tp = cj.at("tp").get<std::uint64_t>();
      cs.fp = cj.at("fp").get<std::uint64_t>();
      cs.fn = cj.at("fn").get<std::uint64_t>();
      cs.precision = cj.at("precision").get<double>();
      cs.recall = cj.at("recall").get<double>();
      cs.f1 = cj.at("f1").get<double>();
    }
    report.result.runs.push_back(r);
  }
  report.result.mean = summary_from_json(j.at("mean"));
  report.result.stddev = summary_from_json(j.at("stddev"));
  return report;
}

void write_tsv(const ScoreReport &report, std::ostream &out) {
  out << "language\tsystem\trun\tPER\tLOC\tORG\tmacro_f1\n";
  const auto row = [&](std::string_view run, const ScoreSummary &s) {
    out << report.language << '\t' << report.system << '\t' << run;
    for (const double f : s.f1) out << '\t' << fmt::format("{:.4f}", f);
    out << '\t' << fmt::format("{:.4f}", s.macro_f1) << '\n';
  };
  for (const RunScore &r : report.result.runs) {
    row(std::to_string(r.run), summarize(r));
  }
  row("mean", report.result.mean);
  row("stddev", report.result.stddev);
}

Comparison compare(const ScoreReport &candidate, const ScoreReport &baseline,
                   const LabelStats &stats) {
  Comparison c;
  c.language = candidate.language.empty() ? baseline.language
                                          : candidate.language;
  c.candidate = candidate.system;
  c.baseline = baseline.system;
  c.density = stats.density;
  c.size = stats.n;
  c.candidate_score = candidate.result.mean;
  c.baseline_score = baseline.result.mean;
  for (std::size_t i = 0; i <= kNumEntities; ++i) {
    const double a = i < kNumEntities ? c.candidate_score.f1[i]
                                      : c.candidate_score.macro_f1;
    const double b = i < kNumEntities ? c.baseline_score.f1[i]
                                      : c.baseline_score.macro_f1;
    if (b > 0.0) c.relative[i] = relative_difference(a, b);
  }
  return c;
}

nlohmann::json to_json(std::span<const Comparison> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const Comparison &c : rows) {
    nlohmann::json rel = nlohmann::json::object();
    for (std::size_t i = 0; i <= kNumEntities; ++i) {
      const std::string key =
          i < kNumEntities ? std::string(kLabelNames[i]) : "macro_f1";
      rel[key] = c.relative[i] ? nlohmann::json(*c.relative[i]) : nlohmann::json();
    }
    out.push_back({{"language", c.language},
                   {"candidate", c.candidate},
                   {"baseline", c.baseline},
                   {"density", c.density},
                   {"size", c.size},
                   {"candidate_score", summary_json(c.candidate_score)},
                   {"baseline_score", summary_json(c.baseline_score)},
                   {"relative_difference", rel}});
  }
  return out;
}

void write_tsv(std::span<const Comparison> rows, std::ostream &out) {
  out << "language\tcandidate\tbaseline\tdensity\tsize\tcandidate_macro_f1"
         "\tbaseline_macro_f1\trel_PER\trel_LOC\trel_ORG\trel_macro_f1\n";
  for (const Comparison &c : rows) {
    out << c.language << '\t' << c.candidate << '\t' << c.baseline << '\t'
        << fmt::format("{:.3f}", c.density) << '\t' << c.size << '\t'
        << fmt::format("{:.4f}", c.candidate_score.macro_f1) << '\t'
        << fmt::format("{:.4f}", c.baseline_score.macro_f1);
    for (const auto &r : c.relative) out << '\t' << fmt_optional(r);
    out << '\n';
  }
}

}  // namespace embeval::ner
