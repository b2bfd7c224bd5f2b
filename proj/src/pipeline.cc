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

#include "embeval/pipeline.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "embeval/digest.h"
#include "embeval/error.h"
#include "embeval/parallel.h"
#include "embeval/provider.h"
#include "embeval/report.h"
#include "embeval/vocab.h"

namespace embeval::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStageNames[] = {
    "tokenize", "dedup", "vocab", "average", "eval-a", "eval-b", "ner"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view list) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= list.size()) {
    std::size_t end = list.find(',', begin);
    if (end == std::string_view::npos) end = list.size();
    std::string item = trim(list.substr(begin, end - begin));
    if (!item.empty()) out.push_back(std::move(item));
    begin = end + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ArgumentError(fmt::format("{}: '{}' is not a valid number", key, value));
  }
  return out;
}

fs::path resolve(std::string_view value, const fs::path &base) {
  fs::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::optional<fs::path> optional_path(std::string_view value,
                                      const fs::path &base) {
  if (value.empty()) return std::nullopt;
  return resolve(value, base);
}

// Path as recorded in manifests: relative inside the work directory,
// unchanged elsewhere.
std::string display(const fs::path &path, const fs::path &work_dir) {
  const fs::path rel = path.lexically_relative(work_dir);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return path.generic_string();
}

fs::path partial(const fs::path &path) {
  return fs::path(path.string() + ".partial");
}

void commit(const fs::path &path) { fs::rename(partial(path), path); }

void write_json(const nlohmann::json &j, const fs::path &path) {
  std::ofstream out(partial(path), std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + partial(path).string());
  out << j.dump(2) << '\n';
  out.close();
  if (!out) throw IoError("write failed: " + partial(path).string());
  commit(path);
}

class Manifest {
 public:
  Manifest(Stage stage, const fs::path &work_dir)
      : stage_(stage), work_dir_(work_dir) {}

  void input(const fs::path &path) { inputs_.push_back(entry(path)); }
  void output(const fs::path &path) {
    outputs_.push_back(entry(path));
    relative_outputs_.push_back(path.lexically_relative(work_dir_));
  }
  nlohmann::json &params() { return params_; }
  nlohmann::json &stats() { return stats_; }

  std::vector<fs::path> finish() {
    nlohmann::json j = {{"stage", stage_name(stage_)},
                        {"inputs", inputs_},
                        {"outputs", outputs_},
                        {"params", params_}};
    if (!stats_.is_null()) j["stats"] = stats_;
    const fs::path path =
        work_dir_ / (std::string(stage_name(stage_)) + ".manifest.json");
    write_json(j, path);
    auto out = relative_outputs_;
    out.push_back(path.lexically_relative(work_dir_));
    return out;
  }

 private:
  nlohmann::json entry(const fs::path &path) const {
    return {{"path", display(path, work_dir_)}, {"sha256", sha256_file(path)}};
  }

  Stage stage_;
  fs::path work_dir_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json params_ = nlohmann::json::object();
  nlohmann::json stats_;
  std::vector<fs::path> relative_outputs_;
};

std::string path_param(const std::optional<fs::path> &p) {
  return p ? p->generic_string() : std::string();
}

std::string replace_all(std::string s, std::string_view from,
                        std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

class Runner {
 public:
  explicit Runner(const PipelineConfig &config)
      : c_(config), dir_(config.work_dir) {}

  std::vector<fs::path> run(Stage stage) {
    switch (stage) {
      case Stage::kTokenize: return tokenize();
      case Stage::kDedup: return dedup();
      case Stage::kVocab: return vocab();
      case Stage::kAverage: return average();
      case Stage::kEvalA: return eval_a();
      case Stage::kEvalB: return eval_b();
      case Stage::kNer: return ner();
    }
    return {};
  }

 private:
  fs::path at(const char *name) const { return dir_ / name; }

  std::vector<fs::path> tokenize() {
    Manifest m(Stage::kTokenize, dir_);
    std::optional<corpus::RuleTables> tables;
    if (c_.rules_dir) tables = corpus::RuleTables::from_directory(*c_.rules_dir);
    const corpus::RuleTables &rt = tables ? *tables : corpus::RuleTables::builtin();
    const fs::path out = at(artifacts::kTokenized);
    const auto stats = corpus::tokenize_file(*c_.corpus, partial(out), c_.format,
                                             rt.rules(c_.language));
    commit(out);
    m.input(*c_.corpus);
    m.output(out);
    m.params() = {{"language", c_.language},
                  {"format", c_.format == corpus::InputFormat::kRawText ? "raw" : "pretok"},
                  {"rules_dir", path_param(c_.rules_dir)}};
    m.stats() = {{"paragraphs", stats.paragraphs},
                 {"sentences", stats.sentences},
                 {"tokens", stats.tokens},
                 {"invalid_bytes", stats.invalid_bytes}};
    return m.finish();
  }

  std::vector<fs::path> dedup() {
    Manifest m(Stage::kDedup, dir_);
    const fs::path in = at(artifacts::kTokenized);
    const fs::path out = at(artifacts::kDedup);
    const auto stats = dedup::dedup_file(in, partial(out), c_.dedup);
    commit(out);
    write_json(stats.to_json(), at(artifacts::kDedupStats));
    m.input(in);
    m.output(out);
    m.output(at(artifacts::kDedupStats));
    m.params() = {{"unit", dedup::unit_name(c_.dedup.unit)},
                  {"n", c_.dedup.n},
                  {"threshold", c_.dedup.threshold}};
    return m.finish();
  }

  std::vector<fs::path> vocab() {
    Manifest m(Stage::kVocab, dir_);
    const fs::path in = at(artifacts::kDedup);
    const auto counts = vocab::count_tokens(in);
    const std::uint64_t total = vocab::total_tokens(counts);
    const std::uint64_t min_count =
        c_.min_count.value_or(vocab::default_min_count(total));
    const auto entries = vocab::build_vocab(counts, min_count, c_.max_size);
    const fs::path out = at(artifacts::kVocab);
    vocab::write_vocab(entries, partial(out), true);
    commit(out);
    m.input(in);
    m.output(out);
    m.params() = {{"min_count", min_count},
                  {"max_size", c_.max_size ? nlohmann::json(*c_.max_size)
                                           : nlohmann::json()}};
    m.stats() = {{"corpus_tokens", total},
                 {"distinct_tokens", counts.size()},
                 {"vocab_size", entries.size()}};
    return m.finish();
  }

  std::vector<fs::path> average() {
    Manifest m(Stage::kAverage, dir_);
    fs::path records;
    if (c_.records) {
      records = *c_.records;
      m.input(records);
    } else {
      const fs::path dedup_out = at(artifacts::kDedup);
      std::vector<provider::TokenSentence> sentences;
      {
        std::ifstream in(dedup_out, std::ios::binary);
        if (!in) throw IoError("cannot open " + dedup_out.string());
        std::string line;
        while (std::getline(in, line)) {
          provider::TokenSentence s;
          for (const auto t : corpus::split_whitespace(line)) s.emplace_back(t);
          if (!s.empty()) sentences.push_back(std::move(s));
        }
      }
      const fs::path requests = at(artifacts::kRequests);
      {
        std::ofstream out(partial(requests), std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + partial(requests).string());
        provider::write_requests(sentences, out);
      }
      commit(requests);
      records = at(artifacts::kRecords);
      provider::run_provider_command(c_.provider, requests, partial(records));
      commit(records);
      m.input(dedup_out);
      m.output(requests);
      m.output(records);
    }
    const fs::path vocab_path = at(artifacts::kVocab);
    m.input(vocab_path);

    emb::AveragingOptions options;
    options.layer = c_.layer;
    options.vocab_filter = vocab::read_vocab(vocab_path);
    options.shards = c_.shards;
    emb::RecordReader reader(records);
    const auto means = emb::average_means(reader, options);
    const fs::path out = at(artifacts::kVectors);
    emb::save_static(means.to_static(), partial(out));
    commit(out);
    m.output(out);
    m.params() = {{"layer", emb::layer_name(c_.layer)},
                  {"records", path_param(c_.records)},
                  {"provider", c_.provider}};
    m.stats() = {{"words", means.tokens.size()}, {"dim", means.dim}};
    return m.finish();
  }

  analogy::KindTable kinds() const {
    analogy::KindTable k;
    k.semantic_categories = c_.semantic_categories;
    return k;
  }

  void write_report(const report::AnalogyReport &r, const fs::path &out) {
    write_json(report::to_json(r), out);
  }

  nlohmann::json analogy_stats(const std::vector<analogy::CategoryResult> &res) {
    nlohmann::json j = nlohmann::json::object();
    for (const int n : c_.topn) {
      const auto s = analogy::aggregate(res, n);
      j["acc@" + std::to_string(n)] = {
          {"semantic", s.semantic ? nlohmann::json(*s.semantic) : nlohmann::json()},
          {"syntactic", s.syntactic ? nlohmann::json(*s.syntactic) : nlohmann::json()}};
    }
    return j;
  }

  std::vector<fs::path> eval_a() {
    Manifest m(Stage::kEvalA, dir_);
    const fs::path vectors = at(artifacts::kVectors);
    const auto emb = emb::load_static(vectors);
    const auto questions = analogy::parse_analogy_dataset(*c_.analogy_dataset, kinds());
    const auto results =
        analogy::method_a_evaluate(emb, questions, c_.candidates, c_.topn);
    const fs::path out = at(artifacts::kAnalogyA);
    write_report({c_.language, std::string(emb::layer_name(c_.layer)), "average",
                  c_.topn, results},
                 out);
    m.input(vectors);
    m.input(*c_.analogy_dataset);
    m.output(out);
    m.params() = {{"candidates", c_.candidates},
                  {"topn", c_.topn},
                  {"semantic_categories", c_.semantic_categories}};
    m.stats() = analogy_stats(results);
    return m.finish();
  }

  std::vector<fs::path> eval_b() {
    Manifest m(Stage::kEvalB, dir_);
    const fs::path vocab_path = at(artifacts::kVocab);
    const auto questions = analogy::parse_analogy_dataset(*c_.analogy_dataset, kinds());
    const auto candidates = analogy::method_b_candidates(
        questions, vocab::read_vocab(vocab_path), c_.candidates, c_.full_vocab);
    const auto templates = c_.templates
                               ? analogy::TemplateSet::load(*c_.templates, c_.language)
                               : analogy::TemplateSet::builtin(c_.language);
    provider::SubprocessProvider prov(c_.provider, dir_ / "provider.tmp");
    analogy::MethodBOptions options;
    options.layer = c_.layer;
    options.ranking = c_.ranking;
    options.csls.k = c_.csls_k;
    options.topn = c_.topn;
    analogy::MethodBStats stats;
    const auto results = analogy::method_b_evaluate(prov, questions, templates,
                                                    candidates, options, &stats);
    fs::remove_all(dir_ / "provider.tmp");
    const fs::path out = at(artifacts::kAnalogyB);
    write_report({c_.language, std::string(emb::layer_name(c_.layer)), "template",
                  c_.topn, results},
                 out);
    m.input(vocab_path);
    m.input(*c_.analogy_dataset);
    if (c_.templates) m.input(*c_.templates);
    m.output(out);
    m.params() = {{"candidates", c_.candidates},
                  {"topn", c_.topn},
                  {"layer", emb::layer_name(c_.layer)},
                  {"ranking", c_.ranking == analogy::Ranking::kCsls ? "csls" : "cosine"},
                  {"csls_k", c_.csls_k},
                  {"full_vocab", c_.full_vocab},
                  {"provider", c_.provider},
                  {"semantic_categories", c_.semantic_categories}};
    m.stats() = analogy_stats(results);
    m.stats()["sentences_embedded"] = stats.sentences_embedded;
    m.stats()["provider_calls"] = stats.provider_calls;
    return m.finish();
  }

  std::vector<fs::path> ner() {
    Manifest m(Stage::kNer, dir_);
    const ner::LabelMap map =
        c_.label_map ? ner::LabelMap::load(*c_.label_map) : ner::LabelMap::default_map();
    const auto parsed = ner::parse_ner(*c_.ner_data, map);
    m.input(*c_.ner_data);
    if (c_.label_map) m.input(*c_.label_map);

    write_json(ner::label_stats(parsed.sentences).to_json(), at(artifacts::kNerStats));
    m.output(at(artifacts::kNerStats));

    const ner::SplitSpec spec{c_.train_fraction, c_.split_seed};
    const auto parts = ner::split(parsed.sentences, spec);
    for (const auto &[name, side] :
         {std::pair{artifacts::kNerTrain, &parts.train},
          std::pair{artifacts::kNerTest, &parts.test}}) {
      ner::write_ner(*side, partial(at(name)));
      commit(at(name));
      m.output(at(name));
    }

    std::vector<fs::path> predictions = c_.predictions;
    if (!c_.trainer.empty()) {
      predictions.clear();
      for (int r = 0; r < c_.runs; ++r) {
        const fs::path pred = dir_ / fmt::format("ner.pred.{}.tsv", r);
        std::string cmd = c_.trainer;
        cmd = replace_all(cmd, "{train}", provider::shell_quote_arg(at(artifacts::kNerTrain).string()));
        cmd = replace_all(cmd, "{test}", provider::shell_quote_arg(at(artifacts::kNerTest).string()));
        cmd = replace_all(cmd, "{pred}", provider::shell_quote_arg(pred.string()));
        cmd = replace_all(cmd, "{seed}", std::to_string(c_.split_seed + static_cast<std::uint64_t>(r)));
        cmd = replace_all(cmd, "{run}", std::to_string(r));
        const int status = std::system(cmd.c_str());
        if (status != 0) {
          throw Error(fmt::format("trainer run {} failed (status {}): {}", r, status, cmd));
        }
        predictions.push_back(pred);
      }
    }

    if (!predictions.empty()) {
      std::vector<ner::RunScore> runs;
      for (std::size_t r = 0; r < predictions.size(); ++r) {
        const auto pred = ner::parse_ner(predictions[r], map);
        runs.push_back(ner::macro_f1(parts.test, pred.sentences, static_cast<int>(r)));
        if (c_.trainer.empty()) {
          m.input(predictions[r]);
        } else {
          m.output(predictions[r]);
        }
      }
      const ner::ScoreReport report{c_.language, c_.system, c_.split_seed,
                                    ner::aggregate_runs(runs)};
      write_json(ner::to_json(report), at(artifacts::kNerScore));
      m.output(at(artifacts::kNerScore));
    }
    m.params() = {{"language", c_.language},
                  {"label_map", path_param(c_.label_map)},
                  {"seed", c_.split_seed},
                  {"train_fraction", c_.train_fraction},
                  {"runs", c_.runs},
                  {"trainer", c_.trainer},
                  {"system", c_.system}};
    m.stats() = {{"unmapped_labels", parsed.unmapped},
                 {"train_sentences", parts.train.size()},
                 {"test_sentences", parts.test.size()}};
    return m.finish();
  }

  const PipelineConfig &c_;
  fs::path dir_;
};

}  // namespace

std::string_view stage_name(Stage stage) {
  return kStageNames[static_cast<std::size_t>(stage)];
}

Stage parse_stage(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kStageNames); ++i) {
    if (kStageNames[i] == name) return static_cast<Stage>(i);
  }
  throw ArgumentError("unknown stage '" + std::string(name) + "'");
}

std::set<Stage> parse_stages(std::string_view list) {
  std::set<Stage> out;
  for (const auto &name : split_list(list)) out.insert(parse_stage(name));
  if (out.empty()) throw ArgumentError("empty stage list");
  return out;
}

void apply_setting(PipelineConfig &c, std::string_view key,
                   std::string_view raw_value, const fs::path &base) {
  const std::string value = trim(raw_value);
  using Setter = std::function<void(const std::string &)>;
  const std::map<std::string_view, Setter> setters = {
      {"general.language", [&](const std::string &v) { c.language = v; }},
      {"general.work_dir", [&](const std::string &v) { c.work_dir = resolve(v, base); }},
      {"general.threads", [&](const std::string &v) { c.threads = parse_number<int>(key, v); }},
      {"general.stages",
       [&](const std::string &v) {
         if (v.empty()) {
           c.stages.reset();
         } else {
           c.stages = parse_stages(v);
         }
       }},
      {"corpus.input", [&](const std::string &v) { c.corpus = optional_path(v, base); }},
      {"corpus.format", [&](const std::string &v) { c.format = corpus::parse_input_format(v); }},
      {"corpus.rules_dir", [&](const std::string &v) { c.rules_dir = optional_path(v, base); }},
      {"dedup.unit", [&](const std::string &v) { c.dedup.unit = dedup::parse_unit(v); }},
      {"dedup.n", [&](const std::string &v) { c.dedup.n = parse_number<std::size_t>(key, v); }},
      {"dedup.threshold", [&](const std::string &v) { c.dedup.threshold = parse_number<double>(key, v); }},
      {"vocab.min_count",
       [&](const std::string &v) {
         c.min_count = v.empty() ? std::nullopt
                                 : std::optional(parse_number<std::uint64_t>(key, v));
       }},
      {"vocab.max_size",
       [&](const std::string &v) {
         c.max_size = v.empty() ? std::nullopt
                                : std::optional(parse_number<std::size_t>(key, v));
       }},
      {"average.records", [&](const std::string &v) { c.records = optional_path(v, base); }},
      {"average.provider", [&](const std::string &v) { c.provider = v; }},
      {"average.layer", [&](const std::string &v) { c.layer = emb::layer_from_string(v); }},
      {"average.shards", [&](const std::string &v) { c.shards = parse_number<std::size_t>(key, v); }},
      {"analogy.dataset", [&](const std::string &v) { c.analogy_dataset = optional_path(v, base); }},
      {"analogy.templates", [&](const std::string &v) { c.templates = optional_path(v, base); }},
      {"analogy.candidates", [&](const std::string &v) { c.candidates = parse_number<std::size_t>(key, v); }},
      {"analogy.topn",
       [&](const std::string &v) {
         c.topn.clear();
         for (const auto &n : split_list(v)) c.topn.push_back(parse_number<int>(key, n));
       }},
      {"analogy.csls_k", [&](const std::string &v) { c.csls_k = parse_number<std::size_t>(key, v); }},
      {"analogy.ranking",
       [&](const std::string &v) {
         if (v == "csls") {
           c.ranking = analogy::Ranking::kCsls;
         } else if (v == "cosine") {
           c.ranking = analogy::Ranking::kCosine;
         } else {
           throw ArgumentError("analogy.ranking must be csls or cosine");
         }
       }},
      {"analogy.full_vocab",
       [&](const std::string &v) {
         if (v == "true" || v == "1") {
           c.full_vocab = true;
         } else if (v == "false" || v == "0" || v.empty()) {
           c.full_vocab = false;
         } else {
           throw ArgumentError("analogy.full_vocab must be true or false");
         }
       }},
      {"analogy.semantic_categories",
       [&](const std::string &v) { c.semantic_categories = parse_number<std::size_t>(key, v); }},
      {"ner.data", [&](const std::string &v) { c.ner_data = optional_path(v, base); }},
      {"ner.label_map", [&](const std::string &v) { c.label_map = optional_path(v, base); }},
      {"ner.seed", [&](const std::string &v) { c.split_seed = parse_number<std::uint64_t>(key, v); }},
      {"ner.train_fraction", [&](const std::string &v) { c.train_fraction = parse_number<double>(key, v); }},
      {"ner.runs", [&](const std::string &v) { c.runs = parse_number<int>(key, v); }},
      {"ner.trainer", [&](const std::string &v) { c.trainer = v; }},
      {"ner.predictions",
       [&](const std::string &v) {
         c.predictions.clear();
         for (const auto &p : split_list(v)) c.predictions.push_back(resolve(p, base));
       }},
      {"ner.system", [&](const std::string &v) { c.system = v; }},
  };
  const std::string full =
      key.find('.') == std::string_view::npos ? "general." + std::string(key)
                                              : std::string(key);
  auto it = setters.find(full);
  if (it == setters.end()) {
    throw ArgumentError("unknown config key '" + std::string(key) + "'");
  }
  it->second(value);
}

PipelineConfig load_config(const fs::path &path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error &e) {
    throw FormatError(path.string(), e.line(), e.message());
  }
  PipelineConfig config;
  const fs::path base = path.parent_path();
  for (const auto &[section, body] : tree) {
    if (body.empty()) {
      apply_setting(config, section, body.data(), base);
      continue;
    }
    for (const auto &[key, value] : body) {
      apply_setting(config, section + "." + key, value.data(), base);
    }
  }
  return config;
}

std::set<Stage> selected_stages(const PipelineConfig &c) {
  if (c.stages) return *c.stages;
  std::set<Stage> s;
  if (c.corpus) s.insert({Stage::kTokenize, Stage::kDedup, Stage::kVocab});
  if (c.records || !c.provider.empty()) s.insert(Stage::kAverage);
  if (c.analogy_dataset) s.insert(Stage::kEvalA);
  if (c.analogy_dataset && !c.provider.empty()) s.insert(Stage::kEvalB);
  if (c.ner_data) s.insert(Stage::kNer);
  return s;
}

void validate(const PipelineConfig &c, const std::set<Stage> &stages) {
  std::vector<std::string> problems;
  const auto need_file = [&](const std::optional<fs::path> &p,
                             std::string_view what) {
    if (!p) {
      problems.push_back(fmt::format("{} is not configured", what));
    } else if (!fs::exists(*p)) {
      problems.push_back(fmt::format("{} not found: {}", what, p->string()));
    }
  };
  const auto optional_file = [&](const std::optional<fs::path> &p,
                                 std::string_view what) {
    if (p && !fs::exists(*p)) {
      problems.push_back(fmt::format("{} not found: {}", what, p->string()));
    }
  };
  const auto need_artifact = [&](Stage consumer, const char *name,
                                 Stage producer) {
    if (!stages.count(producer) && !fs::exists(c.work_dir / name)) {
      problems.push_back(fmt::format("{} needs {} from stage {}",
                                     stage_name(consumer), name,
                                     stage_name(producer)));
    }
  };
  const auto check = [&](auto &&fn) {
    try {
      fn();
    } catch (const ArgumentError &e) {
      problems.emplace_back(e.what());
    }
  };
  const auto check_topn = [&] {
    if (c.topn.empty()) problems.emplace_back("analogy.topn is empty");
    for (const int n : c.topn) {
      if (n < 1) problems.emplace_back("analogy.topn values must be >= 1");
    }
  };

  if (stages.empty()) problems.emplace_back("no stages selected");
  if (stages.count(Stage::kTokenize)) {
    need_file(c.corpus, "corpus.input");
    optional_file(c.rules_dir, "corpus.rules_dir");
  }
  if (stages.count(Stage::kDedup)) {
    check([&] { c.dedup.validate(); });
    need_artifact(Stage::kDedup, artifacts::kTokenized, Stage::kTokenize);
  }
  if (stages.count(Stage::kVocab)) {
    if (c.max_size && *c.max_size == 0) problems.emplace_back("vocab.max_size must be >= 1");
    need_artifact(Stage::kVocab, artifacts::kDedup, Stage::kDedup);
  }
  if (stages.count(Stage::kAverage)) {
    if (c.records) {
      need_file(c.records, "average.records");
    } else if (c.provider.empty()) {
      problems.emplace_back("average needs average.records or average.provider");
    } else {
      need_artifact(Stage::kAverage, artifacts::kDedup, Stage::kDedup);
    }
    need_artifact(Stage::kAverage, artifacts::kVocab, Stage::kVocab);
  }
  if (stages.count(Stage::kEvalA)) {
    need_file(c.analogy_dataset, "analogy.dataset");
    need_artifact(Stage::kEvalA, artifacts::kVectors, Stage::kAverage);
    if (c.candidates == 0) problems.emplace_back("analogy.candidates must be >= 1");
    check_topn();
  }
  if (stages.count(Stage::kEvalB)) {
    need_file(c.analogy_dataset, "analogy.dataset");
    optional_file(c.templates, "analogy.templates");
    if (c.provider.empty()) problems.emplace_back("eval-b needs average.provider");
    need_artifact(Stage::kEvalB, artifacts::kVocab, Stage::kVocab);
    if (c.csls_k < 1) problems.emplace_back("analogy.csls_k must be >= 1");
    if (c.candidates == 0) problems.emplace_back("analogy.candidates must be >= 1");
    check_topn();
  }
  if (stages.count(Stage::kNer)) {
    need_file(c.ner_data, "ner.data");
    optional_file(c.label_map, "ner.label_map");
    check([&] { ner::SplitSpec{c.train_fraction, c.split_seed}.validate(); });
    if (c.runs < 1) problems.emplace_back("ner.runs must be >= 1");
    if (c.trainer.empty()) {
      for (const auto &p : c.predictions) optional_file(p, "ner prediction");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid pipeline configuration:";
    for (const auto &p : problems) msg += "\n  " + p;
    throw ArgumentError(msg);
  }
}

bool PipelineResult::ok() const {
  for (const auto &s : stages) {
    if (!s.ok) return false;
  }
  return true;
}

PipelineResult run_pipeline(const PipelineConfig &config) {
  const auto stages = selected_stages(config);
  validate(config, stages);
  if (config.threads > 0) set_max_threads(config.threads);
  fs::create_directories(config.work_dir);

  Runner runner(config);
  PipelineResult result;
  for (const Stage stage : kAllStages) {
    if (!stages.count(stage)) continue;
    StageResult sr;
    sr.stage = stage;
    try {
      sr.artifacts = runner.run(stage);
      sr.ok = true;
      spdlog::info("stage {} done", stage_name(stage));
    } catch (const std::exception &e) {
      sr.message = e.what();
      spdlog::error("stage {} failed: {}", stage_name(stage), e.what());
    }
    const bool ok = sr.ok;
    result.stages.push_back(std::move(sr));
    if (!ok) break;
  }
  return result;
}

}  // namespace embeval::pipeline
