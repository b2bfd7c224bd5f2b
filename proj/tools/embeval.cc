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

// embeval command-line tool.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "embeval/analogy.h"
#include "embeval/corpus.h"
#include "embeval/dedup.h"
#include "embeval/embstore.h"
#include "embeval/error.h"
#include "embeval/ner.h"
#include "embeval/parallel.h"
#include "embeval/pipeline.h"
#include "embeval/provider.h"
#include "embeval/report.h"
#include "embeval/vocab.h"

namespace fs = std::filesystem;
using namespace embeval;

namespace {

void with_output(const std::string &path,
                 const std::function<void(std::ostream &)> &fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  fn(out);
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json read_json(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError(path, 0, e.what());
  }
}

void write_json(const std::string &path, const nlohmann::json &j) {
  with_output(path, [&](std::ostream &os) { os << j.dump(2) << '\n'; });
}

ner::LabelMap label_map(const std::string &path) {
  return path.empty() ? ner::LabelMap::default_map() : ner::LabelMap::load(path);
}

void print_summary(const report::AnalogyReport &r) {
  for (const int n : r.topn) {
    const auto scores = analogy::aggregate(r.categories, n);
    std::cerr << "acc@" << n << ": "
              << analogy::format_aggregate_row(
                     r.language.empty() ? r.label : r.language, scores, 3)
              << '\n';
  }
}

void emit_analogy(const report::AnalogyReport &r, const std::string &format,
                  const std::string &out) {
  if (format == "json") {
    write_json(out, report::to_json(r));
  } else if (format == "tsv") {
    with_output(out, [&](std::ostream &os) { analogy::write_tsv(r.categories, os); });
  } else {
    throw ArgumentError("--report must be json or tsv");
  }
  print_summary(r);
}

// --- corpus -------------------------------------------------------------

void add_corpus(CLI::App &app) {
  auto *corpus = app.add_subcommand("corpus", "Corpus preprocessing");
  corpus->require_subcommand(1);
  auto *tok = corpus->add_subcommand(
      "tokenize", "Segment and tokenize into one sentence per line");
  struct Opts {
    std::string lang = "en", format = "raw", in, out, rules_dir;
  };
  auto o = std::make_shared<Opts>();
  tok->add_option("--lang", o->lang, "Language code")->capture_default_str();
  tok->add_option("--format", o->format, "raw or pretok")->capture_default_str();
  tok->add_option("--in", o->in, "Input file")->required();
  tok->add_option("--out", o->out, "Output file")->required();
  tok->add_option("--rules-dir", o->rules_dir,
                  "Directory of <lang>.txt abbreviation tables");
  tok->callback([o] {
    std::optional<corpus::RuleTables> tables;
    if (!o->rules_dir.empty()) tables = corpus::RuleTables::from_directory(o->rules_dir);
    const auto &rt = tables ? *tables : corpus::RuleTables::builtin();
    const auto stats = corpus::tokenize_file(
        o->in, o->out, corpus::parse_input_format(o->format), rt.rules(o->lang));
    spdlog::info("{} paragraphs, {} sentences, {} tokens, {} invalid bytes",
                 stats.paragraphs, stats.sentences, stats.tokens,
                 stats.invalid_bytes);
  });
}

// --- dedup --------------------------------------------------------------

void add_dedup(CLI::App &app) {
  auto *cmd = app.add_subcommand("dedup", "Remove near-duplicate paragraphs or sentences");
  struct Opts {
    std::string unit = "paragraph", in, out, stats;
    std::size_t n = 9;
    double threshold = 0.9;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--unit", o->unit, "paragraph or sentence")->capture_default_str();
  cmd->add_option("--n", o->n, "Shingle length in tokens")->capture_default_str();
  cmd->add_option("--threshold", o->threshold,
                  "Drop units whose duplicate ratio exceeds this")
      ->capture_default_str();
  cmd->add_option("--in", o->in, "Tokenized input")->required();
  cmd->add_option("--out", o->out, "Deduplicated output")->required();
  cmd->add_option("--stats", o->stats, "Write statistics JSON here");
  cmd->callback([o] {
    dedup::DedupConfig config{o->n, o->threshold, dedup::parse_unit(o->unit)};
    config.validate();
    const auto stats = dedup::dedup_file(o->in, o->out, config);
    if (!o->stats.empty()) write_json(o->stats, stats.to_json());
    spdlog::info("kept {} of {} units, {} of {} tokens", stats.units_kept,
                 stats.units_in, stats.tokens_kept, stats.tokens_in);
  });
}

// --- vocab --------------------------------------------------------------

void add_vocab(CLI::App &app) {
  auto *vocab_cmd = app.add_subcommand("vocab", "Vocabulary construction");
  vocab_cmd->require_subcommand(1);
  auto *build = vocab_cmd->add_subcommand("build", "Count tokens and write a ranked vocabulary");
  struct Opts {
    std::optional<std::uint64_t> min_count;
    std::optional<std::size_t> max_size;
    std::string in, out;
    bool with_counts = false;
  };
  auto o = std::make_shared<Opts>();
  build->add_option("--min-count", o->min_count,
                    "Minimum frequency (default scales with corpus size)");
  build->add_option("--max-size", o->max_size, "Keep at most this many tokens");
  build->add_option("--in", o->in, "Tokenized corpus")->required();
  build->add_option("--out", o->out, "Vocabulary file")->required();
  build->add_flag("--with-counts", o->with_counts, "Add a count column");
  build->callback([o] {
    if (o->max_size && *o->max_size == 0) throw ArgumentError("--max-size must be >= 1");
    const auto counts = vocab::count_tokens(fs::path(o->in));
    const auto total = vocab::total_tokens(counts);
    const auto min_count = o->min_count.value_or(vocab::default_min_count(total));
    const auto entries = vocab::build_vocab(counts, min_count, o->max_size);
    vocab::write_vocab(entries, fs::path(o->out), o->with_counts);
    spdlog::info("{} tokens, {} distinct, {} kept at min count {}", total,
                 counts.size(), entries.size(), min_count);
  });
}

// --- emb ----------------------------------------------------------------

void add_emb(CLI::App &app) {
  auto *emb_cmd = app.add_subcommand("emb", "Embedding files");
  emb_cmd->require_subcommand(1);

  auto *average = emb_cmd->add_subcommand(
      "average", "Average contextual occurrence vectors into static vectors");
  struct AvgOpts {
    std::string layer = "LSTM1", records, vocab, out;
    std::size_t shards = 0;
  };
  auto a = std::make_shared<AvgOpts>();
  average->add_option("--layer", a->layer, "CNN, LSTM1 or LSTM2")->capture_default_str();
  average->add_option("--records", a->records, "Token embedding record file")->required();
  average->add_option("--vocab", a->vocab, "Restrict and order output by this vocabulary");
  average->add_option("--out", a->out, "Static vector file")->required();
  average->add_option("--shards", a->shards, "Accumulator shards (0 = one per thread)");
  average->callback([a] {
    emb::AveragingOptions options;
    options.layer = emb::layer_from_string(a->layer);
    options.shards = a->shards;
    if (!a->vocab.empty()) options.vocab_filter = vocab::read_vocab(a->vocab);
    emb::RecordReader reader{fs::path(a->records)};
    const auto means = emb::average_means(reader, options);
    emb::save_static(means.to_static(), fs::path(a->out));
    spdlog::info("{} words, dimension {}", means.tokens.size(), means.dim);
  });

  auto *mock = emb_cmd->add_subcommand(
      "mock-provide", "Deterministic context-free embedding provider");
  struct MockOpts {
    std::string in, out;
    std::size_t dim = 16;
    std::uint64_t seed = 0;
  };
  auto m = std::make_shared<MockOpts>();
  mock->add_option("--embed-in", m->in, "Request file")->required();
  mock->add_option("--embed-out", m->out, "Response record file")->required();
  mock->add_option("--dim", m->dim, "Vector dimension")->capture_default_str();
  mock->add_option("--seed", m->seed, "Hash seed")->capture_default_str();
  mock->callback([m] {
    const auto sentences = provider::read_requests(m->in);
    provider::HashingMockProvider prov(m->dim, m->seed);
    const auto embedded = prov.embed(sentences);
    with_output(m->out, [&](std::ostream &os) {
      provider::write_responses(sentences, embedded, os);
    });
  });
}

// --- analogy ------------------------------------------------------------

struct AnalogyCommon {
  std::string dataset, lang = "en", label, report = "json", out, layer = "LSTM1";
  std::vector<int> topn = {1, 5};
  std::size_t candidates = 200000;
  std::size_t semantic = 5;

  analogy::KindTable kinds() const {
    analogy::KindTable k;
    k.semantic_categories = semantic;
    return k;
  }
};

void add_analogy_common(CLI::App *cmd, AnalogyCommon &c) {
  cmd->add_option("--dataset", c.dataset, "Analogy questions file")->required();
  cmd->add_option("--lang", c.lang, "Language code")->capture_default_str();
  cmd->add_option("--label", c.label, "Row label in reports (default: the layer)");
  cmd->add_option("--layer", c.layer, "CNN, LSTM1 or LSTM2")->capture_default_str();
  cmd->add_option("--topn", c.topn, "Accuracy cut-offs")->delimiter(',')->capture_default_str();
  cmd->add_option("--candidates", c.candidates, "Candidate words (most frequent first)")
      ->capture_default_str();
  cmd->add_option("--semantic-categories", c.semantic,
                  "Leading categories counted as semantic")
      ->capture_default_str();
  cmd->add_option("--report", c.report, "json or tsv")->capture_default_str();
  cmd->add_option("--out", c.out, "Report file (default stdout)");
}

void add_analogy(CLI::App &app) {
  auto *an = app.add_subcommand("analogy", "Word analogy evaluation");
  an->require_subcommand(1);

  auto *eval_a = an->add_subcommand("eval-a", "Nearest neighbour over static vectors");
  struct AOpts : AnalogyCommon {
    std::string emb, records, vocab;
  };
  auto a = std::make_shared<AOpts>();
  add_analogy_common(eval_a, *a);
  auto *emb_opt = eval_a->add_option("--emb", a->emb, "Static vector file");
  auto *rec_opt = eval_a->add_option("--records", a->records,
                                     "Record file to average at --layer first");
  emb_opt->excludes(rec_opt);
  eval_a->add_option("--vocab", a->vocab,
                     "Vocabulary ordering the averaged vectors (with --records)");
  eval_a->callback([a] {
    emb::StaticEmbeddings emb;
    if (!a->emb.empty()) {
      emb = emb::load_static(a->emb);
    } else if (!a->records.empty()) {
      emb::AveragingOptions options;
      options.layer = emb::layer_from_string(a->layer);
      if (!a->vocab.empty()) options.vocab_filter = vocab::read_vocab(a->vocab);
      emb::RecordReader reader{fs::path(a->records)};
      emb = emb::average_occurrences(reader, options);
    } else {
      throw ArgumentError("eval-a needs --emb or --records");
    }
    const auto questions = analogy::parse_analogy_dataset(fs::path(a->dataset), a->kinds());
    report::AnalogyReport r;
    r.language = a->lang;
    r.label = a->label.empty() ? a->layer : a->label;
    r.method = "average";
    r.topn = a->topn;
    r.categories = analogy::method_a_evaluate(emb, questions, a->candidates, a->topn);
    emit_analogy(r, a->report, a->out);
  });

  auto *eval_b = an->add_subcommand("eval-b", "Template sentences with contextual vectors");
  struct BOpts : AnalogyCommon {
    std::string vocab, provider, records, templ, ranking = "csls", work_dir;
    std::size_t csls_k = 10, batch = 4096, mock_dim = 0;
    bool full_vocab = false;
  };
  auto b = std::make_shared<BOpts>();
  add_analogy_common(eval_b, *b);
  eval_b->add_option("--vocab", b->vocab,
                     "Extra candidate words, most frequent first");
  eval_b->add_flag("--full-vocab", b->full_vocab,
                   "Use only the first --candidates words of --vocab as candidates");
  auto *prov_opt = eval_b->add_option("--provider", b->provider,
                                      "Command run with --embed-in/--embed-out");
  auto *recs_opt = eval_b->add_option("--records", b->records,
                                      "Precomputed record file answering the requests");
  auto *mock_opt = eval_b->add_option("--mock-dim", b->mock_dim,
                                      "Use the built-in hashing mock of this dimension");
  prov_opt->excludes(recs_opt)->excludes(mock_opt);
  recs_opt->excludes(mock_opt);
  eval_b->add_option("--template", b->templ, "Template file (default: built-in for --lang)");
  eval_b->add_option("--ranking", b->ranking, "csls or cosine")->capture_default_str();
  eval_b->add_option("--csls-k", b->csls_k, "CSLS neighbourhood size")->capture_default_str();
  eval_b->add_option("--batch", b->batch, "Sentences per provider call")->capture_default_str();
  eval_b->add_option("--work-dir", b->work_dir, "Scratch directory for provider files");
  eval_b->callback([b] {
    std::unique_ptr<provider::EmbeddingProvider> prov;
    if (!b->provider.empty()) {
      const fs::path dir = b->work_dir.empty()
                               ? fs::temp_directory_path() / "embeval-provider"
                               : fs::path(b->work_dir);
      prov = std::make_unique<provider::SubprocessProvider>(b->provider, dir);
    } else if (!b->records.empty()) {
      prov = std::make_unique<provider::RecordFileProvider>(b->records);
    } else if (b->mock_dim > 0) {
      prov = std::make_unique<provider::HashingMockProvider>(b->mock_dim);
    } else {
      throw ArgumentError("eval-b needs --provider, --records or --mock-dim");
    }
    if (b->full_vocab && b->vocab.empty()) {
      throw ArgumentError("--full-vocab needs --vocab");
    }
    const auto questions = analogy::parse_analogy_dataset(fs::path(b->dataset), b->kinds());
    const auto vocab_words =
        b->vocab.empty() ? std::vector<std::string>{} : vocab::read_vocab(b->vocab);
    const auto candidates = analogy::method_b_candidates(
        questions, vocab_words, b->candidates, b->full_vocab);
    const auto templates = b->templ.empty()
                               ? analogy::TemplateSet::builtin(b->lang)
                               : analogy::TemplateSet::load(b->templ, b->lang);
    analogy::MethodBOptions options;
    options.layer = emb::layer_from_string(b->layer);
    if (b->ranking == "csls") {
      options.ranking = analogy::Ranking::kCsls;
    } else if (b->ranking == "cosine") {
      options.ranking = analogy::Ranking::kCosine;
    } else {
      throw ArgumentError("--ranking must be csls or cosine");
    }
    options.csls.k = b->csls_k;
    options.topn = b->topn;
    options.batch_sentences = b->batch;
    analogy::MethodBStats stats;
    report::AnalogyReport r;
    r.language = b->lang;
    r.label = b->label.empty() ? b->layer : b->label;
    r.method = "template";
    r.topn = b->topn;
    r.categories = analogy::method_b_evaluate(*prov, questions, templates,
                                              candidates, options, &stats);
    spdlog::info("{} sentences embedded in {} provider calls",
                 stats.sentences_embedded, stats.provider_calls);
    emit_analogy(r, b->report, b->out);
  });

  auto *table = an->add_subcommand("table", "Summary table from evaluation reports");
  struct TOpts {
    std::vector<std::string> inputs;
    std::string shape = "by-language", report = "markdown", out;
    int n = 1;
    int digits = -1;
  };
  auto t = std::make_shared<TOpts>();
  table->add_option("reports", t->inputs, "JSON reports from eval-a/eval-b")->required();
  table->add_option("--shape", t->shape,
                    "by-language: label/kind rows x language columns; "
                    "by-label: language rows x label sem/syn columns")
      ->capture_default_str();
  table->add_option("--n", t->n, "Accuracy cut-off to tabulate")->capture_default_str();
  table->add_option("--digits", t->digits, "Decimals (default 3 by-language, 2 by-label)");
  table->add_option("--report", t->report, "json, tsv or markdown")->capture_default_str();
  table->add_option("--out", t->out, "Output file (default stdout)");
  table->callback([t] {
    std::vector<report::ScoredEntry> entries;
    for (const auto &path : t->inputs) {
      const auto r = report::analogy_report_from_json(read_json(path));
      entries.push_back({r.language, r.label, analogy::aggregate(r.categories, t->n)});
    }
    report::Table tab;
    if (t->shape == "by-language") {
      tab = report::kind_by_language_table(entries, t->digits < 0 ? 3 : t->digits);
    } else if (t->shape == "by-label") {
      tab = report::language_by_label_table(entries, t->digits < 0 ? 2 : t->digits);
    } else {
      throw ArgumentError("--shape must be by-language or by-label");
    }
    const auto format = report::parse_format(t->report);
    with_output(t->out, [&](std::ostream &os) { report::write(tab, format, os); });
  });
}

// --- ner ----------------------------------------------------------------

void add_ner(CLI::App &app) {
  auto *ner_cmd = app.add_subcommand("ner", "Named-entity datasets and scores");
  ner_cmd->require_subcommand(1);

  auto *stats = ner_cmd->add_subcommand("stats", "Label counts and density");
  struct SOpts {
    std::vector<std::string> inputs;
    std::vector<std::string> langs;
    std::string label_map, report = "json", out;
  };
  auto s = std::make_shared<SOpts>();
  stats->add_option("--in", s->inputs, "NER file (repeatable)")->required();
  stats->add_option("--lang", s->langs, "Language per input (repeatable)");
  stats->add_option("--label-map", s->label_map, "Label mapping file");
  stats->add_option("--report", s->report, "json, tsv or markdown")->capture_default_str();
  stats->add_option("--out", s->out, "Output file (default stdout)");
  stats->callback([s] {
    if (!s->langs.empty() && s->langs.size() != s->inputs.size()) {
      throw ArgumentError("give one --lang per --in");
    }
    const auto map = label_map(s->label_map);
    std::vector<report::StatsEntry> entries;
    for (std::size_t i = 0; i < s->inputs.size(); ++i) {
      const auto parsed = ner::parse_ner(fs::path(s->inputs[i]), map);
      entries.push_back({s->langs.empty() ? fs::path(s->inputs[i]).stem().string()
                                          : s->langs[i],
                         ner::label_stats(parsed.sentences)});
    }
    if (s->report == "json" && entries.size() == 1) {
      write_json(s->out, entries.front().stats.to_json());
      return;
    }
    const auto tab = report::label_stats_table(entries);
    with_output(s->out, [&](std::ostream &os) {
      report::write(tab, report::parse_format(s->report), os);
    });
  });

  auto *split = ner_cmd->add_subcommand("split", "Seeded train/test split");
  struct POpts {
    std::string in, train, test, label_map;
    double fraction = 0.9;
    std::uint64_t seed = 0;
  };
  auto p = std::make_shared<POpts>();
  split->add_option("--in", p->in, "NER file")->required();
  split->add_option("--train", p->train, "Training output")->required();
  split->add_option("--test", p->test, "Test output")->required();
  split->add_option("--fraction", p->fraction, "Training share")->capture_default_str();
  split->add_option("--seed", p->seed, "Shuffle seed")->capture_default_str();
  split->add_option("--label-map", p->label_map, "Label mapping file");
  split->callback([p] {
    const auto parsed = ner::parse_ner(fs::path(p->in), label_map(p->label_map));
    const auto parts = ner::split(parsed.sentences, {p->fraction, p->seed});
    ner::write_ner(parts.train, fs::path(p->train));
    ner::write_ner(parts.test, fs::path(p->test));
    spdlog::info("{} train, {} test sentences", parts.train.size(), parts.test.size());
  });

  auto *score = ner_cmd->add_subcommand("score", "Macro-F1 of prediction files");
  struct COpts {
    std::string gold, label_map, system, lang, report = "json", out;
    std::vector<std::string> preds;
    std::optional<std::uint64_t> seed;
  };
  auto c = std::make_shared<COpts>();
  score->add_option("--gold", c->gold, "Gold NER file")->required();
  score->add_option("--pred", c->preds, "Prediction file, one per run (repeatable)")
      ->required();
  score->add_option("--label-map", c->label_map, "Label mapping file");
  score->add_option("--system", c->system, "System name for reports");
  score->add_option("--lang", c->lang, "Language for reports");
  score->add_option("--seed", c->seed, "Seed recorded in the report");
  score->add_option("--report", c->report, "json or tsv")->capture_default_str();
  score->add_option("--out", c->out, "Output file (default stdout)");
  score->callback([c] {
    const auto map = label_map(c->label_map);
    const auto gold = ner::parse_ner(fs::path(c->gold), map);
    std::vector<ner::RunScore> runs;
    for (std::size_t r = 0; r < c->preds.size(); ++r) {
      const auto pred = ner::parse_ner(fs::path(c->preds[r]), map);
      runs.push_back(ner::macro_f1(gold.sentences, pred.sentences, static_cast<int>(r)));
    }
    const ner::ScoreReport rep{c->lang, c->system, c->seed, ner::aggregate_runs(runs)};
    if (c->report == "json") {
      write_json(c->out, ner::to_json(rep));
    } else if (c->report == "tsv") {
      with_output(c->out, [&](std::ostream &os) { ner::write_tsv(rep, os); });
    } else {
      throw ArgumentError("--report must be json or tsv");
    }
    std::cerr << fmt::format("macro-F1 {:.4f} (stddev {:.4f}, {} runs)\n",
                             rep.result.mean.macro_f1, rep.result.stddev.macro_f1,
                             runs.size());
  });

  auto *compare = ner_cmd->add_subcommand(
      "compare", "Relative differences between two systems with dataset covariates");
  struct MOpts {
    std::vector<std::string> candidates, baselines, stats;
    std::string report = "json", out;
  };
  auto m = std::make_shared<MOpts>();
  compare->add_option("--candidate", m->candidates, "Score report of the candidate (repeatable)")
      ->required();
  compare->add_option("--baseline", m->baselines, "Score report of the baseline (repeatable)")
      ->required();
  compare->add_option("--stats", m->stats, "Stats JSON of the dataset (repeatable)")
      ->required();
  compare->add_option("--report", m->report, "json, tsv or markdown")->capture_default_str();
  compare->add_option("--out", m->out, "Output file (default stdout)");
  compare->callback([m] {
    if (m->candidates.size() != m->baselines.size() ||
        m->candidates.size() != m->stats.size()) {
      throw ArgumentError("give the same number of --candidate, --baseline and --stats");
    }
    std::vector<ner::Comparison> rows;
    for (std::size_t i = 0; i < m->candidates.size(); ++i) {
      rows.push_back(ner::compare(
          ner::score_report_from_json(read_json(m->candidates[i])),
          ner::score_report_from_json(read_json(m->baselines[i])),
          ner::LabelStats::from_json(read_json(m->stats[i]))));
    }
    if (m->report == "json") {
      write_json(m->out, ner::to_json(rows));
    } else if (m->report == "tsv") {
      with_output(m->out, [&](std::ostream &os) { ner::write_tsv(rows, os); });
    } else {
      const auto tab = report::comparison_table(rows);
      with_output(m->out, [&](std::ostream &os) {
        report::write(tab, report::parse_format(m->report), os);
      });
    }
  });

  auto *table = ner_cmd->add_subcommand("table", "Languages x systems macro-F1 table");
  struct TOpts {
    std::vector<std::string> inputs;
    std::string report = "markdown", out;
  };
  auto t = std::make_shared<TOpts>();
  table->add_option("reports", t->inputs, "Score reports from ner score")->required();
  table->add_option("--report", t->report, "json, tsv or markdown")->capture_default_str();
  table->add_option("--out", t->out, "Output file (default stdout)");
  table->callback([t] {
    std::vector<report::SystemScore> entries;
    for (const auto &path : t->inputs) {
      const auto r = ner::score_report_from_json(read_json(path));
      entries.push_back({r.language, r.system, r.result.mean.macro_f1});
    }
    const auto tab = report::systems_table(entries);
    with_output(t->out, [&](std::ostream &os) {
      report::write(tab, report::parse_format(t->report), os);
    });
  });
}

// --- pipeline -----------------------------------------------------------

int pipeline_status = 0;

void add_pipeline(CLI::App &app) {
  auto *cmd = app.add_subcommand("pipeline", "Run the configured stages end to end");
  struct Opts {
    std::string config, stages, work_dir;
    std::vector<std::string> settings;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--config", o->config,
                  std::string("INI config file (default: $") + pipeline::kConfigEnv + ")");
  cmd->add_option("--stages", o->stages, "Comma-separated stages to run");
  cmd->add_option("--work-dir", o->work_dir, "Artifact directory");
  cmd->add_option("--set", o->settings, "Override a setting: section.key=value (repeatable)");
  cmd->callback([o] {
    std::string path = o->config;
    if (path.empty()) {
      if (const char *env = std::getenv(pipeline::kConfigEnv)) path = env;
    }
    if (path.empty()) {
      throw ArgumentError(std::string("no config given; use --config or set ") +
                          pipeline::kConfigEnv);
    }
    auto config = pipeline::load_config(path);
    for (const auto &setting : o->settings) {
      const auto eq = setting.find('=');
      if (eq == std::string::npos) {
        throw ArgumentError("--set expects section.key=value, got " + setting);
      }
      pipeline::apply_setting(config, setting.substr(0, eq), setting.substr(eq + 1),
                              fs::current_path());
    }
    if (!o->stages.empty()) config.stages = pipeline::parse_stages(o->stages);
    if (!o->work_dir.empty()) config.work_dir = o->work_dir;
    const auto result = pipeline::run_pipeline(config);
    for (const auto &s : result.stages) {
      std::cout << pipeline::stage_name(s.stage) << '\t' << (s.ok ? "ok" : "FAILED");
      for (const auto &a : s.artifacts) std::cout << '\t' << a.generic_string();
      if (!s.ok) std::cout << '\t' << s.message;
      std::cout << '\n';
    }
    pipeline_status = result.exit_status();
  });
}

}  // namespace

int main(int argc, char **argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("embeval"));
  spdlog::set_pattern("%l: %v");

  CLI::App app{"Corpus preprocessing and embedding evaluation toolkit", "embeval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "embeval 0.1.0");
  int threads = 0;
  bool quiet = false;
  app.add_option("--threads", threads, "Cap on worker threads (0 = all cores)");
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");
  app.parse_complete_callback([&] {
    set_max_threads(threads);
    spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);
  });

  add_corpus(app);
  add_dedup(app);
  add_vocab(app);
  add_emb(app);
  add_analogy(app);
  add_ner(app);
  add_pipeline(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const Error &e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return pipeline_status;
}
