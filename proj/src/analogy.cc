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

#include "embeval/analogy.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "embeval/builtin_data.h"
#include "embeval/corpus.h"
#include "embeval/error.h"
#include "embeval/kernels.h"

namespace embeval::analogy {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Kind parse_kind(std::string_view name) {
  if (name == "semantic") return Kind::kSemantic;
  if (name == "syntactic") return Kind::kSyntactic;
  throw ArgumentError("unknown category kind '" + std::string(name) + "'");
}

// Groups per-question outcomes into categories in order of appearance.
class ResultCollector {
 public:
  explicit ResultCollector(std::span<const int> ns) : ns_(ns.begin(), ns.end()) {
    if (ns_.empty()) throw ArgumentError("no top-n values requested");
    for (const int n : ns_) {
      if (n < 1) throw ArgumentError("top-n values must be >= 1");
    }
  }

  void add(const AnalogyQuestion &q, std::optional<std::size_t> rank) {
    auto [it, inserted] = index_.emplace(q.category, results_.size());
    if (inserted) {
      CategoryResult r;
      r.category = q.category;
      r.kind = q.kind;
      for (const int n : ns_) r.hits[n] = 0;
      results_.push_back(std::move(r));
    }
    CategoryResult &r = results_[it->second];
    ++r.asked;
    if (!rank) {
      ++r.skipped_oov;
      return;
    }
    for (const int n : ns_) {
      if (*rank < static_cast<std::size_t>(n)) ++r.hits[n];
    }
  }

  std::vector<CategoryResult> take() { return std::move(results_); }

 private:
  std::vector<int> ns_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<CategoryResult> results_;
};

std::vector<double> analogy_query(std::span<const float> a,
                                  std::span<const float> b,
                                  std::span<const float> c) {
  std::vector<double> q(a.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = static_cast<double>(b[k]) - static_cast<double>(a[k]) +
           static_cast<double>(c[k]);
  }
  return q;
}

std::string describe(const AnalogyQuestion &q) {
  return q.a + " " + q.b + " " + q.c + " " + q.d + " (" + q.category + ")";
}

}  // namespace

std::string_view kind_name(Kind kind) {
  return kind == Kind::kSemantic ? "semantic" : "syntactic";
}

Kind KindTable::kind_for(const std::string &category, std::size_t index) const {
  if (auto it = overrides.find(category); it != overrides.end()) {
    return it->second;
  }
  return index < semantic_categories ? Kind::kSemantic : Kind::kSyntactic;
}

std::vector<AnalogyQuestion> parse_analogy_dataset(std::istream &in,
                                                   const std::string &source,
                                                   const KindTable &kinds) {
  std::vector<AnalogyQuestion> out;
  std::unordered_map<std::string, std::size_t> category_index;
  std::string category;
  Kind kind = Kind::kSemantic;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == ':') {
      category = std::string(trim(text.substr(1)));
      if (category.empty()) {
        throw FormatError(source, lineno, "empty category name");
      }
      auto [it, inserted] =
          category_index.emplace(category, category_index.size());
      kind = kinds.kind_for(category, it->second);
      continue;
    }
    const auto words = corpus::split_whitespace(text);
    if (words.size() != 4) {
      throw FormatError(source, lineno,
                        "expected 4 words, got " + std::to_string(words.size()));
    }
    if (category.empty()) {
      throw FormatError(source, lineno, "question before any category header");
    }
    const std::unordered_set<std::string_view> distinct(words.begin(),
                                                        words.end());
    if (distinct.size() != 4) {
      throw FormatError(source, lineno, "the four words must be distinct");
    }
    out.push_back({std::string(words[0]), std::string(words[1]),
                   std::string(words[2]), std::string(words[3]), category,
                   kind});
  }
  if (in.bad()) throw IoError("read error: " + source);
  return out;
}

std::vector<AnalogyQuestion> parse_analogy_dataset(
    const std::filesystem::path &path, const KindTable &kinds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_analogy_dataset(in, path.string(), kinds);
}

std::vector<std::string> dataset_words(std::span<const AnalogyQuestion> qs) {
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  for (const AnalogyQuestion &q : qs) {
    for (const std::string *w : {&q.a, &q.b, &q.c, &q.d}) {
      if (seen.insert(*w).second) words.push_back(*w);
    }
  }
  return words;
}

double CategoryResult::accuracy(int n) const {
  auto it = hits.find(n);
  if (it == hits.end()) {
    throw ArgumentError("accuracy@" + std::to_string(n) + " was not computed");
  }
  if (answered() == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(answered());
}

nlohmann::json to_json(std::span<const CategoryResult> results) {
  nlohmann::json out = nlohmann::json::array();
  for (const CategoryResult &r : results) {
    nlohmann::json hits = nlohmann::json::object();
    nlohmann::json acc = nlohmann::json::object();
    for (const auto &[n, h] : r.hits) {
      hits[std::to_string(n)] = h;
      acc[std::to_string(n)] = r.accuracy(n);
    }
    out.push_back({{"category", r.category},
                   {"kind", kind_name(r.kind)},
                   {"asked", r.asked},
                   {"skipped_oov", r.skipped_oov},
                   {"hits", hits},
                   {"accuracy", acc}});
  }
  return out;
}

std::vector<CategoryResult> results_from_json(const nlohmann::json &j) {
  std::vector<CategoryResult> out;
  for (const auto &item : j) {
    CategoryResult r;
    r.category = item.at("category").get<std::string>();
    r.kind = parse_kind(item.at("kind").get<std::string>());
    r.asked = item.at("asked").get<std::size_t>();
    r.skipped_oov = item.at("skipped_oov").get<std::size_t>();
    for (const auto &[n, h] : item.at("hits").items()) {
      r.hits[std::stoi(n)] = h.get<std::size_t>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_tsv(std::span<const CategoryResult> results, std::ostream &out) {
  std::vector<int> ns;
  if (!results.empty()) {
    for (const auto &[n, h] : results.front().hits) ns.push_back(n);
  }
  out << "category\tkind\tasked\tskipped_oov";
  for (const int n : ns) out << "\thits@" << n << "\tacc@" << n;
  out << '\n';
  for (const CategoryResult &r : results) {
    out << r.category << '\t' << kind_name(r.kind) << '\t' << r.asked << '\t'
        << r.skipped_oov;
    for (const int n : ns) {
      out << '\t' << r.hits.at(n) << '\t' << fmt::format("{:.6f}", r.accuracy(n));
    }
    out << '\n';
  }
}

std::vector<std::optional<std::size_t>> method_a_ranks(
    const emb::StaticEmbeddings &emb, std::span<const AnalogyQuestion> qs,
    std::size_t candidate_limit) {
  const std::size_t limit = std::min(candidate_limit, emb.size());
  if (limit == 0) throw ArgumentError("empty candidate set");
  const emb::MatrixView<float> all = emb.view();
  const emb::MatrixView<float> candidates{
      all.data.subspan(0, limit * emb.dim()), limit, emb.dim()};
  const std::vector<double> inv_norms = emb::row_inverse_norms(candidates);

  std::vector<kernels::RankQuery> queries;
  std::vector<std::size_t> query_of(qs.size(), SIZE_MAX);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const AnalogyQuestion &q = qs[i];
    std::array<std::size_t, 4> idx{};
    bool ok = true;
    const std::string *words[4] = {&q.a, &q.b, &q.c, &q.d};
    for (int w = 0; w < 4 && ok; ++w) {
      const auto found = emb.find(*words[w]);
      ok = found && *found < limit;
      if (ok) idx[w] = *found;
    }
    if (!ok) continue;
    query_of[i] = queries.size();
    queries.push_back({analogy_query(emb.row(idx[0]), emb.row(idx[1]),
                                     emb.row(idx[2])),
                       idx[3],
                       {idx[0], idx[1], idx[2]}});
  }

  const std::vector<std::size_t> ranks =
      kernels::target_ranks(candidates, inv_norms, queries);
  std::vector<std::optional<std::size_t>> out(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (query_of[i] != SIZE_MAX) out[i] = ranks[query_of[i]];
  }
  return out;
}

std::vector<CategoryResult> method_a_evaluate(
    const emb::StaticEmbeddings &emb, std::span<const AnalogyQuestion> qs,
    std::size_t candidate_limit, std::span<const int> ns) {
  ResultCollector collector(ns);
  const auto ranks = method_a_ranks(emb, qs, candidate_limit);
  for (std::size_t i = 0; i < qs.size(); ++i) collector.add(qs[i], ranks[i]);
  return collector.take();
}

std::vector<std::string> method_a_top(const emb::StaticEmbeddings &emb,
                                      const AnalogyQuestion &q,
                                      std::size_t candidate_limit,
                                      std::size_t n) {
  const std::size_t limit = std::min(candidate_limit, emb.size());
  if (limit == 0) throw ArgumentError("empty candidate set");
  const auto ia = emb.find(q.a), ib = emb.find(q.b), ic = emb.find(q.c);
  if (!ia || !ib || !ic) throw ArgumentError("query word not in embeddings");
  const emb::MatrixView<float> candidates{
      emb.view().data.subspan(0, limit * emb.dim()), limit, emb.dim()};
  const auto inv = emb::row_inverse_norms(candidates);
  const auto query = analogy_query(emb.row(*ia), emb.row(*ib), emb.row(*ic));
  const auto scores = emb::similarities(candidates, inv, query);
  std::vector<std::string> top;
  for (const std::size_t j : rank_by_score(scores)) {
    if (j == *ia || j == *ib || j == *ic) continue;
    if (top.size() == n) break;
    top.push_back(emb.token(j));
  }
  return top;
}

TemplateSpec::TemplateSpec(std::string language, std::string pattern)
    : language_(std::move(language)), pattern_(std::move(pattern)) {
  static constexpr std::string_view kSlots[4] = {"{A}", "{B}", "{C}", "{D}"};
  int count[4] = {0, 0, 0, 0};
  int last_slot = -1;
  std::string literal;
  std::size_t i = 0;
  while (i < pattern_.size()) {
    int slot = -1;
    for (int s = 0; s < 4; ++s) {
      if (pattern_.compare(i, kSlots[s].size(), kSlots[s]) == 0) slot = s;
    }
    if (slot < 0) {
      literal.push_back(pattern_[i++]);
      continue;
    }
    ++count[slot];
    last_slot = slot;
    pieces_.push_back({std::move(literal), slot});
    literal.clear();
    i += 3;
  }
  pieces_.push_back({std::move(literal), -1});
  for (int s = 0; s < 4; ++s) {
    if (count[s] != 1) {
      throw ArgumentError("template must contain " + std::string(kSlots[s]) +
                          " exactly once: " + pattern_);
    }
  }
  if (last_slot != 3) {
    throw ArgumentError("{D} must be the last slot in template: " + pattern_);
  }
}

TemplateSet::TemplateSet(TemplateSpec default_spec)
    : default_(std::move(default_spec)) {}

TemplateSet TemplateSet::parse(std::string language, std::string_view content) {
  std::optional<TemplateSpec> def;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::size_t begin = 0;
  while (begin <= content.size()) {
    std::size_t end = content.find('\n', begin);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = trim(content.substr(begin, end - begin));
    begin = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      if (def) throw ArgumentError("template file has two default patterns");
      def.emplace(language, std::string(line));
    } else {
      overrides.emplace_back(std::string(trim(line.substr(0, tab))),
                             std::string(trim(line.substr(tab + 1))));
    }
  }
  if (!def) throw ArgumentError("template file has no default pattern");
  TemplateSet set(std::move(*def));
  for (auto &[category, pattern] : overrides) {
    set.set_override(category, TemplateSpec(language, std::move(pattern)));
  }
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path &path,
                              std::string language) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  return parse(std::move(language), content);
}

TemplateSet TemplateSet::builtin(const std::string &language) {
  const auto &files = builtin::template_files();
  for (const auto &file : files) {
    if (file.name == language) return parse(language, file.content);
  }
  spdlog::warn("no analogy template for language '{}', using English",
               language);
  for (const auto &file : files) {
    if (file.name == "en") return parse(language, file.content);
  }
  throw Error("built-in English template missing");
}

void TemplateSet::set_override(const std::string &category, TemplateSpec spec) {
  overrides_.insert_or_assign(category, std::move(spec));
}

const TemplateSpec &TemplateSet::for_category(
    const std::string &category) const {
  auto it = overrides_.find(category);
  return it == overrides_.end() ? default_ : it->second;
}

TemplateSentence build_template_sentence(const AnalogyQuestion &q,
                                         const TemplateSpec &spec) {
  const corpus::LanguageRules &rules =
      corpus::RuleTables::builtin().rules(spec.language());
  const std::string *words[4] = {&q.a, &q.b, &q.c, &q.d};
  TemplateSentence out;
  for (const TemplateSpec::Piece &piece : spec.pieces()) {
    const corpus::Sentence literal = corpus::tokenize(piece.literal, rules);
    out.tokens.insert(out.tokens.end(), literal.tokens.begin(),
                      literal.tokens.end());
    if (piece.slot < 0) continue;
    const std::string &word = *words[piece.slot];
    const auto pieces = corpus::split_whitespace(word);
    if (pieces.size() != 1 || pieces[0].size() != word.size()) {
      throw ArgumentError("analogy word '" + word +
                          "' is empty or contains whitespace");
    }
    out.slots[piece.slot] = out.tokens.size();
    out.tokens.push_back(word);
  }
  return out;
}

void CslsConfig::validate(std::size_t candidates) const {
  if (k < 1 || k + 1 > candidates) {
    throw ArgumentError("CSLS K=" + std::to_string(k) +
                        " out of range for " + std::to_string(candidates) +
                        " candidates");
  }
}

namespace {

double mean_of_top(std::vector<double> values, std::size_t k) {
  k = std::min(k, values.size());
  std::partial_sort(values.begin(), values.begin() + k, values.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += values[i];
  return sum / static_cast<double>(k);
}

}  // namespace

std::vector<double> csls_scores(std::span<const double> query,
                                emb::MatrixView<float> candidates,
                                std::span<const std::vector<double>> query_set,
                                const CslsConfig &cfg) {
  cfg.validate(candidates.rows);
  if (query_set.empty()) throw ArgumentError("empty CSLS query set");
  const auto inv = emb::row_inverse_norms(candidates);
  const std::vector<double> sims = emb::similarities(candidates, inv, query);
  const double r_query = mean_of_top(sims, cfg.k);

  std::vector<std::vector<double>> set_sims;
  set_sims.reserve(query_set.size());
  for (const auto &member : query_set) {
    set_sims.push_back(emb::similarities(candidates, inv, member));
  }
  std::vector<double> out(candidates.rows);
  std::vector<double> column(query_set.size());
  for (std::size_t y = 0; y < candidates.rows; ++y) {
    for (std::size_t m = 0; m < query_set.size(); ++m) column[m] = set_sims[m][y];
    const double r_cand = mean_of_top(column, cfg.k);
    out[y] = 2.0 * sims[y] - r_query - r_cand;
  }
  return out;
}

std::vector<double> csls_scores(std::span<const double> query,
                                emb::MatrixView<float> candidates,
                                const CslsConfig &cfg) {
  cfg.validate(candidates.rows);
  const auto inv = emb::row_inverse_norms(candidates);
  const std::vector<double> sims = emb::similarities(candidates, inv, query);
  const double r_query = mean_of_top(sims, cfg.k);
  std::vector<double> out(candidates.rows);
  for (std::size_t y = 0; y < candidates.rows; ++y) {
    out[y] = 2.0 * sims[y] - r_query - sims[y];
  }
  return out;
}

std::vector<std::size_t> rank_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) {
                     return scores[i] > scores[j];
                   });
  return order;
}

std::vector<std::size_t> csls_rank(std::span<const double> query,
                                   emb::MatrixView<float> candidates,
                                   const CslsConfig &cfg) {
  return rank_by_score(csls_scores(query, candidates, cfg));
}

std::vector<std::string> method_b_candidates(
    std::span<const AnalogyQuestion> qs, std::span<const std::string> vocab,
    std::size_t limit, bool full_vocab) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  const auto add = [&](const std::string &w) {
    if (out.size() < limit && seen.insert(w).second) out.push_back(w);
  };
  if (!full_vocab) {
    for (const std::string &w : dataset_words(qs)) add(w);
  }
  for (const std::string &w : vocab) add(w);
  return out;
}

std::vector<CategoryResult> method_b_evaluate(
    provider::EmbeddingProvider &provider, std::span<const AnalogyQuestion> qs,
    const TemplateSet &templates, std::span<const std::string> candidates,
    const MethodBOptions &options, MethodBStats *stats) {
  ResultCollector collector(options.topn);
  std::unordered_map<std::string, std::size_t> candidate_index;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidate_index.emplace(candidates[i], i);
  }
  if (candidate_index.empty()) throw ArgumentError("empty candidate set");

  struct Planned {
    std::size_t question;
    TemplateSentence sentence;
    std::vector<std::size_t> candidates;  // indices into `candidates`
    std::size_t answer = 0;               // position of d within them
    std::size_t first_request = 0;
  };

  MethodBStats local;
  std::optional<std::size_t> run_dim;  // fixed by the first response
  std::vector<Planned> plan;
  std::vector<provider::TokenSentence> requests;

  const auto score_batch = [&] {
    if (plan.empty()) return;
    std::vector<provider::SentenceEmbedding> embedded;
    try {
      embedded = provider.embed(requests);
    } catch (const Error &e) {
      throw ProtocolError("embedding questions " + describe(qs[plan.front().question]) +
                          " .. " + describe(qs[plan.back().question]) + ": " +
                          e.what());
    }
    ++local.provider_calls;
    local.sentences_embedded += requests.size();
    if (embedded.size() != requests.size()) {
      throw ProtocolError("provider returned " + std::to_string(embedded.size()) +
                          " sentences for " + std::to_string(requests.size()));
    }

    for (const Planned &p : plan) {
      const AnalogyQuestion &q = qs[p.question];
      const provider::SentenceEmbedding &base = embedded[p.first_request];
      if (!run_dim) run_dim = base.dim;
      const std::size_t dim = *run_dim;
      const auto check = [&](const provider::SentenceEmbedding &e) {
        if (e.dim != dim || e.tokens != p.sentence.tokens.size()) {
          throw ProtocolError("question " + describe(q) +
                              ": provider returned dimension " +
                              std::to_string(e.dim) + " for " +
                              std::to_string(e.tokens) + " tokens, expected " +
                              std::to_string(dim) + " for " +
                              std::to_string(p.sentence.tokens.size()));
        }
      };
      check(base);
      const auto &slots = p.sentence.slots;
      const std::vector<double> query = analogy_query(
          base.vector(options.layer, slots[0]),
          base.vector(options.layer, slots[1]),
          base.vector(options.layer, slots[2]));

      std::vector<float> matrix;
      matrix.reserve(p.candidates.size() * dim);
      for (std::size_t j = 0; j < p.candidates.size(); ++j) {
        const auto &e = embedded[p.first_request + 1 + j];
        check(e);
        const auto v = e.vector(options.layer, slots[3]);
        matrix.insert(matrix.end(), v.begin(), v.end());
      }
      const emb::MatrixView<float> view{matrix, p.candidates.size(), dim};

      std::vector<double> scores;
      if (options.ranking == Ranking::kCsls) {
        scores = csls_scores(query, view, options.csls);
      } else {
        scores = emb::similarities(view, emb::row_inverse_norms(view), query);
      }
      const auto order = rank_by_score(scores);
      const auto pos = std::find(order.begin(), order.end(), p.answer);
      collector.add(q, static_cast<std::size_t>(pos - order.begin()));
    }
    plan.clear();
    requests.clear();
  };

  for (std::size_t i = 0; i < qs.size(); ++i) {
    const AnalogyQuestion &q = qs[i];
    const bool known = candidate_index.count(q.a) && candidate_index.count(q.b) &&
                       candidate_index.count(q.c) && candidate_index.count(q.d);
    if (!known) {
      // Keep category order identical to the dataset: flush pending work
      // first so this skip is recorded after earlier questions.
      score_batch();
      collector.add(q, std::nullopt);
      continue;
    }

    Planned p;
    p.question = i;
    p.sentence = build_template_sentence(q, templates.for_category(q.category));
    const std::size_t skip[3] = {candidate_index[q.a], candidate_index[q.b],
                                 candidate_index[q.c]};
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j == skip[0] || j == skip[1] || j == skip[2]) continue;
      if (j == candidate_index[q.d]) p.answer = p.candidates.size();
      p.candidates.push_back(j);
    }

    if (!plan.empty() &&
        requests.size() + 1 + p.candidates.size() > options.batch_sentences) {
      score_batch();
    }
    p.first_request = requests.size();
    requests.push_back(p.sentence.tokens);
    for (const std::size_t j : p.candidates) {
      provider::TokenSentence s = p.sentence.tokens;
      s[p.sentence.d_slot()] = candidates[j];
      requests.push_back(std::move(s));
    }
    plan.push_back(std::move(p));
  }
  score_batch();

  if (stats) *stats = local;
  return collector.take();
}

KindScores aggregate(std::span<const CategoryResult> results, int n) {
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (const CategoryResult &r : results) {
    const int k = r.kind == Kind::kSemantic ? 0 : 1;
    sum[k] += r.accuracy(n);
    ++count[k];
  }
  KindScores out;
  if (count[0] > 0) out.semantic = sum[0] / static_cast<double>(count[0]);
  if (count[1] > 0) out.syntactic = sum[1] / static_cast<double>(count[1]);
  return out;
}

std::string format_aggregate_row(std::string_view label,
                                 const KindScores &scores, int digits) {
  const auto cell = [&](const std::optional<double> &v) {
    return v ? fmt::format("{:.{}f}", *v, digits) : std::string("n/a");
  };
  return fmt::format("{} | sem {} | syn {}", label, cell(scores.semantic),
                     cell(scores.syntactic));
}

}  // namespace embeval::analogy
