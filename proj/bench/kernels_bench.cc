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


// OpenMP kernels against their serial reference versions. Run with
// --benchmark_filter to pick one kernel; the Threads argument caps the
// OpenMP pool for the parallel variant.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "embeval/kernels.h"
#include "embeval/parallel.h"

namespace {

using namespace embeval;

std::string word(std::mt19937_64 &rng, std::size_t vocab) {
  std::uint64_t id = rng() % vocab;
  std::string w;
  do {
    w.push_back(static_cast<char>('a' + id % 26));
    id /= 26;
  } while (id > 0);
  return w;
}

const std::vector<std::vector<std::string>> &units() {
  static const auto data = [] {
    std::mt19937_64 rng(1);
    std::vector<std::vector<std::string>> u(20000);
    for (auto &x : u) {
      const std::size_t len = 5 + rng() % 40;
      for (std::size_t k = 0; k < len; ++k) x.push_back(word(rng, 50000));
    }
    return u;
  }();
  return data;
}

const std::vector<std::string> &lines() {
  static const auto data = [] {
    std::vector<std::string> out;
    for (const auto &u : units()) {
      std::string line;
      for (const auto &t : u) line += t + ' ';
      out.push_back(line);
    }
    return out;
  }();
  return data;
}

std::vector<corpus::Paragraph> paragraphs() {
  std::mt19937_64 rng(2);
  std::vector<corpus::Paragraph> out(4000);
  for (auto &p : out) {
    for (int s = 0; s < 4; ++s) {
      p.text += "Dr. " + word(rng, 900) + " said, " + word(rng, 900) + " costs 1.5 eur " +
                word(rng, 900) + "! ";
    }
  }
  return out;
}

const std::vector<emb::TokenEmbeddingRecord> &records() {
  static const auto data = [] {
    std::mt19937_64 rng(3);
    std::normal_distribution<float> g;
    std::vector<emb::TokenEmbeddingRecord> out(60000);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].sentence_id = std::to_string(i / 20);
      out[i].position = i % 20;
      out[i].token = word(rng, 5000);
      out[i].layer = emb::Layer::kLstm1;
      out[i].vector.resize(64);
      for (auto &x : out[i].vector) x = g(rng);
    }
    return out;
  }();
  return data;
}

struct RankData {
  std::vector<float> matrix;
  std::vector<double> inv;
  std::vector<RankQuery> queries;
  std::size_t rows = 20000, dim = 64;
};

const RankData &rank_data() {
  static const auto data = [] {
    RankData d;
    std::mt19937_64 rng(4);
    std::normal_distribution<float> g;
    d.matrix.resize(d.rows * d.dim);
    for (auto &x : d.matrix) x = g(rng);
    d.inv = emb::row_inverse_norms({d.matrix, d.rows, d.dim});
    d.queries.resize(200);
    for (auto &q : d.queries) {
      q.q.resize(d.dim);
      for (auto &x : q.q) x = g(rng);
      q.target = rng() % d.rows;
      q.exclude = {rng() % d.rows, rng() % d.rows, rng() % d.rows};
    }
    return d;
  }();
  return data;
}

void threads(benchmark::State &state) { set_max_threads(static_cast<int>(state.range(0))); }

template <bool Parallel>
void BM_Shingle(benchmark::State &state) {
  threads(state);
  for (auto _ : state) {
    auto r = Parallel ? kernels::shingle_units(units(), 9) : reference::shingle_units(units(), 9);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(units().size()));
}

template <bool Parallel>
void BM_Tokenize(benchmark::State &state) {
  threads(state);
  const auto &rules = corpus::RuleTables::builtin().rules("en");
  const auto base = paragraphs();
  for (auto _ : state) {
    state.PauseTiming();
    auto ps = base;
    state.ResumeTiming();
    if (Parallel) {
      kernels::tokenize_paragraphs(ps, rules);
    } else {
      reference::tokenize_paragraphs(ps, rules);
    }
    benchmark::DoNotOptimize(ps);
  }
}

template <bool Parallel>
void BM_CountTokens(benchmark::State &state) {
  threads(state);
  for (auto _ : state) {
    vocab::TokenCounts counts;
    if (Parallel) {
      kernels::count_tokens(lines(), counts);
    } else {
      reference::count_tokens(lines(), counts);
    }
    benchmark::DoNotOptimize(counts);
  }
}

template <bool Parallel>
void BM_Accumulate(benchmark::State &state) {
  threads(state);
  for (auto _ : state) {
    emb::AccumulatorTable table(16);
    if (Parallel) {
      kernels::accumulate_by_token(records(), emb::Layer::kLstm1, nullptr, 0, table);
    } else {
      reference::accumulate_by_token(records(), emb::Layer::kLstm1, nullptr, 0, table);
    }
    benchmark::DoNotOptimize(table);
  }
}

template <bool Parallel>
void BM_TargetRanks(benchmark::State &state) {
  threads(state);
  const auto &d = rank_data();
  const emb::MatrixView<float> m{d.matrix, d.rows, d.dim};
  for (auto _ : state) {
    auto r = Parallel ? kernels::target_ranks(m, d.inv, d.queries)
                      : reference::target_ranks(m, d.inv, d.queries);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.queries.size()));
}

template <bool Parallel>
void BM_Confusion(benchmark::State &state) {
  threads(state);
  static const auto labels = [] {
    std::mt19937_64 rng(5);
    std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> p;
    for (int i = 0; i < 2'000'000; ++i) {
      p.first.push_back(rng() % 4);
      p.second.push_back(rng() % 4);
    }
    return p;
  }();
  for (auto _ : state) {
    auto m = Parallel ? kernels::confusion_counts(labels.first, labels.second, 4)
                      : reference::confusion_counts(labels.first, labels.second, 4);
    benchmark::DoNotOptimize(m);
  }
}

#define EMBEVAL_BENCH_PAIR(fn)                                         \
  BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/reference")->Arg(1);       \
  BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/openmp")->Arg(1)->Arg(2)->Arg(4)

EMBEVAL_BENCH_PAIR(BM_Shingle);
EMBEVAL_BENCH_PAIR(BM_Tokenize);
EMBEVAL_BENCH_PAIR(BM_CountTokens);
EMBEVAL_BENCH_PAIR(BM_Accumulate);
EMBEVAL_BENCH_PAIR(BM_TargetRanks);
EMBEVAL_BENCH_PAIR(BM_Confusion);

}  // namespace

BENCHMARK_MAIN();
