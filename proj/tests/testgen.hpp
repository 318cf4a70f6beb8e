// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Seeded random inputs shared by the unit and acceptance suites.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qsx/corpus.hpp"

namespace testgen {

struct RandomCorpusParams {
    std::size_t max_sessions = 30;
    std::size_t max_queries_per_session = 8;
    std::size_t vocab_size = 40;
    std::size_t max_query_tokens = 3;
};

inline std::vector<std::string> make_vocab(std::size_t size) {
    std::vector<std::string> vocab;
    vocab.reserve(size);
    for (std::size_t i = 0; i < size; ++i) vocab.push_back("w" + std::to_string(i));
    return vocab;
}

// Sessions as plain query sets; callers wrap them into library types or feed
// them to the oracles as they need.
inline std::vector<std::set<std::string>> random_sessions(std::mt19937& rng,
                                                          const RandomCorpusParams& params) {
    const auto vocab = make_vocab(params.vocab_size);
    std::uniform_int_distribution<std::size_t> n_sessions(1, params.max_sessions);
    std::uniform_int_distribution<std::size_t> n_queries(1, params.max_queries_per_session);
    std::uniform_int_distribution<std::size_t> n_tokens(1, params.max_query_tokens);
    std::uniform_int_distribution<std::size_t> token(0, params.vocab_size - 1);

    std::vector<std::set<std::string>> sessions(n_sessions(rng));
    for (auto& session : sessions) {
        const std::size_t want = n_queries(rng);
        while (session.size() < want) {
            std::string q = vocab[token(rng)];
            const std::size_t extra = n_tokens(rng) - 1;
            for (std::size_t i = 0; i < extra; ++i) q += ' ' + vocab[token(rng)];
            session.insert(std::move(q));
        }
    }
    return sessions;
}

inline qsx::SessionCorpus to_corpus(const std::vector<std::set<std::string>>& sessions) {
    qsx::SessionCorpus corpus;
    corpus.sessions.reserve(sessions.size());
    for (const auto& s : sessions) {
        corpus.sessions.push_back(
            qsx::Session::of(std::vector<std::string>(s.begin(), s.end())));
    }
    return corpus;
}

// A random bipartite graph as a flat edge list: every query node gets at
// least one edge so all planted nodes really exist in the graph.
inline std::vector<std::tuple<std::string, std::string, double>> random_edges(
    std::mt19937& rng, std::size_t n_queries, std::size_t n_ngrams) {
    std::uniform_real_distribution<double> weight(0.1, 20.0);
    std::uniform_int_distribution<std::size_t> ngram_pick(0, n_ngrams - 1);
    std::uniform_int_distribution<int> fanout(1, 4);
    std::vector<std::tuple<std::string, std::string, double>> edges;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t q = 0; q < n_queries; ++q) {
        const int degree = fanout(rng);
        for (int i = 0; i < degree; ++i) {
            const std::size_t n = ngram_pick(rng);
            if (!seen.insert({q, n}).second) continue;
            edges.emplace_back("q" + std::to_string(q), "n" + std::to_string(n), weight(rng));
        }
    }
    return edges;
}

}  // namespace testgen
