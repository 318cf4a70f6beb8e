// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Synthetic session corpora with planted topics and ground-truth labels.
// Sessions stick to their topic with a configurable probability; designated
// ambiguous tokens are shared between topic vocabularies so the end-to-end
// pipeline can be measured on exactly the kind of word that is safe in one
// context and not in another.
//
// Every generated query carries at least one token exclusive to its topic,
// which makes the text -> topic ground-truth map a function: the same query
// string can never be produced by two different topics.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsx/corpus.hpp"

namespace qsx {

struct TopicSpec {
    std::string name;
    std::vector<std::string> vocabulary;  // tokens; shared tokens mark ambiguity
};

struct CorpusSpec {
    std::vector<TopicSpec> topics;
    std::int64_t sessions_per_topic = 0;
    int session_len_min = 5;
    int session_len_max = 20;
    double stickiness = 0.9;       // probability a query comes from the session's topic
    std::uint64_t rng_seed = 1;
    std::int64_t queries_per_topic = 120;  // size of each topic's query pool
    double zipf_exponent = 0.8;    // skew of query popularity within a pool
    int max_query_tokens = 3;      // queries have 1..max tokens
};

struct GeneratedCorpus {
    SessionCorpus corpus;
    std::map<Query, std::string> topic_of;  // ground truth for every emitted query
};

namespace detail {

// Sampling primitives over the raw mt19937_64 stream. The engine's output
// sequence is fixed by the standard and nothing here goes through a
// library distribution, so corpora are byte-identical everywhere.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        // rejection sampling, no modulo bias
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

inline void validate_spec(const CorpusSpec& spec) {
    if (spec.topics.empty()) throw std::invalid_argument("corpus spec: no topics");
    if (spec.sessions_per_topic < 1)
        throw std::invalid_argument("corpus spec: sessions_per_topic must be >= 1");
    if (spec.session_len_min < 1 || spec.session_len_max < spec.session_len_min)
        throw std::invalid_argument("corpus spec: bad session length bounds");
    if (spec.stickiness < 0.0 || spec.stickiness > 1.0)
        throw std::invalid_argument("corpus spec: stickiness must be in [0, 1]");
    if (spec.queries_per_topic < 1)
        throw std::invalid_argument("corpus spec: queries_per_topic must be >= 1");
    if (spec.max_query_tokens < 1)
        throw std::invalid_argument("corpus spec: max_query_tokens must be >= 1");
    for (const TopicSpec& topic : spec.topics) {
        if (topic.name.empty()) throw std::invalid_argument("corpus spec: unnamed topic");
        if (topic.vocabulary.empty())
            throw std::invalid_argument("corpus spec: empty vocabulary for topic " + topic.name);
        for (const std::string& token : topic.vocabulary) {
            const auto normalized = normalize_query(token);
            if (!normalized || *normalized != token || token.find(' ') != std::string::npos)
                throw std::invalid_argument("corpus spec: token not in normalized single-word form: '" +
                                            token + "'");
        }
    }
}

}  // namespace detail

/// Generates the corpus and its ground truth. Deterministic in rng_seed.
/// Throws when the spec cannot be satisfied (session length beyond the
/// reachable pool, vocabulary too small to form attributable queries, ...).
inline GeneratedCorpus generate_corpus(const CorpusSpec& spec) {
    detail::validate_spec(spec);
    detail::DetRng rng(spec.rng_seed);
    const std::size_t n_topics = spec.topics.size();

    // Tokens shared by several topics are the ambiguous ones; every query
    // must contain at least one token its topic does not share.
    std::unordered_map<std::string, std::size_t> token_topic_count;
    for (const TopicSpec& topic : spec.topics) {
        std::unordered_set<std::string> seen;
        for (const std::string& token : topic.vocabulary) {
            if (seen.insert(token).second) ++token_topic_count[token];
        }
    }
    const auto is_exclusive = [&](const std::string& token) {
        return token_topic_count.at(token) == 1;
    };

    constexpr int kMaxAttempts = 100000;

    // Fixed query pool per topic, so head queries repeat across sessions.
    std::vector<std::vector<Query>> pools(n_topics);
    std::unordered_set<Query> pool_texts;
    for (std::size_t t = 0; t < n_topics; ++t) {
        const auto& vocab = spec.topics[t].vocabulary;
        auto& pool = pools[t];
        int attempts = 0;
        while (pool.size() < static_cast<std::size_t>(spec.queries_per_topic)) {
            if (++attempts > kMaxAttempts)
                throw std::invalid_argument("corpus spec: cannot build " +
                                            std::to_string(spec.queries_per_topic) +
                                            " distinct attributable queries for topic " +
                                            spec.topics[t].name);
            const std::size_t k = 1 + static_cast<std::size_t>(rng.below(
                                          static_cast<std::uint64_t>(spec.max_query_tokens)));
            std::vector<std::string> tokens;
            bool has_exclusive = false;
            while (tokens.size() < k) {
                const std::string& tok = vocab[rng.below(vocab.size())];
                if (std::find(tokens.begin(), tokens.end(), tok) != tokens.end()) {
                    if (tokens.size() + 1 > vocab.size()) break;
                    continue;
                }
                tokens.push_back(tok);
                if (is_exclusive(tok)) has_exclusive = true;
            }
            if (tokens.size() < k || !has_exclusive) continue;
            std::string text = tokens[0];
            for (std::size_t i = 1; i < tokens.size(); ++i) text += ' ' + tokens[i];
            if (pool_texts.insert(text).second) pool.push_back(std::move(text));
        }
    }

    // Popularity weights: rank r in the pool gets 1 / (r + 1)^zipf.
    std::vector<std::vector<double>> cumulative(n_topics);
    for (std::size_t t = 0; t < n_topics; ++t) {
        double total = 0.0;
        cumulative[t].reserve(pools[t].size());
        for (std::size_t r = 0; r < pools[t].size(); ++r) {
            total += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
            cumulative[t].push_back(total);
        }
    }
    const auto draw_from_pool = [&](std::size_t t) -> const Query& {
        const auto& cum = cumulative[t];
        const double x = rng.unit() * cum.back();
        const std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
        return pools[t][std::min(idx, pools[t].size() - 1)];
    };

    std::size_t total_pool = 0;
    for (const auto& pool : pools) total_pool += pool.size();
    if (static_cast<std::size_t>(spec.session_len_max) > total_pool)
        throw std::invalid_argument("corpus spec: session length exceeds the reachable query pool");

    GeneratedCorpus out;
    out.corpus.sessions.reserve(static_cast<std::size_t>(spec.sessions_per_topic) * n_topics);
    for (std::size_t t = 0; t < n_topics; ++t) {
        for (std::int64_t i = 0; i < spec.sessions_per_topic; ++i) {
            const std::size_t len =
                static_cast<std::size_t>(spec.session_len_min) +
                static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(
                    spec.session_len_max - spec.session_len_min + 1)));
            std::set<Query> queries;
            int attempts = 0;
            while (queries.size() < len) {
                if (++attempts > kMaxAttempts)
                    throw std::invalid_argument(
                        "corpus spec: cannot fill a session of length " + std::to_string(len));
                const std::size_t source =
                    rng.unit() < spec.stickiness ? t : static_cast<std::size_t>(rng.below(n_topics));
                queries.insert(draw_from_pool(source));
            }
            out.corpus.sessions.push_back(
                Session{std::vector<Query>(queries.begin(), queries.end())});
        }
    }

    // Ground truth for emitted queries only. A pool query's topic is
    // recoverable from its exclusive token, so this never conflicts.
    std::unordered_map<Query, const std::string*> owner;
    for (std::size_t t = 0; t < n_topics; ++t) {
        for (const Query& q : pools[t]) owner.emplace(q, &spec.topics[t].name);
    }
    for (const Session& s : out.corpus.sessions) {
        for (const Query& q : s.queries) out.topic_of.emplace(q, *owner.at(q));
    }
    return out;
}

/// One session per line, queries tab-separated: the corpus input format.
inline void save_sessions_tsv(std::ostream& out, const SessionCorpus& corpus) {
    for (const Session& s : corpus.sessions) {
        for (std::size_t i = 0; i < s.queries.size(); ++i) {
            if (i) out << '\t';
            out << s.queries[i];
        }
        out << '\n';
    }
}

/// Ground-truth rows `query<TAB>topic`, sorted by query.
inline void save_truth_tsv(std::ostream& out, const std::map<Query, std::string>& topic_of) {
    for (const auto& [q, topic] : topic_of) out << q << '\t' << topic << '\n';
}

}  // namespace qsx
