// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Phase 2: purely behavioral scoring of every corpus query against the
// intermediate set I, followed by the positive/negative split.
//
// A session qualifies for q when it contains three queries from I besides q
// itself: |s cap I| >= 4 if q is in I, else >= 3. With t sessions containing
// q and u qualifying ones, the score is the smoothed fraction
// (u + 1) / (t + 30), which damps rare-query flukes (t = 1, u = 1 scores
// only 2/31).

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qsx/corpus.hpp"
#include "qsx/parallel.hpp"
#include "qsx/tsv.hpp"

namespace qsx {

struct SmoothingParams {
    std::int64_t hit_add = 1;       // added to u
    std::int64_t session_add = 30;  // added to t
};

struct QueryScore {
    std::int64_t t = 0;  // sessions containing the query
    std::int64_t u = 0;  // qualifying sessions
    double score = 0.0;  // (u + hit_add) / (t + session_add)
};

struct Phase2Params {
    double t_p = 0.1;             // positive threshold, inclusive
    double t_n = 0.005;           // negative threshold, strict
    std::int64_t min_pos = 10;    // session floor for positives
    std::int64_t min_neg = 300;   // session floor for negatives
    SmoothingParams smoothing{};

    void validate() const {
        if (!(t_n < t_p)) throw std::invalid_argument("phase2: t_n must be below t_p");
        if (min_pos < 0 || min_neg < 0)
            throw std::invalid_argument("phase2: session floors must be non-negative");
    }
};

/// |s cap I| by exact string membership.
inline std::size_t session_hit_count(const Session& s, const std::unordered_set<Query>& inter) {
    std::size_t hits = 0;
    for (const Query& q : s.queries) hits += inter.count(q);
    return hits;
}

/// Scores every unique corpus query. Sharded over sessions when threads > 1;
/// t/u accumulate by integer addition, so the result is shard-invariant.
inline std::unordered_map<Query, QueryScore> score_all_queries(
    const SessionCorpus& corpus, const std::unordered_set<Query>& inter,
    const SmoothingParams& smoothing = {}, unsigned threads = 1) {
    struct Tally {
        std::int64_t t = 0;
        std::int64_t u = 0;
    };
    const std::size_t n = corpus.sessions.size();
    const unsigned shards = shard_count(n, threads);
    std::vector<std::unordered_map<Query, Tally>> partial(std::max(1u, shards));
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned shard) {
        auto& tally = partial[shard];
        for (std::size_t i = begin; i < end; ++i) {
            const Session& s = corpus.sessions[i];
            const std::size_t hits = session_hit_count(s, inter);
            for (const Query& q : s.queries) {
                Tally& entry = tally[q];
                ++entry.t;
                const std::size_t needed = inter.count(q) ? 4 : 3;
                if (hits >= needed) ++entry.u;
            }
        }
    });
    auto merged = std::move(partial[0]);
    for (unsigned s = 1; s < shards; ++s) {
        for (auto& [q, add] : partial[s]) {
            Tally& entry = merged[q];
            entry.t += add.t;
            entry.u += add.u;
        }
    }
    std::unordered_map<Query, QueryScore> out;
    out.reserve(merged.size());
    for (auto& [q, tally] : merged) {
        QueryScore qs;
        qs.t = tally.t;
        qs.u = tally.u;
        qs.score = static_cast<double>(tally.u + smoothing.hit_add) /
                   static_cast<double>(tally.t + smoothing.session_add);
        out.emplace(q, qs);
    }
    return out;
}

/// The positive and negative training sets. Disjoint by construction; the
/// middle band [t_n, t_p) and queries below the session floors belong to
/// neither.
struct ExpansionResult {
    std::map<Query, QueryScore> positives;
    std::map<Query, QueryScore> negatives;
    Phase2Params params;
};

inline ExpansionResult threshold_split(const std::unordered_map<Query, QueryScore>& scores,
                                       const Phase2Params& params) {
    params.validate();
    ExpansionResult result;
    result.params = params;
    for (const auto& [q, qs] : scores) {
        if (qs.score >= params.t_p && qs.t >= params.min_pos) {
            result.positives.emplace(q, qs);
        } else if (qs.score < params.t_n && qs.t >= params.min_neg) {
            result.negatives.emplace(q, qs);
        }
    }
    return result;
}

/// TSV rows `query<TAB>t<TAB>u<TAB>score`, sorted score descending then
/// query ascending.
inline void save_scored_queries(std::ostream& out, const std::map<Query, QueryScore>& set) {
    std::vector<const std::pair<const Query, QueryScore>*> rows;
    rows.reserve(set.size());
    for (const auto& kv : set) rows.push_back(&kv);
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
        if (a->second.score != b->second.score) return a->second.score > b->second.score;
        return a->first < b->first;
    });
    for (const auto* kv : rows) {
        out << kv->first << '\t' << kv->second.t << '\t' << kv->second.u << '\t'
            << fmt_g9(kv->second.score) << '\n';
    }
}

inline std::map<Query, QueryScore> load_scored_queries(std::istream& in) {
    std::map<Query, QueryScore> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = chomp(line);
        if (body.empty() || body.front() == '#') continue;
        const auto fields = split_tab(body);
        if (fields.size() != 4)
            throw std::runtime_error("scored query file: expected 4 fields at line " +
                                     std::to_string(lineno));
        QueryScore qs;
        qs.t = std::stoll(std::string(fields[1]));
        qs.u = std::stoll(std::string(fields[2]));
        qs.score = std::stod(std::string(fields[3]));
        out.emplace(std::string(fields[0]), qs);
    }
    return out;
}

}  // namespace qsx
