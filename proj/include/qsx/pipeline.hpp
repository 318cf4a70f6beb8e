// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// End-to-end wiring: sessions + seeds -> graph -> diagnostic ngrams F ->
// intermediate queries I -> positive/negative split. This is exactly what
// the `expand` subcommand runs; tests drive it directly to check that
// results do not depend on the thread count.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "qsx/corpus.hpp"
#include "qsx/graph.hpp"
#include "qsx/phase1.hpp"
#include "qsx/phase2.hpp"
#include "qsx/tsv.hpp"
#include "qsx/weighted_set.hpp"

namespace qsx {

/// Every knob in one place, with the stock defaults. Desk-scale corpora
/// want smaller floors and cuts; see the sample config shipped in the repo.
struct PipelineConfig {
    double t_w = -18.0;
    std::int64_t min_sessions = 100;
    Phase1Params phase1{};
    Phase2Params phase2{};
    SessionBounds bounds{};
    unsigned threads = 1;

    void validate() const {
        phase1.validate();
        phase2.validate();
        if (min_sessions < 1) throw std::invalid_argument("config: min_sessions must be >= 1");
        if (bounds.min_queries < 1 || bounds.max_queries < bounds.min_queries)
            throw std::invalid_argument("config: bad session bounds");
    }
};

struct ExpandOutputs {
    BipartiteGraph graph;
    WeightedSet diagnostic_ngrams{GraphSide::ngram};   // F
    WeightedSet intermediate{GraphSide::query};        // I
    ExpansionResult split;                             // P and N
    std::size_t dropped_seeds = 0;  // seeds absent from the graph
};

/// Builds a unit-weight query-side seed set, dropping duplicates.
inline WeightedSet make_seed_set(const std::vector<Query>& seeds) {
    WeightedSet set(GraphSide::query);
    for (const Query& q : seeds) set.insert(q, 1.0);
    return set;
}

inline std::unordered_set<Query> membership(const WeightedSet& set) {
    std::unordered_set<Query> out;
    out.reserve(set.size());
    for (const auto& [text, _] : set.items()) out.insert(text);
    return out;
}

inline ExpandOutputs run_expand(const SessionCorpus& corpus, const std::vector<Query>& seeds,
                                const PipelineConfig& config) {
    config.validate();
    ExpandOutputs out;
    const CooccurrenceCounts counts = count_statistics(corpus, config.threads);
    out.graph = BipartiteGraph::build(counts, config.t_w, config.min_sessions, config.threads);

    WeightedSet seed_set = make_seed_set(seeds);
    out.dropped_seeds = seed_set.restrict_to_graph(out.graph);
    if (seed_set.empty())
        throw std::runtime_error("expand: no seed query is present in the graph (seen in >= " +
                                 std::to_string(config.min_sessions) + " sessions)");

    out.diagnostic_ngrams =
        select_diagnostic_ngrams(out.graph, seed_set, config.phase1, config.threads);
    out.intermediate =
        expand_to_intermediate(out.graph, out.diagnostic_ngrams, config.phase1, config.threads);

    const auto scores = score_all_queries(corpus, membership(out.intermediate),
                                          config.phase2.smoothing, config.threads);
    out.split = threshold_split(scores, config.phase2);
    return out;
}

/// Writes F.tsv, I.tsv, P.tsv and N.tsv (and optionally graph.tsv) under
/// out_dir, creating it if needed.
inline void write_expand_outputs(const ExpandOutputs& outputs,
                                 const std::filesystem::path& out_dir, bool with_graph = false) {
    std::filesystem::create_directories(out_dir);
    {
        auto f = open_output((out_dir / "F.tsv").string());
        outputs.diagnostic_ngrams.save(f);
    }
    {
        auto f = open_output((out_dir / "I.tsv").string());
        outputs.intermediate.save(f);
    }
    {
        auto f = open_output((out_dir / "P.tsv").string());
        save_scored_queries(f, outputs.split.positives);
    }
    {
        auto f = open_output((out_dir / "N.tsv").string());
        save_scored_queries(f, outputs.split.negatives);
    }
    if (with_graph) {
        auto f = open_output((out_dir / "graph.tsv").string());
        outputs.graph.save(f);
    }
}

/// Seed queries, one per line, normalized; blank lines and # comments skipped.
inline std::vector<Query> load_seed_queries(std::istream& in) {
    std::vector<Query> seeds;
    std::string line;
    while (std::getline(in, line)) {
        const auto body = chomp(line);
        if (body.empty() || body.front() == '#') continue;
        if (auto q = normalize_query(body)) {
            if (std::find(seeds.begin(), seeds.end(), *q) == seeds.end())
                seeds.push_back(std::move(*q));
        }
    }
    return seeds;
}

}  // namespace qsx
