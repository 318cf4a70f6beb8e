// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Phase 1 of the expansion: seeds -> diagnostic ngrams (1A), then those
// ngrams -> head-and-torso queries (1B). Both runs use the same candidate
// scoring; only the side of the graph and the output cut differ.
//
// For a candidate n with graph neighbors N(n) and seed set S:
//
//   S(n)       neighbors of n that are seeds
//   S_sigma(n) the sigma members of S(n) with the strongest edges to n
//   r          |S_sigma(n)| / min(|S|, sigma)        adjusted recall
//   p          |S(n)| / max(|N(n)|, sigma)           adjusted precision
//   u          sum over S_sigma(n) of w(seed) * a(seed, n)
//   score      u * r^rho * p^tau
//
// sigma caps how much any one seed cluster can dominate; rho punishes
// candidates supported by only a sliver of the seeds; tau punishes overly
// generic candidates connected to everything.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsx/graph.hpp"
#include "qsx/parallel.hpp"
#include "qsx/weighted_set.hpp"

namespace qsx {

struct Phase1Params {
    std::int64_t sigma = 50;  // seed support size
    double rho = 3.0;         // low recall penalty
    double tau = 0.5;         // low precision penalty
    double t_i = 1e-4;        // phase 1B output score threshold
    std::size_t top_k = 1000; // phase 1A output cut

    void validate() const {
        if (sigma < 1) throw std::invalid_argument("phase1: sigma must be >= 1");
        if (rho < 0.0) throw std::invalid_argument("phase1: rho must be >= 0");
        if (tau < 0.0) throw std::invalid_argument("phase1: tau must be >= 0");
        if (top_k < 1) throw std::invalid_argument("phase1: top_k must be >= 1");
    }
};

namespace detail {

struct SupportEntry {
    const std::string* seed;
    double edge_weight;
    double seed_weight;
};

// Strongest edge first; ties broken by seed text so the support selection
// and the summation order never depend on scheduling.
inline bool support_order(const SupportEntry& a, const SupportEntry& b) {
    if (a.edge_weight != b.edge_weight) return a.edge_weight > b.edge_weight;
    return *a.seed < *b.seed;
}

}  // namespace detail

/// Scores every item on the opposite side of the graph adjacent to at least
/// one seed. Seeds absent from the graph are ignored; throws if none remain.
/// Candidates are scored independently, so the result is the same for any
/// thread count.
inline WeightedSet score_candidates(const BipartiteGraph& graph, const WeightedSet& seeds,
                                    const Phase1Params& params, unsigned threads = 1) {
    params.validate();
    const GraphSide seed_side = seeds.side();
    const GraphSide cand_side = opposite(seed_side);

    const auto seed_neighbors = [&](const std::string& text) {
        return seed_side == GraphSide::query ? graph.query_neighbors(text)
                                             : graph.ngram_neighbors(text);
    };
    const auto cand_neighbors = [&](const std::string& text) {
        return cand_side == GraphSide::query ? graph.query_neighbors(text)
                                             : graph.ngram_neighbors(text);
    };

    std::unordered_map<std::string, double> seed_weight;
    std::vector<const std::string*> candidates;
    for (const auto& [text, w] : seeds.items()) {
        const auto* nbrs = seed_neighbors(text);
        if (!nbrs) continue;
        seed_weight.emplace(text, w);
        for (const AdjEntry& e : *nbrs) candidates.push_back(&e.item);
    }
    if (seed_weight.empty())
        throw std::invalid_argument("score_candidates: no seeds present on the " +
                                    std::string(side_name(seed_side)) + " side of the graph");

    const auto by_text = [](const std::string* a, const std::string* b) { return *a < *b; };
    std::sort(candidates.begin(), candidates.end(), by_text);
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](const std::string* a, const std::string* b) { return *a == *b; }),
                     candidates.end());

    const double seed_floor =
        static_cast<double>(std::min<std::int64_t>(
            static_cast<std::int64_t>(seed_weight.size()), params.sigma));

    std::vector<double> scores(candidates.size(), 0.0);
    parallel_chunks(candidates.size(), threads,
                    [&](std::size_t begin, std::size_t end, unsigned) {
                        std::vector<detail::SupportEntry> support;
                        for (std::size_t i = begin; i < end; ++i) {
                            const auto* nbrs = cand_neighbors(*candidates[i]);
                            support.clear();
                            for (const AdjEntry& e : *nbrs) {
                                const auto it = seed_weight.find(e.item);
                                if (it != seed_weight.end())
                                    support.push_back({&it->first, e.weight, it->second});
                            }
                            if (support.empty()) continue;
                            std::sort(support.begin(), support.end(), detail::support_order);
                            const std::size_t take = std::min<std::size_t>(
                                support.size(), static_cast<std::size_t>(params.sigma));
                            double u = 0.0;
                            for (std::size_t k = 0; k < take; ++k)
                                u += support[k].seed_weight * support[k].edge_weight;
                            const double r = static_cast<double>(take) / seed_floor;
                            const double p =
                                static_cast<double>(support.size()) /
                                static_cast<double>(std::max<std::int64_t>(
                                    static_cast<std::int64_t>(nbrs->size()), params.sigma));
                            scores[i] = u * std::pow(r, params.rho) * std::pow(p, params.tau);
                        }
                    });

    WeightedSet out(cand_side);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (scores[i] > 0.0) out.insert(*candidates[i], scores[i]);
    }
    return out;
}

/// Phase 1A: the top_k highest scoring ngrams for a query-side seed set.
/// Seed weights are conventionally all 1.
inline WeightedSet select_diagnostic_ngrams(const BipartiteGraph& graph, const WeightedSet& seeds,
                                            const Phase1Params& params, unsigned threads = 1) {
    if (seeds.side() != GraphSide::query)
        throw std::invalid_argument("select_diagnostic_ngrams: seeds must be query-side");
    const WeightedSet scored = score_candidates(graph, seeds, params, threads);
    WeightedSet out(GraphSide::ngram);
    std::size_t kept = 0;
    for (const WeightedItem& item : scored.ranked()) {
        if (kept++ == params.top_k) break;
        out.insert(item.text, item.weight);
    }
    return out;
}

/// Phase 1B: same scoring with the diagnostic ngrams as seeds; keeps queries
/// scoring above t_i (strict). No top-k cut here.
inline WeightedSet expand_to_intermediate(const BipartiteGraph& graph,
                                          const WeightedSet& diagnostic_ngrams,
                                          const Phase1Params& params, unsigned threads = 1) {
    if (diagnostic_ngrams.side() != GraphSide::ngram)
        throw std::invalid_argument("expand_to_intermediate: feature set must be ngram-side");
    const WeightedSet scored = score_candidates(graph, diagnostic_ngrams, params, threads);
    WeightedSet out(GraphSide::query);
    for (const auto& [text, score] : scored.items()) {
        if (score > params.t_i) out.insert(text, score);
    }
    return out;
}

}  // namespace qsx
