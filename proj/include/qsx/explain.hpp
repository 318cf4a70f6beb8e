// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Human-readable traces for debugging an expansion. Every expanded query can
// be traced back to the diagnostic ngrams it is connected to, and every
// diagnostic ngram back to the seeds that supported it. Traces are pure
// reads over the graph, so they can be recomputed from a persisted graph
// file at any time.

#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsx/graph.hpp"
#include "qsx/tsv.hpp"
#include "qsx/weighted_set.hpp"

namespace qsx {

struct TraceLink {
    std::string item;     // the neighbor inside the reference set
    double edge_weight;   // a(q, n)
    double contribution;  // w(reference item) * a(q, n)
    bool in_support;      // among the sigma strongest edges
};

struct ExplanationTrace {
    std::string subject;
    GraphSide subject_side = GraphSide::query;
    std::size_t neighbor_count = 0;  // all graph neighbors of the subject
    std::size_t in_set_count = 0;    // neighbors inside the reference set
    std::vector<TraceLink> links;    // sorted by contribution desc, item asc
};

namespace detail {

inline ExplanationTrace trace_subject(const BipartiteGraph& graph, const WeightedSet& reference,
                                      const std::string& subject, GraphSide subject_side,
                                      std::int64_t sigma) {
    const auto* nbrs = subject_side == GraphSide::query ? graph.query_neighbors(subject)
                                                        : graph.ngram_neighbors(subject);
    if (!nbrs)
        throw std::invalid_argument(std::string("explain: no such ") + side_name(subject_side) +
                                    " in graph: " + subject);
    if (reference.side() != opposite(subject_side))
        throw std::invalid_argument("explain: reference set is on the wrong side of the graph");

    ExplanationTrace trace;
    trace.subject = subject;
    trace.subject_side = subject_side;
    trace.neighbor_count = nbrs->size();
    for (const AdjEntry& e : *nbrs) {
        if (!reference.contains(e.item)) continue;
        trace.links.push_back(
            TraceLink{e.item, e.weight, reference.weight_of(e.item) * e.weight, false});
    }
    trace.in_set_count = trace.links.size();

    // Mark the sigma strongest edges, the ones candidate scoring would sum.
    std::vector<std::size_t> order(trace.links.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (trace.links[a].edge_weight != trace.links[b].edge_weight)
            return trace.links[a].edge_weight > trace.links[b].edge_weight;
        return trace.links[a].item < trace.links[b].item;
    });
    const std::size_t take =
        std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max<std::int64_t>(sigma, 0)));
    for (std::size_t k = 0; k < take; ++k) trace.links[order[k]].in_support = true;

    std::sort(trace.links.begin(), trace.links.end(), [](const TraceLink& a, const TraceLink& b) {
        if (a.contribution != b.contribution) return a.contribution > b.contribution;
        return a.item < b.item;
    });
    return trace;
}

}  // namespace detail

/// Which diagnostic ngrams connect to q, with the contribution each one made
/// to q's phase 1B score. Throws if q is not in the graph.
inline ExplanationTrace explain_query(const BipartiteGraph& graph,
                                      const WeightedSet& diagnostic_ngrams, const Query& q,
                                      std::int64_t sigma = 50) {
    return detail::trace_subject(graph, diagnostic_ngrams, q, GraphSide::query, sigma);
}

/// Which seeds connect to n, marking the sigma that actually contribute to
/// its phase 1A score. Throws if n is not in the graph.
inline ExplanationTrace explain_ngram(const BipartiteGraph& graph, const WeightedSet& seeds,
                                      const Ngram& n, std::int64_t sigma = 50) {
    return detail::trace_subject(graph, seeds, n, GraphSide::ngram, sigma);
}

/// Header line with the totals, then one row per link.
inline void save_trace(std::ostream& out, const ExplanationTrace& trace) {
    out << "#explain\tsubject=" << trace.subject << "\tside=" << side_name(trace.subject_side)
        << "\tneighbors=" << trace.neighbor_count << "\tin_set=" << trace.in_set_count << '\n';
    for (const TraceLink& link : trace.links) {
        out << link.item << '\t' << fmt_g9(link.edge_weight) << '\t' << fmt_g9(link.contribution)
            << '\n';
    }
}

}  // namespace qsx
