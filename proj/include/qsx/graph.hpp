// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Association strength between a query and a co-occurring ngram, and the
// thresholded bipartite graph built from it.
//
// The strength is a PMI variant chosen for two properties: it does not
// depend on the corpus size (so rare-language or rare-topic pairings are not
// inflated), and it rewards ngrams typically seen with the query rather than
// coincidentally:
//
//     w(q, n) = log(c(q,n)^2 / (|q| |n|)) + log(c(q,n) / |q|)
//
// with natural logarithms. Since c <= min(|q|, |n|), w is never positive;
// edges keep only pairs with w above a threshold t_w and store the shifted
// weight w - t_w, which is therefore always > 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "qsx/corpus.hpp"
#include "qsx/parallel.hpp"
#include "qsx/tsv.hpp"

namespace qsx {

/// w(q, n) from raw counts. Requires cooc >= 1 and positive |q|, |n|.
inline double association_strength(std::int64_t cooc, std::int64_t q_sessions,
                                   std::int64_t n_sessions) {
    if (cooc < 1 || q_sessions < 1 || n_sessions < 1)
        throw std::invalid_argument("association_strength: counts must be positive");
    const double c = static_cast<double>(cooc);
    const double nq = static_cast<double>(q_sessions);
    const double nn = static_cast<double>(n_sessions);
    return std::log(c * c / (nq * nn)) + std::log(c / nq);
}

/// Same, looked up from corpus counts. The pair must have been observed.
inline double association_strength(const CooccurrenceCounts& counts, const Query& q,
                                   const Ngram& n) {
    const std::int64_t c = counts.cooccurrences(q, n);
    if (c == 0)
        throw std::invalid_argument("association_strength: pair never co-occurred: (" + q + ", " +
                                    n + ")");
    return association_strength(c, counts.query_sessions(q), counts.ngram_sessions(n));
}

struct AdjEntry {
    std::string item;  // the endpoint on the other side
    double weight;     // a(q, n) = w(q, n) - t_w, always > 0
};

/// Weighted query<->ngram graph. Both adjacency directions are materialized
/// and kept sorted by item text; the structure is immutable once built and
/// safe for concurrent reads.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    /// Builds the graph from corpus counts. Only endpoints seen in at least
    /// `min_sessions` sessions are considered; an observed pair becomes an
    /// edge iff w(q, n) > t_w (strict), weighted w(q, n) - t_w.
    static BipartiteGraph build(const CooccurrenceCounts& counts, double t_w,
                                std::int64_t min_sessions, unsigned threads = 1) {
        std::vector<const Query*> queries;
        queries.reserve(counts.qn_cooc.size());
        for (const auto& [q, row] : counts.qn_cooc) {
            if (counts.query_sessions(q) >= min_sessions) queries.push_back(&q);
        }
        std::sort(queries.begin(), queries.end(),
                  [](const Query* a, const Query* b) { return *a < *b; });

        const unsigned shards = shard_count(queries.size(), threads);
        std::vector<std::vector<std::tuple<Query, Ngram, double>>> partial(shards);
        parallel_chunks(queries.size(), threads,
                        [&](std::size_t begin, std::size_t end, unsigned shard) {
                            auto& edges = partial[shard];
                            for (std::size_t i = begin; i < end; ++i) {
                                const Query& q = *queries[i];
                                const std::int64_t nq = counts.query_sessions(q);
                                for (const auto& [n, c] : counts.qn_cooc.at(q)) {
                                    const std::int64_t nn = counts.ngram_sessions(n);
                                    if (nn < min_sessions) continue;
                                    const double w = association_strength(c, nq, nn);
                                    if (w > t_w) edges.emplace_back(q, n, w - t_w);
                                }
                            }
                        });

        BipartiteGraph g;
        g.t_w_ = t_w;
        g.min_sessions_ = min_sessions;
        for (auto& edges : partial) {
            for (auto& [q, n, w] : edges) g.add_edge(std::move(q), std::move(n), w);
        }
        g.finalize();
        return g;
    }

    /// Assembles a graph from already-shifted edge weights (all must be > 0).
    /// Used when loading a persisted graph and by tests that plant edges.
    static BipartiteGraph from_edges(const std::vector<std::tuple<Query, Ngram, double>>& edges,
                                     double t_w, std::int64_t min_sessions) {
        BipartiteGraph g;
        g.t_w_ = t_w;
        g.min_sessions_ = min_sessions;
        for (const auto& [q, n, w] : edges) {
            if (!(w > 0.0))
                throw std::invalid_argument("BipartiteGraph: edge weight must be positive: (" + q +
                                            ", " + n + ")");
            g.add_edge(q, n, w);
        }
        g.finalize();
        return g;
    }

    const std::vector<AdjEntry>* query_neighbors(const Query& q) const {
        const auto it = query_adj_.find(q);
        return it == query_adj_.end() ? nullptr : &it->second;
    }

    const std::vector<AdjEntry>* ngram_neighbors(const Ngram& n) const {
        const auto it = ngram_adj_.find(n);
        return it == ngram_adj_.end() ? nullptr : &it->second;
    }

    bool has_query(const Query& q) const { return query_adj_.count(q) > 0; }
    bool has_ngram(const Ngram& n) const { return ngram_adj_.count(n) > 0; }

    std::optional<double> edge_weight(const Query& q, const Ngram& n) const {
        const auto* nbrs = query_neighbors(q);
        if (!nbrs) return std::nullopt;
        const auto it = std::lower_bound(
            nbrs->begin(), nbrs->end(), n,
            [](const AdjEntry& e, const Ngram& key) { return e.item < key; });
        if (it == nbrs->end() || it->item != n) return std::nullopt;
        return it->weight;
    }

    std::size_t query_count() const { return query_adj_.size(); }
    std::size_t ngram_count() const { return ngram_adj_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    double threshold() const { return t_w_; }
    std::int64_t min_sessions() const { return min_sessions_; }

    /// TSV: a header carrying the build parameters, then one row per edge,
    /// sorted by (query, ngram) so identical graphs serialize identically.
    void save(std::ostream& out) const {
        out << "#graph\tt_w=" << fmt_g9(t_w_) << "\tmin_sessions=" << min_sessions_ << '\n';
        std::vector<const Query*> queries;
        queries.reserve(query_adj_.size());
        for (const auto& [q, _] : query_adj_) queries.push_back(&q);
        std::sort(queries.begin(), queries.end(),
                  [](const Query* a, const Query* b) { return *a < *b; });
        for (const Query* q : queries) {
            for (const AdjEntry& e : query_adj_.at(*q)) {
                out << *q << '\t' << e.item << '\t' << fmt_g9(e.weight) << '\n';
            }
        }
    }

    static BipartiteGraph load(std::istream& in) {
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("graph file: empty input");
        const auto header = split_tab(chomp(line));
        if (header.size() != 3 || header[0] != "#graph" || header[1].substr(0, 4) != "t_w=" ||
            header[2].substr(0, 13) != "min_sessions=")
            throw std::runtime_error("graph file: bad header line");
        const double t_w = std::stod(std::string(header[1].substr(4)));
        const std::int64_t min_sessions = std::stoll(std::string(header[2].substr(13)));
        std::vector<std::tuple<Query, Ngram, double>> edges;
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            const auto body = chomp(line);
            if (body.empty()) continue;
            const auto fields = split_tab(body);
            if (fields.size() != 3)
                throw std::runtime_error("graph file: expected 3 fields at line " +
                                         std::to_string(lineno));
            edges.emplace_back(std::string(fields[0]), std::string(fields[1]),
                               std::stod(std::string(fields[2])));
        }
        return from_edges(edges, t_w, min_sessions);
    }

private:
    void add_edge(Query q, Ngram n, double w) {
        ngram_adj_[n].push_back(AdjEntry{q, w});
        query_adj_[std::move(q)].push_back(AdjEntry{std::move(n), w});
        ++edge_count_;
    }

    void finalize() {
        const auto by_item = [](const AdjEntry& a, const AdjEntry& b) { return a.item < b.item; };
        for (auto& [_, nbrs] : query_adj_) {
            std::sort(nbrs.begin(), nbrs.end(), by_item);
            for (std::size_t i = 1; i < nbrs.size(); ++i) {
                if (nbrs[i].item == nbrs[i - 1].item)
                    throw std::invalid_argument("BipartiteGraph: duplicate edge: " + nbrs[i].item);
            }
        }
        for (auto& [_, nbrs] : ngram_adj_) std::sort(nbrs.begin(), nbrs.end(), by_item);
    }

    double t_w_ = -18.0;
    std::int64_t min_sessions_ = 100;
    std::size_t edge_count_ = 0;
    std::unordered_map<Query, std::vector<AdjEntry>> query_adj_;
    std::unordered_map<Ngram, std::vector<AdjEntry>> ngram_adj_;
};

}  // namespace qsx
