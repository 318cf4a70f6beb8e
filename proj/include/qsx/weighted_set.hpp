// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors

#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsx/graph.hpp"
#include "qsx/tsv.hpp"

namespace qsx {

enum class GraphSide { query, ngram };

inline GraphSide opposite(GraphSide s) {
    return s == GraphSide::query ? GraphSide::ngram : GraphSide::query;
}

inline const char* side_name(GraphSide s) { return s == GraphSide::query ? "query" : "ngram"; }

struct WeightedItem {
    std::string text;
    double weight;
};

/// A scored set of items living on one side of the bipartite graph: the
/// input seeds, the diagnostic ngrams, or the intermediate query set.
/// Weights are strictly positive.
class WeightedSet {
public:
    explicit WeightedSet(GraphSide side) : side_(side) {}

    GraphSide side() const { return side_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::map<std::string, double>& items() const { return items_; }

    void insert(std::string text, double weight) {
        if (!(weight > 0.0))
            throw std::invalid_argument("WeightedSet: weight must be positive for: " + text);
        items_[std::move(text)] = weight;
    }

    bool contains(const std::string& text) const { return items_.count(text) > 0; }

    double weight_of(const std::string& text) const {
        const auto it = items_.find(text);
        if (it == items_.end())
            throw std::invalid_argument("WeightedSet: no such item: " + text);
        return it->second;
    }

    /// Items ordered by weight descending, text ascending. This is the
    /// ranking used for truncation and for every persisted file.
    std::vector<WeightedItem> ranked() const {
        std::vector<WeightedItem> out;
        out.reserve(items_.size());
        for (const auto& [text, w] : items_) out.push_back(WeightedItem{text, w});
        std::stable_sort(out.begin(), out.end(), [](const WeightedItem& a, const WeightedItem& b) {
            if (a.weight != b.weight) return a.weight > b.weight;
            return a.text < b.text;
        });
        return out;
    }

    /// Keeps the set inside the graph: items missing from the declared side
    /// are dropped. Returns how many were dropped (diagnostic for callers).
    std::size_t restrict_to_graph(const BipartiteGraph& graph) {
        std::size_t dropped = 0;
        for (auto it = items_.begin(); it != items_.end();) {
            const bool present = side_ == GraphSide::query ? graph.has_query(it->first)
                                                           : graph.has_ngram(it->first);
            if (present) {
                ++it;
            } else {
                it = items_.erase(it);
                ++dropped;
            }
        }
        return dropped;
    }

    /// TSV rows `item<TAB>score`, ranked order.
    void save(std::ostream& out) const {
        for (const WeightedItem& item : ranked()) {
            out << item.text << '\t' << fmt_g9(item.weight) << '\n';
        }
    }

    static WeightedSet load(std::istream& in, GraphSide side) {
        WeightedSet set(side);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto body = chomp(line);
            if (body.empty() || body.front() == '#') continue;
            const auto fields = split_tab(body);
            if (fields.size() != 2)
                throw std::runtime_error("weighted set file: expected 2 fields at line " +
                                         std::to_string(lineno));
            set.insert(std::string(fields[0]), std::stod(std::string(fields[1])));
        }
        return set;
    }

private:
    GraphSide side_;
    std::map<std::string, double> items_;
};

}  // namespace qsx
