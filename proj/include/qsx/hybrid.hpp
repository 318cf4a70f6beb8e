// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Hybrid serving: a replaceable textual scorer trained on the behavioral
// P/N sets, plus the table of training queries where the scorer disagrees
// with its own training labels. Lookups in that table override the scorer,
// so the hybrid agrees with the behavioral labels on every training query
// while the scorer generalizes to unseen ones.
//
// The bundled scorer is a deliberately simple bag-of-ngrams naive Bayes
// model. It exists to exercise the override mechanism deterministically; a
// production-grade textual model would slot in behind the same interface.

#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsx/corpus.hpp"
#include "qsx/tsv.hpp"

namespace qsx {

enum class Label { positive, negative };

inline const char* label_name(Label l) { return l == Label::positive ? "positive" : "negative"; }

inline Label parse_label(std::string_view s) {
    if (s == "positive") return Label::positive;
    if (s == "negative") return Label::negative;
    throw std::runtime_error("unknown label: " + std::string(s));
}

/// Interface for any textual model. score is in [0, 1]; classification is
/// positive exactly when score >= 0.5.
class TextualScorer {
public:
    virtual ~TextualScorer() = default;
    virtual double score(const Query& q) const = 0;

    Label classify(const Query& q) const {
        return score(q) >= 0.5 ? Label::positive : Label::negative;
    }
};

/// Naive Bayes over query ngrams with add-one smoothing and equal class
/// priors. Training is a single counting pass, so retraining on identical
/// inputs reproduces the model bit for bit.
class NgramBayesScorer final : public TextualScorer {
public:
    static NgramBayesScorer train(const std::vector<Query>& positives,
                                  const std::vector<Query>& negatives) {
        if (positives.empty() || negatives.empty())
            throw std::invalid_argument("NgramBayesScorer: both classes must be non-empty");
        NgramBayesScorer model;
        for (const Query& q : positives) {
            for (const Ngram& n : query_ngrams(q)) {
                ++model.counts_[n].first;
                ++model.pos_total_;
            }
        }
        for (const Query& q : negatives) {
            for (const Ngram& n : query_ngrams(q)) {
                ++model.counts_[n].second;
                ++model.neg_total_;
            }
        }
        return model;
    }

    double score(const Query& q) const override {
        const double vocab = static_cast<double>(counts_.size());
        double log_odds = 0.0;
        for (const Ngram& n : query_ngrams(q)) {
            const auto it = counts_.find(n);
            if (it == counts_.end()) continue;  // unseen ngram carries no signal
            const double p_pos = (static_cast<double>(it->second.first) + 1.0) /
                                 (static_cast<double>(pos_total_) + vocab);
            const double p_neg = (static_cast<double>(it->second.second) + 1.0) /
                                 (static_cast<double>(neg_total_) + vocab);
            log_odds += std::log(p_pos) - std::log(p_neg);
        }
        return 1.0 / (1.0 + std::exp(-log_odds));
    }

    std::size_t vocabulary_size() const { return counts_.size(); }

    /// Versioned TSV: header, then `ngram<TAB>pos_count<TAB>neg_count` rows
    /// sorted by ngram.
    void save(std::ostream& out) const {
        out << "#ngram-scorer\tv1\n";
        for (const auto& [n, c] : counts_) {
            out << n << '\t' << c.first << '\t' << c.second << '\n';
        }
    }

    static NgramBayesScorer load(std::istream& in) {
        std::string line;
        if (!std::getline(in, line) || split_tab(chomp(line)) != std::vector<std::string_view>{
                                           "#ngram-scorer", "v1"})
            throw std::runtime_error("scorer file: bad header (want #ngram-scorer v1)");
        NgramBayesScorer model;
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            const auto body = chomp(line);
            if (body.empty()) continue;
            const auto fields = split_tab(body);
            if (fields.size() != 3)
                throw std::runtime_error("scorer file: expected 3 fields at line " +
                                         std::to_string(lineno));
            auto& cell = model.counts_[std::string(fields[0])];
            cell.first = std::stoll(std::string(fields[1]));
            cell.second = std::stoll(std::string(fields[2]));
            model.pos_total_ += cell.first;
            model.neg_total_ += cell.second;
        }
        return model;
    }

private:
    std::map<Ngram, std::pair<std::int64_t, std::int64_t>> counts_;  // ngram -> (pos, neg)
    std::int64_t pos_total_ = 0;
    std::int64_t neg_total_ = 0;
};

/// Training queries where the scorer contradicts the behavioral label,
/// mapped to that behavioral label.
struct DisagreementTable {
    std::map<Query, Label> overrides;

    void save(std::ostream& out) const {
        for (const auto& [q, label] : overrides) out << q << '\t' << label_name(label) << '\n';
    }

    static DisagreementTable load(std::istream& in) {
        DisagreementTable table;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto body = chomp(line);
            if (body.empty() || body.front() == '#') continue;
            const auto fields = split_tab(body);
            if (fields.size() != 2)
                throw std::runtime_error("table file: expected 2 fields at line " +
                                         std::to_string(lineno));
            table.overrides[std::string(fields[0])] = parse_label(fields[1]);
        }
        return table;
    }
};

inline DisagreementTable build_disagreement_table(const std::vector<Query>& positives,
                                                  const std::vector<Query>& negatives,
                                                  const TextualScorer& scorer) {
    DisagreementTable table;
    for (const Query& q : positives) {
        if (scorer.classify(q) != Label::positive) table.overrides[q] = Label::positive;
    }
    for (const Query& q : negatives) {
        if (scorer.classify(q) != Label::negative) table.overrides[q] = Label::negative;
    }
    return table;
}

/// Table lookup wins; the scorer decides everything else.
inline Label hybrid_classify(const Query& q, const DisagreementTable& table,
                             const TextualScorer& scorer) {
    const auto it = table.overrides.find(q);
    if (it != table.overrides.end()) return it->second;
    return scorer.classify(q);
}

}  // namespace qsx
