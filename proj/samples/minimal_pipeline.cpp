// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Smallest possible library walk-through: synthesize a corpus, expand five
// seed queries, print the strongest diagnostic ngrams and the split sizes.

#include <iostream>
#include <map>

#include "qsx/qsx.hpp"

int main() {
    qsx::CorpusSpec spec;
    spec.topics.push_back({"tea", {"chai", "matcha", "oolong", "teapot", "brew", "leaves",
                                   "kettle", "infuser", "herbal", "earl", "grey", "steep",
                                   "ceylon", "darjeeling", "sencha", "tisane", "chamomile",
                                   "rooibos", "caddy", "strainer", "tannin", "loose", "cozy",
                                   "saucer"}});
    spec.topics.push_back({"bike", {"pedal", "chain", "saddle", "wheel", "gravel", "trail",
                                    "helmet", "spokes", "frame", "crank", "tour", "sprint",
                                    "derailleur", "pannier", "fender", "commute", "peloton",
                                    "tubeless", "cadence", "descent", "climb", "brake",
                                    "handlebar", "bell"}});
    spec.sessions_per_topic = 300;
    spec.session_len_min = 5;
    spec.session_len_max = 12;
    spec.stickiness = 0.9;
    spec.rng_seed = 4;
    spec.queries_per_topic = 70;

    const qsx::GeneratedCorpus gen = qsx::generate_corpus(spec);

    // five frequent tea queries as seeds
    std::map<qsx::Query, int> freq;
    for (const qsx::Session& s : gen.corpus.sessions) {
        for (const qsx::Query& q : s.queries) {
            if (gen.topic_of.at(q) == "tea") ++freq[q];
        }
    }
    std::vector<std::pair<int, qsx::Query>> by_freq;
    for (const auto& [q, f] : freq) by_freq.emplace_back(f, q);
    std::sort(by_freq.rbegin(), by_freq.rend());
    std::vector<qsx::Query> seeds;
    for (int i = 0; i < 5; ++i) seeds.push_back(by_freq[static_cast<std::size_t>(i)].second);

    qsx::PipelineConfig cfg;  // desk-scale thresholds, see samples/desk.ini
    cfg.t_w = -8.0;
    cfg.min_sessions = 3;
    cfg.phase1.t_i = 100.0;
    cfg.phase2.min_pos = 3;
    cfg.phase2.min_neg = 10;
    cfg.phase2.t_n = 0.06;

    const qsx::ExpandOutputs out = qsx::run_expand(gen.corpus, seeds, cfg);

    std::cout << "seeds:";
    for (const auto& s : seeds) std::cout << " [" << s << "]";
    std::cout << "\n\ntop diagnostic ngrams:\n";
    const auto ranked = out.diagnostic_ngrams.ranked();
    for (std::size_t i = 0; i < 8 && i < ranked.size(); ++i) {
        std::cout << "  " << ranked[i].text << "  (" << qsx::fmt_g9(ranked[i].weight) << ")\n";
    }
    std::cout << "\n|I| = " << out.intermediate.size() << ", |P| = "
              << out.split.positives.size() << ", |N| = " << out.split.negatives.size() << "\n";
    return 0;
}
