// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// JSON form of CorpusSpec. Kept out of synthgen.hpp so that only code that
// actually reads spec files pays for the JSON parser.
//
// {
//   "rng_seed": 7,
//   "sessions_per_topic": 200,
//   "session_length": {"min": 5, "max": 12},
//   "stickiness": 0.9,
//   "queries_per_topic": 110,      // optional
//   "zipf_exponent": 0.8,          // optional
//   "max_query_tokens": 3,         // optional
//   "topics": [ {"name": "...", "vocabulary": ["tok", ...]}, ... ]
// }

#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qsx/synthgen.hpp"

namespace qsx {

inline CorpusSpec parse_corpus_spec(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("corpus spec: invalid JSON: ") + e.what());
    }
    CorpusSpec spec;
    try {
        spec.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
        spec.sessions_per_topic = doc.at("sessions_per_topic").get<std::int64_t>();
        spec.stickiness = doc.at("stickiness").get<double>();
        if (doc.contains("session_length")) {
            spec.session_len_min = doc["session_length"].at("min").get<int>();
            spec.session_len_max = doc["session_length"].at("max").get<int>();
        }
        spec.queries_per_topic = doc.value("queries_per_topic", spec.queries_per_topic);
        spec.zipf_exponent = doc.value("zipf_exponent", spec.zipf_exponent);
        spec.max_query_tokens = doc.value("max_query_tokens", spec.max_query_tokens);
        for (const auto& topic : doc.at("topics")) {
            TopicSpec t;
            t.name = topic.at("name").get<std::string>();
            for (const auto& token : topic.at("vocabulary"))
                t.vocabulary.push_back(token.get<std::string>());
            spec.topics.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("corpus spec: ") + e.what());
    }
    return spec;
}

}  // namespace qsx
