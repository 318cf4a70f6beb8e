// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// Session corpus parsing, query normalization, ngram extraction and the
// session co-occurrence counts that everything downstream is built from.
//
// A session is a set of queries issued close together in time. The corpus
// keeps only sessions whose deduplicated query count falls inside a
// configurable window (5..20 by default). Counts are per session: a session
// contributes at most 1 to any counter no matter how often a query or ngram
// repeats inside it.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsx/parallel.hpp"

namespace qsx {

using Query = std::string;
using Ngram = std::string;

namespace detail {

// Decodes one UTF-8 code point starting at pos, advancing pos past it.
// Rejects overlong encodings, surrogates and out-of-range values.
inline std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1Fu;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0Fu;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07u;
    } else {
        return std::nullopt;
    }
    if (pos + static_cast<std::size_t>(len) > s.size()) return std::nullopt;
    for (int i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
        if ((b & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (b & 0x3Fu);
    }
    if (len == 2 && cp < 0x80) return std::nullopt;
    if (len == 3 && cp < 0x800) return std::nullopt;
    if (len == 4 && cp < 0x10000) return std::nullopt;
    if (cp >= 0xD800 && cp <= 0xDFFF) return std::nullopt;
    if (cp > 0x10FFFF) return std::nullopt;
    pos += static_cast<std::size_t>(len);
    return cp;
}

inline bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

}  // namespace detail

inline bool utf8_valid(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (!detail::decode_utf8(s, pos)) return false;
    }
    return true;
}

/// Canonical query form: ASCII letters lowercased, Unicode whitespace runs
/// collapsed to a single space, ends trimmed. Returns nullopt when nothing
/// remains (or the input is not valid UTF-8); such queries are dropped from
/// their session. No stemming and no punctuation stripping, so typos and
/// slang survive intact.
inline std::optional<Query> normalize_query(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        const std::size_t start = pos;
        const auto cp = detail::decode_utf8(raw, pos);
        if (!cp) return std::nullopt;
        if (detail::is_unicode_space(*cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        if (*cp >= 'A' && *cp <= 'Z') {
            out.push_back(static_cast<char>(*cp - 'A' + 'a'));
        } else {
            out.append(raw.substr(start, pos - start));
        }
    }
    if (out.empty()) return std::nullopt;
    return out;
}

/// A retained session: deduplicated queries kept sorted so membership tests
/// and iteration are deterministic.
struct Session {
    std::vector<Query> queries;

    static Session of(std::vector<Query> qs) {
        std::sort(qs.begin(), qs.end());
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
        return Session{std::move(qs)};
    }

    bool contains(const Query& q) const {
        return std::binary_search(queries.begin(), queries.end(), q);
    }

    std::size_t size() const { return queries.size(); }
};

struct SessionCorpus {
    std::vector<Session> sessions;

    std::size_t session_count() const { return sessions.size(); }
};

/// Session retention window, applied after per-session deduplication.
struct SessionBounds {
    std::size_t min_queries = 5;
    std::size_t max_queries = 20;
};

struct ParseStats {
    std::uint64_t retained = 0;         // sessions kept
    std::uint64_t discarded_size = 0;   // sessions outside the retention window
    std::uint64_t malformed_lines = 0;  // lines that were not valid UTF-8
    std::uint64_t dropped_queries = 0;  // queries empty after normalization
};

/// Parses one session per line, queries separated by tabs. Queries are
/// normalized and deduplicated; sessions outside `bounds` are discarded and
/// counted. Lines that are not valid UTF-8 are skipped and counted.
inline SessionCorpus parse_sessions(std::istream& in, const SessionBounds& bounds = {},
                                    ParseStats* stats_out = nullptr) {
    SessionCorpus corpus;
    ParseStats stats;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view body(line);
        if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
        if (!utf8_valid(body)) {
            ++stats.malformed_lines;
            continue;
        }
        std::vector<Query> queries;
        std::size_t start = 0;
        while (start <= body.size()) {
            std::size_t tab = body.find('\t', start);
            if (tab == std::string_view::npos) tab = body.size();
            if (auto q = normalize_query(body.substr(start, tab - start))) {
                queries.push_back(std::move(*q));
            } else {
                ++stats.dropped_queries;
            }
            start = tab + 1;
        }
        Session session = Session::of(std::move(queries));
        if (session.size() < bounds.min_queries || session.size() > bounds.max_queries) {
            ++stats.discarded_size;
            continue;
        }
        ++stats.retained;
        corpus.sessions.push_back(std::move(session));
    }
    if (stats_out) *stats_out = stats;
    return corpus;
}

/// All unigrams and adjacent bigrams of a normalized query, space-split.
/// Sorted and unique.
inline std::vector<Ngram> query_ngrams(const Query& q) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start < q.size()) {
        std::size_t sp = q.find(' ', start);
        if (sp == std::string::npos) sp = q.size();
        if (sp > start) tokens.push_back(q.substr(start, sp - start));
        start = sp + 1;
    }
    std::vector<Ngram> ngrams;
    ngrams.reserve(tokens.size() * 2);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        ngrams.push_back(tokens[i]);
        if (i + 1 < tokens.size()) ngrams.push_back(tokens[i] + ' ' + tokens[i + 1]);
    }
    std::sort(ngrams.begin(), ngrams.end());
    ngrams.erase(std::unique(ngrams.begin(), ngrams.end()), ngrams.end());
    return ngrams;
}

/// Ngrams of the other queries in s, minus the ngrams of q itself.
/// Throws if q is not a member of s.
inline std::vector<Ngram> cooccurring_ngrams(const Query& q, const Session& s) {
    if (!s.contains(q)) throw std::invalid_argument("cooccurring_ngrams: query not in session: " + q);
    const std::vector<Ngram> own = query_ngrams(q);
    std::vector<Ngram> others;
    for (const Query& other : s.queries) {
        if (other == q) continue;
        std::vector<Ngram> ns = query_ngrams(other);
        others.insert(others.end(), ns.begin(), ns.end());
    }
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    std::vector<Ngram> result;
    std::set_difference(others.begin(), others.end(), own.begin(), own.end(),
                        std::back_inserter(result));
    return result;
}

/// Session-level frequency tables. Keys absent from a map mean count zero.
/// By construction (q, n) keys never have n among q's own ngrams.
struct CooccurrenceCounts {
    std::unordered_map<Query, std::int64_t> q_sessions;
    std::unordered_map<Ngram, std::int64_t> n_sessions;
    std::unordered_map<Query, std::unordered_map<Ngram, std::int64_t>> qn_cooc;
    std::int64_t total_sessions = 0;

    std::int64_t query_sessions(const Query& q) const {
        const auto it = q_sessions.find(q);
        return it == q_sessions.end() ? 0 : it->second;
    }

    std::int64_t ngram_sessions(const Ngram& n) const {
        const auto it = n_sessions.find(n);
        return it == n_sessions.end() ? 0 : it->second;
    }

    std::int64_t cooccurrences(const Query& q, const Ngram& n) const {
        const auto it = qn_cooc.find(q);
        if (it == qn_cooc.end()) return 0;
        const auto jt = it->second.find(n);
        return jt == it->second.end() ? 0 : jt->second;
    }
};

namespace detail {

inline void count_session(const Session& session, CooccurrenceCounts& acc) {
    // Per-query ngram sets plus their session-wide union. An ngram co-occurs
    // with q exactly when it is in the union but not among q's own ngrams:
    // anything else in the union must come from some other query.
    std::vector<std::vector<Ngram>> per_query;
    per_query.reserve(session.size());
    for (const Query& q : session.queries) per_query.push_back(query_ngrams(q));

    std::vector<Ngram> session_union;
    for (const auto& ns : per_query) session_union.insert(session_union.end(), ns.begin(), ns.end());
    std::sort(session_union.begin(), session_union.end());
    session_union.erase(std::unique(session_union.begin(), session_union.end()),
                        session_union.end());

    for (const Ngram& n : session_union) ++acc.n_sessions[n];
    for (std::size_t i = 0; i < session.size(); ++i) {
        const Query& q = session.queries[i];
        ++acc.q_sessions[q];
        const std::vector<Ngram>& own = per_query[i];
        auto& row = acc.qn_cooc[q];
        for (const Ngram& n : session_union) {
            if (!std::binary_search(own.begin(), own.end(), n)) ++row[n];
        }
    }
}

inline void merge_counts(CooccurrenceCounts& into, CooccurrenceCounts&& from) {
    for (auto& [q, c] : from.q_sessions) into.q_sessions[q] += c;
    for (auto& [n, c] : from.n_sessions) into.n_sessions[n] += c;
    for (auto& [q, row] : from.qn_cooc) {
        auto& dst = into.qn_cooc[q];
        for (auto& [n, c] : row) dst[n] += c;
    }
    into.total_sessions += from.total_sessions;
}

}  // namespace detail

/// Computes |q|, |n| and c(q, n) over the whole corpus. Each session adds at
/// most 1 to any single counter. Sharded over sessions when threads > 1; the
/// merge is plain integer addition, so the result does not depend on the
/// shard count or on session order.
inline CooccurrenceCounts count_statistics(const SessionCorpus& corpus, unsigned threads = 1) {
    const std::size_t n = corpus.sessions.size();
    const unsigned shards = shard_count(n, threads);
    if (shards <= 1) {
        CooccurrenceCounts acc;
        acc.total_sessions = static_cast<std::int64_t>(n);
        for (const Session& s : corpus.sessions) detail::count_session(s, acc);
        return acc;
    }
    std::vector<CooccurrenceCounts> partial(shards);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned shard) {
        CooccurrenceCounts& acc = partial[shard];
        acc.total_sessions = static_cast<std::int64_t>(end - begin);
        for (std::size_t i = begin; i < end; ++i) detail::count_session(corpus.sessions[i], acc);
    });
    CooccurrenceCounts result = std::move(partial[0]);
    for (unsigned s = 1; s < shards; ++s) detail::merge_counts(result, std::move(partial[s]));
    return result;
}

}  // namespace qsx
