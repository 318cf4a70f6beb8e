// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "qsx/corpus.hpp"
#include "oracles.hpp"
#include "testgen.hpp"

using namespace qsx;

TEST_CASE("normalize_query: lowercases and collapses whitespace", "[corpus]") {
    CHECK(normalize_query("  Instant POT  meal ") == "instant pot meal");
    CHECK(normalize_query("weed") == "weed");
    CHECK(normalize_query("a\tb\nc") == "a b c");
    CHECK_FALSE(normalize_query("\t \n").has_value());
    CHECK_FALSE(normalize_query("").has_value());
}

TEST_CASE("normalize_query: unicode whitespace and non-ascii letters", "[corpus]") {
    // U+00A0 no-break space collapses like a plain space
    CHECK(normalize_query("caf\xc3\xa9\xc2\xa0" "au lait") == "caf\xc3\xa9 au lait");
    // U+3000 ideographic space is whitespace too
    CHECK(normalize_query("a\xe3\x80\x80z") == "a z");
    // only ASCII letters are case-folded
    CHECK(normalize_query("\xc3\x89" "clair Cake") == "\xc3\x89" "clair cake");
    CHECK_FALSE(normalize_query("\xc2\xa0\xe2\x80\x89").has_value());
}

TEST_CASE("utf8_valid rejects malformed sequences", "[corpus]") {
    CHECK(utf8_valid("plain ascii"));
    CHECK(utf8_valid("caf\xc3\xa9"));
    CHECK_FALSE(utf8_valid("\xff"));
    CHECK_FALSE(utf8_valid("\xc0\xaf"));          // overlong
    CHECK_FALSE(utf8_valid("\xed\xa0\x80"));      // surrogate
    CHECK_FALSE(utf8_valid("\xe2\x80"));          // truncated
}

TEST_CASE("parse_sessions: retention window after dedup", "[corpus]") {
    std::stringstream in;
    in << "a\tb\tc\td\n";                                   // 4 unique: dropped
    in << "a b c\tc d e\tf\tg\th\n";                        // 5 unique: kept
    in << "x\tx\tX \ty\tz\tw\tv\n";                         // dedup 7 -> 5: kept
    for (int i = 0; i < 21; ++i) in << (i ? "\t" : "") << "q" << i;
    in << "\n";                                             // 21 unique: dropped

    ParseStats stats;
    const SessionCorpus corpus = parse_sessions(in, SessionBounds{}, &stats);
    REQUIRE(corpus.session_count() == 2);
    CHECK(stats.retained == 2);
    CHECK(stats.discarded_size == 2);
    CHECK(stats.malformed_lines == 0);
    CHECK(corpus.sessions[0].size() == 5);
    CHECK(corpus.sessions[0].contains("a b c"));
    CHECK(corpus.sessions[0].contains("c d e"));
    CHECK(corpus.sessions[1].size() == 5);
    CHECK(corpus.sessions[1].contains("x"));
}

TEST_CASE("parse_sessions: malformed utf-8 lines are skipped and counted", "[corpus]") {
    std::stringstream in;
    in << "a\tb\tc\td\te\n";
    in << "bad\xff\tb\tc\td\te\n";
    ParseStats stats;
    const SessionCorpus corpus = parse_sessions(in, SessionBounds{}, &stats);
    CHECK(corpus.session_count() == 1);
    CHECK(stats.malformed_lines == 1);
}

TEST_CASE("parse_sessions: empty queries are dropped before the size check", "[corpus]") {
    std::stringstream in;
    in << "a\t \tb\tc\td\te\n";  // blank field rejected, 5 remain
    ParseStats stats;
    const SessionCorpus corpus = parse_sessions(in, SessionBounds{}, &stats);
    REQUIRE(corpus.session_count() == 1);
    CHECK(corpus.sessions[0].size() == 5);
    CHECK(stats.dropped_queries == 1);
}

TEST_CASE("parse_sessions: bounds are configurable", "[corpus]") {
    std::stringstream in("a\tb\n");
    const SessionCorpus corpus = parse_sessions(in, SessionBounds{2, 3});
    CHECK(corpus.session_count() == 1);
}

TEST_CASE("query_ngrams: unigrams plus adjacent bigrams", "[corpus]") {
    CHECK(query_ngrams("a b c") == std::vector<Ngram>{"a", "a b", "b", "b c", "c"});
    CHECK(query_ngrams("weed") == std::vector<Ngram>{"weed"});
    CHECK(query_ngrams("one pot pasta") ==
          std::vector<Ngram>{"one", "one pot", "pasta", "pot", "pot pasta"});
    // repeated token appears once
    CHECK(query_ngrams("a a") == std::vector<Ngram>{"a", "a a"});
}

TEST_CASE("cooccurring_ngrams: other queries' ngrams minus own", "[corpus]") {
    const Session s = Session::of({"a b c", "c d e"});
    CHECK(cooccurring_ngrams("a b c", s) == std::vector<Ngram>{"c d", "d", "d e", "e"});
    CHECK(cooccurring_ngrams("c d e", s) == std::vector<Ngram>{"a", "a b", "b", "b c"});

    const Session lone = Session::of({"solo query"});
    CHECK(cooccurring_ngrams("solo query", lone).empty());

    const Session pair = Session::of({"x", "x y"});
    CHECK(cooccurring_ngrams("x", pair) == std::vector<Ngram>{"x y", "y"});

    CHECK_THROWS_AS(cooccurring_ngrams("missing", s), std::invalid_argument);
}

TEST_CASE("count_statistics: empty corpus", "[corpus]") {
    const CooccurrenceCounts counts = count_statistics(SessionCorpus{});
    CHECK(counts.total_sessions == 0);
    CHECK(counts.q_sessions.empty());
    CHECK(counts.n_sessions.empty());
    CHECK(counts.qn_cooc.empty());
}

TEST_CASE("count_statistics: own ngrams are excluded from c but not from |n|", "[corpus]") {
    SessionCorpus corpus;
    corpus.sessions.push_back(Session::of({"a b c", "c d e", "f", "g", "h"}));
    const CooccurrenceCounts counts = count_statistics(corpus);

    CHECK(counts.cooccurrences("a b c", "d") == 1);
    CHECK(counts.cooccurrences("a b c", "c d") == 1);
    CHECK(counts.cooccurrences("a b c", "c") == 0);  // c is an ngram of the query itself
    CHECK(counts.query_sessions("a b c") == 1);
    // |n| counts the ngram's global prevalence, own queries included
    CHECK(counts.ngram_sessions("c") == 1);
    CHECK(counts.ngram_sessions("a b") == 1);
}

TEST_CASE("count_statistics: matches the nested-loop oracle on random corpora", "[corpus]") {
    std::mt19937 rng(20260810);
    for (int round = 0; round < 30; ++round) {
        const auto sessions = testgen::random_sessions(rng, {});
        const auto expected = oracle::count_sessions(sessions);
        const CooccurrenceCounts got = count_statistics(testgen::to_corpus(sessions));

        REQUIRE(got.total_sessions == expected.total_sessions);
        REQUIRE(got.q_sessions.size() == expected.q_sessions.size());
        for (const auto& [q, c] : expected.q_sessions) REQUIRE(got.query_sessions(q) == c);
        REQUIRE(got.n_sessions.size() == expected.n_sessions.size());
        for (const auto& [n, c] : expected.n_sessions) REQUIRE(got.ngram_sessions(n) == c);
        std::size_t got_pairs = 0;
        for (const auto& [q, row] : got.qn_cooc) got_pairs += row.size();
        REQUIRE(got_pairs == expected.cooc.size());
        for (const auto& [qn, c] : expected.cooc) REQUIRE(got.cooccurrences(qn.first, qn.second) == c);
    }
}

TEST_CASE("count_statistics: c(q,n) <= min(|q|, |n|) and exclusion holds", "[corpus]") {
    std::mt19937 rng(7);
    const auto sessions = testgen::random_sessions(rng, {30, 8, 12, 3});
    const CooccurrenceCounts counts = count_statistics(testgen::to_corpus(sessions));
    for (const auto& [q, row] : counts.qn_cooc) {
        const auto own = query_ngrams(q);
        for (const auto& [n, c] : row) {
            CHECK(c <= counts.query_sessions(q));
            CHECK(c <= counts.ngram_sessions(n));
            CHECK_FALSE(std::binary_search(own.begin(), own.end(), n));
        }
    }
}

TEST_CASE("count_statistics: order independence and in-session duplicates", "[corpus]") {
    std::stringstream in1;
    in1 << "a\tb\tc\td\te\n";
    in1 << "a b\tb c\tc\tx\ty\tz\n";
    std::stringstream in2;  // same sessions, permuted, one duplicated query
    in2 << "b c\ta b\tz\ty\tx\tc\tc\n";
    in2 << "e\td\tc\tb\ta\n";

    const auto c1 = count_statistics(parse_sessions(in1));
    const auto c2 = count_statistics(parse_sessions(in2));
    REQUIRE(c1.q_sessions.size() == c2.q_sessions.size());
    for (const auto& [q, c] : c1.q_sessions) CHECK(c2.query_sessions(q) == c);
    for (const auto& [n, c] : c1.n_sessions) CHECK(c2.ngram_sessions(n) == c);
    for (const auto& [q, row] : c1.qn_cooc) {
        for (const auto& [n, c] : row) CHECK(c2.cooccurrences(q, n) == c);
    }
}

TEST_CASE("count_statistics: shard count does not change the result", "[corpus]") {
    std::mt19937 rng(99);
    const auto sessions = testgen::random_sessions(rng, {25, 6, 20, 2});
    const auto corpus = testgen::to_corpus(sessions);
    const auto serial = count_statistics(corpus, 1);
    for (const unsigned threads : {2u, 3u, 8u}) {
        const auto parallel = count_statistics(corpus, threads);
        REQUIRE(parallel.total_sessions == serial.total_sessions);
        REQUIRE(parallel.q_sessions == serial.q_sessions);
        REQUIRE(parallel.n_sessions == serial.n_sessions);
        REQUIRE(parallel.qn_cooc == serial.qn_cooc);
    }
}
