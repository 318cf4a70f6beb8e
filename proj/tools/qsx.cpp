// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors
//
// qsx — expand a small set of seed queries into large positive/negative
// query sets using session co-occurrence, with per-stage subcommands and
// deterministic TSV outputs.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "qsx/explain.hpp"
#include "qsx/hybrid.hpp"
#include "qsx/pipeline.hpp"
#include "qsx/qsx.hpp"
#include "qsx/synthgen_io.hpp"

namespace {

struct Paths {
    std::string sessions, seeds, graph, set, spec, model, table, input;
    std::string out, f_out, i_out, p_out, n_out, out_dir, sessions_out, truth_out;
};

qsx::SessionCorpus read_sessions(const std::string& path, const qsx::SessionBounds& bounds,
                                 std::uint64_t max_malformed) {
    auto in = qsx::open_input(path);
    qsx::ParseStats stats;
    qsx::SessionCorpus corpus = qsx::parse_sessions(in, bounds, &stats);
    std::cerr << "sessions: retained " << stats.retained << ", discarded " << stats.discarded_size
              << " outside [" << bounds.min_queries << ", " << bounds.max_queries << "]";
    if (stats.malformed_lines) std::cerr << ", skipped " << stats.malformed_lines << " malformed lines";
    if (stats.dropped_queries) std::cerr << ", dropped " << stats.dropped_queries << " empty queries";
    std::cerr << '\n';
    if (stats.malformed_lines > max_malformed)
        throw std::runtime_error(path + ": " + std::to_string(stats.malformed_lines) +
                                 " malformed lines exceed the --max-malformed limit of " +
                                 std::to_string(max_malformed));
    return corpus;
}

std::vector<qsx::Query> read_query_column(const std::string& path) {
    auto in = qsx::open_input(path);
    std::vector<qsx::Query> out;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        const auto body = qsx::chomp(line);
        if (body.empty() || body.front() == '#') continue;
        const auto fields = qsx::split_tab(body);
        std::string q(fields[0]);
        if (seen.insert(q).second) out.push_back(std::move(q));
    }
    return out;
}

void add_corpus_options(CLI::App* cmd, qsx::SessionBounds& bounds, std::uint64_t& max_malformed,
                        Paths& paths) {
    cmd->add_option("--sessions", paths.sessions, "Sessions file: one session per line, queries tab-separated")
        ->required();
    cmd->add_option("--session-min", bounds.min_queries, "Smallest retained session (unique queries)")
        ->capture_default_str();
    cmd->add_option("--session-max", bounds.max_queries, "Largest retained session (unique queries)")
        ->capture_default_str();
    cmd->add_option("--max-malformed", max_malformed,
                    "Abort when more lines than this fail UTF-8 validation");
}

void add_graph_options(CLI::App* cmd, qsx::PipelineConfig& cfg) {
    cmd->add_option("--t-w", cfg.t_w, "Association strength threshold; edges require w(q,n) > t_w")
        ->capture_default_str();
    cmd->add_option("--min-sessions", cfg.min_sessions,
                    "Frequency floor: queries and ngrams must appear in this many sessions")
        ->capture_default_str();
}

void add_phase1_options(CLI::App* cmd, qsx::Phase1Params& p) {
    cmd->add_option("--sigma", p.sigma, "Seed support size: at most this many seeds back one candidate")
        ->capture_default_str();
    cmd->add_option("--rho", p.rho, "Low recall penalty exponent")->capture_default_str();
    cmd->add_option("--tau", p.tau, "Low precision penalty exponent")->capture_default_str();
    cmd->add_option("--t-i", p.t_i, "Intermediate-set score threshold (phase 1B)")
        ->capture_default_str();
    cmd->add_option("--top-k", p.top_k, "Diagnostic ngram cut (phase 1A)")->capture_default_str();
}

void add_phase2_options(CLI::App* cmd, qsx::Phase2Params& p) {
    cmd->add_option("--t-p", p.t_p, "Positive score threshold (inclusive)")->capture_default_str();
    cmd->add_option("--t-n", p.t_n, "Negative score threshold (strict upper bound)")
        ->capture_default_str();
    cmd->add_option("--min-pos", p.min_pos, "Session floor for positives")->capture_default_str();
    cmd->add_option("--min-neg", p.min_neg, "Session floor for negatives")->capture_default_str();
    cmd->add_option("--smooth-hits", p.smoothing.hit_add, "Smoothing added to qualifying sessions")
        ->capture_default_str();
    cmd->add_option("--smooth-sessions", p.smoothing.session_add,
                    "Smoothing added to total sessions")
        ->capture_default_str();
}

int run(int argc, char** argv) {
    CLI::App app{"Seed-query set expansion over session co-occurrence"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI file (flags take precedence)");

    qsx::PipelineConfig cfg;
    Paths paths;
    std::uint64_t max_malformed = std::numeric_limits<std::uint64_t>::max();
    bool write_graph = false;
    std::vector<std::string> raw_queries;
    std::string explain_query_text, explain_ngram_text;

    auto* build = app.add_subcommand("build-graph", "Build the query/ngram graph from sessions");
    add_corpus_options(build, cfg.bounds, max_malformed, paths);
    add_graph_options(build, cfg);
    build->add_option("--out", paths.out, "Graph TSV output")->required();
    build->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();

    auto* phase1 = app.add_subcommand("phase1", "Expand seeds to diagnostic ngrams F and intermediate queries I");
    phase1->add_option("--graph", paths.graph, "Graph TSV from build-graph")->required();
    phase1->add_option("--seeds", paths.seeds, "Seed queries, one per line")->required();
    phase1->add_option("--f-out", paths.f_out, "Diagnostic ngram TSV output")->required();
    phase1->add_option("--i-out", paths.i_out, "Intermediate query TSV output")->required();
    add_phase1_options(phase1, cfg.phase1);
    phase1->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();

    auto* phase2 = app.add_subcommand("phase2", "Score all corpus queries against I and split into P and N");
    add_corpus_options(phase2, cfg.bounds, max_malformed, paths);
    phase2->add_option("--intermediate", paths.set, "Intermediate query TSV from phase1")->required();
    phase2->add_option("--p-out", paths.p_out, "Positive set TSV output")->required();
    phase2->add_option("--n-out", paths.n_out, "Negative set TSV output")->required();
    add_phase2_options(phase2, cfg.phase2);
    phase2->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();

    auto* expand = app.add_subcommand("expand", "Full pipeline: sessions + seeds -> F, I, P, N");
    add_corpus_options(expand, cfg.bounds, max_malformed, paths);
    expand->add_option("--seeds", paths.seeds, "Seed queries, one per line")->required();
    expand->add_option("--out-dir", paths.out_dir, "Directory for F.tsv, I.tsv, P.tsv, N.tsv")
        ->required();
    add_graph_options(expand, cfg);
    add_phase1_options(expand, cfg.phase1);
    add_phase2_options(expand, cfg.phase2);
    expand->add_flag("--write-graph", write_graph, "Also write graph.tsv");
    expand->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();

    auto* explain = app.add_subcommand("explain", "Trace a query or ngram against a reference set");
    explain->add_option("--graph", paths.graph, "Graph TSV")->required();
    explain->add_option("--set", paths.set,
                        "Reference weighted set TSV (F for --query, seeds for --ngram)")
        ->required();
    auto* opt_q = explain->add_option("--query", explain_query_text, "Query to trace against F");
    auto* opt_n = explain->add_option("--ngram", explain_ngram_text, "Ngram to trace against seeds");
    opt_q->excludes(opt_n);
    explain->add_option("--sigma", cfg.phase1.sigma, "Support size used to mark contributing links")
        ->capture_default_str();

    auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic session corpus with ground truth");
    gen->add_option("--spec", paths.spec, "Corpus spec JSON")->required();
    gen->add_option("--sessions-out", paths.sessions_out, "Sessions TSV output")->required();
    gen->add_option("--truth-out", paths.truth_out, "Ground truth TSV output")->required();

    auto* train = app.add_subcommand("hybrid-train", "Train the baseline textual scorer on P and N");
    train->add_option("--positives", paths.p_out, "Positive queries (first TSV column)")->required();
    train->add_option("--negatives", paths.n_out, "Negative queries (first TSV column)")->required();
    train->add_option("--model-out", paths.model, "Scorer model TSV output")->required();

    auto* diff = app.add_subcommand("hybrid-diff", "Build the scorer-vs-behavioral disagreement table");
    diff->add_option("--positives", paths.p_out, "Positive queries (first TSV column)")->required();
    diff->add_option("--negatives", paths.n_out, "Negative queries (first TSV column)")->required();
    diff->add_option("--model", paths.model, "Scorer model TSV")->required();
    diff->add_option("--table-out", paths.table, "Disagreement table TSV output")->required();

    auto* classify = app.add_subcommand("hybrid-classify", "Classify queries with table overrides");
    classify->add_option("--model", paths.model, "Scorer model TSV")->required();
    classify->add_option("--table", paths.table, "Disagreement table TSV")->required();
    classify->add_option("--query", raw_queries, "Query to classify (repeatable)");
    classify->add_option("--input", paths.input, "File of queries, one per line");

    // parent options (--config) may appear after the subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (build->parsed()) {
        const auto corpus = read_sessions(paths.sessions, cfg.bounds, max_malformed);
        const auto counts = qsx::count_statistics(corpus, cfg.threads);
        const auto graph = qsx::BipartiteGraph::build(counts, cfg.t_w, cfg.min_sessions, cfg.threads);
        auto out = qsx::open_output(paths.out);
        graph.save(out);
        std::cerr << "graph: " << graph.query_count() << " queries, " << graph.ngram_count()
                  << " ngrams, " << graph.edge_count() << " edges\n";
        return 0;
    }

    if (phase1->parsed()) {
        auto gin = qsx::open_input(paths.graph);
        const auto graph = qsx::BipartiteGraph::load(gin);
        auto sin = qsx::open_input(paths.seeds);
        auto seed_set = qsx::make_seed_set(qsx::load_seed_queries(sin));
        const std::size_t dropped = seed_set.restrict_to_graph(graph);
        if (dropped) std::cerr << "seeds: dropped " << dropped << " not present in the graph\n";
        const auto F = qsx::select_diagnostic_ngrams(graph, seed_set, cfg.phase1, cfg.threads);
        const auto I = qsx::expand_to_intermediate(graph, F, cfg.phase1, cfg.threads);
        {
            auto out = qsx::open_output(paths.f_out);
            F.save(out);
        }
        {
            auto out = qsx::open_output(paths.i_out);
            I.save(out);
        }
        std::cerr << "phase1: " << F.size() << " diagnostic ngrams, " << I.size()
                  << " intermediate queries\n";
        return 0;
    }

    if (phase2->parsed()) {
        const auto corpus = read_sessions(paths.sessions, cfg.bounds, max_malformed);
        auto iin = qsx::open_input(paths.set);
        const auto I = qsx::WeightedSet::load(iin, qsx::GraphSide::query);
        const auto scores =
            qsx::score_all_queries(corpus, qsx::membership(I), cfg.phase2.smoothing, cfg.threads);
        const auto split = qsx::threshold_split(scores, cfg.phase2);
        {
            auto out = qsx::open_output(paths.p_out);
            qsx::save_scored_queries(out, split.positives);
        }
        {
            auto out = qsx::open_output(paths.n_out);
            qsx::save_scored_queries(out, split.negatives);
        }
        std::cerr << "phase2: " << split.positives.size() << " positives, "
                  << split.negatives.size() << " negatives\n";
        return 0;
    }

    if (expand->parsed()) {
        const auto corpus = read_sessions(paths.sessions, cfg.bounds, max_malformed);
        auto sin = qsx::open_input(paths.seeds);
        const auto seeds = qsx::load_seed_queries(sin);
        const auto outputs = qsx::run_expand(corpus, seeds, cfg);
        if (outputs.dropped_seeds)
            std::cerr << "seeds: dropped " << outputs.dropped_seeds << " not present in the graph\n";
        qsx::write_expand_outputs(outputs, paths.out_dir, write_graph);
        std::cerr << "expand: " << outputs.diagnostic_ngrams.size() << " ngrams in F, "
                  << outputs.intermediate.size() << " queries in I, "
                  << outputs.split.positives.size() << " in P, "
                  << outputs.split.negatives.size() << " in N\n";
        return 0;
    }

    if (explain->parsed()) {
        if (opt_q->empty() && opt_n->empty())
            throw CLI::ValidationError("explain", "one of --query or --ngram is required");
        auto gin = qsx::open_input(paths.graph);
        const auto graph = qsx::BipartiteGraph::load(gin);
        qsx::ExplanationTrace trace;
        if (!opt_q->empty()) {
            auto fin = qsx::open_input(paths.set);
            const auto F = qsx::WeightedSet::load(fin, qsx::GraphSide::ngram);
            const auto q = qsx::normalize_query(explain_query_text);
            if (!q) throw std::runtime_error("explain: query is empty after normalization");
            trace = qsx::explain_query(graph, F, *q, cfg.phase1.sigma);
        } else {
            auto fin = qsx::open_input(paths.set);
            const auto seeds = qsx::WeightedSet::load(fin, qsx::GraphSide::query);
            const auto n = qsx::normalize_query(explain_ngram_text);
            if (!n) throw std::runtime_error("explain: ngram is empty after normalization");
            trace = qsx::explain_ngram(graph, seeds, *n, cfg.phase1.sigma);
        }
        qsx::save_trace(std::cout, trace);
        return 0;
    }

    if (gen->parsed()) {
        auto spec_in = qsx::open_input(paths.spec);
        const auto spec = qsx::parse_corpus_spec(spec_in);
        const auto generated = qsx::generate_corpus(spec);
        {
            auto out = qsx::open_output(paths.sessions_out);
            qsx::save_sessions_tsv(out, generated.corpus);
        }
        {
            auto out = qsx::open_output(paths.truth_out);
            qsx::save_truth_tsv(out, generated.topic_of);
        }
        std::cerr << "gen-corpus: " << generated.corpus.session_count() << " sessions, "
                  << generated.topic_of.size() << " unique queries\n";
        return 0;
    }

    if (train->parsed()) {
        const auto P = read_query_column(paths.p_out);
        const auto N = read_query_column(paths.n_out);
        const auto scorer = qsx::NgramBayesScorer::train(P, N);
        auto out = qsx::open_output(paths.model);
        scorer.save(out);
        std::cerr << "hybrid-train: vocabulary of " << scorer.vocabulary_size() << " ngrams\n";
        return 0;
    }

    if (diff->parsed()) {
        const auto P = read_query_column(paths.p_out);
        const auto N = read_query_column(paths.n_out);
        auto min = qsx::open_input(paths.model);
        const auto scorer = qsx::NgramBayesScorer::load(min);
        const auto table = qsx::build_disagreement_table(P, N, scorer);
        auto out = qsx::open_output(paths.table);
        table.save(out);
        std::cerr << "hybrid-diff: " << table.overrides.size() << " disagreements\n";
        return 0;
    }

    if (classify->parsed()) {
        auto min = qsx::open_input(paths.model);
        const auto scorer = qsx::NgramBayesScorer::load(min);
        auto tin = qsx::open_input(paths.table);
        const auto table = qsx::DisagreementTable::load(tin);
        std::vector<std::string> inputs = raw_queries;
        if (!paths.input.empty()) {
            auto in = qsx::open_input(paths.input);
            std::string line;
            while (std::getline(in, line)) {
                const auto body = qsx::chomp(line);
                if (!body.empty()) inputs.emplace_back(body);
            }
        }
        if (inputs.empty())
            throw std::runtime_error("hybrid-classify: no queries given (--query or --input)");
        for (const std::string& raw : inputs) {
            const auto q = qsx::normalize_query(raw);
            if (!q) continue;
            const qsx::Label label = qsx::hybrid_classify(*q, table, scorer);
            std::cout << *q << '\t' << qsx::label_name(label) << '\t' << qsx::fmt_g9(scorer.score(*q))
                      << '\n';
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "qsx: error: " << e.what() << '\n';
        return 1;
    }
}
