// Integration gate: nine release criteria, one PASS/FAIL line each.
// Exit code is the number of failed criteria, so ctest treats any red
// line as a test failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "factforge/advgen.hpp"
#include "factforge/correct.hpp"
#include "factforge/corpus.hpp"
#include "factforge/error.hpp"
#include "factforge/evalrep.hpp"
#include "factforge/extract.hpp"
#include "factforge/infill.hpp"
#include "factforge/passage.hpp"
#include "factforge/rouge.hpp"
#include "factforge/util.hpp"

using namespace factforge;
namespace fs = std::filesystem;

namespace {

// Regression fixtures for the end-to-end loop (criterion 6). Derived once
// from the bundled corpus at seed 7 with default generation and correction
// settings; re-derive by running this binary after an intentional change.
constexpr double kFrozenBaselineRestoration = 56.0 / 90.0;        // overall
constexpr double kFrozenBaselineSubsetRestoration = 56.0 / 90.0;  // gold-in-passages
constexpr double kFixtureTol = 1e-9;

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : "";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string fmt(double value, int digits = 6) {
    std::ostringstream out;
    out.precision(digits);
    out << std::fixed << value;
    return out.str();
}

std::vector<CorpusEntry> load_bundled_corpus() {
    const std::string path = env_or_empty("TOY_CORPUS");
    if (path.empty()) throw FatalError("TOY_CORPUS not set");
    LoadReport report;
    return load_corpus(path, SummaryKind::Reference, report);
}

VerbLexicon load_bundled_lexicon() {
    const std::string path = env_or_empty("VERB_LEXICON");
    if (path.empty()) throw FatalError("VERB_LEXICON not set");
    return load_lexicon(path);
}

NGramModel model_over(const std::vector<CorpusEntry>& corpus, int order = 3,
                      double alpha = 1.0) {
    std::vector<Document> documents;
    documents.reserve(corpus.size());
    for (const auto& e : corpus) documents.push_back(e.document);
    return train_ngram(documents, order, alpha);
}

// Default-config generation over the given corpus; the shape every
// downstream criterion consumes.
std::vector<AdversarialExample> generate_default(
    const std::vector<CorpusEntry>& corpus, const VerbLexicon& lexicon,
    const NGramModel& model, unsigned jobs, GenStats& stats) {
    InfillOptions opts;  // beam 16, span 4
    GenConfig cfg;       // ranks [5,15], ratio 0.20
    cfg.seed = 7;
    auto fn = memoized_ngram_infill(model, opts);
    return generate_adversarial(corpus, lexicon, fn, cfg, jobs, stats);
}

std::vector<std::string> split_ws(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool contains_contiguous(const std::vector<std::string>& haystack,
                         const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    return std::search(haystack.begin(), haystack.end(), needle.begin(),
                       needle.end()) != haystack.end();
}

struct ScopedDir {
    fs::path path;
    explicit ScopedDir(const std::string& stem) {
        static std::atomic<unsigned> counter{0};
        path = fs::temp_directory_path() /
               (stem + "." + std::to_string(::getpid()) + "." +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~ScopedDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

// ---------------------------------------------------------------- criterion 1

Outcome mix_ratio() {
    auto start = std::chrono::steady_clock::now();
    auto base = load_bundled_corpus();
    auto lexicon = load_bundled_lexicon();

    // 500 replicas of the 20-document corpus, each under a distinct id so
    // the per-document RNG and positive hashing treat them independently.
    std::vector<CorpusEntry> corpus;
    corpus.reserve(base.size() * 500);
    for (int r = 0; r < 500; ++r) {
        for (const auto& entry : base) {
            CorpusEntry copy = entry;
            std::string id = entry.document.id + "r" + std::to_string(r);
            copy.document.id = id;
            copy.summary.doc_id = id;
            corpus.push_back(std::move(copy));
        }
    }

    auto model = model_over(base);  // replicas add no new text
    GenStats stats;
    auto out = generate_default(corpus, lexicon, model, 4, stats);

    const double elapsed = seconds_since(start);
    if (out.size() < 10000)
        return {false, "only " + std::to_string(out.size()) + " examples emitted"};
    if (stats.positives == 0) return {false, "no positives emitted"};

    const double ratio = static_cast<double>(stats.negatives) /
                         static_cast<double>(stats.positives);
    const bool ratio_ok = std::abs(ratio - 4.0) <= 0.1;
    const bool time_ok = elapsed < 60.0;

    std::string detail = "negatives:positives = " + std::to_string(stats.negatives) +
                         ":" + std::to_string(stats.positives) + " = " +
                         fmt(ratio, 4) + " (target 4.0 +/- 0.1) over " +
                         std::to_string(out.size()) + " examples in " +
                         fmt(elapsed, 1) + "s";
    if (!time_ok) detail += " -- over the 60s budget";
    return {ratio_ok && time_ok, detail};
}

// ---------------------------------------------------------------- criterion 2

double chain_score(const NGramModel& model, const std::vector<std::string>& left,
                   const std::vector<std::string>& span, const std::string& bridge) {
    std::vector<std::string> history(model.order() - 1, kStartSymbol);
    history.insert(history.end(), left.begin(), left.end());
    double total = 0.0;
    for (const auto& tok : span) {
        total += model.log_prob(history, tok);
        history.push_back(tok);
    }
    return total + model.log_prob(history, bridge);
}

std::vector<InfillCandidate> exhaustive_infill(const NGramModel& model,
                                               const MaskedQuery& query,
                                               int max_span_len) {
    const std::size_t mask = query.mask_position();
    std::vector<std::string> left(query.masked_text.begin(),
                                  query.masked_text.begin() + mask);
    const std::string bridge = mask + 1 < query.masked_text.size()
                                   ? query.masked_text[mask + 1]
                                   : kEndSymbol;
    const auto vocab = model.content_vocabulary();

    std::vector<InfillCandidate> pool;
    std::vector<std::size_t> digits;
    for (int len = 1; len <= max_span_len; ++len) {
        digits.assign(len, 0);
        while (true) {
            InfillCandidate cand;
            for (std::size_t d : digits) cand.tokens.push_back(vocab[d]);
            cand.score = chain_score(model, left, cand.tokens, bridge);
            pool.push_back(std::move(cand));
            int pos = len - 1;
            while (pos >= 0 && ++digits[pos] == vocab.size()) digits[pos--] = 0;
            if (pos < 0) break;
        }
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const InfillCandidate& a, const InfillCandidate& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.tokens < b.tokens;
                     });
    for (std::size_t i = 0; i < pool.size(); ++i)
        pool[i].rank = static_cast<int>(i) + 1;
    return pool;
}

Outcome beam_oracle() {
    auto start = std::chrono::steady_clock::now();
    static const char* pool_words[] = {
        "river", "stone", "garden", "mayor", "bridge", "market", "lantern",
        "harbor", "meadow", "tower", "copper", "vault", "cedar", "willow",
        "quarry", "beacon", "signal", "orchard", "mill", "ferry"};

    std::mt19937 rng(90210);
    std::size_t mismatches = 0;
    std::size_t spans_checked = 0;

    for (int iter = 0; iter < 100; ++iter) {
        // Random corpus over <= 19 distinct words; the sentence terminator
        // joins the content vocabulary, bringing it to at most 20.
        const std::size_t vocab_words = 3 + rng() % 17;  // 3..19
        const int n_sentences = 2 + rng() % 4;
        std::vector<std::string> texts;
        for (int s = 0; s < n_sentences; ++s) {
            std::vector<std::string> words;
            const std::size_t len = 3 + rng() % 5;
            for (std::size_t w = 0; w < len; ++w)
                words.push_back(pool_words[rng() % vocab_words]);
            texts.push_back(join_tokens(words));
        }
        std::string raw;
        for (const auto& t : texts) {
            if (!raw.empty()) raw += " . ";
            raw += t;
        }
        auto model = train_ngram({make_document("m", raw + " .")},
                                 2 + int(rng() % 2), 0.25 + (rng() % 4) * 0.25);

        const std::size_t v = model.content_vocabulary().size();
        InfillOptions opts;
        opts.max_span_len = 1 + int(rng() % 3);  // L <= 3
        std::size_t full_pool = 0, power = 1;
        for (int l = 1; l <= opts.max_span_len; ++l) {
            power *= v;
            full_pool += power;
        }
        opts.beam_size = static_cast<int>(full_pool);  // wide open: no pruning

        auto masked = tokenize(texts[rng() % texts.size()]);
        masked[rng() % masked.size()] = kMaskToken;
        MaskedQuery query;
        query.doc_id = "m";
        query.masked_text = masked;

        auto got = infill(model, query, opts);
        auto want = exhaustive_infill(model, query, opts.max_span_len);
        if (got.size() != want.size()) {
            ++mismatches;
            continue;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            ++spans_checked;
            if (got[i].tokens != want[i].tokens || got[i].rank != want[i].rank ||
                std::abs(got[i].score - want[i].score) > 1e-9)
                ++mismatches;
        }
    }

    const double elapsed = seconds_since(start);
    std::string detail = "100 random models, " + std::to_string(spans_checked) +
                         " ranked spans compared, " + std::to_string(mismatches) +
                         " mismatches in " + fmt(elapsed, 1) + "s";
    if (elapsed >= 60.0) detail += " -- over the 60s budget";
    return {mismatches == 0 && elapsed < 60.0, detail};
}

// ---------------------------------------------------------------- criterion 3

std::size_t brute_force_lcs(const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
    // Enumerate every subsequence of the shorter side (<= 2^8) and keep the
    // longest that is also a subsequence of the other.
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t best = 0;
    for (std::size_t bits = 0; bits < (1u << small.size()); ++bits) {
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < small.size(); ++i)
            if (bits & (1u << i)) sub.push_back(small[i]);
        if (sub.size() <= best) continue;
        std::size_t j = 0;
        for (const auto& tok : large) {
            if (j < sub.size() && tok == sub[j]) ++j;
        }
        if (j == sub.size()) best = sub.size();
    }
    return best;
}

Outcome rouge_fixtures() {
    struct Fixture {
        std::vector<std::string> cand;
        std::vector<std::string> ref;
        std::size_t n;  // 0 = rouge_l
        double p, r, f;
    };
    const double third = 1.0 / 3.0;
    const std::vector<Fixture> fixtures = {
        // Unigram: P = 1.0, R = 0.75, F ~ 0.8571.
        {{"the", "cat", "sat"}, {"the", "cat", "sat", "down"}, 1, 1.0, 0.75,
         6.0 / 7.0},
        // Clipped counts: candidate repeats beyond the reference's supply.
        {{"a", "a", "a"}, {"a", "a"}, 1, 2.0 / 3.0, 1.0, 0.8},
        // Bigrams: one of two overlaps.
        {{"a", "b", "c"}, {"a", "b", "d"}, 2, 0.5, 0.5, 0.5},
        // Identity and disjoint extremes.
        {{"x", "y", "z"}, {"x", "y", "z"}, 2, 1.0, 1.0, 1.0},
        {{"a", "b"}, {"c", "d"}, 1, 0.0, 0.0, 0.0},
        // LCS("a b c", "a x b") = 2 -> everything 2/3.
        {{"a", "b", "c"}, {"a", "x", "b"}, 0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
        // LCS("x a y b", "a b") = 2: P = 0.5, R = 1.0, F = 2/3.
        {{"x", "a", "y", "b"}, {"a", "b"}, 0, 0.5, 1.0, 2.0 * third},
    };

    std::size_t bad_fixtures = 0;
    for (const auto& fx : fixtures) {
        RougeScore got = fx.n == 0 ? rouge_l(fx.cand, fx.ref)
                                   : rouge_n(fx.cand, fx.ref, fx.n);
        if (std::abs(got.precision - fx.p) > 1e-6 ||
            std::abs(got.recall - fx.r) > 1e-6 || std::abs(got.f1 - fx.f) > 1e-6)
            ++bad_fixtures;
    }

    // LCS dynamic program against the exponential oracle.
    std::mt19937 rng(424242);
    static const char* alphabet[] = {"a", "b", "c", "d"};
    std::size_t bad_lcs = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<std::string> a, b;
        const std::size_t na = 1 + rng() % 8, nb = 1 + rng() % 8;
        for (std::size_t i = 0; i < na; ++i) a.push_back(alphabet[rng() % 4]);
        for (std::size_t i = 0; i < nb; ++i) b.push_back(alphabet[rng() % 4]);
        if (lcs_length(a, b) != brute_force_lcs(a, b)) ++bad_lcs;
    }

    std::string detail = std::to_string(fixtures.size()) + " hand fixtures (" +
                         std::to_string(bad_fixtures) + " off), 1000 LCS pairs (" +
                         std::to_string(bad_lcs) + " off)";
    return {bad_fixtures == 0 && bad_lcs == 0, detail};
}

// ---------------------------------------------------------------- criterion 4

Outcome corruption_validity() {
    auto corpus = load_bundled_corpus();
    auto lexicon = load_bundled_lexicon();
    auto model = model_over(corpus);
    GenStats stats;
    auto out = generate_default(corpus, lexicon, model, 2, stats);

    std::size_t negatives = 0, violations = 0;
    for (const auto& ex : out) {
        if (ex.label != ExampleLabel::Negative) continue;
        ++negatives;
        if (!ex.meta) {
            ++violations;
            continue;
        }
        const auto& m = *ex.meta;
        const auto& orig = ex.original_sentence;
        const auto& corr = ex.corrupted_sentence;

        bool ok = m.candidate_rank >= 5 && m.candidate_rank <= 15;
        ok = ok && m.span_end <= orig.size() && m.span_start < m.span_end;
        ok = ok && corr.size() ==
                       orig.size() - (m.span_end - m.span_start) + m.replacement_len;
        if (ok) {
            // Exactly one contiguous span: outside [span_start, span_end) the
            // corrupted sentence must be a verbatim copy.
            for (std::size_t i = 0; i < m.span_start && ok; ++i)
                ok = corr[i] == orig[i];
            for (std::size_t i = m.span_end; i < orig.size() && ok; ++i)
                ok = corr[i - m.span_end + m.span_start + m.replacement_len] ==
                     orig[i];
            std::vector<std::string> gold(orig.begin() + m.span_start,
                                          orig.begin() + m.span_end);
            std::vector<std::string> replacement(
                corr.begin() + m.span_start,
                corr.begin() + m.span_start + m.replacement_len);
            ok = ok && replacement != gold;
        }
        if (!ok) ++violations;
    }

    std::string detail = std::to_string(negatives) + " negatives checked, " +
                         std::to_string(violations) +
                         " span/rank/gold violations (" +
                         std::to_string(stats.skipped_masks) + " masks skipped)";
    return {negatives > 0 && violations == 0, detail};
}

// ---------------------------------------------------------------- criterion 5

Outcome passage_oracle() {
    static const char* pool_words[] = {"river",  "stone", "garden", "mayor",
                                       "bridge", "market", "lantern", "harbor",
                                       "meadow", "tower",  "copper", "vault"};
    std::mt19937 rng(777);
    std::size_t argmax_bad = 0;

    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t n_sentences = 3 + rng() % 10;
        std::string raw;
        for (std::size_t s = 0; s < n_sentences; ++s) {
            const std::size_t len = 3 + rng() % 6;
            for (std::size_t w = 0; w < len; ++w) {
                raw += pool_words[rng() % 12];
                raw += ' ';
            }
            raw += ". ";
        }
        Document doc = make_document("p" + std::to_string(iter), raw);

        Sentence probe;
        probe.index = 0;
        const std::size_t plen = 3 + rng() % 6;
        for (std::size_t w = 0; w < plen; ++w)
            probe.tokens.push_back(pool_words[rng() % 12]);
        probe.tokens.push_back(".");
        probe.raw = join_tokens(probe.tokens);

        const std::size_t k = 1 + rng() % 3;
        const std::size_t window = rng() % 3;
        auto set = select_passages(probe, doc, k, window);
        if (set.selected.empty()) {
            ++argmax_bad;
            continue;
        }

        // Brute-force argmax with ties resolved to the lower index.
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
            double score = rouge_l(doc.sentences[i].tokens, probe.tokens).f1;
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        if (set.selected[0].first != best) ++argmax_bad;
    }

    // Window arithmetic fixtures on a 20-sentence document of disjoint
    // vocabulary (plus the shared terminator).
    std::string raw;
    for (int i = 0; i < 20; ++i)
        raw += "tok" + std::to_string(2 * i) + " tok" + std::to_string(2 * i + 1) +
               " . ";
    Document grid = make_document("grid", raw);

    auto probe_for = [&](std::size_t idx) {
        Sentence s;
        s.index = 0;
        s.tokens = grid.sentences[idx].tokens;
        s.raw = grid.sentences[idx].raw;
        return s;
    };

    std::size_t window_bad = 0;
    auto expect_covered = [&](const PassageSet& set,
                              const std::vector<std::size_t>& want) {
        if (set.covered != want) ++window_bad;
    };
    expect_covered(select_passages(probe_for(7), grid, 1, 2), {5, 6, 7, 8, 9});
    expect_covered(select_passages(probe_for(0), grid, 1, 2), {0, 1, 2});
    expect_covered(select_passages(probe_for(19), grid, 1, 2), {17, 18, 19});
    expect_covered(select_passages(probe_for(3), grid, 1, 0), {3});

    // Overlapping windows merge into one sorted, deduplicated run.
    Document merge = make_document(
        "merge",
        "alpha beta gamma . noise one . alpha beta delta . noise two . noise three .");
    Sentence wide;
    wide.index = 0;
    wide.tokens = {"alpha", "beta", "gamma", "delta", "."};
    wide.raw = join_tokens(wide.tokens);
    auto merged = select_passages(wide, merge, 2, 1);
    std::vector<std::size_t> want_union = {0, 1, 2, 3};
    if (merged.covered != want_union) ++window_bad;

    std::string detail = "1000 argmax probes (" + std::to_string(argmax_bad) +
                         " off), 5 window fixtures (" + std::to_string(window_bad) +
                         " off)";
    return {argmax_bad == 0 && window_bad == 0, detail};
}

// ---------------------------------------------------------------- criterion 6

struct LoopPieces {
    std::vector<CorpusEntry> corpus;
    VerbLexicon lexicon;
    std::vector<AdversarialExample> examples;
    std::vector<const Document*> documents;  // per example
};

LoopPieces generation_for_loop() {
    LoopPieces pieces;
    pieces.corpus = load_bundled_corpus();
    pieces.lexicon = load_bundled_lexicon();
    auto model = model_over(pieces.corpus);
    GenStats stats;
    pieces.examples =
        generate_default(pieces.corpus, pieces.lexicon, model, 2, stats);

    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& e : pieces.corpus) by_id[e.document.id] = &e.document;
    for (const auto& ex : pieces.examples)
        pieces.documents.push_back(by_id.at(ex.doc_id));
    return pieces;
}

std::vector<CorrectionResult> correct_all(const LoopPieces& pieces,
                                          Corrector& corrector) {
    CorrectOptions options;
    std::vector<CorrectionResult> results;
    results.reserve(pieces.examples.size());
    for (std::size_t i = 0; i < pieces.examples.size(); ++i)
        results.push_back(correct_summary(pieces.examples[i].corrupted_summary,
                                          *pieces.documents[i], corrector, options));
    return results;
}

Outcome oracle_loop() {
    auto pieces = generation_for_loop();
    if (pieces.examples.empty()) return {false, "generation produced no examples"};

    // Identity: every corruption survives, so restoration is exactly zero.
    IdentityCorrector identity;
    auto identity_stats =
        restoration_stats(correct_all(pieces, identity), pieces.examples);
    const bool identity_ok = identity_stats.restoration_rate() == 0.0 &&
                             identity_stats.false_edit_rate() == 0.0;

    // Oracle: hand back the original summary; restoration is exactly one.
    std::vector<CorrectionResult> oracle_results;
    for (const auto& ex : pieces.examples) {
        CorrectionResult r;
        r.doc_id = ex.doc_id;
        r.corrected = ex.original_summary;
        r.corrected.kind = SummaryKind::Corrected;
        oracle_results.push_back(std::move(r));
    }
    auto oracle_stats = restoration_stats(oracle_results, pieces.examples);
    const bool oracle_ok = oracle_stats.restoration_rate() == 1.0 &&
                           oracle_stats.false_edit_rate() == 0.0;

    // Baseline: a real corrector, scored overall and on the subset of
    // corruptions whose gold span is verbatim inside the retrieved passages.
    BaselineCorrector baseline(pieces.lexicon, BaselineParams{});
    auto baseline_results = correct_all(pieces, baseline);
    auto baseline_stats = restoration_stats(baseline_results, pieces.examples);

    std::size_t subset = 0, subset_restored = 0;
    for (std::size_t i = 0; i < pieces.examples.size(); ++i) {
        const auto& ex = pieces.examples[i];
        if (ex.label != ExampleLabel::Negative) continue;
        const auto& m = *ex.meta;
        std::vector<std::string> gold(
            ex.original_sentence.begin() + m.span_start,
            ex.original_sentence.begin() + m.span_end);
        Sentence corrupted;
        corrupted.index = ex.sentence_index;
        corrupted.tokens = ex.corrupted_sentence;
        corrupted.raw = join_tokens(corrupted.tokens);
        auto passages = select_passages(corrupted, *pieces.documents[i], 3, 2);
        if (!contains_contiguous(passages.text, gold)) continue;
        ++subset;
        const auto& fixed =
            baseline_results[i].corrected.sentences.at(ex.sentence_index).tokens;
        if (fixed == ex.original_sentence) ++subset_restored;
    }
    const double subset_rate =
        subset == 0 ? 0.0
                    : static_cast<double>(subset_restored) /
                          static_cast<double>(subset);

    const double overall = baseline_stats.restoration_rate();
    const bool baseline_ok = subset > 0 && subset_rate > 0.5;
    const bool frozen_ok =
        std::abs(overall - kFrozenBaselineRestoration) <= kFixtureTol &&
        std::abs(subset_rate - kFrozenBaselineSubsetRestoration) <= kFixtureTol;

    std::string detail =
        "identity " + fmt(identity_stats.restoration_rate(), 1) + ", oracle " +
        fmt(oracle_stats.restoration_rate(), 1) + ", baseline " + fmt(overall) +
        " overall / " + fmt(subset_rate) + " on " + std::to_string(subset) +
        " gold-in-passages corruptions (frozen " +
        fmt(kFrozenBaselineRestoration) + " / " +
        fmt(kFrozenBaselineSubsetRestoration) + ")";
    return {identity_ok && oracle_ok && baseline_ok && frozen_ok, detail};
}

// ---------------------------------------------------------------- criterion 7

int run_cli(const std::string& args) {
    const std::string bin = env_or_empty("FACTFORGE_BIN");
    if (bin.empty()) return -1;
    std::string cmd = "'" + bin + "' " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
    const std::string corpus = env_or_empty("TOY_CORPUS");
    const std::string lexicon = env_or_empty("VERB_LEXICON");
    if (env_or_empty("FACTFORGE_BIN").empty())
        return {false, "FACTFORGE_BIN not set"};

    ScopedDir a("factforge-accept-j1"), b("factforge-accept-j8");
    const std::string common = "pipeline --corpus '" + corpus + "' --lexicon '" +
                               lexicon + "' --seed 7 ";
    if (run_cli(common + "-o '" + a.path.string() + "' -j 1") != 0)
        return {false, "single-job pipeline run failed"};
    if (run_cli(common + "-o '" + b.path.string() + "' -j 8") != 0)
        return {false, "eight-job pipeline run failed"};

    auto listing = [](const fs::path& dir) {
        std::vector<std::string> names;
        for (const auto& entry : fs::recursive_directory_iterator(dir))
            if (entry.is_regular_file())
                names.push_back(fs::relative(entry.path(), dir).string());
        std::sort(names.begin(), names.end());
        return names;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    auto names_a = listing(a.path), names_b = listing(b.path);
    if (names_a != names_b)
        return {false, "artifact sets differ between job counts"};
    if (names_a.empty()) return {false, "pipeline produced no artifacts"};

    std::size_t diffs = 0;
    for (const auto& name : names_a)
        if (slurp(a.path / name) != slurp(b.path / name)) ++diffs;

    std::string detail = std::to_string(names_a.size()) +
                         " artifacts compared between -j 1 and -j 8, " +
                         std::to_string(diffs) + " differ";
    return {diffs == 0, detail};
}

// ---------------------------------------------------------------- criterion 8

class ThirtyPercentClassifier final : public FactualityClassifier {
public:
    explicit ThirtyPercentClassifier(std::set<std::string> factual_ids)
        : factual_ids_(std::move(factual_ids)) {}
    std::string name() const override { return "stub30"; }
    ClassifierVerdict classify(const std::string&, const std::string&) override {
        // classify() is keyed per call through mark(); the summary loop calls
        // it once per summary with the doc captured in current_.
        bool hit = factual_ids_.count(current_) > 0;
        return {hit, hit ? 0.8 : 0.2};
    }
    void focus(const std::string& doc_id) { current_ = doc_id; }

private:
    std::set<std::string> factual_ids_;
    std::string current_;
};

// Summaries get rewritten wholesale unless the filter intervenes, which
// makes "passed through byte-identical" a meaningful claim.
class MangleCorrector final : public Corrector {
public:
    std::string name() const override { return "mangle"; }
    std::vector<std::string> correct(const CorrectionRecord&, const Sentence&,
                                     const Document&, const PassageSet&) override {
        return {"mangled", "."};
    }
};

std::string summary_fingerprint(const SummaryUnit& unit) {
    std::string out;
    for (const auto& s : unit.sentences) {
        out += std::to_string(s.index) + '\x1f';
        for (const auto& t : s.tokens) out += t + '\x1e';
        out += s.raw + '\x1d';
    }
    return out;
}

Outcome filter_semantics() {
    auto corpus = load_bundled_corpus();

    // Exactly 30% of the summaries, chosen by sorted id for determinism.
    std::vector<std::string> ids;
    for (const auto& e : corpus) ids.push_back(e.document.id);
    std::sort(ids.begin(), ids.end());
    const std::size_t n_factual = ids.size() * 3 / 10;
    std::set<std::string> factual_ids(ids.begin(), ids.begin() + n_factual);

    ThirtyPercentClassifier classifier(factual_ids);
    MangleCorrector corrector;
    CorrectOptions options;

    std::size_t filtered = 0, mangled = 0, wrong = 0;
    for (const auto& entry : corpus) {
        classifier.focus(entry.document.id);
        auto result = correct_summary(entry.summary, entry.document, corrector,
                                      options, &classifier);
        const bool should_filter = factual_ids.count(entry.document.id) > 0;
        if (result.filtered_out != should_filter) ++wrong;
        if (!result.verdict ||
            result.verdict->factual != should_filter) ++wrong;

        if (result.filtered_out) {
            ++filtered;
            if (summary_fingerprint(result.corrected) !=
                summary_fingerprint(entry.summary))
                ++wrong;  // must pass through byte-identical
            if (!result.per_sentence.empty()) ++wrong;
        } else {
            ++mangled;
            if (summary_fingerprint(result.corrected) ==
                summary_fingerprint(entry.summary))
                ++wrong;  // the mangler must have been consulted
        }
    }

    std::string detail = std::to_string(filtered) + " of " +
                         std::to_string(corpus.size()) +
                         " summaries filtered untouched, " +
                         std::to_string(mangled) + " corrected, " +
                         std::to_string(wrong) + " contract violations";
    return {filtered == n_factual && wrong == 0, detail};
}

// ---------------------------------------------------------------- criterion 9

Outcome truncation() {
    auto pieces = generation_for_loop();

    std::size_t over_in = 0, over_out = 0, max_in = 0, max_out = 0;
    for (std::size_t i = 0; i < pieces.examples.size(); ++i) {
        const auto& ex = pieces.examples[i];
        Sentence corrupted;
        corrupted.index = ex.sentence_index;
        corrupted.tokens = ex.corrupted_sentence;
        corrupted.raw = join_tokens(corrupted.tokens);
        auto passages = select_passages(corrupted, *pieces.documents[i], 3, 2);
        auto rec = serialize_training(ex, passages, 512, 128);
        const std::size_t in_len = split_ws(rec.input).size();
        const std::size_t out_len = split_ws(rec.target).size();
        max_in = std::max(max_in, in_len);
        max_out = std::max(max_out, out_len);
        if (in_len > 512) ++over_in;
        if (out_len > 128) ++over_out;
    }

    // The bundled corpus never fills the budget, so force one record that
    // would overflow without clamping: 100 + 1 + 300 + 1 + 400 = 802 raw.
    AdversarialExample big;
    big.doc_id = "big";
    for (int i = 0; i < 100; ++i) big.corrupted_sentence.push_back("s");
    for (int i = 0; i < 150; ++i) big.original_sentence.push_back("t");
    Sentence ctx;
    ctx.index = 0;
    for (int i = 0; i < 300; ++i) ctx.tokens.push_back("u");
    ctx.raw = join_tokens(ctx.tokens);
    big.corrupted_summary.doc_id = "big";
    big.corrupted_summary.sentences.push_back(ctx);
    PassageSet long_passages;
    for (int i = 0; i < 400; ++i) long_passages.text.push_back("v");

    auto clamped = serialize_training(big, long_passages, 512, 128);
    const std::size_t big_in = split_ws(clamped.input).size();
    const std::size_t big_out = split_ws(clamped.target).size();

    std::string detail = std::to_string(pieces.examples.size()) +
                         " generated records (max input " +
                         std::to_string(max_in) + ", max target " +
                         std::to_string(max_out) + "), clamped stress record " +
                         std::to_string(big_in) + "/" + std::to_string(big_out);
    const bool ok = over_in == 0 && over_out == 0 && big_in == 512 &&
                    big_out == 128;
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*check)();
    };
    const Criterion criteria[] = {
        {"adversarial mix ratio", &mix_ratio},
        {"beam equals exhaustive ranking", &beam_oracle},
        {"rouge fixtures and lcs oracle", &rouge_fixtures},
        {"corruption validity", &corruption_validity},
        {"passage retrieval oracle", &passage_oracle},
        {"end-to-end restoration loop", &oracle_loop},
        {"pipeline determinism across jobs", &determinism},
        {"factuality filter semantics", &filter_semantics},
        {"serialization truncation budgets", &truncation},
    };

    int failures = 0;
    int index = 0;
    for (const auto& criterion : criteria) {
        ++index;
        Outcome outcome;
        try {
            outcome = criterion.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.ok) ++failures;
        std::cout << (outcome.ok ? "[PASS] " : "[FAIL] ") << index << "/9 "
                  << criterion.name << ": " << outcome.detail << "\n";
    }
    std::cout << (failures == 0 ? "all criteria green"
                                : std::to_string(failures) + " criteria red")
              << std::endl;
    return failures;
}
