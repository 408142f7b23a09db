#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "factforge/corpus.hpp"
#include "factforge/extract.hpp"
#include "factforge/infill.hpp"
#include "factforge/passage.hpp"
#include "factforge/util.hpp"

namespace factforge {

enum class ExampleLabel { Negative, Positive };

struct CorruptionMeta {
    SpanRole role = SpanRole::Subject;
    int candidate_rank = 0;
    double candidate_score = 0.0;
    std::size_t span_start = 0;      // token span replaced in the original sentence
    std::size_t span_end = 0;        // exclusive, in original-sentence coordinates
    std::size_t replacement_len = 0;
};

struct AdversarialExample {
    std::string doc_id;
    std::size_t sentence_index = 0;
    std::vector<std::string> corrupted_sentence;
    std::vector<std::string> original_sentence;
    SummaryUnit corrupted_summary;
    SummaryUnit original_summary;
    ExampleLabel label = ExampleLabel::Negative;
    std::optional<CorruptionMeta> meta;  // absent for positives

    // Sort hint only; positives inherit it from the mask that triggered them
    // but never serialize it.
    SpanRole origin_role = SpanRole::Subject;
    int origin_rank = 0;

    std::string to_json_line() const;
    static AdversarialExample from_json_line(const std::string& line);
};

struct GenConfig {
    int rank_lo = 5;
    int rank_hi = 15;
    int beam_size = 16;
    double positive_ratio = 0.20;
    std::uint64_t seed = 0;
    int candidates_per_mask = 1;
    int max_span_len = 4;
    bool length_normalize = false;
};

struct GenStats {
    std::size_t negatives = 0;
    std::size_t positives = 0;
    std::size_t skipped_masks = 0;
    std::size_t documents = 0;

    std::string to_json() const;
};

// One query per role for every reference sentence with an extractable
// triple. The context is the full document (the reference sentence is not
// part of it, so nothing needs removing).
std::vector<MaskedQuery> mask_reference(const SummaryUnit& reference,
                                        const Document& document,
                                        const VerbLexicon& lexicon);

// Restricts candidates to the configured rank window, drops any that equal
// the gold span, and samples candidates_per_mask survivors without
// replacement. Empty result means the mask is skipped.
std::vector<AdversarialExample> corrupt(const MaskedQuery& query,
                                        const std::vector<InfillCandidate>& candidates,
                                        const GenConfig& cfg,
                                        const SummaryUnit& reference, DetRng& rng);

// Interleaves hash-selected positives (r' = r) with the negatives so that
// positives form positive_ratio of the emitted stream in expectation, then
// returns everything in canonical (doc_id, sentence_index, role, rank,
// label) order.
std::vector<AdversarialExample> assemble_dataset(
    std::vector<AdversarialExample> negatives,
    const std::vector<SummaryUnit>& references, const GenConfig& cfg,
    GenStats& stats);

struct CorrectionRecord {
    std::string input;   // segments joined with " [SEP] "
    std::string target;  // empty at inference time
    struct Segments {
        std::vector<std::string> sentence;
        std::vector<std::string> summary_context;
        std::vector<std::string> passages;
    } segments;
};

// Builds the serialized training record: corrupted sentence, corrupted
// summary and passage text joined with [SEP], truncated to max_in tokens
// from the right; the target is the original sentence truncated to max_out.
// Throws std::invalid_argument when the sentence alone exceeds max_in.
CorrectionRecord serialize_training(const AdversarialExample& example,
                                    const PassageSet& passages,
                                    std::size_t max_in = 512,
                                    std::size_t max_out = 128);

std::string dataset_json_line(const AdversarialExample& example,
                              const CorrectionRecord& record);

// Full per-corpus generation: mask references, infill (memoized across
// identical mask contexts), corrupt, and mix in positives. Deterministic for
// a fixed cfg.seed regardless of jobs.
using InfillFn = std::function<std::vector<InfillCandidate>(const MaskedQuery&)>;

std::vector<AdversarialExample> generate_adversarial(
    const std::vector<CorpusEntry>& corpus, const VerbLexicon& lexicon,
    const InfillFn& infill_fn, const GenConfig& cfg, unsigned jobs, GenStats& stats);

// Memoizes infill calls on the left-context window, bridge token and beam
// parameters, which fully determine the n-gram result.
InfillFn memoized_ngram_infill(const NGramModel& model, const InfillOptions& options);

}  // namespace factforge
