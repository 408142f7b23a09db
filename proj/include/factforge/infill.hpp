#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "factforge/corpus.hpp"
#include "factforge/extract.hpp"

namespace factforge {

inline constexpr const char* kMaskToken = "<mask>";
inline constexpr const char* kStartSymbol = "<s>";
inline constexpr const char* kEndSymbol = "</s>";

struct MaskedQuery {
    std::string doc_id;
    std::size_t sentence_index = 0;
    std::vector<std::string> masked_text;  // exactly one <mask>
    std::vector<std::string> gold_span;    // the removed phrase
    SpanRole role = SpanRole::Subject;
    std::vector<std::string> context;

    std::size_t mask_position() const;  // throws if not exactly one mask
};

struct InfillCandidate {
    std::vector<std::string> tokens;
    int rank = 0;        // 1-based, 1 = best
    double score = 0.0;  // log-probability, non-increasing in rank
};

// Add-alpha n-gram model over lowercase tokens. Sentences are padded with
// n-1 start symbols and one end symbol; the end symbol is part of the
// vocabulary, the start symbol is not.
class NGramModel {
public:
    explicit NGramModel(int order = 3, double alpha = 1.0);

    int order() const { return order_; }
    double alpha() const { return alpha_; }

    void add_sentence(const std::vector<std::string>& tokens);
    void add_document(const Document& doc);

    // Registers tokens without observing any counts.
    void declare_vocabulary(const std::vector<std::string>& tokens);

    std::size_t vocabulary_size() const { return vocab_.size(); }
    const std::set<std::string>& vocabulary() const { return vocab_; }

    // Vocabulary minus sentinel symbols; sorted. These are the tokens beam
    // search may propose.
    std::vector<std::string> content_vocabulary() const;

    // log P(token | history) with add-alpha smoothing; history is truncated
    // to the last order-1 tokens. Returns -inf on an empty vocabulary.
    double log_prob(const std::vector<std::string>& history,
                    const std::string& token) const;

    std::uint64_t history_total(const std::vector<std::string>& history) const;
    std::uint64_t pair_count(const std::vector<std::string>& history,
                             const std::string& token) const;

    std::string to_json() const;
    static NGramModel from_json(const std::string& text);

    void save(const std::string& path) const;
    static NGramModel load(const std::string& path);

private:
    std::string history_key(const std::vector<std::string>& history) const;

    int order_;
    double alpha_;
    std::unordered_map<std::string, std::map<std::string, std::uint64_t>> counts_;
    std::unordered_map<std::string, std::uint64_t> totals_;
    std::set<std::string> vocab_;
};

NGramModel train_ngram(const std::vector<Document>& documents, int order,
                       double alpha);

// For each of the first min(k, |sentences|) document sentences with an
// extractable triple, emits one query per role. The context is the document
// with the masked sentence removed.
std::vector<MaskedQuery> build_infill_training(const Document& document,
                                               const VerbLexicon& lexicon,
                                               std::size_t k = 5);

struct InfillOptions {
    int beam_size = 16;
    int max_span_len = 4;
    bool length_normalize = false;
};

// Beam search over spans of length 1..max_span_len. A span is scored by the
// sum of n-gram log-probabilities of its tokens given the left context of
// the mask, plus one bridging term for the token following the mask (the
// end symbol when the mask is final). Completed spans of all lengths compete
// in one pool; ties break by lexicographic token order.
std::vector<InfillCandidate> infill(const NGramModel& model, const MaskedQuery& query,
                                    const InfillOptions& options);

}  // namespace factforge
