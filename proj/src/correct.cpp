#include "factforge/correct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "factforge/error.hpp"
#include "factforge/util.hpp"

namespace factforge {

CorrectionRecord format_input(const Sentence& sentence, const SummaryUnit& full_summary,
                              const PassageSet& passages, const Document& document,
                              const AblationFlags& flags, std::size_t max_in) {
    if (sentence.tokens.empty())
        throw std::invalid_argument("cannot format an empty sentence");
    if (sentence.tokens.size() > max_in)
        throw std::invalid_argument("sentence alone exceeds the input budget (" +
                                    std::to_string(sentence.tokens.size()) + " > " +
                                    std::to_string(max_in) + ")");

    CorrectionRecord rec;
    rec.segments.sentence = sentence.tokens;
    if (flags.use_summary_context)
        rec.segments.summary_context = full_summary.all_tokens();
    rec.segments.passages =
        flags.use_relevant_passages ? passages.text : document.all_tokens();

    std::vector<std::string> input = rec.segments.sentence;
    if (flags.use_summary_context) {
        input.push_back("[SEP]");
        input.insert(input.end(), rec.segments.summary_context.begin(),
                     rec.segments.summary_context.end());
    }
    input.push_back("[SEP]");
    input.insert(input.end(), rec.segments.passages.begin(),
                 rec.segments.passages.end());
    if (input.size() > max_in) input.resize(max_in);
    rec.input = join_tokens(input);
    return rec;
}

double sentence_avg_log_likelihood(const NGramModel& model,
                                   const std::vector<std::string>& tokens) {
    if (tokens.empty()) return -std::numeric_limits<double>::infinity();
    std::vector<std::string> history(static_cast<std::size_t>(model.order() - 1),
                                     kStartSymbol);
    double total = 0.0;
    for (const auto& tok : tokens) {
        total += model.log_prob(history, tok);
        history.push_back(tok);
    }
    total += model.log_prob(history, kEndSymbol);
    return total / static_cast<double>(tokens.size() + 1);
}

BaselineCorrector::BaselineCorrector(VerbLexicon lexicon, BaselineParams params)
    : lexicon_(std::move(lexicon)), params_(params) {
    if (params_.ngram_order < 2)
        throw std::invalid_argument("baseline n-gram order must be >= 2");
    if (params_.alpha <= 0.0)
        throw std::invalid_argument("baseline smoothing alpha must be > 0");
    if (params_.delta < 0.0)
        throw std::invalid_argument("baseline acceptance margin must be >= 0");
}

std::shared_ptr<const NGramModel> BaselineCorrector::document_model(
    const Document& document) {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(document.id);
    if (it != cache_.end()) return it->second;
    auto model = std::make_shared<NGramModel>(params_.ngram_order, params_.alpha);
    model->add_document(document);
    return cache_.emplace(document.id, std::move(model)).first->second;
}

std::vector<std::string> BaselineCorrector::correct(const CorrectionRecord&,
                                                    const Sentence& sentence,
                                                    const Document& document,
                                                    const PassageSet& passages) {
    auto sentence_spans = extract_triples(sentence, lexicon_);
    if (sentence_spans.empty()) return sentence.tokens;

    // Replacement pool: same-role spans from the passage sentences.
    std::vector<TripleSpan> pool;
    for (std::size_t idx : passages.covered) {
        if (idx >= document.sentences.size()) continue;
        auto spans = extract_triples(document.sentences[idx], lexicon_);
        pool.insert(pool.end(), spans.begin(), spans.end());
    }
    if (pool.empty()) return sentence.tokens;

    auto model = document_model(document);
    const double original_score = sentence_avg_log_likelihood(*model, sentence.tokens);
    double best_score = original_score;
    std::vector<std::string> best = sentence.tokens;

    for (const auto& span : sentence_spans) {
        for (const auto& rep : pool) {
            if (rep.role != span.role) continue;
            const auto& src = document.sentences[rep.sentence_index].tokens;
            std::vector<std::string> variant(sentence.tokens.begin(),
                                             sentence.tokens.begin() +
                                                 static_cast<std::ptrdiff_t>(span.start));
            variant.insert(variant.end(),
                           src.begin() + static_cast<std::ptrdiff_t>(rep.start),
                           src.begin() + static_cast<std::ptrdiff_t>(rep.end));
            variant.insert(variant.end(),
                           sentence.tokens.begin() +
                               static_cast<std::ptrdiff_t>(span.end),
                           sentence.tokens.end());
            if (variant == sentence.tokens) continue;
            double score = sentence_avg_log_likelihood(*model, variant);
            // Strict > keeps the first-seen variant on ties, which makes the
            // search order part of the contract.
            if (score > best_score) {
                best_score = score;
                best = std::move(variant);
            }
        }
    }

    if (best_score < original_score + params_.delta) return sentence.tokens;
    return best;
}

namespace {

PassageSet whole_document_passages(const Document& document, std::size_t window) {
    PassageSet set;
    set.doc_id = document.id;
    set.window = window;
    for (const auto& sent : document.sentences) {
        set.covered.push_back(sent.index);
        set.text.insert(set.text.end(), sent.tokens.begin(), sent.tokens.end());
    }
    return set;
}

}  // namespace

CorrectionResult correct_summary(const SummaryUnit& summary, const Document& document,
                                 Corrector& corrector, const CorrectOptions& options,
                                 FactualityClassifier* filter) {
    CorrectionResult result;
    result.doc_id = summary.doc_id;
    result.corrected.doc_id = summary.doc_id;
    result.corrected.kind = SummaryKind::Corrected;

    if (filter) {
        auto verdict = filter->classify(summary.joined_text(), document.raw);
        result.verdict = verdict;
        if (verdict.factual) {
            // Judged factual: pass through untouched.
            result.filtered_out = true;
            result.corrected.sentences = summary.sentences;
            return result;
        }
    }

    for (const auto& sent : summary.sentences) {
        PassageSet passages =
            options.flags.use_relevant_passages
                ? select_passages(sent, document, options.k_passages, options.window)
                : whole_document_passages(document, options.window);

        SentenceCorrection sc;
        sc.original = sent.tokens;
        sc.corrector = corrector.name();
        std::vector<std::string> out = sent.tokens;
        try {
            CorrectionRecord rec = format_input(sent, summary, passages, document,
                                                options.flags, options.max_in);
            out = corrector.correct(rec, sent, document, passages);
        } catch (const RemoteError&) {
            sc.failed = true;
            out = sent.tokens;
        }
        sc.corrected = out;
        sc.changed = out != sent.tokens;

        Sentence corrected_sent;
        corrected_sent.index = result.corrected.sentences.size();
        corrected_sent.tokens = out;
        corrected_sent.raw = join_tokens(out);
        result.corrected.sentences.push_back(std::move(corrected_sent));
        result.per_sentence.push_back(std::move(sc));
    }
    return result;
}

}  // namespace factforge
