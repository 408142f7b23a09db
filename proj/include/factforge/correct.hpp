#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "factforge/advgen.hpp"
#include "factforge/corpus.hpp"
#include "factforge/extract.hpp"
#include "factforge/infill.hpp"
#include "factforge/passage.hpp"

namespace factforge {

struct AblationFlags {
    bool use_summary_context = true;
    bool use_relevant_passages = true;
};

struct SentenceCorrection {
    std::vector<std::string> original;
    std::vector<std::string> corrected;
    bool changed = false;
    bool failed = false;
    std::string corrector;
};

struct ClassifierVerdict {
    bool factual = false;
    double score = 0.0;
};

struct CorrectionResult {
    std::string doc_id;
    SummaryUnit corrected;  // kind = Corrected
    std::vector<SentenceCorrection> per_sentence;
    bool filtered_out = false;
    std::optional<ClassifierVerdict> verdict;
};

// Joins the enabled segments with [SEP]. A disabled summary context drops
// its separator too; with passages disabled the full document text stands in
// for them. Right-truncates to max_in tokens. Throws on an empty sentence.
CorrectionRecord format_input(const Sentence& sentence, const SummaryUnit& full_summary,
                              const PassageSet& passages, const Document& document,
                              const AblationFlags& flags, std::size_t max_in = 512);

class FactualityClassifier {
public:
    virtual ~FactualityClassifier() = default;
    virtual std::string name() const = 0;
    virtual ClassifierVerdict classify(const std::string& summary,
                                       const std::string& document) = 0;
};

// A corrector maps one formatted sentence record to corrected tokens.
// Implementations throw RemoteError on hard failure; the summary loop keeps
// the original sentence and flags it.
class Corrector {
public:
    virtual ~Corrector() = default;
    virtual std::string name() const = 0;
    virtual std::vector<std::string> correct(const CorrectionRecord& record,
                                             const Sentence& sentence,
                                             const Document& document,
                                             const PassageSet& passages) = 0;
};

class IdentityCorrector final : public Corrector {
public:
    std::string name() const override { return "identity"; }
    std::vector<std::string> correct(const CorrectionRecord&, const Sentence& sentence,
                                     const Document&, const PassageSet&) override {
        return sentence.tokens;
    }
};

struct BaselineParams {
    int ngram_order = 3;
    double alpha = 1.0;
    double delta = 0.05;  // minimum nats/token improvement to accept an edit
};

// Retrieval-substitution corrector: swaps each triple span of the sentence
// for same-role spans found in the passage sentences and keeps the variant
// with the best average token log-likelihood under a language model trained
// on the document, if it beats the original by delta.
class BaselineCorrector final : public Corrector {
public:
    BaselineCorrector(VerbLexicon lexicon, BaselineParams params);

    std::string name() const override { return "baseline"; }
    std::vector<std::string> correct(const CorrectionRecord& record,
                                     const Sentence& sentence, const Document& document,
                                     const PassageSet& passages) override;

private:
    std::shared_ptr<const NGramModel> document_model(const Document& document);

    VerbLexicon lexicon_;
    BaselineParams params_;
    std::mutex cache_mutex_;
    std::unordered_map<std::string, std::shared_ptr<const NGramModel>> cache_;
};

// Exposed for the baseline's tests: average per-token log-likelihood of a
// sentence (including the end transition) under the model.
double sentence_avg_log_likelihood(const NGramModel& model,
                                   const std::vector<std::string>& tokens);

struct CorrectOptions {
    AblationFlags flags;
    std::size_t k_passages = 3;
    std::size_t window = 2;
    std::size_t max_in = 512;
};

// Corrects each sentence of the summary in order. Every sentence sees the
// original full summary as context. If the classifier marks the summary
// factual the summary passes through untouched with filtered_out set.
CorrectionResult correct_summary(const SummaryUnit& summary, const Document& document,
                                 Corrector& corrector, const CorrectOptions& options,
                                 FactualityClassifier* filter = nullptr);

}  // namespace factforge
