#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "factforge/advgen.hpp"
#include "factforge/correct.hpp"
#include "factforge/corpus.hpp"

namespace factforge {

struct EvalItem {
    std::string doc_id;
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
    bool changed = false;
    bool filtered = false;
    std::optional<bool> factual;
    std::optional<double> classifier_score;
};

struct EvalReport {
    int schema = 1;
    std::size_t n_summaries = 0;
    double rouge1 = 0.0;  // mean F1 over per_item
    double rouge2 = 0.0;
    double rougeL = 0.0;
    double changed_fraction = 0.0;
    std::optional<double> factual_fraction;
    std::optional<double> restoration_rate;
    std::optional<double> false_edit_rate;
    std::string classifier = "none";  // provenance of factual verdicts
    std::vector<EvalItem> per_item;

    std::string to_json() const;
    std::string to_tsv() const;  // columns documented in docs/metrics.md
};

// Scores corrected summaries against references, positionally aligned by
// doc_id (offending positions are listed in the error). When a classifier is
// given, each corrected summary is judged against its source document and the
// report records the classifier's name. Classifier calls fan out over `jobs`
// workers; row order stays positional.
EvalReport evaluate(const std::vector<CorrectionResult>& corrected,
                    const std::vector<SummaryUnit>& references,
                    const std::vector<Document>& documents,
                    FactualityClassifier* classifier = nullptr, unsigned jobs = 1);

// Oracle metrics available only for synthetic corruptions, where the true
// sentence is known. Results align 1:1 with the examples they were run on.
struct RestorationStats {
    std::size_t negatives = 0;
    std::size_t restored = 0;        // negatives whose sentence came back exactly
    std::size_t positives = 0;
    std::size_t falsely_edited = 0;  // positives the corrector touched anyway

    double restoration_rate() const {
        return negatives == 0 ? 0.0
                              : static_cast<double>(restored) /
                                    static_cast<double>(negatives);
    }
    double false_edit_rate() const {
        return positives == 0 ? 0.0
                              : static_cast<double>(falsely_edited) /
                                    static_cast<double>(positives);
    }
};

RestorationStats restoration_stats(const std::vector<CorrectionResult>& results,
                                   const std::vector<AdversarialExample>& examples);

}  // namespace factforge
