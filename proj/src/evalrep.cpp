#include "factforge/evalrep.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "factforge/error.hpp"
#include "factforge/rouge.hpp"
#include "factforge/util.hpp"

namespace factforge {

namespace {

// Builds "a vs b at 3; c vs d at 7; ..." capped at a handful of entries.
std::string describe_offenders(const std::vector<std::string>& offenders) {
    std::ostringstream out;
    const std::size_t shown = std::min<std::size_t>(offenders.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i) out << "; ";
        out << offenders[i];
    }
    if (offenders.size() > shown)
        out << "; and " << offenders.size() - shown << " more";
    return out.str();
}

bool any_sentence_changed(const CorrectionResult& result) {
    return std::any_of(result.per_sentence.begin(), result.per_sentence.end(),
                       [](const SentenceCorrection& s) { return s.changed; });
}

}  // namespace

EvalReport evaluate(const std::vector<CorrectionResult>& corrected,
                    const std::vector<SummaryUnit>& references,
                    const std::vector<Document>& documents,
                    FactualityClassifier* classifier, unsigned jobs) {
    if (corrected.size() != references.size())
        throw AlignmentError("corrected stream has " +
                             std::to_string(corrected.size()) + " items, references " +
                             std::to_string(references.size()));

    std::vector<std::string> offenders;
    for (std::size_t i = 0; i < corrected.size(); ++i)
        if (corrected[i].doc_id != references[i].doc_id)
            offenders.push_back(corrected[i].doc_id + " vs " + references[i].doc_id +
                                " at " + std::to_string(i));
    if (!offenders.empty())
        throw AlignmentError("doc_id mismatch: " + describe_offenders(offenders));

    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& doc : documents) by_id.emplace(doc.id, &doc);
    if (classifier) {
        for (const auto& result : corrected)
            if (!by_id.count(result.doc_id))
                offenders.push_back("no document for " + result.doc_id);
        if (!offenders.empty())
            throw AlignmentError("classifier needs source documents: " +
                                 describe_offenders(offenders));
    }

    EvalReport report;
    report.n_summaries = corrected.size();
    report.classifier = classifier ? classifier->name() : "none";
    report.per_item.resize(corrected.size());

    parallel_for_index(corrected.size(), jobs, [&](std::size_t i) {
        const auto& result = corrected[i];
        EvalItem& item = report.per_item[i];
        item.doc_id = result.doc_id;

        const auto cand = result.corrected.all_tokens();
        const auto ref = references[i].all_tokens();
        item.rouge1 = rouge_n(cand, ref, 1).f1;
        item.rouge2 = rouge_n(cand, ref, 2).f1;
        item.rougeL = rouge_l(cand, ref).f1;
        item.changed = any_sentence_changed(result);
        item.filtered = result.filtered_out;

        if (classifier) {
            auto verdict = classifier->classify(result.corrected.joined_text(),
                                                by_id.at(result.doc_id)->raw);
            item.factual = verdict.factual;
            item.classifier_score = verdict.score;
        }
    });

    double r1 = 0.0, r2 = 0.0, rl = 0.0;
    std::size_t changed = 0, factual = 0;
    for (const auto& item : report.per_item) {
        r1 += item.rouge1;
        r2 += item.rouge2;
        rl += item.rougeL;
        if (item.changed) ++changed;
        if (item.factual && *item.factual) ++factual;
    }
    if (!report.per_item.empty()) {
        const double n = static_cast<double>(report.per_item.size());
        report.rouge1 = r1 / n;
        report.rouge2 = r2 / n;
        report.rougeL = rl / n;
        report.changed_fraction = static_cast<double>(changed) / n;
        if (classifier) report.factual_fraction = static_cast<double>(factual) / n;
    }
    return report;
}

RestorationStats restoration_stats(const std::vector<CorrectionResult>& results,
                                   const std::vector<AdversarialExample>& examples) {
    if (results.size() != examples.size())
        throw AlignmentError("got " + std::to_string(results.size()) +
                             " correction results for " +
                             std::to_string(examples.size()) + " examples");

    std::vector<std::string> offenders;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].doc_id != examples[i].doc_id)
            offenders.push_back(results[i].doc_id + " vs " + examples[i].doc_id +
                                " at " + std::to_string(i));
        else if (examples[i].sentence_index >= results[i].corrected.sentences.size())
            offenders.push_back("sentence " + std::to_string(examples[i].sentence_index) +
                                " out of range for " + examples[i].doc_id);
    }
    if (!offenders.empty())
        throw AlignmentError("result/example mismatch: " + describe_offenders(offenders));

    RestorationStats stats;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& example = examples[i];
        const auto& tokens =
            results[i].corrected.sentences[example.sentence_index].tokens;
        if (example.label == ExampleLabel::Negative) {
            ++stats.negatives;
            if (tokens == example.original_sentence) ++stats.restored;
        } else {
            ++stats.positives;
            if (tokens != example.original_sentence) ++stats.falsely_edited;
        }
    }
    return stats;
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["schema"] = schema;
    j["n_summaries"] = n_summaries;
    j["rouge1"] = rouge1;
    j["rouge2"] = rouge2;
    j["rougeL"] = rougeL;
    j["changed_fraction"] = changed_fraction;
    j["classifier"] = classifier;
    if (factual_fraction) j["factual_fraction"] = *factual_fraction;
    if (restoration_rate) j["restoration_rate"] = *restoration_rate;
    if (false_edit_rate) j["false_edit_rate"] = *false_edit_rate;

    auto& rows = j["per_item"] = nlohmann::json::array();
    for (const auto& item : per_item) {
        nlohmann::json row;
        row["doc_id"] = item.doc_id;
        row["rouge1"] = item.rouge1;
        row["rouge2"] = item.rouge2;
        row["rougeL"] = item.rougeL;
        row["changed"] = item.changed;
        row["filtered"] = item.filtered;
        if (item.factual) row["factual"] = *item.factual;
        if (item.classifier_score) row["score"] = *item.classifier_score;
        rows.push_back(std::move(row));
    }
    return j.dump(2);
}

std::string EvalReport::to_tsv() const {
    std::ostringstream out;
    out << "doc_id\trouge1\trouge2\trougeL\tchanged\tfiltered\tfactual\tscore\n";
    for (const auto& item : per_item) {
        out << item.doc_id << '\t' << item.rouge1 << '\t' << item.rouge2 << '\t'
            << item.rougeL << '\t' << (item.changed ? 1 : 0) << '\t'
            << (item.filtered ? 1 : 0) << '\t';
        if (item.factual)
            out << (*item.factual ? 1 : 0);
        else
            out << "-";
        out << '\t';
        if (item.classifier_score)
            out << *item.classifier_score;
        else
            out << "-";
        out << '\n';
    }
    return out.str();
}

}  // namespace factforge
