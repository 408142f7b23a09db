#include "factforge/advgen.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "factforge/error.hpp"
#include "json.hpp"

namespace factforge {

namespace {

nlohmann::json summary_to_json(const SummaryUnit& unit) {
    auto arr = nlohmann::json::array();
    for (const auto& s : unit.sentences) arr.push_back(s.tokens);
    return arr;
}

SummaryUnit summary_from_json(const std::string& doc_id, const nlohmann::json& arr,
                              SummaryKind kind) {
    SummaryUnit unit;
    unit.doc_id = doc_id;
    unit.kind = kind;
    for (const auto& sent : arr) {
        Sentence s;
        s.index = unit.sentences.size();
        for (const auto& t : sent) s.tokens.push_back(t.get<std::string>());
        s.raw = join_tokens(s.tokens);
        unit.sentences.push_back(std::move(s));
    }
    return unit;
}

int role_order(SpanRole role) {
    switch (role) {
        case SpanRole::Subject: return 0;
        case SpanRole::Relation: return 1;
        case SpanRole::Object: return 2;
    }
    return 0;
}

bool canonical_less(const AdversarialExample& a, const AdversarialExample& b) {
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    if (a.sentence_index != b.sentence_index) return a.sentence_index < b.sentence_index;
    if (role_order(a.origin_role) != role_order(b.origin_role))
        return role_order(a.origin_role) < role_order(b.origin_role);
    if (a.origin_rank != b.origin_rank) return a.origin_rank < b.origin_rank;
    return a.label == ExampleLabel::Negative && b.label == ExampleLabel::Positive;
}

}  // namespace

std::vector<MaskedQuery> mask_reference(const SummaryUnit& reference,
                                        const Document& document,
                                        const VerbLexicon& lexicon) {
    std::vector<MaskedQuery> queries;
    auto context = document.all_tokens();
    for (const auto& sentence : reference.sentences) {
        auto triple = extract_triples(sentence, lexicon);
        if (triple.empty()) continue;
        for (const auto& span : triple) {
            MaskedQuery q;
            q.doc_id = document.id;
            q.sentence_index = sentence.index;
            q.role = span.role;
            q.gold_span.assign(
                sentence.tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
                sentence.tokens.begin() + static_cast<std::ptrdiff_t>(span.end));
            q.masked_text.assign(
                sentence.tokens.begin(),
                sentence.tokens.begin() + static_cast<std::ptrdiff_t>(span.start));
            q.masked_text.push_back(kMaskToken);
            q.masked_text.insert(
                q.masked_text.end(),
                sentence.tokens.begin() + static_cast<std::ptrdiff_t>(span.end),
                sentence.tokens.end());
            q.context = context;
            queries.push_back(std::move(q));
        }
    }
    return queries;
}

std::vector<AdversarialExample> corrupt(const MaskedQuery& query,
                                        const std::vector<InfillCandidate>& candidates,
                                        const GenConfig& cfg,
                                        const SummaryUnit& reference, DetRng& rng) {
    std::vector<const InfillCandidate*> window;
    for (const auto& c : candidates) {
        if (c.rank < cfg.rank_lo || c.rank > cfg.rank_hi) continue;
        if (c.tokens == query.gold_span) continue;
        window.push_back(&c);
    }
    if (window.empty()) return {};

    std::size_t want = std::min<std::size_t>(
        window.size(), static_cast<std::size_t>(std::max(1, cfg.candidates_per_mask)));
    std::vector<const InfillCandidate*> picked;
    for (std::size_t i = 0; i < want; ++i) {
        std::size_t j = rng.bounded(window.size());
        picked.push_back(window[j]);
        window.erase(window.begin() + static_cast<std::ptrdiff_t>(j));
    }

    std::size_t mask = query.mask_position();
    const Sentence& original = reference.sentences.at(query.sentence_index);

    std::vector<AdversarialExample> out;
    for (const InfillCandidate* cand : picked) {
        AdversarialExample ex;
        ex.doc_id = query.doc_id;
        ex.sentence_index = query.sentence_index;
        ex.original_sentence = original.tokens;
        ex.corrupted_sentence.assign(query.masked_text.begin(),
                                     query.masked_text.begin() +
                                         static_cast<std::ptrdiff_t>(mask));
        ex.corrupted_sentence.insert(ex.corrupted_sentence.end(),
                                     cand->tokens.begin(), cand->tokens.end());
        ex.corrupted_sentence.insert(
            ex.corrupted_sentence.end(),
            query.masked_text.begin() + static_cast<std::ptrdiff_t>(mask + 1),
            query.masked_text.end());

        ex.original_summary = reference;
        ex.corrupted_summary = reference;
        ex.corrupted_summary.kind = SummaryKind::Generated;
        Sentence& slot = ex.corrupted_summary.sentences.at(query.sentence_index);
        slot.tokens = ex.corrupted_sentence;
        slot.raw = join_tokens(slot.tokens);

        ex.label = ExampleLabel::Negative;
        CorruptionMeta meta;
        meta.role = query.role;
        meta.candidate_rank = cand->rank;
        meta.candidate_score = cand->score;
        meta.span_start = mask;
        meta.span_end = mask + query.gold_span.size();
        meta.replacement_len = cand->tokens.size();
        ex.meta = meta;
        ex.origin_role = query.role;
        ex.origin_rank = cand->rank;
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<AdversarialExample> assemble_dataset(
    std::vector<AdversarialExample> negatives,
    const std::vector<SummaryUnit>& references, const GenConfig& cfg,
    GenStats& stats) {
    // ratio = 1 is unsatisfiable here: positives are coupled to negatives.
    if (cfg.positive_ratio < 0.0 || cfg.positive_ratio >= 1.0)
        throw FatalError("positive_ratio must be in [0,1) for generation");

    std::unordered_map<std::string, const SummaryUnit*> by_id;
    for (const auto& r : references) by_id[r.doc_id] = &r;

    // Each negative decides, by a hash keyed on its stable identity, whether
    // to bring along an uncorrupted twin. q = ratio/(1-ratio) positives per
    // negative keeps positives at `ratio` of the whole stream.
    double q = cfg.positive_ratio > 0.0
                   ? cfg.positive_ratio / (1.0 - cfg.positive_ratio)
                   : 0.0;
    std::vector<AdversarialExample> out;
    out.reserve(negatives.size() * 2);
    for (auto& neg : negatives) {
        auto ref_it = by_id.find(neg.doc_id);
        if (ref_it == by_id.end())
            throw AlignmentError("negative example references unknown doc id: " +
                                 neg.doc_id);
        const SummaryUnit& reference = *ref_it->second;

        std::string key = neg.doc_id + '\x1f' + std::to_string(neg.sentence_index) +
                          '\x1f' + role_name(neg.origin_role) + '\x1f' +
                          std::to_string(neg.origin_rank) + "\x1fpositive";
        int copies = static_cast<int>(q);
        if (hash_unit(cfg.seed, key) < q - std::floor(q)) ++copies;

        out.push_back(std::move(neg));
        ++stats.negatives;
        for (int c = 0; c < copies; ++c) {
            AdversarialExample pos;
            pos.doc_id = out.back().doc_id;
            pos.sentence_index = out.back().sentence_index;
            pos.original_sentence = reference.sentences.at(pos.sentence_index).tokens;
            pos.corrupted_sentence = pos.original_sentence;
            pos.original_summary = reference;
            pos.corrupted_summary = reference;
            pos.label = ExampleLabel::Positive;
            pos.origin_role = out.back().origin_role;
            pos.origin_rank = out.back().origin_rank;
            out.push_back(std::move(pos));
            ++stats.positives;
        }
    }
    std::stable_sort(out.begin(), out.end(), canonical_less);
    return out;
}

CorrectionRecord serialize_training(const AdversarialExample& example,
                                    const PassageSet& passages, std::size_t max_in,
                                    std::size_t max_out) {
    if (example.corrupted_sentence.size() > max_in)
        throw std::invalid_argument(
            "sentence alone exceeds the input budget (" +
            std::to_string(example.corrupted_sentence.size()) + " > " +
            std::to_string(max_in) + ") for doc " + example.doc_id);

    CorrectionRecord rec;
    rec.segments.sentence = example.corrupted_sentence;
    rec.segments.summary_context = example.corrupted_summary.all_tokens();
    rec.segments.passages = passages.text;

    std::vector<std::string> input = rec.segments.sentence;
    input.push_back("[SEP]");
    input.insert(input.end(), rec.segments.summary_context.begin(),
                 rec.segments.summary_context.end());
    input.push_back("[SEP]");
    input.insert(input.end(), rec.segments.passages.begin(),
                 rec.segments.passages.end());
    if (input.size() > max_in) input.resize(max_in);
    rec.input = join_tokens(input);

    std::vector<std::string> target = example.original_sentence;
    if (target.size() > max_out) target.resize(max_out);
    rec.target = join_tokens(target);
    return rec;
}

std::string AdversarialExample::to_json_line() const {
    nlohmann::json j;
    j["doc_id"] = doc_id;
    j["sentence_index"] = sentence_index;
    j["label"] = label == ExampleLabel::Negative ? "neg" : "pos";
    j["corrupted_sentence"] = corrupted_sentence;
    j["original_sentence"] = original_sentence;
    j["corrupted_summary"] = summary_to_json(corrupted_summary);
    j["original_summary"] = summary_to_json(original_summary);
    if (meta) {
        j["meta"] = {{"role", role_name(meta->role)},
                     {"candidate_rank", meta->candidate_rank},
                     {"candidate_score", meta->candidate_score},
                     {"span_start", meta->span_start},
                     {"span_end", meta->span_end},
                     {"replacement_len", meta->replacement_len}};
    }
    return j.dump();
}

AdversarialExample AdversarialExample::from_json_line(const std::string& line) {
    auto j = nlohmann::json::parse(line);
    AdversarialExample ex;
    ex.doc_id = j.at("doc_id").get<std::string>();
    ex.sentence_index = j.at("sentence_index").get<std::size_t>();
    ex.label = j.at("label").get<std::string>() == "neg" ? ExampleLabel::Negative
                                                         : ExampleLabel::Positive;
    for (const auto& t : j.at("corrupted_sentence"))
        ex.corrupted_sentence.push_back(t.get<std::string>());
    for (const auto& t : j.at("original_sentence"))
        ex.original_sentence.push_back(t.get<std::string>());
    ex.corrupted_summary = summary_from_json(ex.doc_id, j.at("corrupted_summary"),
                                             SummaryKind::Generated);
    ex.original_summary = summary_from_json(ex.doc_id, j.at("original_summary"),
                                            SummaryKind::Reference);
    if (j.contains("meta")) {
        CorruptionMeta meta;
        meta.role = role_from_name(j["meta"].at("role").get<std::string>());
        meta.candidate_rank = j["meta"].at("candidate_rank").get<int>();
        meta.candidate_score = j["meta"].at("candidate_score").get<double>();
        meta.span_start = j["meta"].at("span_start").get<std::size_t>();
        meta.span_end = j["meta"].at("span_end").get<std::size_t>();
        meta.replacement_len = j["meta"].at("replacement_len").get<std::size_t>();
        ex.meta = meta;
        ex.origin_role = meta.role;
        ex.origin_rank = meta.candidate_rank;
    }
    return ex;
}

std::string dataset_json_line(const AdversarialExample& example,
                              const CorrectionRecord& record) {
    nlohmann::json j;
    j["input"] = record.input;
    j["target"] = record.target;
    j["label"] = example.label == ExampleLabel::Negative ? "neg" : "pos";
    j["doc_id"] = example.doc_id;
    nlohmann::json meta;
    meta["sentence_index"] = example.sentence_index;
    if (example.meta) {
        meta["role"] = role_name(example.meta->role);
        meta["candidate_rank"] = example.meta->candidate_rank;
        meta["candidate_score"] = example.meta->candidate_score;
    }
    j["meta"] = std::move(meta);
    return j.dump();
}

InfillFn memoized_ngram_infill(const NGramModel& model, const InfillOptions& options) {
    struct Cache {
        std::mutex mutex;
        std::unordered_map<std::string, std::vector<InfillCandidate>> entries;
    };
    auto cache = std::make_shared<Cache>();
    const NGramModel* m = &model;
    return [cache, m, options](const MaskedQuery& query) {
        std::size_t mask = query.mask_position();
        std::size_t hist = static_cast<std::size_t>(m->order() - 1);
        std::string key;
        std::size_t lo = mask > hist ? mask - hist : 0;
        for (std::size_t i = lo; i < mask; ++i) {
            key += query.masked_text[i];
            key += '\x1f';
        }
        key += '\x1e';
        key += (mask + 1 < query.masked_text.size()) ? query.masked_text[mask + 1]
                                                     : kEndSymbol;
        {
            std::lock_guard<std::mutex> lock(cache->mutex);
            auto it = cache->entries.find(key);
            if (it != cache->entries.end()) return it->second;
        }
        auto result = infill(*m, query, options);
        std::lock_guard<std::mutex> lock(cache->mutex);
        return cache->entries.emplace(key, std::move(result)).first->second;
    };
}

std::vector<AdversarialExample> generate_adversarial(
    const std::vector<CorpusEntry>& corpus, const VerbLexicon& lexicon,
    const InfillFn& infill_fn, const GenConfig& cfg, unsigned jobs, GenStats& stats) {
    std::vector<std::vector<AdversarialExample>> per_doc(corpus.size());
    std::vector<std::size_t> skipped(corpus.size(), 0);

    parallel_for_index(corpus.size(), jobs, [&](std::size_t i) {
        const CorpusEntry& entry = corpus[i];
        DetRng rng(cfg.seed, entry.document.id);
        auto queries = mask_reference(entry.summary, entry.document, lexicon);
        for (const auto& q : queries) {
            auto candidates = infill_fn(q);
            auto negs = corrupt(q, candidates, cfg, entry.summary, rng);
            if (negs.empty()) {
                ++skipped[i];
                continue;
            }
            for (auto& n : negs) per_doc[i].push_back(std::move(n));
        }
    });

    std::vector<AdversarialExample> negatives;
    std::vector<SummaryUnit> references;
    references.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (auto& ex : per_doc[i]) negatives.push_back(std::move(ex));
        references.push_back(corpus[i].summary);
        stats.skipped_masks += skipped[i];
    }
    stats.documents = corpus.size();
    return assemble_dataset(std::move(negatives), references, cfg, stats);
}

std::string GenStats::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["negatives"] = negatives;
    j["positives"] = positives;
    j["skipped_masks"] = skipped_masks;
    j["documents"] = documents;
    return j.dump(2);
}

}  // namespace factforge
