#include "factforge/infill.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "factforge/error.hpp"
#include "factforge/util.hpp"
#include "json.hpp"

namespace factforge {

std::size_t MaskedQuery::mask_position() const {
    std::size_t pos = masked_text.size();
    std::size_t found = 0;
    for (std::size_t i = 0; i < masked_text.size(); ++i) {
        if (masked_text[i] == kMaskToken) {
            pos = i;
            ++found;
        }
    }
    if (found != 1)
        throw std::invalid_argument("masked_text must contain exactly one " +
                                    std::string(kMaskToken));
    return pos;
}

NGramModel::NGramModel(int order, double alpha) : order_(order), alpha_(alpha) {
    if (order < 2) throw std::invalid_argument("n-gram order must be >= 2");
    if (alpha <= 0.0) throw std::invalid_argument("smoothing alpha must be > 0");
}

std::string NGramModel::history_key(const std::vector<std::string>& history) const {
    // Histories never contain '\x1f'; tokens are whitespace-free but may in
    // principle contain anything else, so use a control separator.
    std::string key;
    std::size_t take = std::min<std::size_t>(history.size(),
                                             static_cast<std::size_t>(order_ - 1));
    for (std::size_t i = history.size() - take; i < history.size(); ++i) {
        if (!key.empty()) key += '\x1f';
        key += history[i];
    }
    return key;
}

void NGramModel::add_sentence(const std::vector<std::string>& tokens) {
    std::vector<std::string> seq;
    seq.reserve(tokens.size() + static_cast<std::size_t>(order_));
    for (int i = 0; i < order_ - 1; ++i) seq.push_back(kStartSymbol);
    seq.insert(seq.end(), tokens.begin(), tokens.end());
    seq.push_back(kEndSymbol);

    for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < seq.size(); ++i) {
        std::vector<std::string> hist(seq.begin() + static_cast<std::ptrdiff_t>(
                                          i - static_cast<std::size_t>(order_ - 1)),
                                      seq.begin() + static_cast<std::ptrdiff_t>(i));
        std::string key = history_key(hist);
        ++counts_[key][seq[i]];
        ++totals_[key];
    }
    for (const auto& t : tokens) vocab_.insert(t);
    vocab_.insert(kEndSymbol);
}

void NGramModel::add_document(const Document& doc) {
    for (const auto& s : doc.sentences) add_sentence(s.tokens);
}

void NGramModel::declare_vocabulary(const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) vocab_.insert(t);
}

std::vector<std::string> NGramModel::content_vocabulary() const {
    std::vector<std::string> out;
    out.reserve(vocab_.size());
    for (const auto& t : vocab_) {
        if (t == kEndSymbol || t == kStartSymbol || t == kMaskToken) continue;
        out.push_back(t);
    }
    return out;
}

std::uint64_t NGramModel::history_total(const std::vector<std::string>& history) const {
    auto it = totals_.find(history_key(history));
    return it == totals_.end() ? 0 : it->second;
}

std::uint64_t NGramModel::pair_count(const std::vector<std::string>& history,
                                     const std::string& token) const {
    auto it = counts_.find(history_key(history));
    if (it == counts_.end()) return 0;
    auto jt = it->second.find(token);
    return jt == it->second.end() ? 0 : jt->second;
}

double NGramModel::log_prob(const std::vector<std::string>& history,
                            const std::string& token) const {
    if (vocab_.empty()) return -std::numeric_limits<double>::infinity();
    double c = static_cast<double>(pair_count(history, token));
    double total = static_cast<double>(history_total(history));
    double v = static_cast<double>(vocab_.size());
    return std::log((c + alpha_) / (total + alpha_ * v));
}

NGramModel train_ngram(const std::vector<Document>& documents, int order,
                       double alpha) {
    NGramModel model(order, alpha);
    for (const auto& d : documents) model.add_document(d);
    return model;
}

std::vector<MaskedQuery> build_infill_training(const Document& document,
                                               const VerbLexicon& lexicon,
                                               std::size_t k) {
    std::vector<MaskedQuery> queries;
    std::size_t limit = std::min(k, document.sentences.size());
    for (std::size_t si = 0; si < limit; ++si) {
        const Sentence& sentence = document.sentences[si];
        auto triple = extract_triples(sentence, lexicon);
        if (triple.empty()) continue;

        std::vector<std::string> context;
        for (const auto& other : document.sentences) {
            if (other.index == si) continue;
            context.insert(context.end(), other.tokens.begin(), other.tokens.end());
        }
        for (const auto& span : triple) {
            MaskedQuery q;
            q.doc_id = document.id;
            q.sentence_index = si;
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

namespace {

struct Hypothesis {
    std::vector<std::string> tokens;
    double score = 0.0;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tokens < b.tokens;
}

}  // namespace

std::vector<InfillCandidate> infill(const NGramModel& model, const MaskedQuery& query,
                                    const InfillOptions& options) {
    if (options.beam_size < 1) throw std::invalid_argument("beam_size must be >= 1");
    if (options.max_span_len < 1)
        throw std::invalid_argument("max_span_len must be >= 1");

    std::size_t mask = query.mask_position();
    auto vocab = model.content_vocabulary();
    if (vocab.empty()) return {};

    // Left context padded like training; only the trailing order-1 tokens
    // ever enter a history window.
    std::vector<std::string> left;
    for (int i = 0; i < model.order() - 1; ++i) left.push_back(kStartSymbol);
    left.insert(left.end(), query.masked_text.begin(),
                query.masked_text.begin() + static_cast<std::ptrdiff_t>(mask));
    const std::string bridge = (mask + 1 < query.masked_text.size())
                                   ? query.masked_text[mask + 1]
                                   : std::string(kEndSymbol);

    auto history_after = [&](const std::vector<std::string>& span) {
        std::vector<std::string> h = left;
        h.insert(h.end(), span.begin(), span.end());
        return h;
    };

    std::vector<Hypothesis> beam = {Hypothesis{}};
    std::vector<Hypothesis> pool;

    for (int len = 1; len <= options.max_span_len; ++len) {
        std::vector<Hypothesis> expanded;
        expanded.reserve(beam.size() * vocab.size());
        for (const auto& hyp : beam) {
            auto hist = history_after(hyp.tokens);
            for (const auto& w : vocab) {
                Hypothesis next;
                next.tokens = hyp.tokens;
                next.tokens.push_back(w);
                next.score = hyp.score + model.log_prob(hist, w);
                expanded.push_back(std::move(next));
            }
        }
        std::sort(expanded.begin(), expanded.end(), better);
        if (expanded.size() > static_cast<std::size_t>(options.beam_size))
            expanded.resize(static_cast<std::size_t>(options.beam_size));
        beam = std::move(expanded);

        for (const auto& hyp : beam) {
            Hypothesis done = hyp;
            done.score += model.log_prob(history_after(hyp.tokens), bridge);
            if (options.length_normalize)
                done.score /= static_cast<double>(done.tokens.size());
            pool.push_back(std::move(done));
        }
    }

    std::sort(pool.begin(), pool.end(), better);
    if (pool.size() > static_cast<std::size_t>(options.beam_size))
        pool.resize(static_cast<std::size_t>(options.beam_size));

    std::vector<InfillCandidate> out;
    out.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        InfillCandidate c;
        c.tokens = std::move(pool[i].tokens);
        c.rank = static_cast<int>(i + 1);
        c.score = pool[i].score;
        out.push_back(std::move(c));
    }
    return out;
}

std::string NGramModel::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["order"] = order_;
    j["alpha"] = alpha_;
    j["vocab"] = vocab_;
    auto counts = nlohmann::json::array();
    std::vector<std::string> keys;
    keys.reserve(counts_.size());
    for (const auto& [k, _] : counts_) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (const auto& k : keys) {
        nlohmann::json entry;
        auto hist = nlohmann::json::array();
        std::size_t start = 0;
        while (true) {
            auto sep = k.find('\x1f', start);
            hist.push_back(k.substr(start, sep == std::string::npos ? sep : sep - start));
            if (sep == std::string::npos) break;
            start = sep + 1;
        }
        entry["history"] = hist;
        entry["next"] = counts_.at(k);
        counts.push_back(std::move(entry));
    }
    j["counts"] = std::move(counts);
    return j.dump();
}

NGramModel NGramModel::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("schema", 0) != 1)
        throw FatalError("unrecognized model file format");
    NGramModel model(j.at("order").get<int>(), j.at("alpha").get<double>());
    for (const auto& t : j.at("vocab")) model.vocab_.insert(t.get<std::string>());
    for (const auto& entry : j.at("counts")) {
        std::vector<std::string> hist;
        for (const auto& h : entry.at("history")) hist.push_back(h.get<std::string>());
        std::string key = model.history_key(hist);
        for (const auto& [tok, c] : entry.at("next").items()) {
            std::uint64_t count = c.get<std::uint64_t>();
            model.counts_[key][tok] += count;
            model.totals_[key] += count;
        }
    }
    return model;
}

void NGramModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FatalError("cannot write model file: " + path);
    out << to_json() << '\n';
}

NGramModel NGramModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FatalError("model file not found: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json(text);
}

}  // namespace factforge
