#include "factforge/extract.hpp"

#include <fstream>

#include "factforge/error.hpp"
#include "factforge/util.hpp"

namespace factforge {

namespace {

const std::set<std::string>& auxiliaries() {
    static const std::set<std::string> aux = {"is",  "are",  "was",  "were", "has",
                                              "have", "had", "will", "would"};
    return aux;
}

const std::set<std::string>& determiners() {
    static const std::set<std::string> det = {"a", "an", "the"};
    return det;
}

const std::set<std::string>& prepositions() {
    static const std::set<std::string> prep = {
        "about",  "above",   "across", "after",  "against", "along",  "around",
        "at",     "before",  "behind", "below",  "between", "by",     "during",
        "for",    "from",    "in",     "inside", "into",    "near",   "of",
        "off",    "on",      "onto",   "over",   "through", "to",     "toward",
        "under",  "until",   "up",     "upon",   "with",    "within", "without"};
    return prep;
}

bool is_punct_token(const std::string& tok) {
    if (tok.empty()) return false;
    for (char c : tok) {
        if (std::string_view(".,!?;:\"'()").find(c) == std::string_view::npos)
            return false;
    }
    return true;
}

TripleSpan make_span(std::size_t sentence_index, SpanRole role, std::size_t start,
                     std::size_t end, const std::vector<std::string>& tokens) {
    TripleSpan s;
    s.sentence_index = sentence_index;
    s.role = role;
    s.start = start;
    s.end = end;
    s.text = join_tokens({tokens.begin() + static_cast<std::ptrdiff_t>(start),
                          tokens.begin() + static_cast<std::ptrdiff_t>(end)});
    return s;
}

}  // namespace

const char* role_name(SpanRole role) {
    switch (role) {
        case SpanRole::Subject: return "subject";
        case SpanRole::Relation: return "relation";
        case SpanRole::Object: return "object";
    }
    return "subject";
}

SpanRole role_from_name(const std::string& name) {
    if (name == "subject") return SpanRole::Subject;
    if (name == "relation") return SpanRole::Relation;
    if (name == "object") return SpanRole::Object;
    throw FatalError("unknown span role: " + name);
}

VerbLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FatalError("verb lexicon not found: " + path);
    VerbLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = tokenize(line);
        for (auto& t : toks) lex.insert(std::move(t));
    }
    return lex;
}

std::vector<TripleSpan> extract_triples(const Sentence& sentence,
                                        const VerbLexicon& lexicon) {
    const auto& toks = sentence.tokens;
    const std::size_t n = toks.size();

    auto is_verbish = [&](std::size_t i) {
        return lexicon.count(toks[i]) > 0 || auxiliaries().count(toks[i]) > 0;
    };

    // First lexicon verb, extended over adjacent auxiliaries/verbs.
    std::size_t verb = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (lexicon.count(toks[i])) {
            verb = i;
            break;
        }
    }
    if (verb == n) return {};

    std::size_t rel_start = verb;
    while (rel_start > 0 && is_verbish(rel_start - 1)) --rel_start;
    std::size_t rel_end = verb + 1;
    while (rel_end < n && is_verbish(rel_end)) ++rel_end;

    std::size_t subj_start = 0;
    while (subj_start < rel_start && determiners().count(toks[subj_start])) ++subj_start;
    if (subj_start >= rel_start) return {};

    std::size_t obj_end = rel_end;
    while (obj_end < n && !prepositions().count(toks[obj_end]) &&
           !is_punct_token(toks[obj_end]))
        ++obj_end;
    if (obj_end == rel_end) return {};

    return {make_span(sentence.index, SpanRole::Subject, subj_start, rel_start, toks),
            make_span(sentence.index, SpanRole::Relation, rel_start, rel_end, toks),
            make_span(sentence.index, SpanRole::Object, rel_end, obj_end, toks)};
}

}  // namespace factforge
