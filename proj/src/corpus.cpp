#include "factforge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "factforge/error.hpp"
#include "factforge/util.hpp"
#include "json.hpp"

namespace factforge {

namespace {

constexpr std::string_view kDetachPunct = ".,!?;:\"'()";

bool is_detach_punct(char c) {
    return kDetachPunct.find(c) != std::string_view::npos;
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

const std::set<std::string>& abbreviations() {
    static const std::set<std::string> abbr = {"mr", "mrs", "dr", "st",
                                               "u.s", "e.g", "i.e"};
    return abbr;
}

// Word ending at position `end` (exclusive), skipping whitespace between the
// word and the delimiter, with leading detach punctuation stripped.
std::string word_before(const std::string& raw, std::size_t end) {
    std::size_t j = end;
    while (j > 0 && is_space(raw[j - 1])) --j;
    std::size_t i = j;
    while (i > 0 && !is_space(raw[i - 1])) --i;
    while (i < j && is_detach_punct(raw[i])) ++i;
    std::string word = raw.substr(i, j - i);
    std::transform(word.begin(), word.end(), word.begin(), lower);
    return word;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& raw) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t len = raw.size();
    while (i < len) {
        while (i < len && is_space(raw[i])) ++i;
        if (i >= len) break;
        std::size_t j = i;
        while (j < len && !is_space(raw[j])) ++j;

        std::size_t lo = i, hi = j;
        while (lo < hi && is_detach_punct(raw[lo])) {
            out.push_back(std::string(1, raw[lo]));
            ++lo;
        }
        std::size_t core_end = hi;
        while (core_end > lo && is_detach_punct(raw[core_end - 1])) --core_end;
        if (core_end > lo) {
            std::string core = raw.substr(lo, core_end - lo);
            std::transform(core.begin(), core.end(), core.begin(), lower);
            out.push_back(std::move(core));
        }
        for (std::size_t k = core_end; k < hi; ++k)
            out.push_back(std::string(1, raw[k]));
        i = j;
    }
    return out;
}

std::vector<Sentence> segment_sentences(const std::string& raw) {
    std::vector<Sentence> sentences;
    const std::size_t len = raw.size();

    auto push = [&sentences](const std::string& text) {
        std::size_t b = 0, e = text.size();
        while (b < e && is_space(text[b])) ++b;
        while (e > b && is_space(text[e - 1])) --e;
        if (b == e) return;
        Sentence s;
        s.raw = text.substr(b, e - b);
        s.tokens = tokenize(s.raw);
        if (s.tokens.empty()) return;
        s.index = sentences.size();
        sentences.push_back(std::move(s));
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = raw[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 < len && !is_space(raw[i + 1])) continue;
        if (c == '.' && abbreviations().count(word_before(raw, i))) continue;
        push(raw.substr(start, i - start + 1));
        start = i + 1;
        while (start < len && is_space(raw[start])) ++start;
    }
    if (start < len) push(raw.substr(start));
    return sentences;
}

std::vector<std::string> Document::all_tokens() const {
    std::vector<std::string> out;
    for (const auto& s : sentences)
        out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    return out;
}

std::vector<std::string> SummaryUnit::all_tokens() const {
    std::vector<std::string> out;
    for (const auto& s : sentences)
        out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    return out;
}

std::string SummaryUnit::joined_text() const {
    return join_tokens(all_tokens());
}

Document make_document(std::string id, std::string raw) {
    Document d;
    d.id = std::move(id);
    d.raw = std::move(raw);
    d.sentences = segment_sentences(d.raw);
    return d;
}

SummaryUnit make_summary(std::string doc_id, SummaryKind kind, const std::string& raw) {
    SummaryUnit u;
    u.doc_id = std::move(doc_id);
    u.kind = kind;
    u.sentences = segment_sentences(raw);
    return u;
}

std::string LoadReport::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["loaded"] = loaded;
    j["skipped"] = nlohmann::json::array();
    for (const auto& s : skipped)
        j["skipped"].push_back({{"line", s.line_number}, {"reason", s.reason}});
    return j.dump(2);
}

std::vector<CorpusEntry> load_corpus(const std::string& path, SummaryKind kind,
                                     LoadReport& report) {
    std::ifstream in(path);
    if (!in) throw FatalError("corpus file not found: " + path);

    std::vector<CorpusEntry> entries;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            report.skipped.push_back({line_no, "invalid JSON"});
            continue;
        }
        if (!j.contains("id") || !j["id"].is_string() ||
            !j.contains("document") || !j["document"].is_string() ||
            !j.contains("summary") || !j["summary"].is_string()) {
            report.skipped.push_back({line_no, "missing or non-string id/document/summary"});
            continue;
        }
        std::string id = j["id"].get<std::string>();
        if (!seen_ids.insert(id).second)
            throw FatalError("duplicate document id '" + id + "' at line " +
                             std::to_string(line_no));
        CorpusEntry e;
        e.document = make_document(id, j["document"].get<std::string>());
        e.summary = make_summary(id, kind, j["summary"].get<std::string>());
        entries.push_back(std::move(e));
        ++report.loaded;
    }
    return entries;
}

}  // namespace factforge
