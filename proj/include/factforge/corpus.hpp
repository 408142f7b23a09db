#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace factforge {

struct Sentence {
    std::size_t index = 0;               // position within the parent unit
    std::vector<std::string> tokens;     // lowercase, whitespace-free
    std::string raw;
};

struct Document {
    std::string id;
    std::string raw;
    std::vector<Sentence> sentences;

    // All sentence tokens concatenated in document order.
    std::vector<std::string> all_tokens() const;
};

enum class SummaryKind { Reference, Generated, Corrected };

struct SummaryUnit {
    std::string doc_id;
    SummaryKind kind = SummaryKind::Reference;
    std::vector<Sentence> sentences;

    std::vector<std::string> all_tokens() const;
    std::string joined_text() const;  // sentence tokens joined with single spaces
};

// Lowercases, splits on whitespace, and detaches leading/trailing
// punctuation .,!?;:"'() as single-character tokens. Internal hyphens,
// digits and internal periods ("e-mail", "u.s") stay inside their token.
std::vector<std::string> tokenize(const std::string& raw);

// Splits on . ! ? followed by whitespace or end-of-string. A period does not
// end a sentence when the word before it is one of {mr, mrs, dr, st, u.s,
// e.g, i.e}; whitespace between that word and the period is ignored so
// token-joined text re-segments like the original. The delimiter stays with
// its sentence.
std::vector<Sentence> segment_sentences(const std::string& raw);

Document make_document(std::string id, std::string raw);
SummaryUnit make_summary(std::string doc_id, SummaryKind kind, const std::string& raw);

struct CorpusEntry {
    Document document;
    SummaryUnit summary;
};

struct LoadReport {
    struct Skipped {
        std::size_t line_number = 0;  // 1-based
        std::string reason;
    };
    std::size_t loaded = 0;
    std::vector<Skipped> skipped;

    std::string to_json() const;
};

// Reads a JSONL corpus (one {"id","document","summary"} object per line).
// Malformed lines are skipped and recorded in the report; a missing file or
// a duplicate id throws FatalError. Blank lines are ignored.
std::vector<CorpusEntry> load_corpus(const std::string& path, SummaryKind kind,
                                     LoadReport& report);

}  // namespace factforge
