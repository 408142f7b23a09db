#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "factforge/corpus.hpp"

namespace factforge {

enum class SpanRole { Subject, Relation, Object };

const char* role_name(SpanRole role);
SpanRole role_from_name(const std::string& name);

struct TripleSpan {
    std::size_t sentence_index = 0;
    SpanRole role = SpanRole::Subject;
    std::size_t start = 0;  // inclusive token index
    std::size_t end = 0;    // exclusive token index
    std::string text;       // join of tokens[start..end)
};

using VerbLexicon = std::set<std::string>;

// One token per line; '#' starts a comment. Throws FatalError if missing.
VerbLexicon load_lexicon(const std::string& path);

// Chunking rule standing in for a full open-IE system. The relation is the
// first maximal run of lexicon verbs and auxiliaries that contains at least
// one lexicon verb; the subject runs from the sentence start (leading
// determiners skipped) to the relation; the object runs from the relation to
// the first preposition, punctuation token, or sentence end. Returns all
// three spans or nothing.
std::vector<TripleSpan> extract_triples(const Sentence& sentence,
                                        const VerbLexicon& lexicon);

}  // namespace factforge
