#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "factforge/corpus.hpp"

namespace factforge {

struct PassageSet {
    std::string doc_id;
    std::vector<std::pair<std::size_t, double>> selected;  // (index, rouge-l f1)
    std::size_t window = 0;
    std::vector<std::size_t> covered;  // sorted, deduplicated, window-expanded
    std::vector<std::string> text;     // covered sentence tokens in document order
};

// Scores every document sentence with ROUGE-L F1 against the summary
// sentence, keeps the top-k (ties break toward the lower index), expands
// each pick by +/-window in-bounds, and merges overlaps.
PassageSet select_passages(const Sentence& summary_sentence, const Document& document,
                           std::size_t k = 3, std::size_t window = 2);

}  // namespace factforge
