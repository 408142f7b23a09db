#include "factforge/passage.hpp"

#include <algorithm>
#include <set>

#include "factforge/rouge.hpp"

namespace factforge {

PassageSet select_passages(const Sentence& summary_sentence, const Document& document,
                           std::size_t k, std::size_t window) {
    PassageSet out;
    out.doc_id = document.id;
    out.window = window;
    const std::size_t n = document.sentences.size();
    if (n == 0 || k == 0) return out;

    std::vector<std::pair<std::size_t, double>> scored;
    scored.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f1 = rouge_l(document.sentences[i].tokens, summary_sentence.tokens).f1;
        scored.emplace_back(i, f1);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    scored.resize(std::min(k, scored.size()));
    out.selected = scored;

    std::set<std::size_t> covered;
    for (const auto& [idx, _] : scored) {
        std::size_t lo = idx >= window ? idx - window : 0;
        std::size_t hi = std::min(n - 1, idx + window);
        for (std::size_t j = lo; j <= hi; ++j) covered.insert(j);
    }
    out.covered.assign(covered.begin(), covered.end());
    for (std::size_t idx : out.covered) {
        const auto& toks = document.sentences[idx].tokens;
        out.text.insert(out.text.end(), toks.begin(), toks.end());
    }
    return out;
}

}  // namespace factforge
