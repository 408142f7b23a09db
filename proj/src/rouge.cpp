#include "factforge/rouge.hpp"

#include <algorithm>
#include <map>

namespace factforge {

RougeScore make_rouge(double precision, double recall) {
    RougeScore s;
    s.precision = precision;
    s.recall = recall;
    s.f1 = (precision + recall > 0.0)
               ? 2.0 * precision * recall / (precision + recall)
               : 0.0;
    return s;
}

namespace {

std::map<std::vector<std::string>, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[{tokens.begin() + static_cast<std::ptrdiff_t>(i),
                  tokens.begin() + static_cast<std::ptrdiff_t>(i + n)}];
    return counts;
}

}  // namespace

RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, std::size_t n) {
    auto cand = ngram_counts(candidate, n);
    auto ref = ngram_counts(reference, n);
    std::size_t cand_total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
    std::size_t ref_total = reference.size() >= n ? reference.size() - n + 1 : 0;
    if (cand_total == 0 || ref_total == 0) return {};

    std::size_t matched = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) matched += std::min(count, it->second);
    }
    return make_rouge(static_cast<double>(matched) / static_cast<double>(cand_total),
                      static_cast<double>(matched) / static_cast<double>(ref_total));
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    // Two-row dynamic program.
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference) {
    if (candidate.empty() || reference.empty()) return {};
    auto lcs = static_cast<double>(lcs_length(candidate, reference));
    return make_rouge(lcs / static_cast<double>(candidate.size()),
                      lcs / static_cast<double>(reference.size()));
}

}  // namespace factforge
