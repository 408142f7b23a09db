#pragma once

#include <string>
#include <vector>

namespace factforge {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

RougeScore make_rouge(double precision, double recall);

// Clipped-count n-gram overlap (multiset intersection). Either side having
// no n-grams yields all zeros.
RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, std::size_t n);

// Sentence-level longest-common-subsequence variant.
RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference);

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

}  // namespace factforge
