#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace factforge {

// FNV-1a, used wherever a stable cross-platform hash of a string is needed.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic per-document RNG: all sampling decisions derive from
// (seed, doc_id), never from stream position or thread schedule.
class DetRng {
public:
    DetRng(std::uint64_t seed, std::string_view doc_id)
        : eng_(splitmix64(seed ^ fnv1a64(doc_id))) {}

    std::uint64_t next() { return eng_(); }

    // n must be > 0. Modulo bias is negligible for 64-bit draws.
    std::size_t bounded(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// Stable hash of a keyed decision, mapped to [0,1).
inline double hash_unit(std::uint64_t seed, std::string_view key) {
    std::uint64_t u = splitmix64(seed ^ fnv1a64(key));
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

inline std::string join_tokens(const std::vector<std::string>& tokens,
                               std::string_view sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += sep;
        out += tokens[i];
    }
    return out;
}

// Splits a space-joined token string back into tokens. Tokens never contain
// whitespace, so this is the exact inverse of join_tokens.
std::vector<std::string> split_tokens(std::string_view joined);

// Runs fn(i) for i in [0,n). jobs <= 1 runs inline; otherwise items are
// claimed by index from a shared counter, so results keyed by index are
// identical for any worker count.
void parallel_for_index(std::size_t n, unsigned jobs,
                        const std::function<void(std::size_t)>& fn);

}  // namespace factforge
