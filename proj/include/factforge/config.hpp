#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace factforge {

// Parsed form of a backend selector: a plain kind ("local", "baseline",
// "none") or "remote:<url>".
struct BackendSpec {
    std::string kind;
    std::string url;  // only for kind == "remote"
};

// Accepts one of `plain_kinds` verbatim or remote:<url>; anything else
// raises ConfigError mentioning `field`.
BackendSpec parse_backend(const std::string& field, const std::string& text,
                          const std::vector<std::string>& plain_kinds);

struct PipelineConfig {
    std::string corpus = "data/toy_corpus.jsonl";
    std::string lexicon = "data/verbs.txt";
    std::string out_dir = "out";

    std::uint64_t seed = 7;
    std::size_t k_first = 5;     // document sentences used for infill training
    std::size_t k_passages = 3;  // retrieved passages per summary sentence
    std::size_t window = 2;      // passage expansion, sentences each side
    int ngram_order = 3;
    double alpha = 1.0;
    std::size_t beam_size = 16;
    std::size_t max_span_len = 4;
    std::size_t rank_lo = 5;  // corruption candidates drawn from this window
    std::size_t rank_hi = 15;
    double positive_ratio = 0.20;
    double delta = 0.05;  // baseline corrector acceptance margin, nats/token
    std::size_t max_in = 512;
    std::size_t max_out = 128;
    bool length_normalize = false;
    bool use_summary_context = true;
    bool use_relevant_passages = true;

    std::string infill = "local";        // local | remote:<url>
    std::string corrector = "baseline";  // baseline | remote:<url>
    std::string filter = "none";         // none | remote:<url>

    // Resolved-config echo; every run logs this so artifacts are
    // reproducible from their logs.
    std::string to_json() const;
};

// Overlays file values onto defaults. Unknown keys, type mismatches and
// out-of-bounds values raise ConfigError naming every offending field.
PipelineConfig load_config(const std::string& path);

// Bounds checks alone (also called after flag overrides).
void validate_config(const PipelineConfig& cfg);

}  // namespace factforge
