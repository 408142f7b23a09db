#include "factforge/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "factforge/error.hpp"

namespace factforge {

using nlohmann::json;

BackendSpec parse_backend(const std::string& field, const std::string& text,
                          const std::vector<std::string>& plain_kinds) {
    for (const auto& kind : plain_kinds)
        if (text == kind) return {kind, ""};
    if (text.rfind("remote:", 0) == 0) {
        std::string url = text.substr(7);
        if (url.empty())
            throw ConfigError(field + ": remote selector needs a URL after the colon");
        return {"remote", url};
    }
    std::string allowed;
    for (const auto& kind : plain_kinds) allowed += kind + ", ";
    throw ConfigError(field + ": expected one of " + allowed + "or remote:<url>; got \"" +
                      text + "\"");
}

namespace {

void throw_problems(const std::vector<std::string>& problems) {
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ConfigError(msg.str());
}

}  // namespace

void validate_config(const PipelineConfig& cfg) {
    std::vector<std::string> problems;
    auto bad = [&](const std::string& msg) { problems.push_back(msg); };

    if (cfg.ngram_order < 2) bad("ngram_order: must be >= 2");
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) bad("alpha: must be > 0");
    if (cfg.beam_size < 1) bad("beam_size: must be >= 1");
    if (cfg.max_span_len < 1) bad("max_span_len: must be >= 1");
    if (cfg.rank_lo < 1) bad("rank_lo: ranks are 1-based, must be >= 1");
    if (cfg.rank_hi < cfg.rank_lo) bad("rank_hi: must be >= rank_lo");
    if (cfg.rank_hi > cfg.beam_size)
        bad("rank_hi: exceeds beam_size, so the rank window cannot fill");
    if (cfg.positive_ratio < 0.0 || cfg.positive_ratio >= 1.0 ||
        !std::isfinite(cfg.positive_ratio))
        bad("positive_ratio: must be in [0,1)");
    if (cfg.delta < 0.0 || !std::isfinite(cfg.delta)) bad("delta: must be >= 0");
    if (cfg.k_first < 1) bad("k_first: must be >= 1");
    if (cfg.k_passages < 1) bad("k_passages: must be >= 1");
    if (cfg.max_in < 1) bad("max_in: must be >= 1");
    if (cfg.max_out < 1) bad("max_out: must be >= 1");
    if (cfg.corpus.empty()) bad("corpus: path must not be empty");
    if (cfg.lexicon.empty()) bad("lexicon: path must not be empty");
    if (cfg.out_dir.empty()) bad("out_dir: path must not be empty");

    // Selector syntax; errors keep their field names.
    try {
        parse_backend("infill", cfg.infill, {"local"});
    } catch (const ConfigError& e) {
        bad(e.what());
    }
    try {
        parse_backend("corrector", cfg.corrector, {"baseline", "identity"});
    } catch (const ConfigError& e) {
        bad(e.what());
    }
    try {
        parse_backend("filter", cfg.filter, {"none"});
    } catch (const ConfigError& e) {
        bad(e.what());
    }

    throw_problems(problems);
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_discarded())
        throw ConfigError("config file is not valid JSON: " + path);
    if (!parsed.is_object()) throw ConfigError("config root must be a JSON object");

    PipelineConfig cfg;
    std::vector<std::string> problems;

    auto string_field = [&](const char* key, std::string& out) {
        return std::pair<std::string, std::function<void(const json&)>>(
            key, [&out, key, &problems](const json& v) {
                if (v.is_string())
                    out = v.get<std::string>();
                else
                    problems.push_back(std::string(key) + ": expected a string");
            });
    };
    auto uint_field = [&](const char* key, auto& out) {
        return std::pair<std::string, std::function<void(const json&)>>(
            key, [&out, key, &problems](const json& v) {
                if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
                    out = static_cast<std::decay_t<decltype(out)>>(
                        v.get<std::uint64_t>());
                else
                    problems.push_back(std::string(key) +
                                       ": expected a non-negative integer");
            });
    };
    auto int_field = [&](const char* key, int& out) {
        return std::pair<std::string, std::function<void(const json&)>>(
            key, [&out, key, &problems](const json& v) {
                if (v.is_number_integer())
                    out = v.get<int>();
                else
                    problems.push_back(std::string(key) + ": expected an integer");
            });
    };
    auto real_field = [&](const char* key, double& out) {
        return std::pair<std::string, std::function<void(const json&)>>(
            key, [&out, key, &problems](const json& v) {
                if (v.is_number())
                    out = v.get<double>();
                else
                    problems.push_back(std::string(key) + ": expected a number");
            });
    };
    auto bool_field = [&](const char* key, bool& out) {
        return std::pair<std::string, std::function<void(const json&)>>(
            key, [&out, key, &problems](const json& v) {
                if (v.is_boolean())
                    out = v.get<bool>();
                else
                    problems.push_back(std::string(key) + ": expected a boolean");
            });
    };

    const std::vector<std::pair<std::string, std::function<void(const json&)>>>
        fields = {
            string_field("corpus", cfg.corpus),
            string_field("lexicon", cfg.lexicon),
            string_field("out_dir", cfg.out_dir),
            uint_field("seed", cfg.seed),
            uint_field("k_first", cfg.k_first),
            uint_field("k_passages", cfg.k_passages),
            uint_field("window", cfg.window),
            int_field("ngram_order", cfg.ngram_order),
            real_field("alpha", cfg.alpha),
            uint_field("beam_size", cfg.beam_size),
            uint_field("max_span_len", cfg.max_span_len),
            uint_field("rank_lo", cfg.rank_lo),
            uint_field("rank_hi", cfg.rank_hi),
            real_field("positive_ratio", cfg.positive_ratio),
            real_field("delta", cfg.delta),
            uint_field("max_in", cfg.max_in),
            uint_field("max_out", cfg.max_out),
            bool_field("length_normalize", cfg.length_normalize),
            bool_field("use_summary_context", cfg.use_summary_context),
            bool_field("use_relevant_passages", cfg.use_relevant_passages),
            string_field("infill", cfg.infill),
            string_field("corrector", cfg.corrector),
            string_field("filter", cfg.filter),
        };

    for (const auto& [key, value] : parsed.items()) {
        bool known = false;
        for (const auto& [name, apply] : fields) {
            if (name == key) {
                apply(value);
                known = true;
                break;
            }
        }
        if (!known) problems.push_back(key + ": unknown key");
    }
    throw_problems(problems);

    validate_config(cfg);
    return cfg;
}

std::string PipelineConfig::to_json() const {
    json j;
    j["corpus"] = corpus;
    j["lexicon"] = lexicon;
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["k_first"] = k_first;
    j["k_passages"] = k_passages;
    j["window"] = window;
    j["ngram_order"] = ngram_order;
    j["alpha"] = alpha;
    j["beam_size"] = beam_size;
    j["max_span_len"] = max_span_len;
    j["rank_lo"] = rank_lo;
    j["rank_hi"] = rank_hi;
    j["positive_ratio"] = positive_ratio;
    j["delta"] = delta;
    j["max_in"] = max_in;
    j["max_out"] = max_out;
    j["length_normalize"] = length_normalize;
    j["use_summary_context"] = use_summary_context;
    j["use_relevant_passages"] = use_relevant_passages;
    j["infill"] = infill;
    j["corrector"] = corrector;
    j["filter"] = filter;
    return j.dump(2);
}

}  // namespace factforge
