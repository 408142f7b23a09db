#include "factforge/remote.hpp"

#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "factforge/error.hpp"
#include "factforge/util.hpp"

namespace factforge {

namespace {

using nlohmann::json;

json post_json(const std::string& base_url, const std::string& path,
               const json& body, const RemoteOptions& options) {
    const std::string payload = body.dump();
    std::string last_failure;

    for (int attempt = 1; attempt <= options.attempts; ++attempt) {
        httplib::Client client(base_url);
        client.set_connection_timeout(options.timeout_seconds, 0);
        client.set_read_timeout(options.timeout_seconds, 0);
        client.set_write_timeout(options.timeout_seconds, 0);

        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_failure = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw RemoteError(base_url + path + " answered HTTP " +
                              std::to_string(res->status));

        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded())
            throw ProtocolError(base_url + path + " returned a body that is not JSON");
        return parsed;
    }

    throw RemoteError(base_url + path + " unreachable after " +
                      std::to_string(options.attempts) + " attempts (" +
                      last_failure + ")");
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw ProtocolError(where + ": missing string field \"" + key + "\"");
    return obj[key].get<std::string>();
}

}  // namespace

std::vector<InfillCandidate> remote_infill(const std::string& base_url,
                                           const MaskedQuery& query,
                                           std::size_t beam_size,
                                           const RemoteOptions& options) {
    std::vector<std::string> context = query.context;
    if (context.size() > options.max_context_tokens)
        context.resize(options.max_context_tokens);

    json body;
    body["masked_text"] = query.masked_text;
    body["context"] = context;
    body["beam_size"] = beam_size;

    json reply = post_json(base_url, "/infill", body, options);
    const std::string where = base_url + "/infill";
    if (!reply.contains("candidates") || !reply["candidates"].is_array())
        throw ProtocolError(where + ": missing \"candidates\" array");

    std::vector<InfillCandidate> out;
    double prev_score = 0.0;
    for (const auto& entry : reply["candidates"]) {
        if (!entry.is_object() || !entry.contains("tokens") ||
            !entry["tokens"].is_array() || !entry.contains("score") ||
            !entry["score"].is_number())
            throw ProtocolError(where + ": candidate entries need tokens[] and score");

        InfillCandidate cand;
        for (const auto& tok : entry["tokens"]) {
            if (!tok.is_string())
                throw ProtocolError(where + ": candidate tokens must be strings");
            cand.tokens.push_back(tok.get<std::string>());
        }
        cand.score = entry["score"].get<double>();
        cand.rank = out.size() + 1;
        if (!out.empty() && cand.score > prev_score)
            throw ProtocolError(where + ": candidate scores must be non-increasing");
        prev_score = cand.score;
        out.push_back(std::move(cand));
    }
    return out;
}

InfillFn remote_infill_fn(std::string base_url, std::size_t beam_size,
                          RemoteOptions options) {
    return [base_url = std::move(base_url), beam_size,
            options](const MaskedQuery& query) {
        return remote_infill(base_url, query, beam_size, options);
    };
}

RemoteCorrector::RemoteCorrector(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)), options_(options) {}

std::vector<std::string> RemoteCorrector::correct(const CorrectionRecord& record,
                                                  const Sentence&, const Document&,
                                                  const PassageSet&) {
    json body;
    body["input"] = record.input;
    json reply = post_json(base_url_, "/correct", body, options_);
    return split_tokens(require_string(reply, "output", base_url_ + "/correct"));
}

RemoteClassifier::RemoteClassifier(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)), options_(options) {}

ClassifierVerdict RemoteClassifier::classify(const std::string& summary,
                                             const std::string& document) {
    json body;
    body["summary"] = summary;
    body["document"] = document;
    json reply = post_json(base_url_, "/classify", body, options_);

    const std::string where = base_url_ + "/classify";
    if (!reply.contains("factual") || !reply["factual"].is_boolean())
        throw ProtocolError(where + ": missing boolean field \"factual\"");
    if (!reply.contains("score") || !reply["score"].is_number())
        throw ProtocolError(where + ": missing numeric field \"score\"");

    ClassifierVerdict verdict;
    verdict.factual = reply["factual"].get<bool>();
    verdict.score = reply["score"].get<double>();
    return verdict;
}

}  // namespace factforge
