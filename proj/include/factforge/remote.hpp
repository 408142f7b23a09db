#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "factforge/advgen.hpp"
#include "factforge/correct.hpp"
#include "factforge/infill.hpp"

namespace factforge {

// Shared knobs for every HTTP-backed model. A fresh connection is opened per
// request; transport failures and 5xx responses are retried up to `attempts`
// before RemoteError. Malformed response bodies raise ProtocolError at once —
// a broken contract does not get better by retrying.
struct RemoteOptions {
    int attempts = 3;
    int timeout_seconds = 30;
    std::size_t max_context_tokens = 512;
};

// POST /infill with the masked sentence, its (truncated) context and the beam
// width. The server's candidate list must come back best-first; a score
// increase between neighbours raises ProtocolError. Ranks are assigned 1-based
// in response order.
std::vector<InfillCandidate> remote_infill(const std::string& base_url,
                                           const MaskedQuery& query,
                                           std::size_t beam_size,
                                           const RemoteOptions& options = {});

// Adapter for generate_adversarial.
InfillFn remote_infill_fn(std::string base_url, std::size_t beam_size,
                          RemoteOptions options = {});

// POST /correct with the formatted record; the response "output" string is
// split back into tokens.
class RemoteCorrector final : public Corrector {
public:
    explicit RemoteCorrector(std::string base_url, RemoteOptions options = {});

    std::string name() const override { return "remote:" + base_url_; }
    std::vector<std::string> correct(const CorrectionRecord& record,
                                     const Sentence& sentence, const Document& document,
                                     const PassageSet& passages) override;

private:
    std::string base_url_;
    RemoteOptions options_;
};

// POST /classify with summary and document text; expects {"factual","score"}.
class RemoteClassifier final : public FactualityClassifier {
public:
    explicit RemoteClassifier(std::string base_url, RemoteOptions options = {});

    std::string name() const override { return "remote:" + base_url_; }
    ClassifierVerdict classify(const std::string& summary,
                               const std::string& document) override;

private:
    std::string base_url_;
    RemoteOptions options_;
};

}  // namespace factforge
