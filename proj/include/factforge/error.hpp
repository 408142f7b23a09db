#pragma once

#include <stdexcept>
#include <string>

namespace factforge {

// Unrecoverable pipeline failure (exit code 1 at the CLI).
struct FatalError : std::runtime_error {
    explicit FatalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (exit code 2 at the CLI).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Remote endpoint answered with data that violates the wire contract.
struct ProtocolError : FatalError {
    explicit ProtocolError(const std::string& msg) : FatalError(msg) {}
};

// Remote endpoint unreachable after all retry attempts.
struct RemoteError : FatalError {
    explicit RemoteError(const std::string& msg) : FatalError(msg) {}
};

// Aligned streams disagree on their keys.
struct AlignmentError : FatalError {
    explicit AlignmentError(const std::string& msg) : FatalError(msg) {}
};

}  // namespace factforge
