#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tsreason {

/// Error raised by operators and engine plumbing.
///
/// `code()` is a short machine-readable tag (e.g. "LengthMismatch",
/// "SingularRegression") that stays stable across releases; `what()` carries
/// the human-readable message. The executor converts these into step-level
/// errors that are fed back to the decomposer, so messages should say what
/// went wrong in terms of the operation's inputs.
class OpError : public std::runtime_error {
public:
    OpError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw OpError(std::move(code), message);
}

}  // namespace tsreason
