#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framekit {

enum class ErrorCode {
    invalid_input,
    dimension_mismatch,
    not_linearly_independent,
    not_a_frame,
    degenerate_input,
    size_limit,
    invalid_basis,
    wrong_structure,
    infeasible_spec,
    not_orthogonal,
    invalid_permutation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for every library failure; `code()` tells callers
/// (notably the CLI exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace framekit
