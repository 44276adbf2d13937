#pragma once

#include <stdexcept>
#include <string>

namespace psal {

enum class ErrorCode {
    invalid_argument,
    invalid_index,
    shape,
    domain,
    state,
    degenerate_population,
    ingestion,
    empty_input,
    size_guard,
    io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every library failure is reported through this type; `code()` lets callers
/// (the CLI in particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace psal
