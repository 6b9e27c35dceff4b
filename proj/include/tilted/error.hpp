#pragma once

#include <stdexcept>
#include <string>

namespace tilted {

enum class ErrorCode {
    InvalidInput,
    AbsoluteContinuity,
    EnumerationTooLarge,
    MissingField,
    TiltSign,
    Config,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::InvalidInput, what);
}

}  // namespace tilted
