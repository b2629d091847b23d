#pragma once

#include <stdexcept>
#include <string>

namespace kgqa {

enum class ErrorCode {
    io = 1,
    parse = 2,
    config = 3,
    invalid_argument = 4,
    state = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace kgqa
