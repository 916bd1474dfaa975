#pragma once

#include <stdexcept>
#include <string>

namespace bohr {

// Codes are shared with the C API (see include/bohrlab.h); keep values stable.
enum class ErrorCode : int {
    Internal = 1,
    BudgetExhausted = 2,
    InvalidInput = 3,
    PrecisionExhausted = 4,
    NotCoprime = 5,
    EmptyWindow = 6,
    NoCandidate = 7,
    NoRationalPoint = 8,
    ConfigMismatch = 9,
    ZeroComponent = 10,
    Empty = 11,
    DimensionMismatch = 12,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

} // namespace bohr
