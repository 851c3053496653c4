#pragma once

#include <stdexcept>
#include <string>

namespace pandora {

/// Machine-checkable failure categories used across the library.
enum class ErrorCode {
  OutOfRange,           // a numeric argument violates its documented bound
  DegenerateN,          // market size n < 2
  InvalidSupport,       // distribution support incompatible with its role
  NonpositivePrice,     // price argument must be > 0
  PriceOutsideSupport,  // price not in the dispersed-price support
  OutOfDomain,          // evaluation point outside a function's domain
  InfeasibleSupport,    // ternary weights fall outside [0, 1]
  EmptyInput,           // an input collection must be nonempty
  InternalError,        // broken internal invariant (solver bracket, ...)
};

const char* to_string(ErrorCode code) noexcept;

class MarketError : public std::runtime_error {
 public:
  MarketError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& msg) {
  throw MarketError(code, std::string(to_string(code)) + ": " + msg);
}

}  // namespace pandora
