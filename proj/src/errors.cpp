#include "pandora/errors.hpp"

namespace pandora {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateN: return "DegenerateN";
    case ErrorCode::InvalidSupport: return "InvalidSupport";
    case ErrorCode::NonpositivePrice: return "NonpositivePrice";
    case ErrorCode::PriceOutsideSupport: return "PriceOutsideSupport";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InfeasibleSupport: return "InfeasibleSupport";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace pandora
