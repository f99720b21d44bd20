#include "rrsel/error.hpp"

namespace rrsel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyBasis: return "EmptyBasis";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::K0TooLarge: return "K0TooLarge";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::K0ExceedsPath: return "K0ExceedsPath";
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooManySubsets: return "TooManySubsets";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rrsel
