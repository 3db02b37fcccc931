#include "ghzsim/errors.hpp"

namespace ghzsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UnreachableTarget: return "UnreachableTarget";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ghzsim
