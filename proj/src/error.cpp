#include "shrinkedge/error.hpp"

namespace shrinkedge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::WrongBranch: return "WrongBranch";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::AmbiguousRate: return "AmbiguousRate";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NearPole: return "NearPole";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::FactorizationBreakdown: return "FactorizationBreakdown";
  }
  return "Unknown";
}

}  // namespace shrinkedge
