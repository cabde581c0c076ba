#pragma once

#include <stdexcept>
#include <string>

namespace shrinkedge {

enum class ErrorCode {
  NonHermitian,
  InvalidRank,
  InvalidInput,
  NoRoot,
  WrongBranch,
  CountMismatch,
  AmbiguousRate,
  GridTooCoarse,
  NearPole,
  NotAnEigenvalue,
  Inconsistent,
  AmbiguousOrder,
  MeshTooCoarse,
  FactorizationBreakdown,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shrinkedge
