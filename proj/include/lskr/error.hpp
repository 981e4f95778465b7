#ifndef LSKR_ERROR_HPP
#define LSKR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lskr {

enum class ErrorCode {
  InvalidInput,
  CapacityExceeded,
  Unsupported,
  EmptyCloud,
  NoNullspace,
  NumericalFailure,
  IllPosed,
  NoZeroSet,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::NoNullspace: return "NoNullspace";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::NoZeroSet: return "NoZeroSet";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lskr

#endif  // LSKR_ERROR_HPP
