#pragma once

#include <stdexcept>
#include <string>

namespace lmprint {

enum class ErrorKind {
  InvalidSetting,
  InvalidInput,
  OutOfContact,
  FullSlip,
  Domain,
  Calibration,
  Unidentifiable,
  NoEquilibrium,
  NoData,
  Malformed,
  UnsupportedSvg,
  NonVector,
  IllegalAction,
  ImageTooLarge,
  UnknownPad,
  PadNotOnNet,
  Disconnected,
  ZeroArea,
  PlanRefused,
  Io,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure surfaced by the library, tagged with a kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lmprint
