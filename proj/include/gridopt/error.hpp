#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridopt {

enum class ErrorKind {
  InvalidPoint,
  EmptyInstance,
  EmptyGraph,
  InvalidArgument,
  CapExceeded,
  NotEulerian,
  Parity,
  InfeasibleOracle,
  Parse,
  Generation,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPoint: return "invalid-point";
    case ErrorKind::EmptyInstance: return "empty-instance";
    case ErrorKind::EmptyGraph: return "empty-graph";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::NotEulerian: return "not-eulerian";
    case ErrorKind::Parity: return "parity";
    case ErrorKind::InfeasibleOracle: return "infeasible-oracle";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Generation: return "generation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace gridopt
