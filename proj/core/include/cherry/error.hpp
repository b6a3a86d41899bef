#pragma once

#include <stdexcept>
#include <string>

namespace cherry {

/// Failure categories surfaced by the library; the CLI maps them onto its
/// exit-code contract.
enum class ErrorKind {
  Domain,             // argument outside the mathematical domain
  Bracket,            // root finder given an interval with no sign change
  DegenerateArc,      // arc with coincident endpoints requested
  Tuning,             // parameter bisection failed to reach the target combinatorics
  Depth,              // requested level exceeds available data / tuned depth
  Precision,          // precision audit failed or escalation cap reached
  Partition,          // dynamical partition failed a structural check
  Combinatorics,      // orbit combinatorics disagree with the target rotation number
  SplitPreimage,      // pullback of an interval containing the critical value
  AmbiguousPreimage,  // inverse at the collapsed value c
  Audit,              // cross-ratio chain hypothesis violated
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace cherry
