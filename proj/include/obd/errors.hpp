#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace obd {

/// Base class for all library faults. Structural violations found by
/// validate() are data (ValidationReport), not faults.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A level beyond the truncation depth of a finite diagram was requested.
struct DepthExceedsTruncation : Error {
  using Error::Error;
};

/// A computation did not resolve within its depth cap. This is a reportable
/// outcome (a genuinely deep boundary), not a silent truncation.
struct CapExceeded : Error {
  using Error::Error;
};

/// The Vershik map (or a fiber successor/predecessor) was applied outside
/// its domain: successor of a maximal path, predecessor of a minimal one.
struct DomainError : Error {
  using Error::Error;
};

/// lex_compare on paths of different length or with different range vertex.
struct IncomparablePaths : Error {
  using Error::Error;
};

/// An operation's stated precondition does not hold for the given input.
struct PreconditionViolation : Error {
  using Error::Error;
};

/// An all-min stem is also all-max: the canonical base touches the maximal
/// paths and cannot seed a tower partition. Telescope the diagram first.
struct DegenerateDiagram : Error {
  using Error::Error;
};

/// An emitted partition failed the Kakutani-Rokhlin conditions; internal
/// consistency bug surfaced to the caller.
struct KrConditionsFailed : Error {
  using Error::Error;
};

/// Unparseable input text. line/column are 1-based; 0 means unknown.
struct MalformedInput : Error {
  size_t line = 0;
  size_t column = 0;
  MalformedInput(const std::string& msg, size_t line_ = 0, size_t column_ = 0)
      : Error(msg), line(line_), column(column_) {}
};

/// A parsed document describes a diagram that fails validation.
struct InvalidDiagram : Error {
  std::vector<std::string> problems;
  InvalidDiagram(const std::string& msg, std::vector<std::string> problems_)
      : Error(msg), problems(std::move(problems_)) {}
};

}  // namespace obd
