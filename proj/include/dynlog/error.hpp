#ifndef DYNLOG_ERROR_HPP
#define DYNLOG_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace dynlog {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text. Positions are 1-based; 0 means unknown.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(msg), line(line), column(column) {}
  int line;
  int column;
};

// Structurally well-formed input that breaks a semantic rule: unknown
// state or atom, partial step table, operator applied to the wrong kind
// of time, non-bijective int step, and so on.
struct SemanticError : Error {
  using Error::Error;
};

// A synthesis construction was invoked on a frame outside its
// precondition. `witness` names the worlds of the violating tuple.
struct PreconditionError : Error {
  PreconditionError(const std::string& msg, std::vector<std::string> witness = {})
      : Error(msg), witness(std::move(witness)) {}
  std::vector<std::string> witness;
};

// The frame is a non-branching preorder, but a transient world sits in a
// non-singleton component, so no single-step nat-time system has this
// relation as its reachability. Carries the witness component.
struct UnrealizableFrameError : Error {
  UnrealizableFrameError(const std::string& msg, std::vector<std::string> witness_scc)
      : Error(msg), witness_scc(std::move(witness_scc)) {}
  std::vector<std::string> witness_scc;
};

}  // namespace dynlog

#endif
