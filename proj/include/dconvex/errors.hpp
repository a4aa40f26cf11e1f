#pragma once

#include <stdexcept>
#include <string>

namespace dconvex {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- graph construction ---

struct CycleError : Error {
  explicit CycleError(const std::string& what) : Error(what) {}
};

struct SelfLoopError : Error {
  explicit SelfLoopError(const std::string& what) : Error(what) {}
};

struct DuplicateEdgeError : Error {
  explicit DuplicateEdgeError(const std::string& what) : Error(what) {}
};

// --- queries ---

// A pair passed to an operation that requires non-adjacent endpoints.
struct AdjacentPairError : Error {
  explicit AdjacentPairError(const std::string& what) : Error(what) {}
};

// A vertex is missing from a set it was required to belong to.
struct MembershipError : Error {
  explicit MembershipError(const std::string& what) : Error(what) {}
};

// X, Y, Z arguments of a separation query are not pairwise disjoint.
struct OverlapError : Error {
  explicit OverlapError(const std::string& what) : Error(what) {}
};

// A reachability query violating its own invariants.
struct InvalidQueryError : Error {
  explicit InvalidQueryError(const std::string& what) : Error(what) {}
};

struct EmptyQueryError : Error {
  explicit EmptyQueryError(const std::string& what) : Error(what) {}
};

// An enumeration-based routine was asked to run above its configured limit.
struct SizeGuardError : Error {
  explicit SizeGuardError(const std::string& what) : Error(what) {}
};

// --- discrete networks ---

struct NotConvexError : Error {
  explicit NotConvexError(const std::string& what) : Error(what) {}
};

struct CardinalityMismatchError : Error {
  explicit CardinalityMismatchError(const std::string& what) : Error(what) {}
};

struct ScopeError : Error {
  explicit ScopeError(const std::string& what) : Error(what) {}
};

struct ZeroEvidenceProbabilityError : Error {
  explicit ZeroEvidenceProbabilityError(const std::string& what) : Error(what) {}
};

struct DegenerateEstimateError : Error {
  explicit DegenerateEstimateError(const std::string& what) : Error(what) {}
};

// --- parsing / serialization ---

struct BifSyntaxError : Error {
  BifSyntaxError(std::size_t line, std::size_t column, const std::string& expected)
      : Error("bif:" + std::to_string(line) + ":" + std::to_string(column) +
              ": " + expected),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct BifSemanticError : Error {
  explicit BifSemanticError(const std::string& what) : Error(what) {}
};

// Carries a JSON-pointer style path to the offending element.
struct SchemaError : Error {
  SchemaError(const std::string& pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer(pointer) {}
  std::string pointer;
};

}  // namespace dconvex
