#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace foresight {

// Nodes are identified by their index in GameTree::nodes. Histories and tree
// nodes coincide in an extensive game form, so a NodeId doubles as a history.
using NodeId = std::uint32_t;
using PlayerId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr PlayerId kNoPlayer = std::numeric_limits<PlayerId>::max();

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A strategy profile was consulted at a history where it is silent.
struct UndefinedChoiceError : SolverError {
  UndefinedChoiceError(std::string msg, NodeId where)
      : SolverError(std::move(msg)), at(where) {}
  NodeId at;
};

// A frontier node has no exploration terminal behind it, so its value
// aggregate is undefined.
struct FrontierCoverageError : SolverError {
  FrontierCoverageError(std::string msg, NodeId where)
      : SolverError(std::move(msg)), at(where) {}
  NodeId at;
};

// A table belief oracle was asked about a sequence it has no entry for.
struct UnspecifiedSequenceError : SolverError {
  using SolverError::SolverError;
};

// An enumeration (definitional oracle, SCES enumeration, exhaustive belief
// validation) exceeded its configured cap.
struct SizeCapError : SolverError {
  using SolverError::SolverError;
};

// A generator spec cannot be satisfied (inconsistent bounds).
struct InfeasibleSpecError : SolverError {
  using SolverError::SolverError;
};

}  // namespace foresight
