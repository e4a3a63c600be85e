#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "foresight/common.hpp"
#include "foresight/rational.hpp"

namespace foresight {

// One candidate branch considered at a solve step: the action, the composed
// path it initiates, and the mover-eye value vector of the path's endpoint.
struct TraceCandidate {
  std::string action;
  std::vector<NodeId> path;
  std::vector<Rational> values;
};

struct TraceStep {
  NodeId at = kNoNode;
  // Continuation table: believed-internal history -> chosen action label,
  // sorted by preorder for stable output.
  std::vector<std::pair<NodeId, std::string>> table;
  std::vector<TraceCandidate> candidates;
  std::string chosen;
  // Oracle/memo activity during this step.
  std::uint64_t oracle_queries = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_misses = 0;
};

struct SolveTrace {
  std::vector<TraceStep> steps;
  NodeId outcome = kNoNode;
  std::uint64_t oracle_queries = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_misses = 0;
};

}  // namespace foresight
