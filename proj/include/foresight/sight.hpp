#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "foresight/game.hpp"
#include "foresight/trace.hpp"

namespace foresight {

// Frontier evaluation aggregator. Average is the default; the solver
// machinery is agnostic to the choice, but the cross-solver equivalence
// suites are stated under average only.
enum class Aggregator { kAverage, kMin, kMax };

std::string_view aggregator_name(Aggregator a);
std::optional<Aggregator> aggregator_from(std::string_view name);

Rational aggregate_utility(const GameTree& tree,
                           std::span<const NodeId> terminals, PlayerId player,
                           Aggregator agg);
std::vector<Rational> aggregate_utilities(const GameTree& tree,
                                          std::span<const NodeId> terminals,
                                          Aggregator agg);

// Helpers on node sets kept sorted by preorder index. Sight sets, forked
// extensions and belief answers all use this representation: membership is a
// binary search and "members extending h" is a contiguous subrange.
namespace nodeset {

void sort_unique(const GameTree& tree, std::vector<NodeId>& xs);
bool contains(const GameTree& tree, std::span<const NodeId> xs, NodeId x);
// Members extending h (reflexively): the preorder interval of h.
std::span<const NodeId> restrict_to(const GameTree& tree,
                                    std::span<const NodeId> xs, NodeId h);
bool is_subset(std::span<const NodeId> inner, std::span<const NodeId> outer);
// Members with no strict extension in the set.
std::vector<NodeId> frontier(const GameTree& tree, std::span<const NodeId> xs);

}  // namespace nodeset

// s: each internal history h -> the finite prefix-closed set of histories
// (containing h) that the mover at h actively explores.
struct SightFunction {
  // Indexed by NodeId; empty at leaves. Sets sorted by preorder.
  std::vector<std::vector<NodeId>> sets;

  std::span<const NodeId> at(NodeId h) const {
    return h < sets.size() ? std::span<const NodeId>(sets[h])
                           : std::span<const NodeId>();
  }
};

// s*: prolongs each sight to true terminals. Stored as the exploration
// terminals behind each frontier node of s(h); a frontier node that is
// itself a true terminal explores exactly itself.
struct ForkedExtension {
  using Entry = std::pair<NodeId, std::vector<NodeId>>;
  // Indexed by NodeId (internal nodes); entries ordered by frontier preorder.
  std::vector<std::vector<Entry>> explorations;

  std::span<const Entry> at(NodeId h) const {
    return h < explorations.size() ? std::span<const Entry>(explorations[h])
                                   : std::span<const Entry>();
  }
  const std::vector<NodeId>* find(NodeId h, NodeId g) const;
};

// All exploration terminals Z⌈*_h, sorted by preorder.
std::vector<NodeId> exploration_terminals(const ForkedExtension& fork,
                                          NodeId h);
// Full member set of s*(h): s(h) plus every node on a sampled walk.
std::vector<NodeId> star_members(const GameTree& tree,
                                 const SightFunction& sight,
                                 const ForkedExtension& fork, NodeId h);

struct Mtg {
  GameTree tree;
  SightFunction sight;
  ForkedExtension fork;
  Aggregator aggregator = Aggregator::kAverage;
};

// s(h) = all histories extending h by at most `plies` actions.
SightFunction generate_depth_sight(const GameTree& tree, std::uint32_t plies);
// Saturated sight: the whole subtree at every internal history.
SightFunction full_sight(const GameTree& tree);

// For each internal h and each non-terminal frontier node g of s(h), draws
// `rollouts` independent uniform-random action walks from g down to true
// terminals (PRNG seeded by (seed, h, g)), collapsed to a set. When
// `rollouts` covers every terminal below g the sampling degenerates to
// exhaustive enumeration. Identical inputs give identical output.
ForkedExtension generate_rollout_fork(const GameTree& tree,
                                      const SightFunction& sight,
                                      std::uint32_t rollouts,
                                      std::uint64_t seed);

ValidationReport validate_sight(const GameTree& tree,
                                const SightFunction& sight);
ValidationReport validate_fork(const GameTree& tree,
                               const SightFunction& sight,
                               const ForkedExtension& fork);
// Optional check (off the core path): a player who moves twice never forgets
// what they already explored — s*(h)|_{h'} ⊆ s*(h') for h ⊲ h' with the same
// mover.
ValidationReport validate_monotone_sight(const Mtg& mtg);

// The extensive game S⌈_h: the subtree over s(h) rooted at h, with each
// frontier node valued per player by aggregating its explorations' true
// utilities (a true-terminal frontier node keeps its own utilities).
struct RestrictedGame {
  GameTree game;
  std::vector<NodeId> to_real;  // restricted NodeId -> real NodeId
  NodeId real_root = kNoNode;
};

RestrictedGame restrict_at(const Mtg& mtg, NodeId h);

// Sight-compatible backwards induction: from the root, repeatedly play the
// first action of the canonical backwards-induction outcome of S⌈_h, until a
// true terminal is reached. The returned profile applies the same rule at
// every internal history, visited or not.
struct ScbiResult {
  NodeId outcome = kNoNode;
  StrategyProfile profile;
  SolveTrace trace;
};

ScbiResult scbi(const Mtg& mtg);

}  // namespace foresight
