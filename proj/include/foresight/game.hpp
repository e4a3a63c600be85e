#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foresight/common.hpp"
#include "foresight/rational.hpp"

namespace foresight {

// Finite extensive game form with per-player exact-rational leaf utilities.
// Immutable after GameTreeBuilder::build(); all operations here are pure, so
// a tree can be shared across concurrent solves.
struct GameTree {
  struct Node {
    std::string name;            // external identifier, unique per tree
    NodeId parent = kNoNode;     // kNoNode at the root
    std::string action;          // label of the incoming edge, "" at the root
    PlayerId player = kNoPlayer; // mover, set iff internal
    std::vector<Rational> utilities;  // one per player, set iff leaf
    std::vector<NodeId> children;     // canonical order = declaration order
    std::uint32_t depth = 0;
    // Preorder interval of the subtree: x is an ancestor-or-self of y iff
    // euler_in[x] <= euler_in[y] < euler_out[x].
    std::uint32_t euler_in = 0;
    std::uint32_t euler_out = 0;
    std::uint32_t leaf_count = 0;  // true terminals in the subtree
  };

  std::vector<std::string> players;
  std::vector<Node> nodes;  // indexed by NodeId
  NodeId root = kNoNode;

  std::size_t size() const { return nodes.size(); }
  const Node& node(NodeId id) const { return nodes[id]; }

  bool is_leaf(NodeId id) const { return nodes[id].children.empty(); }
  bool is_internal(NodeId id) const { return !nodes[id].children.empty(); }
  // Every child is terminal.
  bool is_quasi_terminal(NodeId id) const;

  // Prefix relations on histories: a ⊴ d and a ⊲ d.
  bool is_prefix(NodeId a, NodeId d) const {
    return nodes[a].euler_in <= nodes[d].euler_in &&
           nodes[d].euler_in < nodes[a].euler_out;
  }
  bool is_strict_prefix(NodeId a, NodeId d) const {
    return a != d && is_prefix(a, d);
  }

  // The child of `ancestor` on the path to `descendant` (which must be a
  // strict descendant).
  NodeId child_toward(NodeId ancestor, NodeId descendant) const;

  // kNoNode if no child of `at` carries the label.
  NodeId child_by_action(NodeId at, std::string_view action) const;

  NodeId find(std::string_view name) const;  // kNoNode if absent
  // Resolve a root-based action-label path; kNoNode on any miss.
  NodeId node_by_actions(std::span<const std::string> actions) const;
  // Action labels from the root down to `id`.
  std::vector<std::string> path_actions(NodeId id) const;
  // Labels joined with '/'; the root prints as the empty path "ε".
  std::string path_string(NodeId id) const;

  std::uint32_t max_depth() const;
  std::vector<NodeId> leaves_under(NodeId id) const;  // preorder

 private:
  friend class GameTreeBuilder;
  std::unordered_map<std::string, NodeId> by_name_;
};

class GameTreeBuilder {
 public:
  explicit GameTreeBuilder(std::vector<std::string> players);

  NodeId root_internal(std::string name, PlayerId mover);
  NodeId root_leaf(std::string name, std::vector<Rational> utilities);
  NodeId internal(NodeId parent, std::string action, std::string name,
                  PlayerId mover);
  NodeId leaf(NodeId parent, std::string action, std::string name,
              std::vector<Rational> utilities);

  // Computes depths, preorder intervals and leaf counts. The builder cannot
  // produce cycles or orphans, but it deliberately allows childless internal
  // nodes, duplicate sibling labels and wrong utility arity — those are
  // validate_game's findings, not construction failures.
  GameTree build();

 private:
  NodeId add(NodeId parent, std::string action, std::string name);
  GameTree t_;
  bool built_ = false;
};

// One named finding per violated invariant.
struct Violation {
  std::string code;   // stable identifier, e.g. "childless-internal"
  std::string node;   // offending node name (or sequence, for beliefs)
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_game(const GameTree& tree);

// Partial pure-strategy profile: the chosen child per internal history,
// kNoNode where silent.
struct StrategyProfile {
  std::vector<NodeId> choice;

  static StrategyProfile empty(const GameTree& tree) {
    return StrategyProfile{std::vector<NodeId>(tree.size(), kNoNode)};
  }
  NodeId at(NodeId h) const { return h < choice.size() ? choice[h] : kNoNode; }
  bool operator==(const StrategyProfile&) const = default;
};

// Terminal history reached from `from` by following the profile. Throws
// UndefinedChoiceError naming the first history where the profile is silent.
NodeId outcome(const GameTree& tree, const StrategyProfile& profile,
               NodeId from);

struct BiResult {
  // All terminal histories sustained by some subgame-perfect pure profile,
  // in preorder.
  std::vector<NodeId> outcomes;
  // Deterministic witness: at every tie the earliest action in canonical
  // child order.
  StrategyProfile witness;
  // Witness continuation value vector per node.
  std::vector<std::vector<Rational>> node_values;
};

BiResult backwards_induction(const GameTree& tree);

// Witness profile and its per-node continuation values, skipping the
// outcome-set computation.
struct WitnessResult {
  StrategyProfile profile;
  std::vector<std::vector<Rational>> values;
};

WitnessResult bi_witness_values(const GameTree& tree);

// Witness profile only.
StrategyProfile bi_witness(const GameTree& tree);

}  // namespace foresight
