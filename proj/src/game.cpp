#include "foresight/game.hpp"

#include <algorithm>
#include <unordered_set>

namespace foresight {

bool GameTree::is_quasi_terminal(NodeId id) const {
  if (is_leaf(id)) return false;
  for (NodeId c : nodes[id].children) {
    if (!is_leaf(c)) return false;
  }
  return true;
}

NodeId GameTree::child_toward(NodeId ancestor, NodeId descendant) const {
  for (NodeId c : nodes[ancestor].children) {
    if (is_prefix(c, descendant)) return c;
  }
  return kNoNode;
}

NodeId GameTree::child_by_action(NodeId at, std::string_view action) const {
  for (NodeId c : nodes[at].children) {
    if (nodes[c].action == action) return c;
  }
  return kNoNode;
}

NodeId GameTree::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? kNoNode : it->second;
}

NodeId GameTree::node_by_actions(std::span<const std::string> actions) const {
  NodeId at = root;
  for (const auto& a : actions) {
    at = child_by_action(at, a);
    if (at == kNoNode) return kNoNode;
  }
  return at;
}

std::vector<std::string> GameTree::path_actions(NodeId id) const {
  std::vector<std::string> out;
  for (NodeId x = id; x != root; x = nodes[x].parent) {
    out.push_back(nodes[x].action);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string GameTree::path_string(NodeId id) const {
  if (id == root) return "ε";
  std::string out;
  for (const auto& a : path_actions(id)) {
    if (!out.empty()) out += '/';
    out += a;
  }
  return out;
}

std::uint32_t GameTree::max_depth() const {
  std::uint32_t d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::vector<NodeId> GameTree::leaves_under(NodeId id) const {
  std::vector<NodeId> out;
  out.reserve(nodes[id].leaf_count);
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    if (is_leaf(x)) out.push_back(x);
    const auto& cs = nodes[x].children;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

GameTreeBuilder::GameTreeBuilder(std::vector<std::string> players) {
  t_.players = std::move(players);
}

NodeId GameTreeBuilder::add(NodeId parent, std::string action,
                            std::string name) {
  if (built_) throw std::logic_error("builder already consumed");
  if (t_.by_name_.count(name)) {
    throw std::logic_error("duplicate node name: " + name);
  }
  if (parent == kNoNode) {
    if (t_.root != kNoNode) throw std::logic_error("second root");
  } else if (parent >= t_.nodes.size()) {
    throw std::logic_error("unknown parent");
  }
  NodeId id = static_cast<NodeId>(t_.nodes.size());
  GameTree::Node n;
  n.name = std::move(name);
  n.parent = parent;
  n.action = std::move(action);
  t_.by_name_.emplace(n.name, id);
  t_.nodes.push_back(std::move(n));
  if (parent == kNoNode) {
    t_.root = id;
  } else {
    t_.nodes[parent].children.push_back(id);
  }
  return id;
}

NodeId GameTreeBuilder::root_internal(std::string name, PlayerId mover) {
  NodeId id = add(kNoNode, "", std::move(name));
  t_.nodes[id].player = mover;
  return id;
}

NodeId GameTreeBuilder::root_leaf(std::string name,
                                  std::vector<Rational> utilities) {
  NodeId id = add(kNoNode, "", std::move(name));
  t_.nodes[id].utilities = std::move(utilities);
  return id;
}

NodeId GameTreeBuilder::internal(NodeId parent, std::string action,
                                 std::string name, PlayerId mover) {
  NodeId id = add(parent, std::move(action), std::move(name));
  t_.nodes[id].player = mover;
  return id;
}

NodeId GameTreeBuilder::leaf(NodeId parent, std::string action,
                             std::string name,
                             std::vector<Rational> utilities) {
  NodeId id = add(parent, std::move(action), std::move(name));
  t_.nodes[id].utilities = std::move(utilities);
  return id;
}

GameTree GameTreeBuilder::build() {
  if (built_) throw std::logic_error("builder already consumed");
  if (t_.root == kNoNode) throw std::logic_error("no root");
  built_ = true;
  // Preorder pass for depth/euler/leaf counts; postorder accumulation for
  // leaf_count via the same stack.
  std::uint32_t clock = 0;
  struct Frame {
    NodeId id;
    std::size_t next_child = 0;
  };
  std::vector<Frame> stack{{t_.root}};
  t_.nodes[t_.root].depth = 0;
  while (!stack.empty()) {
    Frame& f = stack.back();
    auto& n = t_.nodes[f.id];
    if (f.next_child == 0) {
      n.euler_in = clock++;
      n.leaf_count = n.children.empty() ? 1u : 0u;
    }
    if (f.next_child < n.children.size()) {
      NodeId c = n.children[f.next_child++];
      t_.nodes[c].depth = n.depth + 1;
      stack.push_back({c});
    } else {
      n.euler_out = clock;
      stack.pop_back();
      if (!stack.empty()) {
        t_.nodes[stack.back().id].leaf_count += n.leaf_count;
      }
    }
  }
  return std::move(t_);
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    out += v.code;
    out += " at ";
    out += v.node;
    out += ": ";
    out += v.message;
    out += '\n';
  }
  return out;
}

ValidationReport validate_game(const GameTree& tree) {
  ValidationReport report;
  auto add = [&](std::string code, NodeId id, std::string msg) {
    report.violations.push_back(
        {std::move(code), id == kNoNode ? "<tree>" : tree.node(id).name,
         std::move(msg)});
  };

  if (tree.root == kNoNode || tree.nodes.empty()) {
    add("no-root", kNoNode, "tree has no root node");
    return report;
  }
  if (tree.players.empty()) {
    add("no-players", kNoNode, "player list is empty");
  }

  std::size_t roots = 0;
  for (NodeId id = 0; id < tree.size(); ++id) {
    const auto& n = tree.node(id);
    if (n.parent == kNoNode) {
      ++roots;
    } else if (n.parent >= tree.size()) {
      add("bad-parent", id, "parent reference out of range");
    }
    if (n.children.empty()) {
      if (n.player != kNoPlayer) {
        add("childless-internal", id,
            "node declares a mover but has no children");
      }
      if (n.utilities.size() != tree.players.size()) {
        add("utility-arity", id,
            "leaf carries " + std::to_string(n.utilities.size()) +
                " utilities for " + std::to_string(tree.players.size()) +
                " players");
      }
    } else {
      if (n.player == kNoPlayer || n.player >= tree.players.size()) {
        add("bad-player", id, "internal node without a valid turn player");
      }
      if (!n.utilities.empty()) {
        add("internal-utilities", id, "internal node carries utilities");
      }
      std::unordered_set<std::string_view> labels;
      for (NodeId c : n.children) {
        if (!labels.insert(tree.node(c).action).second) {
          add("ambiguous-action", id,
              "duplicate sibling action label '" + tree.node(c).action + "'");
        }
      }
    }
  }
  if (roots != 1) {
    add("multi-root", kNoNode,
        std::to_string(roots) + " parentless nodes, expected exactly 1");
  }
  return report;
}

NodeId outcome(const GameTree& tree, const StrategyProfile& profile,
               NodeId from) {
  NodeId h = from;
  while (tree.is_internal(h)) {
    NodeId c = profile.at(h);
    if (c == kNoNode) {
      throw UndefinedChoiceError(
          "profile is silent at history " + tree.node(h).name, h);
    }
    h = c;
  }
  return h;
}

namespace {

// Recursive helpers for the subgame-perfect computations. Recursion depth is
// the tree depth.
void witness_rec(const GameTree& t, NodeId x, StrategyProfile& w,
                 std::vector<std::vector<Rational>>& values) {
  const auto& n = t.node(x);
  if (n.children.empty()) {
    values[x] = n.utilities;
    return;
  }
  NodeId best = kNoNode;
  for (NodeId c : n.children) {
    witness_rec(t, c, w, values);
    if (best == kNoNode || values[c][n.player] > values[best][n.player]) {
      best = c;
    }
  }
  w.choice[x] = best;
  values[x] = values[best];
}

// All subgame-perfect outcomes. z survives at x iff z comes from some child
// c and z is, for the mover at x, at least as good as the worst
// subgame-perfect outcome of every other child (the other children's
// profiles can be chosen adversarially-low among their own equilibria).
std::vector<NodeId> out_set_rec(const GameTree& t, NodeId x,
                                std::vector<std::vector<NodeId>>& memo) {
  const auto& n = t.node(x);
  if (n.children.empty()) return {x};
  PlayerId p = n.player;
  std::vector<std::vector<NodeId>> child_sets;
  std::vector<Rational> child_min;
  child_sets.reserve(n.children.size());
  for (NodeId c : n.children) {
    auto zs = out_set_rec(t, c, memo);
    Rational lo = t.node(zs.front()).utilities[p];
    for (NodeId z : zs) {
      const Rational& u = t.node(z).utilities[p];
      if (u < lo) lo = u;
    }
    child_min.push_back(lo);
    child_sets.push_back(std::move(zs));
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < child_sets.size(); ++i) {
    for (NodeId z : child_sets[i]) {
      const Rational& u = t.node(z).utilities[p];
      bool ok = true;
      for (std::size_t j = 0; j < child_min.size(); ++j) {
        if (j != i && u < child_min[j]) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
    return t.node(a).euler_in < t.node(b).euler_in;
  });
  return out;
}

}  // namespace

WitnessResult bi_witness_values(const GameTree& tree) {
  WitnessResult r;
  r.profile = StrategyProfile::empty(tree);
  r.values.resize(tree.size());
  witness_rec(tree, tree.root, r.profile, r.values);
  return r;
}

StrategyProfile bi_witness(const GameTree& tree) {
  return bi_witness_values(tree).profile;
}

BiResult backwards_induction(const GameTree& tree) {
  BiResult r;
  r.witness = StrategyProfile::empty(tree);
  r.node_values.resize(tree.size());
  witness_rec(tree, tree.root, r.witness, r.node_values);
  std::vector<std::vector<NodeId>> memo;
  r.outcomes = out_set_rec(tree, tree.root, memo);
  return r;
}

}  // namespace foresight
