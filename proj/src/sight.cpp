#include "foresight/sight.hpp"

#include <algorithm>
#include <random>

#include "foresight/rng.hpp"

namespace foresight {

std::string_view aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::kAverage:
      return "avg";
    case Aggregator::kMin:
      return "min";
    case Aggregator::kMax:
      return "max";
  }
  return "avg";
}

std::optional<Aggregator> aggregator_from(std::string_view name) {
  if (name == "avg") return Aggregator::kAverage;
  if (name == "min") return Aggregator::kMin;
  if (name == "max") return Aggregator::kMax;
  return std::nullopt;
}

Rational aggregate_utility(const GameTree& tree,
                           std::span<const NodeId> terminals, PlayerId player,
                           Aggregator agg) {
  if (terminals.empty()) {
    throw std::domain_error("aggregate over an empty exploration set");
  }
  switch (agg) {
    case Aggregator::kAverage: {
      Rational sum;
      for (NodeId z : terminals) sum += tree.node(z).utilities[player];
      return sum / Rational(static_cast<long long>(terminals.size()));
    }
    case Aggregator::kMin: {
      Rational best = tree.node(terminals.front()).utilities[player];
      for (NodeId z : terminals) {
        const Rational& u = tree.node(z).utilities[player];
        if (u < best) best = u;
      }
      return best;
    }
    case Aggregator::kMax: {
      Rational best = tree.node(terminals.front()).utilities[player];
      for (NodeId z : terminals) {
        const Rational& u = tree.node(z).utilities[player];
        if (u > best) best = u;
      }
      return best;
    }
  }
  throw std::logic_error("unknown aggregator");
}

std::vector<Rational> aggregate_utilities(const GameTree& tree,
                                          std::span<const NodeId> terminals,
                                          Aggregator agg) {
  std::vector<Rational> out;
  out.reserve(tree.players.size());
  for (PlayerId p = 0; p < tree.players.size(); ++p) {
    out.push_back(aggregate_utility(tree, terminals, p, agg));
  }
  return out;
}

namespace nodeset {

void sort_unique(const GameTree& tree, std::vector<NodeId>& xs) {
  std::sort(xs.begin(), xs.end(), [&](NodeId a, NodeId b) {
    return tree.node(a).euler_in < tree.node(b).euler_in;
  });
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

bool contains(const GameTree& tree, std::span<const NodeId> xs, NodeId x) {
  const std::uint32_t key = tree.node(x).euler_in;
  auto it = std::lower_bound(xs.begin(), xs.end(), key,
                             [&](NodeId a, std::uint32_t k) {
                               return tree.node(a).euler_in < k;
                             });
  return it != xs.end() && *it == x;
}

std::span<const NodeId> restrict_to(const GameTree& tree,
                                    std::span<const NodeId> xs, NodeId h) {
  const auto& n = tree.node(h);
  auto cmp = [&](NodeId a, std::uint32_t k) {
    return tree.node(a).euler_in < k;
  };
  auto lo = std::lower_bound(xs.begin(), xs.end(), n.euler_in, cmp);
  auto hi = std::lower_bound(lo, xs.end(), n.euler_out, cmp);
  return {lo, hi};
}

bool is_subset(std::span<const NodeId> inner, std::span<const NodeId> outer) {
  // Both sorted by the same tree's preorder; ids are comparable directly
  // only via scan.
  std::size_t j = 0;
  for (NodeId x : inner) {
    while (j < outer.size() && outer[j] != x) ++j;
    if (j == outer.size()) return false;
    ++j;
  }
  return true;
}

std::vector<NodeId> frontier(const GameTree& tree,
                             std::span<const NodeId> xs) {
  // In preorder, descendants of x follow it contiguously: x is frontier iff
  // the next member is outside x's interval.
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 == xs.size() ||
        tree.node(xs[i + 1]).euler_in >= tree.node(xs[i]).euler_out) {
      out.push_back(xs[i]);
    }
  }
  return out;
}

}  // namespace nodeset

const std::vector<NodeId>* ForkedExtension::find(NodeId h, NodeId g) const {
  for (const auto& [node, terms] : at(h)) {
    if (node == g) return &terms;
  }
  return nullptr;
}

std::vector<NodeId> exploration_terminals(const ForkedExtension& fork,
                                          NodeId h) {
  std::vector<NodeId> out;
  for (const auto& [g, terms] : fork.at(h)) {
    out.insert(out.end(), terms.begin(), terms.end());
  }
  // Entries are keyed by incomparable frontier nodes in preorder, and each
  // exploration set is sorted, so the concatenation is already sorted.
  return out;
}

std::vector<NodeId> star_members(const GameTree& tree,
                                 const SightFunction& sight,
                                 const ForkedExtension& fork, NodeId h) {
  std::vector<NodeId> out(sight.at(h).begin(), sight.at(h).end());
  for (const auto& [g, terms] : fork.at(h)) {
    for (NodeId z : terms) {
      for (NodeId x = z; x != g; x = tree.node(x).parent) {
        out.push_back(x);
      }
    }
  }
  nodeset::sort_unique(tree, out);
  return out;
}

namespace {

void collect_depth_limited(const GameTree& tree, NodeId x,
                           std::uint32_t limit_depth,
                           std::vector<NodeId>& out) {
  out.push_back(x);
  if (tree.node(x).depth >= limit_depth) return;
  for (NodeId c : tree.node(x).children) {
    collect_depth_limited(tree, c, limit_depth, out);
  }
}

}  // namespace

SightFunction generate_depth_sight(const GameTree& tree, std::uint32_t plies) {
  SightFunction s;
  s.sets.resize(tree.size());
  for (NodeId h = 0; h < tree.size(); ++h) {
    if (!tree.is_internal(h)) continue;
    auto& set = s.sets[h];
    collect_depth_limited(tree, h, tree.node(h).depth + plies, set);
    // The recursive collection is a preorder walk, already sorted.
  }
  return s;
}

SightFunction full_sight(const GameTree& tree) {
  return generate_depth_sight(tree, tree.max_depth() + 1);
}

ForkedExtension generate_rollout_fork(const GameTree& tree,
                                      const SightFunction& sight,
                                      std::uint32_t rollouts,
                                      std::uint64_t seed) {
  ForkedExtension fork;
  fork.explorations.resize(tree.size());
  for (NodeId h = 0; h < tree.size(); ++h) {
    if (!tree.is_internal(h)) continue;
    for (NodeId g : nodeset::frontier(tree, sight.at(h))) {
      std::vector<NodeId> terms;
      if (tree.is_leaf(g)) {
        terms.push_back(g);
      } else if (rollouts >= tree.node(g).leaf_count) {
        terms = tree.leaves_under(g);
      } else {
        std::mt19937_64 rng(mix64(seed, h, g));
        for (std::uint32_t r = 0; r < rollouts; ++r) {
          NodeId x = g;
          while (tree.is_internal(x)) {
            const auto& cs = tree.node(x).children;
            x = cs[bounded(rng, cs.size())];
          }
          terms.push_back(x);
        }
        nodeset::sort_unique(tree, terms);
      }
      fork.explorations[h].emplace_back(g, std::move(terms));
    }
  }
  return fork;
}

ValidationReport validate_sight(const GameTree& tree,
                                const SightFunction& sight) {
  ValidationReport report;
  auto add = [&](std::string code, NodeId id, std::string msg) {
    report.violations.push_back({std::move(code), tree.node(id).name,
                                 std::move(msg)});
  };
  if (sight.sets.size() != tree.size()) {
    report.violations.push_back(
        {"sight-shape", "<sight>", "sight table not indexed by the tree"});
    return report;
  }
  for (NodeId h = 0; h < tree.size(); ++h) {
    auto set = sight.at(h);
    if (tree.is_leaf(h)) {
      if (!set.empty()) add("sight-at-leaf", h, "sight defined at a terminal");
      continue;
    }
    if (set.empty()) {
      add("missing-sight", h, "no sight set at an internal history");
      continue;
    }
    if (!nodeset::contains(tree, set, h)) {
      add("sight-missing-self", h, "s(h) does not contain h");
    }
    bool has_child = false;
    for (NodeId x : set) {
      if (!tree.is_prefix(h, x)) {
        add("sight-outside-subtree", h,
            "member " + tree.node(x).name + " does not extend h");
        continue;
      }
      if (x != h && !nodeset::contains(tree, set, tree.node(x).parent)) {
        add("sight-not-prefix-closed", h,
            "member " + tree.node(x).name + " lacks its parent");
      }
      if (tree.node(x).parent == h) has_child = true;
    }
    if (!has_child) {
      add("sight-no-action", h,
          "s(h) offers no action at h; the mover could not move");
    }
  }
  return report;
}

ValidationReport validate_fork(const GameTree& tree,
                               const SightFunction& sight,
                               const ForkedExtension& fork) {
  ValidationReport report;
  auto add = [&](std::string code, NodeId id, std::string msg) {
    report.violations.push_back({std::move(code), tree.node(id).name,
                                 std::move(msg)});
  };
  for (NodeId h = 0; h < tree.size(); ++h) {
    if (!tree.is_internal(h)) continue;
    auto frontier = nodeset::frontier(tree, sight.at(h));
    for (NodeId g : frontier) {
      const auto* terms = fork.find(h, g);
      if (tree.is_leaf(g)) {
        if (terms && !(terms->size() == 1 && terms->front() == g)) {
          add("fork-terminal-mismatch", g,
              "terminal frontier node must explore exactly itself");
        }
        continue;
      }
      if (!terms || terms->empty()) {
        add("fork-coverage", g,
            "frontier node of s(" + tree.node(h).name +
                ") has no exploration terminal");
        continue;
      }
      for (NodeId z : *terms) {
        if (!tree.is_leaf(z)) {
          add("fork-not-terminal", z, "exploration is not a true terminal");
        } else if (!tree.is_strict_prefix(g, z)) {
          add("fork-not-anchored", z,
              "exploration does not extend frontier node " +
                  tree.node(g).name);
        }
      }
    }
    // Entries must be keyed by frontier nodes only.
    for (const auto& [g, terms] : fork.at(h)) {
      if (std::find(frontier.begin(), frontier.end(), g) == frontier.end()) {
        add("fork-off-frontier", g,
            "exploration entry at a non-frontier node of s(" +
                tree.node(h).name + ")");
      }
    }
  }
  return report;
}

ValidationReport validate_monotone_sight(const Mtg& mtg) {
  const GameTree& tree = mtg.tree;
  ValidationReport report;
  for (NodeId h = 0; h < tree.size(); ++h) {
    if (!tree.is_internal(h)) continue;
    auto star_h = star_members(tree, mtg.sight, mtg.fork, h);
    for (NodeId h2 = 0; h2 < tree.size(); ++h2) {
      if (!tree.is_internal(h2) || !tree.is_strict_prefix(h, h2)) continue;
      if (tree.node(h).player != tree.node(h2).player) continue;
      auto star_h2 = star_members(tree, mtg.sight, mtg.fork, h2);
      auto carried = nodeset::restrict_to(tree, star_h, h2);
      if (!nodeset::is_subset(carried, star_h2)) {
        report.violations.push_back(
            {"sight-forgets", tree.node(h2).name,
             "s*(" + tree.node(h).name + ")|_" + tree.node(h2).name +
                 " is not carried into s*(" + tree.node(h2).name + ")"});
      }
    }
  }
  return report;
}

RestrictedGame restrict_at(const Mtg& mtg, NodeId h) {
  const GameTree& tree = mtg.tree;
  if (!tree.is_internal(h)) {
    throw std::logic_error("restrict_at requires an internal history");
  }
  auto members = mtg.sight.at(h);
  auto frontier = nodeset::frontier(tree, members);
  auto is_frontier = [&](NodeId x) {
    return std::find(frontier.begin(), frontier.end(), x) != frontier.end();
  };

  RestrictedGame out;
  out.real_root = h;
  GameTreeBuilder builder(tree.players);
  std::vector<NodeId> to_restricted(tree.size(), kNoNode);
  for (NodeId x : members) {
    const auto& n = tree.node(x);
    NodeId mapped;
    if (is_frontier(x)) {
      std::vector<Rational> values;
      if (tree.is_leaf(x)) {
        values = n.utilities;
      } else {
        const auto* terms = mtg.fork.find(h, x);
        if (!terms || terms->empty()) {
          throw FrontierCoverageError(
              "frontier node " + n.name + " of s(" + tree.node(h).name +
                  ") has no exploration terminal",
              x);
        }
        values = aggregate_utilities(tree, *terms, mtg.aggregator);
      }
      mapped = (x == h) ? builder.root_leaf(n.name, std::move(values))
                        : builder.leaf(to_restricted[n.parent], n.action,
                                       n.name, std::move(values));
    } else {
      mapped = (x == h)
                   ? builder.root_internal(n.name, n.player)
                   : builder.internal(to_restricted[n.parent], n.action,
                                      n.name, n.player);
    }
    to_restricted[x] = mapped;
    out.to_real.push_back(x);
  }
  out.game = builder.build();
  return out;
}

namespace {

// Witness play inside one restricted game, with the trace bookkeeping for a
// step at real history h.
NodeId scbi_step(const Mtg& mtg, NodeId h, TraceStep* step) {
  RestrictedGame r = restrict_at(mtg, h);
  auto wr = bi_witness_values(r.game);
  // Members are added in preorder, so h maps to index 0.
  const NodeId restricted_root = 0;
  NodeId chosen_restricted = wr.profile.choice[restricted_root];
  if (step) {
    step->at = h;
    for (NodeId i = 0; i < r.game.size(); ++i) {
      if (r.game.is_internal(i) && r.to_real[i] != h) {
        NodeId pick = wr.profile.choice[i];
        step->table.emplace_back(r.to_real[i], r.game.node(pick).action);
      }
    }
    std::sort(step->table.begin(), step->table.end(),
              [&](const auto& a, const auto& b) {
                return mtg.tree.node(a.first).euler_in <
                       mtg.tree.node(b.first).euler_in;
              });
    for (NodeId c : r.game.node(restricted_root).children) {
      TraceCandidate cand;
      cand.action = r.game.node(c).action;
      NodeId x = c;
      cand.path.push_back(r.to_real[x]);
      while (r.game.is_internal(x)) {
        x = wr.profile.choice[x];
        cand.path.push_back(r.to_real[x]);
      }
      cand.values = wr.values[x];
      step->candidates.push_back(std::move(cand));
    }
    step->chosen = r.game.node(chosen_restricted).action;
  }
  return r.to_real[chosen_restricted];
}

}  // namespace

ScbiResult scbi(const Mtg& mtg) {
  const GameTree& tree = mtg.tree;
  ScbiResult out;
  out.profile = StrategyProfile::empty(tree);
  for (NodeId h = 0; h < tree.size(); ++h) {
    if (tree.is_internal(h)) out.profile.choice[h] = scbi_step(mtg, h, nullptr);
  }
  NodeId h = tree.root;
  while (tree.is_internal(h)) {
    TraceStep step;
    scbi_step(mtg, h, &step);
    h = out.profile.choice[h];
    out.trace.steps.push_back(std::move(step));
  }
  out.outcome = h;
  out.trace.outcome = h;
  return out;
}

}  // namespace foresight
