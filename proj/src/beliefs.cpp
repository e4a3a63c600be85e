#include "foresight/beliefs.hpp"

#include <algorithm>
#include <random>

#include "foresight/rng.hpp"

namespace foresight {

std::string sequence_string(const GameTree& tree, const HistorySequence& q) {
  std::string out = "(";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += ",";
    out += tree.node(q[i]).name;
  }
  out += ")";
  return out;
}

ValidationReport validate_sequence(const GameTree& tree,
                                   const SightFunction& sight,
                                   const HistorySequence& q) {
  ValidationReport report;
  auto add = [&](std::string code, std::string msg) {
    report.violations.push_back(
        {std::move(code), sequence_string(tree, q), std::move(msg)});
  };
  if (q.empty()) {
    add("empty-sequence", "history-sequence must be non-empty");
    return report;
  }
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    if (!tree.is_strict_prefix(q[i], q[i + 1])) {
      add("not-increasing", "element " + tree.node(q[i + 1]).name +
                                " does not strictly extend " +
                                tree.node(q[i]).name);
    }
  }
  auto s0 = sight.at(q.front());
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (!nodeset::contains(tree, s0, q[i])) {
      add("outside-root-sight", "element " + tree.node(q[i]).name +
                                    " lies outside s(" +
                                    tree.node(q.front()).name + ")");
    }
  }
  return report;
}

const BeliefAnswer& BeliefOracle::answer(const HistorySequence& q) const {
  HistorySequence key = cache_key(q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++queries_;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  BeliefAnswer derived = derive(q);
  std::lock_guard<std::mutex> lock(mu_);
  ++derivations_;
  return cache_.emplace(std::move(key), std::move(derived)).first->second;
}

std::uint64_t BeliefOracle::queries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return queries_;
}

std::uint64_t BeliefOracle::derivations() const {
  std::lock_guard<std::mutex> lock(mu_);
  return derivations_;
}

BeliefAnswer BeliefOracle::correct_self_answer(NodeId h) const {
  const GameTree& tree = mtg_->tree;
  if (tree.is_leaf(h)) {
    return BeliefAnswer{{h}, {h}};
  }
  BeliefAnswer ans;
  auto s = mtg_->sight.at(h);
  ans.sight.assign(s.begin(), s.end());
  ans.explorations = exploration_terminals(mtg_->fork, h);
  return ans;
}

TableBeliefOracle::TableBeliefOracle(const Mtg* mtg,
                                     std::vector<Entry> entries)
    : BeliefOracle(mtg) {
  for (auto& [q, a] : entries) {
    nodeset::sort_unique(mtg->tree, a.sight);
    nodeset::sort_unique(mtg->tree, a.explorations);
    entries_.emplace(std::move(q), std::move(a));
  }
}

BeliefAnswer TableBeliefOracle::derive(const HistorySequence& q) const {
  auto it = entries_.find(q);
  if (it != entries_.end()) return it->second;
  // Two invariant-forced cases are answered without an entry; anything else
  // unspecified is a hard error, never a default.
  if (q.size() == 1 || mtg_->tree.is_leaf(q.back())) {
    return correct_self_answer(q.back());
  }
  throw UnspecifiedSequenceError("belief table has no entry for sequence " +
                                 sequence_string(mtg_->tree, q));
}

BeliefAnswer ProjectiveBeliefOracle::derive(const HistorySequence& q) const {
  if (q.size() == 1) return correct_self_answer(q.front());
  const GameTree& tree = mtg_->tree;
  const BeliefAnswer& base = answer({q.front()});
  NodeId hk = q.back();
  auto s = nodeset::restrict_to(tree, base.sight, hk);
  auto e = nodeset::restrict_to(tree, base.explorations, hk);
  return BeliefAnswer{{s.begin(), s.end()}, {e.begin(), e.end()}};
}

BeliefAnswer OmniscientBeliefOracle::derive(const HistorySequence& q) const {
  const GameTree& tree = mtg_->tree;
  NodeId hk = q.back();
  BeliefAnswer ans;
  std::vector<NodeId> stack{hk};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    ans.sight.push_back(x);
    const auto& cs = tree.node(x).children;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(*it);
  }
  nodeset::sort_unique(tree, ans.sight);
  ans.explorations = tree.leaves_under(hk);
  return ans;
}

DepthModelBeliefOracle::DepthModelBeliefOracle(const Mtg* mtg,
                                               DepthModelParams params)
    : BeliefOracle(mtg), params_(std::move(params)) {
  if (params_.depths.size() != mtg->tree.players.size() ||
      params_.widths.size() != mtg->tree.players.size()) {
    throw std::logic_error("depth-model parameters must cover every player");
  }
  for (auto d : params_.depths) {
    if (d == 0) throw std::logic_error("believed depth must be >= 1");
  }
  for (auto w : params_.widths) {
    if (w == 0) throw std::logic_error("believed width must be >= 1");
  }
}

BeliefAnswer DepthModelBeliefOracle::derive(const HistorySequence& q) const {
  const GameTree& tree = mtg_->tree;
  NodeId hk = q.back();
  if (q.size() == 1) return correct_self_answer(hk);
  if (tree.is_leaf(hk)) return BeliefAnswer{{hk}, {hk}};

  HistorySequence parent_q(q.begin(), q.end() - 1);
  const BeliefAnswer&上 = answer(parent_q);
  const BeliefAnswer& up = 上;
  PlayerId p = tree.node(hk).player;
  const std::uint32_t d = params_.depths[p];
  const std::uint32_t w = params_.widths[p];

  // Believed sight: the depth-d ball below h_k, clipped to what the previous
  // level already perceives there (Mon of B_H by construction).
  auto carried = nodeset::restrict_to(tree, up.sight, hk);
  BeliefAnswer ans;
  const std::uint32_t limit = tree.node(hk).depth + d;
  for (NodeId x : carried) {
    if (tree.node(x).depth <= limit) ans.sight.push_back(x);
  }
  // Clipping by depth keeps prefix-closure: depths only shrink toward hk.

  auto carried_expl = nodeset::restrict_to(tree, up.explorations, hk);
  for (NodeId g : nodeset::frontier(tree, ans.sight)) {
    if (tree.is_leaf(g)) {
      ans.explorations.push_back(g);
      continue;
    }
    std::vector<NodeId> kept;
    std::mt19937_64 rng(
        mix64(params_.seed, SequenceHash{}(q), tree.node(g).euler_in));
    for (std::uint32_t r = 0; r < w; ++r) {
      NodeId x = g;
      while (tree.is_internal(x)) {
        const auto& cs = tree.node(x).children;
        x = cs[bounded(rng, cs.size())];
      }
      if (nodeset::contains(tree, carried_expl, x)) kept.push_back(x);
    }
    if (kept.empty()) {
      // Deterministic fallback: the preorder-least exploration the previous
      // level holds behind g. One exists because g sits inside the previous
      // level's sight.
      auto behind = nodeset::restrict_to(tree, carried_expl, g);
      if (behind.empty()) {
        throw FrontierCoverageError(
            "no inherited exploration behind " + tree.node(g).name +
                " for sequence " + sequence_string(tree, q),
            g);
      }
      kept.push_back(behind.front());
    }
    ans.explorations.insert(ans.explorations.end(), kept.begin(), kept.end());
  }
  nodeset::sort_unique(tree, ans.explorations);
  return ans;
}

std::string_view belief_kind_name(BeliefKind k) {
  switch (k) {
    case BeliefKind::kProjective:
      return "projective";
    case BeliefKind::kOmniscient:
      return "omniscient";
    case BeliefKind::kDepthModel:
      return "depth-model";
    case BeliefKind::kTable:
      return "table";
  }
  return "projective";
}

std::unique_ptr<Emtg> make_emtg(Mtg mtg, const BeliefSpec& spec) {
  auto game = std::make_unique<Emtg>();
  game->mtg = std::move(mtg);
  switch (spec.kind) {
    case BeliefKind::kProjective:
      game->beliefs = std::make_unique<ProjectiveBeliefOracle>(&game->mtg);
      break;
    case BeliefKind::kOmniscient:
      game->beliefs = std::make_unique<OmniscientBeliefOracle>(&game->mtg);
      break;
    case BeliefKind::kDepthModel:
      game->beliefs = std::make_unique<DepthModelBeliefOracle>(
          &game->mtg, spec.depth_model);
      break;
    case BeliefKind::kTable:
      game->beliefs =
          std::make_unique<TableBeliefOracle>(&game->mtg, spec.table);
      break;
  }
  return game;
}

std::vector<NodeId> BelievedView::children(NodeId x) const {
  std::vector<NodeId> out;
  for (NodeId c : tree_.node(x).children) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

Rational BelievedView::value(NodeId x, PlayerId player) const {
  auto behind = explorations_behind(x);
  if (behind.empty()) {
    throw FrontierCoverageError(
        "no believed exploration behind " + tree_.node(x).name, x);
  }
  return aggregate_utility(tree_, behind, player, agg_);
}

std::vector<Rational> BelievedView::value_vector(NodeId x) const {
  auto behind = explorations_behind(x);
  if (behind.empty()) {
    throw FrontierCoverageError(
        "no believed exploration behind " + tree_.node(x).name, x);
  }
  return aggregate_utilities(tree_, behind, agg_);
}

BelievedGame believed_game(const Emtg& game, const HistorySequence& q) {
  const GameTree& tree = game.tree();
  const BeliefAnswer& ans = game.beliefs->answer(q);
  BelievedView view(tree, ans, game.mtg.aggregator);
  NodeId hk = q.back();

  BelievedGame out;
  out.q = q;
  GameTreeBuilder builder(tree.players);
  std::vector<NodeId> to_believed(tree.size(), kNoNode);
  for (NodeId x : ans.sight) {
    const auto& n = tree.node(x);
    bool frontier = view.is_frontier(x);
    NodeId mapped;
    if (frontier) {
      auto values = view.value_vector(x);  // throws on coverage gaps
      mapped = (x == hk)
                   ? builder.root_leaf(n.name, std::move(values))
                   : builder.leaf(to_believed[n.parent], n.action, n.name,
                                  std::move(values));
    } else {
      mapped = (x == hk)
                   ? builder.root_internal(n.name, n.player)
                   : builder.internal(to_believed[n.parent], n.action, n.name,
                                      n.player);
    }
    to_believed[x] = mapped;
    out.to_real.push_back(x);
  }
  out.game = builder.build();
  return out;
}

namespace {

struct BeliefChecker {
  const Emtg& game;
  ValidationReport& report;
  bool strong_corr;

  const GameTree& tree() const { return game.tree(); }

  void add(const HistorySequence& q, std::string code, std::string msg) {
    report.violations.push_back(
        {std::move(code), sequence_string(tree(), q), std::move(msg)});
  }

  // Structural invariants any answer must satisfy on its own.
  void check_answer(const HistorySequence& q, const BeliefAnswer& ans) {
    NodeId hk = q.back();
    const GameTree& t = tree();
    if (ans.sight.empty() || !nodeset::contains(t, ans.sight, hk)) {
      add(q, "believed-sight-missing-self", "B_H(q) must contain h_k");
      return;
    }
    auto s0 = game.mtg.sight.at(q.front());
    for (NodeId x : ans.sight) {
      if (!t.is_prefix(hk, x)) {
        add(q, "believed-sight-outside", "member " + t.node(x).name +
                                             " does not extend " +
                                             t.node(hk).name);
      } else if (x != hk &&
                 !nodeset::contains(t, ans.sight, t.node(x).parent)) {
        add(q, "believed-sight-not-prefix-closed",
            "member " + t.node(x).name + " lacks its parent");
      }
      if (!t.is_leaf(q.front()) && !nodeset::contains(t, s0, x)) {
        add(q, "believed-sight-exceeds-sight",
            "member " + t.node(x).name + " lies outside s(" +
                t.node(q.front()).name + ")");
      }
    }
    auto frontier = nodeset::frontier(t, ans.sight);
    if (ans.explorations.empty()) {
      add(q, "believed-exploration-empty", "B_P(q) is empty");
    }
    for (NodeId z : ans.explorations) {
      if (!t.is_leaf(z)) {
        add(q, "believed-exploration-not-terminal",
            t.node(z).name + " is not a true terminal");
        continue;
      }
      bool anchored = false;
      for (NodeId g : frontier) {
        if (t.is_prefix(g, z)) {
          anchored = true;
          break;
        }
      }
      if (!anchored) {
        add(q, "believed-exploration-off-frontier",
            t.node(z).name + " extends no frontier node of B_H(q)");
      }
    }
    for (NodeId g : frontier) {
      auto behind = nodeset::restrict_to(t, ans.explorations, g);
      if (behind.empty()) {
        add(q, "believed-frontier-uncovered",
            "frontier node " + t.node(g).name + " has no believed exploration");
      }
    }
  }

  void check_corr(NodeId h0) {
    HistorySequence q{h0};
    const BeliefAnswer& ans = game.beliefs->answer(q);
    const GameTree& t = tree();
    auto s = game.mtg.sight.at(h0);
    if (!(ans.sight == std::vector<NodeId>(s.begin(), s.end()))) {
      add(q, "corr-sight",
          "B_H((h)) differs from s(h): a player's belief about their own "
          "sight must be correct");
    }
    auto expl = exploration_terminals(game.mtg.fork, h0);
    if (ans.explorations != expl) {
      add(q, "corr-exploration",
          "B_P((h)) differs from the true exploration terminals");
    }
    (void)t;
  }

  void check_extension(const HistorySequence& q, const BeliefAnswer& ans,
                       NodeId h2, const BeliefAnswer& ext) {
    const GameTree& t = tree();
    HistorySequence q2 = q;
    q2.push_back(h2);
    auto sight_cap = nodeset::restrict_to(t, ans.sight, h2);
    if (!nodeset::is_subset(ext.sight, sight_cap)) {
      add(q2, "mon-believed-sight",
          "B_H(q') escapes B_H(q)|_{h'}: a player cannot credit others with "
          "sight beyond their own");
    }
    auto expl_cap = nodeset::restrict_to(t, ans.explorations, h2);
    if (!nodeset::is_subset(ext.explorations, expl_cap)) {
      add(q2, "mon-believed-exploration",
          "B_P(q') escapes B_P(q)|_{h'}");
    }
  }

  // Footnote rules: dropping a leading or interior element whose mover
  // repeats leaves the answer unchanged. Contractions that are not valid
  // history-sequences are vacuous.
  void check_strong_corr(const HistorySequence& q, const BeliefAnswer& ans) {
    const GameTree& t = tree();
    if (q.size() < 2) return;
    auto mover = [&](NodeId x) {
      return t.is_leaf(x) ? kNoPlayer : t.node(x).player;
    };
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (mover(q[i - 1]) == kNoPlayer || mover(q[i - 1]) != mover(q[i])) {
        continue;
      }
      HistorySequence dropped;
      std::string code;
      if (i == 1) {
        dropped.assign(q.begin() + 1, q.end());
        code = "strong-corr-self";
      } else {
        dropped = q;
        dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(i) - 1);
        code = "strong-corr-common";
      }
      if (!validate_sequence(t, game.mtg.sight, dropped).ok()) continue;
      try {
        const BeliefAnswer& other = game.beliefs->answer(dropped);
        if (other.sight != ans.sight) {
          add(q, code,
              "answer changes when the repeated mover " +
                  std::string(t.players[mover(q[i])]) +
                  " is contracted out at position " + std::to_string(i - 1));
        }
      } catch (const UnspecifiedSequenceError&) {
        add(q, code, "contracted sequence is unspecified");
      }
    }
  }
};

}  // namespace

ValidationReport validate_beliefs(const Emtg& game,
                                  const BeliefValidationOptions& options) {
  const GameTree& tree = game.tree();
  ValidationReport report;
  BeliefChecker checker{game, report, options.strong_corr};

  if (options.exhaustive) {
    for (NodeId h0 = 0; h0 < tree.size(); ++h0) {
      if (!tree.is_internal(h0)) continue;
      checker.check_corr(h0);
      std::size_t visited = 0;
      // DFS over B_H-reachable sequences rooted at h0.
      std::vector<HistorySequence> stack{{h0}};
      while (!stack.empty()) {
        HistorySequence q = std::move(stack.back());
        stack.pop_back();
        if (++visited > options.chain_cap) {
          throw SizeCapError(
              "exhaustive belief validation exceeded the chain cap at root " +
              tree.node(h0).name);
        }
        const BeliefAnswer& ans = game.beliefs->answer(q);
        checker.check_answer(q, ans);
        if (options.strong_corr) checker.check_strong_corr(q, ans);
        for (NodeId h2 : ans.sight) {
          if (h2 == q.back()) continue;
          HistorySequence q2 = q;
          q2.push_back(h2);
          checker.check_extension(q, ans, h2, game.beliefs->answer(q2));
          stack.push_back(std::move(q2));
        }
      }
    }
    return report;
  }

  // Sampled mode: seeded random walks through B_H-reachable sequences.
  std::vector<NodeId> internals;
  for (NodeId h = 0; h < tree.size(); ++h) {
    if (tree.is_internal(h)) internals.push_back(h);
  }
  if (internals.empty()) return report;
  std::mt19937_64 rng(mix64(options.seed, 0x5eedULL));
  for (std::size_t i = 0; i < options.samples; ++i) {
    NodeId h0 = internals[bounded(rng, internals.size())];
    checker.check_corr(h0);
    HistorySequence q{h0};
    for (;;) {
      const BeliefAnswer& ans = game.beliefs->answer(q);
      checker.check_answer(q, ans);
      if (options.strong_corr) checker.check_strong_corr(q, ans);
      std::vector<NodeId> extensions;
      for (NodeId h2 : ans.sight) {
        if (h2 != q.back()) extensions.push_back(h2);
      }
      if (extensions.empty() || bounded(rng, 4) == 0) break;
      NodeId h2 = extensions[bounded(rng, extensions.size())];
      HistorySequence q2 = q;
      q2.push_back(h2);
      checker.check_extension(q, ans, h2, game.beliefs->answer(q2));
      q = std::move(q2);
    }
  }
  return report;
}

}  // namespace foresight
