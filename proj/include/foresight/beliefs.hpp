#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "foresight/sight.hpp"

namespace foresight {

// (h_0, ..., h_k): a strictly increasing chain of histories inside s(h_0),
// read as "the mover at h_0 believes that the mover at h_1 believes ... what
// the mover at h_k sees and how it evaluates".
using HistorySequence = std::vector<NodeId>;

struct SequenceHash {
  std::size_t operator()(const HistorySequence& q) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (NodeId x : q) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::string sequence_string(const GameTree& tree, const HistorySequence& q);

ValidationReport validate_sequence(const GameTree& tree,
                                   const SightFunction& sight,
                                   const HistorySequence& q);

// One oracle reply: the believed sight set B_H(q) and the believed
// exploration terminals B_P(q), both sorted by preorder.
struct BeliefAnswer {
  std::vector<NodeId> sight;
  std::vector<NodeId> explorations;
  bool operator==(const BeliefAnswer&) const = default;
};

// Deterministic oracle mapping history-sequences to believed sights and
// explorations. Answers are cached and the cache is synchronized, so
// concurrent solves sharing an oracle observe identical replies.
class BeliefOracle {
 public:
  explicit BeliefOracle(const Mtg* mtg) : mtg_(mtg) {}
  virtual ~BeliefOracle() = default;

  virtual std::string kind() const = 0;

  // Sequences sharing a key share answers — and therefore solver decisions.
  // The exact-sequence default is always sound; oracles whose answers depend
  // on less may declare a coarser key.
  virtual HistorySequence cache_key(const HistorySequence& q) const {
    return q;
  }

  const BeliefAnswer& answer(const HistorySequence& q) const;

  std::uint64_t queries() const;
  std::uint64_t derivations() const;

  const Mtg& mtg() const { return *mtg_; }

 protected:
  virtual BeliefAnswer derive(const HistorySequence& q) const = 0;

  // The invariant-forced replies: Corr on singletons, ({z},{z}) on true
  // terminals.
  BeliefAnswer correct_self_answer(NodeId h) const;

  const Mtg* mtg_;

 private:
  mutable std::mutex mu_;
  mutable std::unordered_map<HistorySequence, BeliefAnswer, SequenceHash>
      cache_;
  mutable std::uint64_t queries_ = 0;
  mutable std::uint64_t derivations_ = 0;
};

// Explicit (sequence -> answer) table. Singleton sequences fall back to the
// Corr-forced answer and sequences ending at a true terminal to ({z},{z});
// any other miss raises UnspecifiedSequenceError.
class TableBeliefOracle : public BeliefOracle {
 public:
  using Entry = std::pair<HistorySequence, BeliefAnswer>;
  TableBeliefOracle(const Mtg* mtg, std::vector<Entry> entries);
  std::string kind() const override { return "table"; }

 protected:
  BeliefAnswer derive(const HistorySequence& q) const override;

 private:
  std::unordered_map<HistorySequence, BeliefAnswer, SequenceHash> entries_;
};

// Everyone is believed to see exactly the portion of the original sight below
// them: B_H(q) = s(h_0)|_{h_k}, B_P(q) = Z⌈*_{h_0}|_{h_k}.
class ProjectiveBeliefOracle : public BeliefOracle {
 public:
  using BeliefOracle::BeliefOracle;
  std::string kind() const override { return "projective"; }
  HistorySequence cache_key(const HistorySequence& q) const override {
    return {q.front(), q.back()};
  }

 protected:
  BeliefAnswer derive(const HistorySequence& q) const override;
};

// Everyone is believed to see the full real subtree and evaluate by the true
// terminals: B_H(q) = H|_{h_k}, B_P(q) = Z|_{h_k}.
class OmniscientBeliefOracle : public BeliefOracle {
 public:
  using BeliefOracle::BeliefOracle;
  std::string kind() const override { return "omniscient"; }
  HistorySequence cache_key(const HistorySequence& q) const override {
    return {q.back()};
  }

 protected:
  BeliefAnswer derive(const HistorySequence& q) const override;
};

// Intensional model: each player p is believed to look d_p plies ahead and
// run w_p rollouts. Monotonicity is forced by construction: the believed
// sight is clipped to the previous level's sight and the believed
// explorations to the previous level's explorations, with a deterministic
// fallback when clipping would empty a frontier node's explorations.
struct DepthModelParams {
  std::vector<std::uint32_t> depths;  // per player, >= 1
  std::vector<std::uint32_t> widths;  // per player, >= 1
  std::uint64_t seed = 0;
};

class DepthModelBeliefOracle : public BeliefOracle {
 public:
  DepthModelBeliefOracle(const Mtg* mtg, DepthModelParams params);
  std::string kind() const override { return "depth-model"; }
  const DepthModelParams& params() const { return params_; }

 protected:
  BeliefAnswer derive(const HistorySequence& q) const override;

 private:
  DepthModelParams params_;
};

// An MTG together with a sight-compatible belief structure.
struct Emtg {
  Mtg mtg;
  std::unique_ptr<BeliefOracle> beliefs;

  const GameTree& tree() const { return mtg.tree; }
};

enum class BeliefKind { kProjective, kOmniscient, kDepthModel, kTable };

std::string_view belief_kind_name(BeliefKind k);

struct BeliefSpec {
  BeliefKind kind = BeliefKind::kProjective;
  DepthModelParams depth_model;                 // kDepthModel
  std::vector<TableBeliefOracle::Entry> table;  // kTable
};

// Heap-allocates so the oracle's back-pointer into the Mtg stays valid.
std::unique_ptr<Emtg> make_emtg(Mtg mtg, const BeliefSpec& spec);

// Believed-game view over (tree, answer): membership, believed children in
// canonical order, frontier test, and exact value aggregates. Values exist
// for every member: aggregate over the believed explorations extending it
// (for frontier members this is the believed frontier value).
class BelievedView {
 public:
  BelievedView(const GameTree& tree, const BeliefAnswer& ans, Aggregator agg)
      : tree_(tree), ans_(ans), agg_(agg) {}

  bool contains(NodeId x) const {
    return nodeset::contains(tree_, ans_.sight, x);
  }
  std::vector<NodeId> children(NodeId x) const;
  bool is_frontier(NodeId x) const { return children(x).empty(); }
  std::span<const NodeId> explorations_behind(NodeId x) const {
    return nodeset::restrict_to(tree_, ans_.explorations, x);
  }
  Rational value(NodeId x, PlayerId player) const;
  std::vector<Rational> value_vector(NodeId x) const;

  const BeliefAnswer& answer() const { return ans_; }

 private:
  const GameTree& tree_;
  const BeliefAnswer& ans_;
  Aggregator agg_;
};

// Materialized believed game S⌈_{B(q)}: the tree over B_H(q) rooted at h_k
// with frontier utilities aggregated over B_P(q).
struct BelievedGame {
  GameTree game;
  std::vector<NodeId> to_real;
  HistorySequence q;
};

BelievedGame believed_game(const Emtg& game, const HistorySequence& q);

struct BeliefValidationOptions {
  bool exhaustive = true;
  // Exhaustive mode: max sequences explored per root before a SizeCapError.
  std::size_t chain_cap = 1u << 18;
  // Sampled mode: number of random extendable sequences to probe.
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  // Opt-in footnote rules: self-transparency and common knowledge thereof.
  bool strong_corr = false;
};

// Checks Corr on every singleton and both Mon conditions (plus per-answer
// structural invariants) on every reachable extension, or on sampled chains.
ValidationReport validate_beliefs(const Emtg& game,
                                  const BeliefValidationOptions& options);

}  // namespace foresight
