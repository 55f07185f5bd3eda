#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poplearn {

using Role = int;        // 0-based player role
using NodeId = int;      // index into the tree's node table
using InfosetId = int;   // global information-set index
using ActionIdx = int;   // position in an infoset's action list

struct Infoset {
  Role owner = -1;
  std::string name;
  std::vector<std::string> actions;  // declaration order
  std::vector<NodeId> members;       // preorder discovery order
  int num_actions() const { return static_cast<int>(actions.size()); }
  ActionIdx action_index(const std::string& label) const;
};

/// Finite extensive-form game tree with information sets and perfect recall.
/// Immutable once built; all queries are const and thread-safe.
class GameTree {
 public:
  int num_roles() const { return num_roles_; }
  NodeId root() const { return root_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  bool is_terminal(NodeId n) const { return nodes_[n].terminal_index >= 0; }
  int terminal_index(NodeId n) const { return nodes_[n].terminal_index; }
  std::span<const double> payoffs(NodeId n) const;
  std::span<const double> payoffs_at(int terminal_index) const;

  Role owner(NodeId n) const { return infosets_[nodes_[n].infoset].owner; }
  InfosetId infoset(NodeId n) const { return nodes_[n].infoset; }
  NodeId child(NodeId n, ActionIdx a) const { return nodes_[n].children[a]; }
  NodeId parent(NodeId n) const { return nodes_[n].parent; }
  const std::string& node_name(NodeId n) const { return nodes_[n].name; }

  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  const Infoset& infoset_info(InfosetId h) const { return infosets_[h]; }
  const std::vector<InfosetId>& role_infosets(Role r) const { return role_infosets_[r]; }
  const std::vector<NodeId>& terminals() const { return terminals_; }
  int num_terminals() const { return static_cast<int>(terminals_.size()); }

  /// (infoset, action) pairs on the root-to-terminal path, in path order.
  const std::vector<std::pair<InfosetId, ActionIdx>>& path_pairs(int terminal_index) const {
    return path_pairs_[terminal_index];
  }

  std::optional<NodeId> find_node(const std::string& name) const;
  std::optional<InfosetId> find_infoset(const std::string& name) const;

  /// Own-action history of an infoset: the (infoset, action) pairs of the
  /// owner on the path to any member (identical across members under
  /// perfect recall; build() verifies this).
  const std::vector<std::pair<InfosetId, ActionIdx>>& own_history(InfosetId h) const {
    return own_history_[h];
  }

  double max_payoff() const { return max_payoff_; }
  double min_payoff() const { return min_payoff_; }

 private:
  friend class GameTreeBuilder;
  struct Node {
    std::string name;
    NodeId parent = -1;
    int terminal_index = -1;
    InfosetId infoset = -1;
    std::vector<NodeId> children;  // aligned with the infoset's action order
  };
  int num_roles_ = 0;
  NodeId root_ = 0;
  std::vector<Node> nodes_;
  std::vector<Infoset> infosets_;
  std::vector<std::vector<InfosetId>> role_infosets_;
  std::vector<NodeId> terminals_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::vector<std::pair<InfosetId, ActionIdx>>> path_pairs_;
  std::vector<std::vector<std::pair<InfosetId, ActionIdx>>> own_history_;
  std::map<std::string, NodeId> node_by_name_;
  std::map<std::string, InfosetId> infoset_by_name_;
  double max_payoff_ = 0.0, min_payoff_ = 0.0;
};

/// Incremental constructor for GameTree. Nodes can be added in any order;
/// build() roots the tree at the unique parentless node, renumbers infosets
/// in preorder discovery order, and checks structural invariants (single
/// root, no cycles, consistent action sets, perfect recall).
class GameTreeBuilder {
 public:
  explicit GameTreeBuilder(int num_roles);

  /// Adds a decision node. The infoset is created on first use; `actions`
  /// must match the existing action list when the infoset already exists
  /// (pass an empty list to reuse it).
  NodeId add_decision(const std::string& name, Role owner, const std::string& infoset,
                      const std::vector<std::string>& actions = {});
  NodeId add_terminal(const std::string& name, std::vector<double> payoffs);
  void add_edge(NodeId from, const std::string& action, NodeId to);

  GameTree build() const;

 private:
  struct ProtoNode {
    std::string name;
    bool terminal = false;
    std::vector<double> payoffs;
    Role owner = -1;
    int infoset = -1;                       // builder-local infoset index
    std::vector<NodeId> children;           // aligned with action list
  };
  struct ProtoInfoset {
    Role owner;
    std::string name;
    std::vector<std::string> actions;
  };
  int num_roles_;
  std::vector<ProtoNode> nodes_;
  std::vector<ProtoInfoset> infosets_;
  std::map<std::string, int> infoset_index_;
  std::map<std::string, NodeId> node_index_;
};

/// Per-role partition of the terminal nodes: the end-of-match feedback
/// structure. Cells are lists of terminal indices; `revealed(c)` is the set
/// of (infoset, action) pairs common to every path in cell c, which under
/// the action-measurability restriction fully describes the cell.
class TerminalPartition {
 public:
  TerminalPartition(const GameTree& tree, Role role,
                    std::vector<std::vector<int>> cells_by_terminal_index);

  /// The discrete partition: every terminal in its own cell.
  static TerminalPartition discrete(const GameTree& tree, Role role);

  Role role() const { return role_; }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  int cell_of(int terminal_index) const { return cell_of_[terminal_index]; }
  const std::vector<std::pair<InfosetId, ActionIdx>>& revealed(int cell) const {
    return revealed_[cell];
  }

 private:
  Role role_;
  std::vector<std::vector<int>> cells_;
  std::vector<int> cell_of_;
  std::vector<std::vector<std::pair<InfosetId, ActionIdx>>> revealed_;
};

/// A pure strategy: one action per own infoset, indexed role-locally (the
/// k-th entry matches tree.role_infosets(role)[k]).
struct PureStrategy {
  Role role = -1;
  std::vector<ActionIdx> choice;
};

/// A behavior strategy: an independent mix over actions at each own infoset.
struct BehaviorStrategy {
  Role role = -1;
  std::vector<std::vector<double>> mix;  // role-local infoset -> probabilities

  static BehaviorStrategy pure(const GameTree& tree, const PureStrategy& s);
  static BehaviorStrategy uniform(const GameTree& tree, Role role);
  void validate(const GameTree& tree) const;  // throws on malformed mixes
};

/// A mixed strategy: a distribution over the role's pure-strategy list in
/// enumeration order.
struct MixedStrategy {
  Role role = -1;
  std::vector<double> dist;
};

/// Deterministic pure-strategy enumeration: infosets in discovery order with
/// the last infoset varying fastest, actions in declaration order.
std::vector<PureStrategy> enumerate_pure_strategies(const GameTree& tree, Role role);
int num_pure_strategies(const GameTree& tree, Role role);
int pure_strategy_index(const GameTree& tree, const PureStrategy& s);
std::string pure_strategy_name(const GameTree& tree, const PureStrategy& s);

/// Terminal node reached when every role follows its pure strategy.
NodeId outcome(const GameTree& tree, const std::vector<PureStrategy>& profile);

/// Expected payoff vector under a behavior-strategy profile (exact
/// summation over terminal nodes).
std::vector<double> expected_payoff(const GameTree& tree,
                                    const std::vector<BehaviorStrategy>& profile);

/// One-shot simultaneous game over the tree's pure strategies.
struct NormalFormGame {
  int num_roles = 0;
  std::vector<std::vector<PureStrategy>> strategies;
  std::vector<std::vector<std::string>> strategy_names;
  std::vector<int> dims;
  std::vector<double> payoff_table;  // [flat profile * num_roles + role]
  // Optional profile-level partitions, one per role: flat profile -> cell id.
  std::vector<std::vector<int>> profile_cells;

  int flat_index(std::span<const int> profile) const;
  double payoff(std::span<const int> profile, Role r) const;
  double payoff_flat(int flat, Role r) const { return payoff_table[flat * num_roles + r]; }
  int num_profiles() const;
  std::vector<int> unflatten(int flat) const;
};

/// Enumerates pure strategies and fills the payoff tensor by playing out
/// each profile. Throws if the profile count exceeds `max_profiles`.
NormalFormGame derive_normal_form(const GameTree& tree, long long max_profiles = 1000000);

/// Profile-level partitions for the normal form: two profiles share a cell
/// for role i exactly when their reached terminals share a cell of that
/// role's terminal partition. Cell ids are assigned by first occurrence in
/// profile enumeration order.
std::vector<std::vector<int>> p_equivalent_partition(
    const GameTree& tree, const std::vector<TerminalPartition>& partitions,
    const NormalFormGame& nf);

/// Kuhn conversions. mixed_to_behavior assigns the uniform mix at infosets
/// with zero realization weight and records them in `unreachable` when the
/// caller provides it.
MixedStrategy behavior_to_mixed(const GameTree& tree, const BehaviorStrategy& b);
BehaviorStrategy mixed_to_behavior(const GameTree& tree, const MixedStrategy& m,
                                   std::vector<InfosetId>* unreachable = nullptr);

struct Observation {
  int cell = -1;
  std::vector<std::pair<InfosetId, ActionIdx>> revealed;
};

/// The partition cell containing terminal `z` plus its revealed-action
/// decomposition.
Observation observation_cell(const GameTree& tree, const TerminalPartition& partition, NodeId z);

/// Distribution over terminal indices induced by a behavior profile.
std::vector<double> terminal_distribution(const GameTree& tree,
                                          const std::vector<BehaviorStrategy>& profile);

}  // namespace poplearn
