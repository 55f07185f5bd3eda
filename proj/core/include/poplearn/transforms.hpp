#pragma once

#include <functional>
#include <random>

#include "poplearn/beliefs.hpp"
#include "poplearn/game.hpp"

namespace poplearn {

/// Coalescing plan: two consecutive infosets h1, h2 of one role where a
/// designated pass action at h1 leads exactly to the members of h2. The
/// merged infoset carries h1's other actions followed by h2's actions.
struct CoalescePlan {
  Role role = -1;
  InfosetId h1 = -1;
  InfosetId h2 = -1;
  ActionIdx pass = -1;

  int m(const GameTree& tree) const;  // |A_h1| - 1
  int n(const GameTree& tree) const;  // |A_h2|

  /// Validates consecutiveness: every pass-child of an h1 member is in h2
  /// and every h2 member arises this way. Throws otherwise.
  void validate(const GameTree& tree) const;
};

struct CoalesceResult {
  GameTree tree;
  std::vector<TerminalPartition> partitions;  // carried over verbatim (same terminals)
  std::string merged_infoset;                 // name of the merged infoset
  // Pure-strategy identification for the coalesced role: original strategy
  // index -> merged-game strategy index (many-to-one on the pass fiber).
  std::vector<int> strategy_map;
};

/// Merges the plan's two infosets into one; all other infosets, payoffs and
/// terminal nodes are unchanged.
CoalesceResult coalesce(const GameTree& tree, const std::vector<TerminalPartition>& partitions,
                        const CoalescePlan& plan);

/// The interior mix bijection of coalescing. phi keeps the kept actions'
/// probabilities and splits the pass probability across the second stage:
///   phi(a,b)[k] = a[k]            for k < m,
///   phi(a,b)[m+j] = a[m] * b[j]   for j < n,
/// with the pass action stored last in `a`. Inputs must be strictly
/// positive; phi_inverse renormalizes the tail block.
std::vector<double> phi(const std::vector<double>& first_stage,
                        const std::vector<double>& second_stage);
std::pair<std::vector<double>, std::vector<double>> phi_inverse(const std::vector<double>& merged,
                                                                int m);

/// A prior over a product of simplices given by a sampler and a density,
/// used to carry non-Dirichlet priors through the coalescing transform.
struct PriorDensity {
  // Point layout: first-stage mix (pass last) followed by second-stage mix.
  std::function<std::vector<double>(std::mt19937_64&)> sample;
  std::function<double(const std::vector<double>&)> log_density;
  int m = 0;  // kept actions in the first stage
  int n = 0;  // second-stage actions
};

/// Pushforward of a prior through phi. The density picks up the change of
/// variables factor 1/(pass mass)^(n-1); sampling simply maps draws through
/// phi, so box measures are preserved exactly.
PriorDensity transform_prior(const PriorDensity& g);

/// Jacobian factor of the inverse mix map at a merged point: (pass mass)^(n-1).
double coalesce_density_factor(const std::vector<double>& merged, int m);

/// Closed-form transform for Dirichlet priors about the coalesced role: when
/// the pass weight equals the total second-stage weight, the pushforward is
/// again Dirichlet with the pass weight replaced by the second-stage
/// weights. Throws when the weights are not coherent in this sense.
DirichletPrior transform_dirichlet_prior(const GameTree& tree, const DirichletPrior& prior,
                                         const CoalescePlan& plan,
                                         const std::string& merged_infoset_name);

struct AuxiliaryGame {
  GameTree tree;
  std::vector<TerminalPartition> partitions;  // all discrete in the auxiliary game
  // terminal index in the original game -> terminal index in the auxiliary
  // game (pruned subtrees map to their replacement terminal).
  std::vector<int> terminal_map;
};

/// The one-role learning-problem isolator: other roles' payoffs become 0,
/// and any subtree hanging off an action of `role` in which `role` never
/// moves again, gets a constant payoff, and sits inside a single feedback
/// cell is collapsed to one terminal. The kept role's per-history decision
/// problem is unchanged; throws when the collapse would alter the role's
/// partition cells.
AuxiliaryGame auxiliary_game(const GameTree& tree,
                             const std::vector<TerminalPartition>& partitions, Role role);

}  // namespace poplearn
