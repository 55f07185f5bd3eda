#pragma once

#include <memory>
#include <unordered_map>

#include "poplearn/beliefs.hpp"

namespace poplearn {

/// Smallest horizon T with (delta*gamma)^T * payoff_range / (1 - delta*gamma)
/// below tol; 1 when delta*gamma == 0.
int effective_horizon(double delta, double gamma, double tol, double payoff_range);

/// The discounted active-learning problem over belief states: reachable
/// count states, own pure strategies as actions, posterior-predictive
/// transitions and rewards, effective discount delta*gamma.
struct BeliefMdp {
  std::shared_ptr<const BeliefFrame> frame;
  std::vector<CountState> states;  // breadth-first discovery order from the zero state
  std::unordered_map<CountState, int, CountStateHash> index;
  double beta = 0.0;

  int state_index(const CountState& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  }
};

/// Enumerates every count state reachable from the zero state under any own
/// strategy (finite by saturation). Throws when the budget is exceeded.
BeliefMdp build_belief_mdp(std::shared_ptr<const BeliefFrame> frame, double delta, double gamma,
                           long long state_budget);

struct PolicyDiagnostics {
  double bellman_residual = 0.0;
  long long states = 0;
  bool myopic = false;
  double tol = 0.0;
};

/// A solved stationary policy: count state -> own pure-strategy index.
/// Play-independent roles use the lazily evaluated myopic rule (optimal for
/// them) and carry no state table.
class Policy {
 public:
  Policy() = default;

  int operator()(const CountState& s) const;
  const BeliefFrame& frame() const { return *frame_; }
  const std::shared_ptr<const BeliefFrame>& frame_ptr() const { return frame_; }

  bool tabular() const { return mdp_ != nullptr; }
  const BeliefMdp& mdp() const { return *mdp_; }
  double value(const CountState& s) const;  // tabular mode only
  const PolicyDiagnostics& diagnostics() const { return diag_; }

 private:
  friend Policy solve_policy(std::shared_ptr<const BeliefFrame>, double, double, double,
                             long long, bool);
  std::shared_ptr<const BeliefFrame> frame_;
  std::shared_ptr<const BeliefMdp> mdp_;
  std::vector<int> action_;
  std::vector<double> value_;
  PolicyDiagnostics diag_;
};

/// Solves the belief MDP exactly: states are processed in decreasing
/// total-count order (transitions never decrease counts), with self-loops
/// folded into the per-state optimality equation, so the reported Bellman
/// residual is at rounding level. Ties break to the lowest strategy index.
/// With force_tabular=false, play-independent roles get the myopic policy
/// without state enumeration.
Policy solve_policy(std::shared_ptr<const BeliefFrame> frame, double delta, double gamma,
                    double tol, long long state_budget = 2000000, bool force_tabular = false);

/// Convenience overload building the frame in place.
Policy solve_policy(const GameTree& tree, const std::vector<TerminalPartition>& partitions,
                    Role role, const DirichletPrior& prior, double delta, double gamma,
                    double tol, const BeliefConfig& config = {});

/// Identification between two solved policies whose games are related by a
/// structure-preserving transform: maps count states slot-by-slot and own
/// strategies index-to-index.
struct PolicyIdentification {
  // Slot map: for each slot of policy A's frame, the corresponding slot of
  // policy B's frame, or -1 when the slot has no B counterpart (its count
  // must then be reconstructible: see derived_slots).
  std::vector<int> slot_of;
  // Slots of B computed as sums of A slots (e.g. a merged pass action whose
  // count equals the total of the finer action counts).
  std::vector<std::pair<int, std::vector<int>>> derived_slots;
  // Own strategy map: A strategy index -> B strategy index.
  std::vector<int> strategy_of;
};

struct InvarianceResult {
  bool equal = false;
  long long states_compared = 0;
  std::string first_mismatch;
};

/// True when policyB agrees with policyA state-for-state under the map.
/// Throws when a reachable A state has no B image.
InvarianceResult policy_invariance_check(const Policy& a, const Policy& b,
                                         const PolicyIdentification& map);

struct MdpIsomorphismResult {
  bool isomorphic = false;
  long long states = 0;
  std::string first_mismatch;
};

/// Structural equality of two belief MDPs under a slot/strategy
/// identification: same reachable states, transition kernels within kernel
/// tolerance, and identical rewards.
MdpIsomorphismResult belief_mdp_isomorphic(const BeliefMdp& a, const BeliefMdp& b,
                                           const PolicyIdentification& map,
                                           double tol = 1e-12);

}  // namespace poplearn
