#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "poplearn/game.hpp"

namespace poplearn {

/// Product-of-Dirichlets prior over opponents' behavior: one positive weight
/// vector per opponent information set, independent across sets.
struct DirichletPrior {
  Role role = -1;
  std::map<InfosetId, std::vector<double>> weights;

  /// Uniform weights (all ones) over every opponent infoset.
  static DirichletPrior flat(const GameTree& tree, Role role);
  /// Throws unless weights are strictly positive and cover exactly the
  /// opponent infosets of `role`.
  void validate(const GameTree& tree) const;
};

/// Observation counts per tracked (infoset, action) slot. Layout is owned by
/// a BeliefFrame; values saturate at the frame's per-infoset cap.
struct CountState {
  std::vector<uint16_t> c;
  bool operator==(const CountState&) const = default;
  int total() const {
    int t = 0;
    for (auto v : c) t += v;
    return t;
  }
};

struct CountStateHash {
  size_t operator()(const CountState& s) const {
    size_t h = 1469598103934665603ull;
    for (uint16_t v : s.c) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct BeliefConfig {
  int default_cap = 64;
  std::map<std::pair<Role, std::string>, int> caps;  // (role, infoset name) -> cap
  double policy_tol = 1e-6;
  long long state_budget = 2000000;
  double trunc_threshold = 1e-14;

  int cap_for(Role role, const std::string& infoset_name) const;
};

/// One weighted outcome of a single play of the game, as seen by the frame's
/// role: which tracked count slots increment, with what probability, at what
/// payoff.
struct FrameOutcome {
  std::vector<int> slots;  // tracked slots incremented (sorted)
  double prob = 0.0;
  double payoff = 0.0;
  int terminal_index = -1;
};

/// The sufficient-statistic layout for one role's learning problem: the set
/// of opponent infosets whose posterior can influence the role's payoffs or
/// future observations, with per-action count slots.
///
/// Construction starts from the payoff-relevant infosets and closes the set
/// until, for every own strategy, the (tracked increments, payoff) outcome
/// of a play depends on opponents only through their actions at tracked
/// infosets. The closure is verified by exhaustive enumeration, so dropping
/// the remaining infosets is exact, not an approximation.
class BeliefFrame {
 public:
  BeliefFrame(const GameTree& tree, const std::vector<TerminalPartition>& partitions,
              Role role, const DirichletPrior& prior, const BeliefConfig& config = {});

  const GameTree& tree() const { return *tree_; }
  Role role() const { return role_; }
  const std::vector<InfosetId>& tracked() const { return tracked_; }
  int slots() const { return total_slots_; }
  int slot(InfosetId h, ActionIdx a) const;  // -1 when untracked
  int cap(int tracked_idx) const { return caps_[tracked_idx]; }
  CountState zero_state() const { return CountState{std::vector<uint16_t>(total_slots_, 0)}; }

  /// True when the role's tracked observations never depend on its own play;
  /// the optimal policy is then the myopic one.
  bool play_independent() const { return play_independent_; }

  const std::vector<PureStrategy>& own_strategies() const { return own_strategies_; }
  int num_own_strategies() const { return static_cast<int>(own_strategies_.size()); }

  /// Posterior mean over one tracked infoset's actions given the counts.
  std::vector<double> posterior_mean(const CountState& s, int tracked_idx) const;
  /// Posterior means for every opponent infoset (untracked sets fall back to
  /// the prior mean, which is exact: their counts are never updated).
  std::map<InfosetId, std::vector<double>> posterior_means(const CountState& s) const;

  /// Applies saturating increments.
  CountState apply(const CountState& s, const std::vector<int>& slots) const;

  using OutcomeFn = std::function<void(const FrameOutcome&)>;
  /// Outcome distribution of one play under the agent's posterior
  /// predictive at state `s`.
  void for_each_outcome_predictive(const CountState& s, int own_strategy,
                                   const OutcomeFn& fn) const;
  /// Outcome distribution of one play when opponents play the aggregate
  /// behavior profile `opponents` (entry for the frame's own role ignored).
  void for_each_outcome_under(const std::vector<BehaviorStrategy>& opponents, int own_strategy,
                              const OutcomeFn& fn) const;

  /// Expected current payoff of an own strategy under the posterior
  /// predictive at `s`.
  double predictive_payoff(const CountState& s, int own_strategy) const;

  const DirichletPrior& prior() const { return prior_; }
  const TerminalPartition& partition() const { return *partition_; }

 private:
  void close_tracked_set();
  void detect_play_independence();

  const GameTree* tree_;
  const TerminalPartition* partition_;
  Role role_;
  DirichletPrior prior_;
  BeliefConfig config_;
  std::vector<InfosetId> tracked_;
  std::vector<int> caps_;            // per tracked infoset
  std::vector<int> offsets_;         // slot base per tracked infoset
  std::vector<std::vector<double>> tracked_weights_;
  std::vector<double> tracked_weight_sums_;
  int total_slots_ = 0;
  bool play_independent_ = false;
  std::vector<PureStrategy> own_strategies_;
  std::vector<std::vector<int>> cell_slots_;  // per partition cell: tracked slots revealed
  std::vector<int> local_of_infoset_;         // global infoset -> role-local index
  std::vector<int> tracked_index_of_;         // global infoset -> tracked index or -1
};

/// Bayes update from one observation: increments the count of every revealed
/// opponent (infoset, action) pair, saturating at the cap. Throws when a
/// revealed pair does not exist in the game.
CountState update(const BeliefFrame& frame, const CountState& state,
                  const Observation& observation);

/// Conjugate posterior mean as an opponent behavior profile (one
/// BehaviorStrategy per opponent role).
std::vector<BehaviorStrategy> posterior_mean_profile(const BeliefFrame& frame,
                                                     const CountState& state);

/// Monte Carlo posterior-concentration record for a single infoset prior:
/// after n observations drawn by `stream`, how much posterior mass lies
/// within eta (sup norm) of the empirical distribution.
struct ConcentrationPoint {
  int n = 0;
  double mass = 0.0;
  double std_error = 0.0;
};
struct ConcentrationRecord {
  std::vector<ConcentrationPoint> points;
  int smallest_n_reaching = -1;  // smallest tested n with mass >= 1 - eta
};

/// `stream(k)` yields the k-th observed action index.
ConcentrationRecord concentration_profile(const std::vector<double>& weights,
                                          const std::vector<int>& n_grid, double eta,
                                          const std::function<int(int)>& stream, int draws,
                                          std::mt19937_64& rng);

/// Target equilibrium for the two-stage family: a first-mover action and a
/// response per second-mover infoset.
struct TwoStageProfile {
  ActionIdx a1_star = -1;
  std::map<InfosetId, ActionIdx> a2_star;
};

struct TwoStageWitness {
  bool is_form = false;
  std::string reason;
  ActionIdx a1_star = -1;
  std::map<InfosetId, ActionIdx> a1_star_of;  // h2 -> supporting first-mover action
  std::map<InfosetId, ActionIdx> a2_star_of;
};

/// Checks the two-stage equilibrium form by exhaustive payoff comparison:
/// (1) a1* uniquely best against the response profile, (2) each response is
/// optimal against some action reaching its infoset which is in turn
/// first-mover-optimal there against the response, (3) on the equilibrium
/// path the response is uniquely optimal. Throws when the game is outside
/// the two-player one-move-then-respond family.
TwoStageWitness verify_equilibrium_form(const GameTree& tree, const TwoStageProfile& target);

struct SupportivenessReport {
  bool supportive = false;
  std::string violated;  // first violated condition when not supportive
  long long states_checked = 0;
};

struct SupportivePriors {
  DirichletPrior first_mover;   // belief about second-mover responses
  DirichletPrior second_mover;  // belief about first-mover actions
  SupportivenessReport report;
  TwoStageWitness witness;
};

/// Constructs Dirichlet priors under which (1) the first mover weakly
/// prefers the witness action at every off-path infoset on any history that
/// never recorded a contrary response, and (2) the second mover's
/// conditional posterior keeps the target response optimal on any history
/// that never recorded another action reaching that infoset. Conditions are
/// verified exhaustively over the saturating count space. Throws when the
/// target fails the equilibrium form; returns failure with the violated
/// condition when no weights in the search budget verify.
SupportivePriors make_supportive_priors(const GameTree& tree,
                                        const std::vector<TerminalPartition>& partitions,
                                        const TwoStageProfile& target,
                                        const BeliefConfig& config = {});

/// Re-runs the supportiveness check for explicit priors.
SupportivenessReport check_supportive(const GameTree& tree,
                                      const std::vector<TerminalPartition>& partitions,
                                      const TwoStageProfile& target,
                                      const DirichletPrior& first_mover,
                                      const DirichletPrior& second_mover,
                                      const BeliefConfig& config = {});

}  // namespace poplearn
