#pragma once

#include <optional>
#include <set>
#include <string>

#include "poplearn/game.hpp"
#include "poplearn/rational_lp.hpp"

namespace poplearn {

/// Certificate that `mixture` (over the role's other strategies) dominates
/// `dominated`: weakly with at least one strict gap, or strictly with
/// uniform gap `margin`.
struct DominanceCertificate {
  Role role = -1;
  int dominated = -1;
  std::vector<Rational> mixture;  // over the role's full strategy list, entry at `dominated` zero
  bool strict = false;
  Rational margin = 0;  // strict: min gap; weak: total slack
};

/// Re-evaluates the certificate against the payoff tensor in exact
/// arithmetic.
bool verify_dominance(const NormalFormGame& nf, const DominanceCertificate& cert);

struct DominanceResult {
  std::vector<int> strategies;  // dominated strategy indices, ascending
  std::vector<DominanceCertificate> certificates;
};

/// Weakly dominated strategies of a role (LP per strategy; restriction to
/// surviving opponent profiles optional). The survivors sets default to the
/// full strategy spaces.
DominanceResult weakly_dominated(const NormalFormGame& nf, Role role,
                                 const std::vector<std::set<int>>* survivors = nullptr);
DominanceResult strictly_dominated(const NormalFormGame& nf, Role role,
                                   const std::vector<std::set<int>>* survivors = nullptr);

/// One probe of the constrained-conjecture test at a fixed (epsilon, eta).
struct EliminableProbe {
  Rational epsilon = 0, eta = 0;
  bool feasible = false;  // a conjecture exists making the strategy a best reply
  std::vector<Rational> witness;  // the conjecture, when feasible
};

struct EliminableCertificate {
  Role role = -1;
  int strategy = -1;
  std::vector<EliminableProbe> schedule;
  bool eliminable = false;
};

/// Decides whether `strategy` is suboptimal against every correlated
/// conjecture that (a) puts at least eta on every opponent profile and (b)
/// conditional on any profile of the other opponents, puts mass >= 1-eps on
/// each opponent's surviving set. Feasibility of the best-reply polytope is
/// an exact LP; the nested polytopes make infeasibility monotone along the
/// shrinking schedule eps_r = 2^-r, eta_r = eps_r / (4 |S_-i|).
EliminableProbe eliminable_at(const NormalFormGame& nf, Role role, int strategy,
                              const std::vector<std::set<int>>& survivors, const Rational& eps,
                              const Rational& eta);

EliminableCertificate eliminable(const NormalFormGame& nf, Role role, int strategy,
                                 const std::vector<std::set<int>>& survivors, int r_max = 20);

/// Grid brute force over the conjecture polytope (two-role games): scans
/// mixtures with the given step and reports whether any grid point keeps the
/// strategy a best reply. Used as the independent oracle for eliminable_at.
bool eliminable_grid_search(const NormalFormGame& nf, Role role, int strategy,
                            const std::vector<std::set<int>>& survivors, double eps, double eta,
                            double step = 0.02);

bool verify_eliminable(const NormalFormGame& nf, const EliminableCertificate& cert,
                       const std::vector<std::set<int>>& survivors);

enum class SequenceGenerator { SW, BI, Custom };

struct StageDeletion {
  Role role = -1;
  int strategy = -1;
  std::optional<DominanceCertificate> dominance;    // stage 0, or SW strict stages
  std::optional<EliminableCertificate> eliminable;  // stages m >= 1
};

struct EliminationStage {
  int stage = 0;
  std::vector<StageDeletion> deletions;
  std::vector<std::set<int>> survivors_after;
};

struct EliminationTrace {
  SequenceGenerator generator = SequenceGenerator::SW;
  std::vector<EliminationStage> stages;
  std::vector<std::set<int>> survivors;  // S*
  bool profile_in_survivors(std::span<const int> profile) const;
};

/// Deletions proposed per stage by a custom driver: stage -> (role,
/// strategy) pairs.
using CustomDeletions = std::vector<std::vector<std::pair<Role, int>>>;

/// Runs a valid elimination sequence to exhaustion. Stage 0 deletes weakly
/// dominated strategies (all of them for SW; the depth-1 backward-induction
/// deviators for BI); later stages delete strictly dominated strategies (SW)
/// or deeper deviators (BI). Every stage-0 deletion carries a dominance
/// certificate and every later deletion is validated by the eliminable
/// oracle; a proposed deletion the oracle rejects aborts the run.
/// BI requires the source tree of a simple game.
EliminationTrace run_valid_sequence(const NormalFormGame& nf, SequenceGenerator generator,
                                    const GameTree* source_tree = nullptr,
                                    const CustomDeletions* custom = nullptr);

/// All certificates in the trace re-verified in exact arithmetic.
bool verify_trace(const NormalFormGame& nf, const EliminationTrace& trace);

/// Survivors of plain iterated strict dominance (no weak round), for
/// refinement-nesting checks.
std::vector<std::set<int>> iterated_strict_survivors(const NormalFormGame& nf);

struct SimpleGameReport {
  bool perfect_info = false;
  bool moves_once = false;
  bool no_terminal_ties = false;
  std::vector<std::string> bi_comparison_ties;  // nodes where backward induction hit a tie
  bool simple() const { return perfect_info && moves_once && no_terminal_ties; }
  /// The relaxed check: backward induction is well defined even with payoff
  /// ties elsewhere as long as no tie occurs at a compared pair.
  bool bi_applicable() const { return perfect_info && moves_once && bi_comparison_ties.empty(); }
};

/// Perfect information, one move per role per path, no payoff ties between
/// terminals, plus the relaxed tie report at comparisons backward induction
/// actually performs.
SimpleGameReport is_simple_game(const GameTree& tree);

/// Unique backward-induction profile. Throws (citing the node) on a
/// comparison tie.
std::vector<PureStrategy> bi_profile(const GameTree& tree);

}  // namespace poplearn
