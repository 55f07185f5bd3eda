#pragma once

#include <optional>
#include <random>
#include <unordered_map>

#include "poplearn/policy.hpp"

namespace poplearn {

/// Sparse distribution over one role's count states.
struct RoleDistribution {
  std::unordered_map<CountState, double, CountStateHash> mass;
  double dropped = 0.0;  // total mass removed by truncation so far

  double total() const;
};

/// The population state: per role, shares of agents over belief states.
struct PopulationState {
  std::vector<RoleDistribution> roles;
  double trunc_threshold = 1e-14;

  static PopulationState newborn(const std::vector<Policy>& policies,
                                 double trunc_threshold = 1e-14);
};

/// One period of the population map: newborn mass (1-gamma) enters at the
/// zero state; surviving mass gamma moves by the observation kernel induced
/// by each agent's policy action against the true aggregate profile.
/// States falling below the truncation threshold are dropped and accounted
/// in `dropped`, never renormalized away.
PopulationState update_rule(const PopulationState& state, const std::vector<Policy>& policies,
                            const std::vector<BehaviorStrategy>& aggregate, double gamma);

/// Population mixture of policy actions, converted to behavior form through
/// realization weights.
BehaviorStrategy aggregate_strategy(const RoleDistribution& dist, const Policy& policy);

struct ResponseDiagnostics {
  double dropped_mass = 0.0;
  long long support_size = 0;
};

/// Long-run aggregate strategy of one role against a fixed opponent
/// profile: the stationary distribution of the per-agent chain with newborn
/// inflow (1-gamma), solved exactly in increasing total-count order (counts
/// never decrease, self-loops folded), then aggregated. The truncation
/// threshold bounds the dropped stationary mass, reported in diagnostics.
BehaviorStrategy aggregate_response(const Policy& policy,
                                    const std::vector<BehaviorStrategy>& opponents, double gamma,
                                    double trunc_threshold = 1e-14,
                                    ResponseDiagnostics* diag = nullptr,
                                    RoleDistribution* stationary = nullptr);

/// Monte Carlo cross-check of aggregate_response: samples agent ages from
/// the stationary geometric age distribution and simulates each life.
BehaviorStrategy aggregate_response_mc(const Policy& policy,
                                       const std::vector<BehaviorStrategy>& opponents,
                                       double gamma, long long num_agents, std::mt19937_64& rng);

enum class SteadyStateMethod { ExactChain, MonteCarlo };

struct SteadyStateOptions {
  double damping = 0.5;
  int starts = 8;
  unsigned seed = 1;
  double tol = 1e-9;
  int max_iters = 400;
  SteadyStateMethod method = SteadyStateMethod::ExactChain;
  long long mc_agents = 100000;
  double trunc_threshold = 1e-14;
  std::optional<std::vector<BehaviorStrategy>> init;
};

struct SteadyStateDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool cycle_detected = false;
  int cycle_period = 0;
  std::vector<double> residual_trace;
  double dropped_mass = 0.0;
};

struct SteadyStateResult {
  std::vector<BehaviorStrategy> profile;
  SteadyStateDiagnostics diag;
};

struct SteadyStateReport {
  SteadyStateResult best;
  std::vector<SteadyStateResult> starts;
  int distinct_profiles = 0;
  bool flat_landscape = false;  // multiple starts recommended: distinct near-ties found
};

/// Damped fixed-point iteration on the aggregate response mapping from one
/// or more starting profiles. Policies depend only on (role, prior, delta,
/// gamma) and are solved once.
SteadyStateReport steady_state(const GameTree& tree,
                               const std::vector<TerminalPartition>& partitions,
                               const std::vector<DirichletPrior>& priors, double delta,
                               double gamma, const SteadyStateOptions& options = {},
                               const BeliefConfig& config = {});

/// Direct verification that a profile is an exact fixed point of the
/// aggregate response mapping; returns the residual.
double fixed_point_residual(const GameTree& tree,
                            const std::vector<TerminalPartition>& partitions,
                            const std::vector<DirichletPrior>& priors, double delta, double gamma,
                            const std::vector<BehaviorStrategy>& profile,
                            const BeliefConfig& config = {},
                            double trunc_threshold = 1e-14);

/// Named scalar tracked across sweep cells, e.g. an action probability,
/// optionally divided by (1-gamma).
struct SweepMonitor {
  std::string name;
  Role role = 0;
  std::string infoset;
  std::string action;
  bool over_one_minus_gamma = false;
};

struct SweepCell {
  double delta = 0.0, gamma = 0.0;
  SteadyStateResult result;
  std::map<std::string, double> monitors;
  double nash_slack = 0.0;  // max gain of any pure deviation against the cell profile
};

struct SweepRow {
  double delta = 0.0;
  std::vector<SweepCell> cells;
  double inner_cauchy_gap = 0.0;  // sup-norm gap between the last two cells
  bool inner_cauchy = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<BehaviorStrategy> candidate;  // terminal cell of the terminal row
  double outer_cauchy_gap = 0.0;
  bool outer_cauchy = false;
};

struct SweepOptions {
  SteadyStateOptions steady;
  std::vector<SweepMonitor> monitors;
  bool warm_start = true;  // chain cell results along the inner grid
};

/// Steady states over a (delta, gamma) grid with the inner gamma limit
/// estimated at the last grid point plus a Cauchy diagnostic. Requires
/// gamma > delta and gamma >= 1 - (1-delta)/10 cell by cell.
SweepResult patient_sweep(const GameTree& tree,
                          const std::vector<TerminalPartition>& partitions,
                          const std::vector<DirichletPrior>& priors,
                          const std::vector<double>& deltas,
                          const std::vector<std::vector<double>>& gamma_grids,
                          const SweepOptions& options = {}, const BeliefConfig& config = {});

/// Max payoff gain over pure deviations against a profile (the Nash slack).
double nash_slack(const GameTree& tree, const std::vector<BehaviorStrategy>& profile);

double profile_distance(const std::vector<BehaviorStrategy>& a,
                        const std::vector<BehaviorStrategy>& b);

}  // namespace poplearn
