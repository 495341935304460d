#pragma once

#include <map>
#include <vector>

#include "recomb/chain.hpp"

namespace recomb {

// Exact description of how the splitting chain is absorbed: the geometric
// decay rate of survival, the states that sustain it, the harmonic scaling,
// and the limiting law conditioned on survival.
struct DecayAnalysis {
  Rat eta;                   // largest stay weight among non-atom closure sets
  std::vector<Mask> e_sets;  // the non-atom closure sets whose stay weight is eta
  std::vector<int> e_states; // chain states {K} + surrounding atoms, one per set
  Rat beta0;                 // largest self-loop among the other transient states
  Rat beta_shortcut;         // largest non-atom stay weight strictly below eta
  std::vector<Rat> phi;      // per-state limit of eta^{-n} P(survive n steps)
  Rat p_hit_e;               // chance of ever standing in an eta-state, from the start
  Rat limit_constant;        // phi at the initial state
  std::map<int, Rat> quasi_limit;  // limiting conditional law (lives on e_states)
  int depth = 0;             // longest refinement path; exactness threshold when beta0 = 0
};

// Throws not_applicable_error when there is nothing to analyze: the identity
// distribution (never absorbed is impossible to leave), or a closure made of
// atoms only (absorption happens in one step, survival vanishes).
DecayAnalysis analyze_decay(const ChainModel& model);

// lim of P(survive n steps from s) / P(survive n steps from the start),
// for every state s.
std::vector<Rat> ratio_limits(const ChainModel& model, const DecayAnalysis& a);

// Verifies, exactly: phi vanishes on the absorbing state and exactly on the
// states that cannot reach an eta-state, equals 1 on eta-states, and satisfies
// (P phi)(s) = eta * phi(s) over the transient states.
CheckReport check_harmonic_scaling(const ChainModel& model, const DecayAnalysis& a);

struct GeometricLimitReport {
  bool ok = true;
  std::vector<Rat> scaled;     // eta^{-n} P(survive n), n = 0..horizon
  std::vector<Rat> deviation;  // |scaled - limit_constant|
  std::vector<Rat> e_share;    // P(standing in an eta-state | survival), per n
  std::vector<std::string> failures;
};

// Tracks the scaled survival along the horizon. When beta0 = 0 the scaled
// survival is exactly the limit from `depth` on and the conditional law sits
// entirely on eta-states; that exactness is asserted.
GeometricLimitReport geometric_limit_check(const ChainModel& model,
                                           const DecayAnalysis& a, int horizon);

// The chain conditioned to survive forever: defined on the states with
// phi > 0, with transition weights P(s,t) phi(t) / (eta phi(s)).
struct QProcess {
  std::vector<int> domain;                             // ascending state indices
  std::map<int, int> row_of;                           // state index -> row position
  std::vector<std::vector<std::pair<int, Rat>>> rows;  // columns are state indices
};
QProcess q_process(const ChainModel& model, const DecayAnalysis& a);

// Probability of an exact path under the conditioned chain.
Rat q_path_probability(const QProcess& qp, const std::vector<int>& path);

// P(the first k steps follow `path` | survival up to n), exactly.
Rat conditioned_path_probability(const ChainModel& model, const std::vector<int>& path,
                                 int n);

// Survival levels at which a quasi-stationary law exists, with the closure
// sets carrying them: a non-atom closure set K qualifies at its stay weight
// when every split of K lands in a pair of atoms. The point mass on the chain
// state {K} + atoms is then stationary conditioned on survival, as is any
// mixture within one level. The top level eta always qualifies.
std::map<Rat, std::vector<Mask>> admissible_levels(const ChainModel& model);

// Verifies that nu (a law on chain states) is quasi-stationary with survival
// rate `level`: nu P = level * nu on the transient states, and the law of the
// chain started from nu, conditioned on survival, stays nu for n = 1..steps.
// Throws validation_error if nu is not a distribution on states carrying the
// given level.
CheckReport check_quasi_stationary(const ChainModel& model,
                                   const std::map<int, Rat>& nu, const Rat& level,
                                   int steps = 5);

}  // namespace recomb
