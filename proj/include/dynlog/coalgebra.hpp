#ifndef DYNLOG_COALGEBRA_HPP
#define DYNLOG_COALGEBRA_HPP

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynlog/formula.hpp"
#include "dynlog/partition.hpp"
#include "dynlog/system.hpp"

namespace dynlog {

enum class ViewKind { Step, MultiStep, Orbit };

// A coalgebraic reading of a system, paired with its labeling: the
// t-step function, a U-indexed multi-step function, or the orbit map,
// all tabulated over the state set.
struct CoalgView {
  ViewKind kind;
  int num_states = 0;
  std::vector<std::string> state_names;

  TimeValue step_time;                               // Step
  std::vector<StateId> step_table;                   // Step
  std::vector<TimeValue> multi_times;                // MultiStep
  std::vector<std::vector<StateId>> multi_table;     // MultiStep, per state
  std::vector<StateSet> orbit_table;                 // Orbit

  std::vector<std::pair<std::string, StateSet>> labels;
};

CoalgView build_view_step(const DynSystem& sys, const TimeValue& t);
CoalgView build_view_multi(const DynSystem& sys, std::vector<TimeValue> times);
CoalgView build_view_orbit(const DynSystem& sys);

// Relational liftings. The relation is a set of pairs over whatever
// carrier the shape uses.
using PairRel = std::set<std::pair<int, int>>;

// Identity shape: lhs related to rhs.
bool lift_identity(const PairRel& rel, int lhs, int rhs);
// Function shape: pointwise related over a shared index set.
bool lift_hom(const PairRel& rel, std::span<const int> lhs, std::span<const int> rhs);
// Powerset shape: both directions of the Egli-Milner condition.
bool lift_powerset(const PairRel& rel, const std::set<int>& lhs, const std::set<int>& rhs);
// Constant shape: the labels themselves must be equal.
bool lift_constant(const std::set<std::string>& lhs, const std::set<std::string>& rhs);

// Lifting of a whole view at two states: equal atom sets plus the
// structure lifting matching the view's kind.
bool view_lift_check(const CoalgView& view, const PairRel& rel, StateId x, StateId y);

// Partition refinement from the label partition to the fixpoint.
// rounds.front() is the label partition, rounds.back() the bisimilarity.
struct RefinementTrace {
  std::vector<Partition> rounds;
};

RefinementTrace refinement_trace(const CoalgView& view);
Partition bisimilarity(const CoalgView& view);

// A formula true at x and false at y, built from the first refinement
// round separating them: an atom (or negated atom) at round zero, then
// step modalities or orbit diamonds around round-(k-1) block formulas.
// Errors if x and y are bisimilar.
Formula distinguishing_formula(const CoalgView& view, StateId x, StateId y);

}  // namespace dynlog

#endif
