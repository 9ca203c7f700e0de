#ifndef DYNLOG_SYSTEM_HPP
#define DYNLOG_SYSTEM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynlog/time.hpp"

namespace dynlog {

using StateId = int;
using StateSet = std::set<StateId>;

// A finite dynamical system: a right action of the time monoid on the
// state set, stored as one step table per generator, plus an atomic
// proposition labeling. The action on arbitrary time values is the fold
// of the generator steps (see apply), so the monoid laws pin it down.
class DynSystem {
 public:
  // Validated construction. `tables` holds one row per *declared*
  // generator: nat and int pass just the 1-step (the int 1-step must be
  // a bijection; its inverse is derived), word/free pass one row per
  // letter in alphabet order.
  static DynSystem make(TimeMonoid time, std::vector<std::string> states,
                        std::vector<std::vector<StateId>> tables,
                        std::vector<std::pair<std::string, StateSet>> labels);

  // Raw construction for inspecting hand-written tables with
  // validate_action. `tables` holds one row per generator of `time`
  // (int: both the 1-step and the -1-step). Only shape is checked.
  static DynSystem unchecked(TimeMonoid time, std::vector<std::string> states,
                             std::vector<std::vector<StateId>> tables,
                             std::vector<std::pair<std::string, StateSet>> labels);

  const TimeMonoid& time() const { return time_; }
  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateId s) const { return states_[s]; }
  std::optional<StateId> state_index(const std::string& name) const;

  // One row per generator, aligned with time().generators().
  const std::vector<std::vector<StateId>>& step_tables() const { return tables_; }
  StateId gen_step(int generator, StateId s) const { return tables_[generator][s]; }

  const std::vector<std::pair<std::string, StateSet>>& labels() const { return labels_; }
  const StateSet* label_set(const std::string& atom) const;
  std::set<std::string> atoms_at(StateId s) const;

 private:
  DynSystem(TimeMonoid time, std::vector<std::string> states,
            std::vector<std::vector<StateId>> tables,
            std::vector<std::pair<std::string, StateSet>> labels);

  TimeMonoid time_;
  std::vector<std::string> states_;
  std::vector<std::vector<StateId>> tables_;
  std::vector<std::pair<std::string, StateSet>> labels_;
  std::map<std::string, StateId> state_index_;
};

// The state reached from s after time t (fold of generator steps).
StateId apply(const DynSystem& sys, StateId s, const TimeValue& t);

struct ActionViolation {
  enum class Kind { Unit, Composition };
  Kind kind;
  StateId state;
  TimeValue t, u;  // composition: the pair; unit: both zero-valued
  StateId expected;
  StateId got;
};

struct ActionReport {
  std::vector<ActionViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the unit law at every state and the composition law
// apply(apply(s,t),u) = apply(s,t+u) for all t,u of generator length
// <= bound. Empty for validated systems; hand-written tables (e.g. an
// int -1 row that is not the inverse) show up here.
ActionReport validate_action(const DynSystem& sys, int bound);

// Eventually periodic trajectory of a single state under the 1-step:
// pairwise distinct prefix, then a cycle, |prefix|+|cycle| <= |S|.
// Int-time systems are purely periodic, so their prefix is empty.
struct Lasso {
  std::vector<StateId> prefix;
  std::vector<StateId> cycle;

  // State at a trajectory position; negative positions index the cycle
  // backwards and require an empty prefix.
  StateId state_at(std::int64_t position) const;
};

// Requires nat or int time.
Lasso trajectory_lasso(const DynSystem& sys, StateId s);

// All states reachable from s by any time value (BFS closure over the
// generator steps). Always contains s.
StateSet orbit(const DynSystem& sys, StateId s);

}  // namespace dynlog

#endif
