#include "dynlog/system.hpp"

#include <algorithm>
#include <queue>

#include "dynlog/error.hpp"

namespace dynlog {

namespace {

void check_shape(const TimeMonoid& time, const std::vector<std::string>& states,
                 const std::vector<std::vector<StateId>>& tables,
                 const std::vector<std::pair<std::string, StateSet>>& labels,
                 std::size_t expected_rows) {
  if (states.empty()) throw SemanticError("a system needs at least one state");
  if (tables.size() != expected_rows) {
    throw SemanticError("expected " + std::to_string(expected_rows) + " step table(s), got " +
                        std::to_string(tables.size()));
  }
  const int n = static_cast<int>(states.size());
  for (const auto& row : tables) {
    if (row.size() != states.size()) throw SemanticError("step table does not cover every state");
    for (StateId s : row) {
      if (s < 0 || s >= n) throw SemanticError("step target out of range");
    }
  }
  for (const auto& [atom, set] : labels) {
    if (atom.empty()) throw SemanticError("empty atom name");
    for (StateId s : set) {
      if (s < 0 || s >= n) throw SemanticError("label '" + atom + "' marks an unknown state");
    }
  }
  (void)time;
}

}  // namespace

DynSystem::DynSystem(TimeMonoid time, std::vector<std::string> states,
                     std::vector<std::vector<StateId>> tables,
                     std::vector<std::pair<std::string, StateSet>> labels)
    : time_(std::move(time)),
      states_(std::move(states)),
      tables_(std::move(tables)),
      labels_(std::move(labels)) {
  for (int i = 0; i < static_cast<int>(states_.size()); ++i) {
    if (states_[i].empty()) throw SemanticError("empty state name");
    if (!state_index_.emplace(states_[i], i).second) {
      throw SemanticError("duplicate state '" + states_[i] + "'");
    }
  }
  std::set<std::string> seen_atoms;
  for (const auto& [atom, set] : labels_) {
    (void)set;
    if (!seen_atoms.insert(atom).second) {
      throw SemanticError("duplicate label '" + atom + "'");
    }
  }
}

DynSystem DynSystem::make(TimeMonoid time, std::vector<std::string> states,
                          std::vector<std::vector<StateId>> tables,
                          std::vector<std::pair<std::string, StateSet>> labels) {
  const std::size_t declared =
      time.kind() == TimeKind::Nat || time.kind() == TimeKind::Int ? 1 : time.alphabet().size();
  check_shape(time, states, tables, labels, declared);
  if (time.kind() == TimeKind::Int) {
    // The 1-step of an int-time system must be invertible; the -1 step is
    // its inverse, not an independent input.
    const auto& step = tables[0];
    const int n = static_cast<int>(states.size());
    std::vector<StateId> inverse(n, -1);
    for (StateId s = 0; s < n; ++s) {
      if (inverse[step[s]] != -1) {
        throw SemanticError("step 1 is not a bijection: states '" + states[inverse[step[s]]] +
                            "' and '" + states[s] + "' both map to '" + states[step[s]] + "'");
      }
      inverse[step[s]] = s;
    }
    tables.push_back(std::move(inverse));
  }
  return DynSystem(std::move(time), std::move(states), std::move(tables), std::move(labels));
}

DynSystem DynSystem::unchecked(TimeMonoid time, std::vector<std::string> states,
                               std::vector<std::vector<StateId>> tables,
                               std::vector<std::pair<std::string, StateSet>> labels) {
  check_shape(time, states, tables, labels, time.generators().size());
  return DynSystem(std::move(time), std::move(states), std::move(tables), std::move(labels));
}

std::optional<StateId> DynSystem::state_index(const std::string& name) const {
  auto it = state_index_.find(name);
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

const StateSet* DynSystem::label_set(const std::string& atom) const {
  for (const auto& [name, set] : labels_) {
    if (name == atom) return &set;
  }
  return nullptr;
}

std::set<std::string> DynSystem::atoms_at(StateId s) const {
  std::set<std::string> out;
  for (const auto& [name, set] : labels_) {
    if (set.count(s) > 0) out.insert(name);
  }
  return out;
}

StateId apply(const DynSystem& sys, StateId s, const TimeValue& t0) {
  const TimeMonoid& time = sys.time();
  auto t = time.coerce(t0);
  if (!t) {
    throw SemanticError("time value " + time.show(t0) + " is not valid for this system's time");
  }
  switch (time.kind()) {
    case TimeKind::Nat: {
      for (std::int64_t i = 0; i < t->as_number(); ++i) s = sys.gen_step(0, s);
      return s;
    }
    case TimeKind::Int: {
      const std::int64_t n = t->as_number();
      const int gen = n >= 0 ? 0 : 1;
      for (std::int64_t i = 0; i < (n >= 0 ? n : -n); ++i) s = sys.gen_step(gen, s);
      return s;
    }
    case TimeKind::Word:
    case TimeKind::FreeIdx: {
      for (const auto& letter : t->letters()) {
        s = sys.gen_step(*time.generator_index(letter), s);
      }
      return s;
    }
  }
  return s;
}

ActionReport validate_action(const DynSystem& sys, int bound) {
  ActionReport report;
  const TimeValue zero = sys.time().identity();
  for (StateId s = 0; s < sys.num_states(); ++s) {
    StateId got = apply(sys, s, zero);
    if (got != s) {
      report.violations.push_back({ActionViolation::Kind::Unit, s, zero, zero, s, got});
    }
  }
  const auto values = sys.time().bounded_values(bound);
  for (StateId s = 0; s < sys.num_states(); ++s) {
    for (const auto& t : values) {
      const StateId mid = apply(sys, s, t);
      for (const auto& u : values) {
        const StateId stepwise = apply(sys, mid, u);
        const StateId joined = apply(sys, s, sys.time().add(t, u));
        if (stepwise != joined) {
          report.violations.push_back(
              {ActionViolation::Kind::Composition, s, t, u, joined, stepwise});
        }
      }
    }
  }
  return report;
}

StateId Lasso::state_at(std::int64_t position) const {
  const std::int64_t p = static_cast<std::int64_t>(prefix.size());
  const std::int64_t k = static_cast<std::int64_t>(cycle.size());
  if (position >= 0 && position < p) return prefix[position];
  const std::int64_t offset = ((position - p) % k + k) % k;
  return cycle[offset];
}

Lasso trajectory_lasso(const DynSystem& sys, StateId s) {
  if (sys.time().kind() != TimeKind::Nat && sys.time().kind() != TimeKind::Int) {
    throw SemanticError("trajectory lassos require nat or int time");
  }
  std::vector<StateId> seen;
  std::vector<int> position(sys.num_states(), -1);
  StateId cur = s;
  while (position[cur] == -1) {
    position[cur] = static_cast<int>(seen.size());
    seen.push_back(cur);
    cur = sys.gen_step(0, cur);
  }
  const int split = position[cur];
  Lasso lasso;
  lasso.prefix.assign(seen.begin(), seen.begin() + split);
  lasso.cycle.assign(seen.begin() + split, seen.end());
  return lasso;
}

StateSet orbit(const DynSystem& sys, StateId s) {
  StateSet reached = {s};
  std::queue<StateId> frontier;
  frontier.push(s);
  while (!frontier.empty()) {
    const StateId cur = frontier.front();
    frontier.pop();
    for (const auto& row : sys.step_tables()) {
      if (reached.insert(row[cur]).second) frontier.push(row[cur]);
    }
  }
  return reached;
}

}  // namespace dynlog
