#include "dynlog/coalgebra.hpp"

#include <algorithm>
#include <map>

#include "dynlog/error.hpp"

namespace dynlog {

namespace {

CoalgView base_view(const DynSystem& sys, ViewKind kind) {
  CoalgView view;
  view.kind = kind;
  view.num_states = sys.num_states();
  view.state_names = sys.states();
  view.labels = sys.labels();
  return view;
}

}  // namespace

CoalgView build_view_step(const DynSystem& sys, const TimeValue& t) {
  CoalgView view = base_view(sys, ViewKind::Step);
  view.step_time = t;
  view.step_table.reserve(sys.num_states());
  for (StateId s = 0; s < sys.num_states(); ++s) view.step_table.push_back(apply(sys, s, t));
  return view;
}

CoalgView build_view_multi(const DynSystem& sys, std::vector<TimeValue> times) {
  CoalgView view = base_view(sys, ViewKind::MultiStep);
  view.multi_times = std::move(times);
  view.multi_table.resize(sys.num_states());
  for (StateId s = 0; s < sys.num_states(); ++s) {
    view.multi_table[s].reserve(view.multi_times.size());
    for (const auto& t : view.multi_times) view.multi_table[s].push_back(apply(sys, s, t));
  }
  return view;
}

CoalgView build_view_orbit(const DynSystem& sys) {
  CoalgView view = base_view(sys, ViewKind::Orbit);
  view.orbit_table.reserve(sys.num_states());
  for (StateId s = 0; s < sys.num_states(); ++s) view.orbit_table.push_back(orbit(sys, s));
  return view;
}

bool lift_identity(const PairRel& rel, int lhs, int rhs) { return rel.count({lhs, rhs}) > 0; }

bool lift_hom(const PairRel& rel, std::span<const int> lhs, std::span<const int> rhs) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (rel.count({lhs[i], rhs[i]}) == 0) return false;
  }
  return true;
}

bool lift_powerset(const PairRel& rel, const std::set<int>& lhs, const std::set<int>& rhs) {
  for (int a : lhs) {
    if (std::none_of(rhs.begin(), rhs.end(), [&](int b) { return rel.count({a, b}) > 0; })) {
      return false;
    }
  }
  for (int b : rhs) {
    if (std::none_of(lhs.begin(), lhs.end(), [&](int a) { return rel.count({a, b}) > 0; })) {
      return false;
    }
  }
  return true;
}

bool lift_constant(const std::set<std::string>& lhs, const std::set<std::string>& rhs) {
  return lhs == rhs;
}

namespace {

std::set<std::string> view_atoms(const CoalgView& view, StateId s) {
  std::set<std::string> atoms;
  for (const auto& [name, set] : view.labels) {
    if (set.count(s) > 0) atoms.insert(name);
  }
  return atoms;
}

}  // namespace

bool view_lift_check(const CoalgView& view, const PairRel& rel, StateId x, StateId y) {
  if (!lift_constant(view_atoms(view, x), view_atoms(view, y))) return false;
  switch (view.kind) {
    case ViewKind::Step:
      return lift_identity(rel, view.step_table[x], view.step_table[y]);
    case ViewKind::MultiStep:
      return lift_hom(rel, view.multi_table[x], view.multi_table[y]);
    case ViewKind::Orbit:
      return lift_powerset(rel, view.orbit_table[x], view.orbit_table[y]);
  }
  return false;
}

namespace {

// One refinement round: split each block by the successor-block
// signature of its members under the current partition.
Partition refine_once(const CoalgView& view, const Partition& current) {
  std::map<std::vector<int>, int> sig_ids;
  std::vector<int> classes(view.num_states);
  for (StateId s = 0; s < view.num_states; ++s) {
    std::vector<int> sig = {current.block_of[s]};
    switch (view.kind) {
      case ViewKind::Step:
        sig.push_back(current.block_of[view.step_table[s]]);
        break;
      case ViewKind::MultiStep:
        for (StateId target : view.multi_table[s]) sig.push_back(current.block_of[target]);
        break;
      case ViewKind::Orbit: {
        // With an equivalence relation the Egli-Milner condition
        // collapses to equality of touched block sets.
        std::set<int> touched;
        for (StateId target : view.orbit_table[s]) touched.insert(current.block_of[target]);
        sig.insert(sig.end(), touched.begin(), touched.end());
        break;
      }
    }
    auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
    (void)fresh;
    classes[s] = it->second;
  }
  return Partition::from_classes(classes);
}

}  // namespace

RefinementTrace refinement_trace(const CoalgView& view) {
  RefinementTrace trace;
  std::map<std::set<std::string>, int> label_ids;
  std::vector<int> classes(view.num_states);
  for (StateId s = 0; s < view.num_states; ++s) {
    auto [it, fresh] = label_ids.emplace(view_atoms(view, s), static_cast<int>(label_ids.size()));
    (void)fresh;
    classes[s] = it->second;
  }
  trace.rounds.push_back(Partition::from_classes(classes));
  while (true) {
    Partition next = refine_once(view, trace.rounds.back());
    if (next.blocks == trace.rounds.back().blocks) break;
    trace.rounds.push_back(std::move(next));
  }
  return trace;
}

Partition bisimilarity(const CoalgView& view) { return refinement_trace(view).rounds.back(); }

namespace {

// Exact characteristic formula of a block at a refinement round: states
// satisfy it iff they lie in the block. Only needed for orbit views,
// where separating two states requires naming the block their orbits
// disagree on.
class BlockFormulas {
 public:
  BlockFormulas(const CoalgView& view, const RefinementTrace& trace)
      : view_(view), trace_(trace) {}

  Formula characteristic(int round, int block) {
    auto key = std::make_pair(round, block);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Formula result = build(round, block);
    memo_.emplace(key, result);
    return result;
  }

 private:
  Formula build(int round, int block) {
    const Partition& part = trace_.rounds[round];
    const StateId rep = part.blocks[block].front();
    if (round == 0) {
      std::vector<Formula> lits;
      const auto atoms = view_atoms(view_, rep);
      for (const auto& [name, set] : view_.labels) {
        (void)set;
        Formula lit = Formula::atom(name);
        lits.push_back(atoms.count(name) > 0 ? lit : Formula::negation(lit));
      }
      if (lits.empty()) return Formula::top();
      return Formula::conj(std::move(lits));
    }
    const Partition& prev = trace_.rounds[round - 1];
    std::vector<Formula> parts = {characteristic(round - 1, prev.block_of[rep])};
    std::set<int> touched;
    for (StateId target : view_.orbit_table[rep]) touched.insert(prev.block_of[target]);
    for (int b = 0; b < prev.num_blocks(); ++b) {
      Formula reach = Formula::diamond(characteristic(round - 1, b));
      parts.push_back(touched.count(b) > 0 ? reach : Formula::negation(reach));
    }
    return Formula::conj(std::move(parts));
  }

  const CoalgView& view_;
  const RefinementTrace& trace_;
  std::map<std::pair<int, int>, Formula> memo_;
};

int first_separating_round(const RefinementTrace& trace, StateId x, StateId y) {
  for (int r = 0; r < static_cast<int>(trace.rounds.size()); ++r) {
    if (!trace.rounds[r].same_block(x, y)) return r;
  }
  return -1;
}

Formula step_wrap(const CoalgView& view, Formula inner) {
  if (view.step_time.is_number() && view.step_time.as_number() == 1) {
    return Formula::next(std::move(inner));
  }
  return Formula::next_via(view.step_time, std::move(inner));
}

Formula distinguish(const CoalgView& view, const RefinementTrace& trace, BlockFormulas& chars,
                    StateId x, StateId y, int round) {
  if (round == 0) {
    const auto at_x = view_atoms(view, x);
    const auto at_y = view_atoms(view, y);
    for (const auto& [name, set] : view.labels) {
      (void)set;
      const bool in_x = at_x.count(name) > 0;
      if (in_x != (at_y.count(name) > 0)) {
        Formula lit = Formula::atom(name);
        return in_x ? lit : Formula::negation(lit);
      }
    }
    throw SemanticError("label partition separated states with equal labels");
  }
  const Partition& prev = trace.rounds[round - 1];
  switch (view.kind) {
    case ViewKind::Step: {
      const StateId sx = view.step_table[x];
      const StateId sy = view.step_table[y];
      const int r = first_separating_round(trace, sx, sy);
      return step_wrap(view, distinguish(view, trace, chars, sx, sy, r));
    }
    case ViewKind::MultiStep: {
      for (std::size_t i = 0; i < view.multi_times.size(); ++i) {
        const StateId sx = view.multi_table[x][i];
        const StateId sy = view.multi_table[y][i];
        if (prev.same_block(sx, sy)) continue;
        const int r = first_separating_round(trace, sx, sy);
        return Formula::next_via(view.multi_times[i], distinguish(view, trace, chars, sx, sy, r));
      }
      throw SemanticError("multi-step signatures agree despite a split");
    }
    case ViewKind::Orbit: {
      std::set<int> touched_x, touched_y;
      for (StateId t : view.orbit_table[x]) touched_x.insert(prev.block_of[t]);
      for (StateId t : view.orbit_table[y]) touched_y.insert(prev.block_of[t]);
      for (int b = 0; b < prev.num_blocks(); ++b) {
        const bool in_x = touched_x.count(b) > 0;
        if (in_x == (touched_y.count(b) > 0)) continue;
        Formula reach = Formula::diamond(chars.characteristic(round - 1, b));
        return in_x ? reach : Formula::negation(reach);
      }
      throw SemanticError("orbit signatures agree despite a split");
    }
  }
  throw SemanticError("unreachable view kind");
}

}  // namespace

Formula distinguishing_formula(const CoalgView& view, StateId x, StateId y) {
  const RefinementTrace trace = refinement_trace(view);
  const int round = first_separating_round(trace, x, y);
  if (round < 0) {
    throw SemanticError("states '" + view.state_names[x] + "' and '" + view.state_names[y] +
                        "' are bisimilar; no formula distinguishes them");
  }
  BlockFormulas chars(view, trace);
  return distinguish(view, trace, chars, x, y, round);
}

}  // namespace dynlog
