#include "dynlog/checker.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dynlog/error.hpp"

namespace dynlog {

namespace {

StateSet all_states(const DynSystem& sys) {
  StateSet full;
  for (StateId s = 0; s < sys.num_states(); ++s) full.insert(s);
  return full;
}

StateSet complement(const DynSystem& sys, const StateSet& set) {
  StateSet out;
  for (StateId s = 0; s < sys.num_states(); ++s) {
    if (set.count(s) == 0) out.insert(s);
  }
  return out;
}

void require_kind(const DynSystem& sys, std::initializer_list<TimeKind> kinds,
                  const char* what) {
  for (TimeKind k : kinds) {
    if (sys.time().kind() == k) return;
  }
  throw SemanticError(std::string(what));
}

std::int64_t period_lcm2(const Lasso& lasso) {
  const std::int64_t k = static_cast<std::int64_t>(lasso.cycle.size());
  return std::lcm(k, std::int64_t{2});
}

// zip over one trajectory: even positions must land in sat_a, odd ones
// in sat_b. Checking one prefix plus one even-length period covers every
// position, and for int time every residue (positive or negative) is
// congruent to a checked position modulo lcm(|cycle|, 2).
bool zip_holds(const Lasso& lasso, const StateSet& sat_a, const StateSet& sat_b) {
  const std::int64_t limit =
      static_cast<std::int64_t>(lasso.prefix.size()) + period_lcm2(lasso);
  for (std::int64_t t = 0; t < limit; ++t) {
    const StateSet& want = t % 2 == 0 ? sat_a : sat_b;
    if (want.count(lasso.state_at(t)) == 0) return false;
  }
  return true;
}

// chg over one trajectory: sat_a strictly before t, sat_b at t, and
// every state occurring after t in sat_c. States past position t all
// show up within one lasso period of it.
bool chg_holds(const Lasso& lasso, std::int64_t t, const StateSet& sat_a, const StateSet& sat_b,
               const StateSet& sat_c) {
  for (std::int64_t u = 0; u < t; ++u) {
    if (sat_a.count(lasso.state_at(u)) == 0) return false;
  }
  if (sat_b.count(lasso.state_at(t)) == 0) return false;
  const std::int64_t p = static_cast<std::int64_t>(lasso.prefix.size());
  const std::int64_t k = static_cast<std::int64_t>(lasso.cycle.size());
  const std::int64_t limit = std::max(p + k, t + 1 + k);
  for (std::int64_t u = t + 1; u < limit; ++u) {
    if (sat_c.count(lasso.state_at(u)) == 0) return false;
  }
  return true;
}

// until over one trajectory: some position satisfies sat_b with sat_a at
// every earlier one. A minimal witness fits within |prefix| + |cycle|.
bool until_holds(const Lasso& lasso, const StateSet& sat_a, const StateSet& sat_b) {
  const std::int64_t limit =
      static_cast<std::int64_t>(lasso.prefix.size()) + static_cast<std::int64_t>(lasso.cycle.size());
  for (std::int64_t t = 0; t < limit; ++t) {
    const StateId here = lasso.state_at(t);
    if (sat_b.count(here) > 0) return true;
    if (sat_a.count(here) == 0) return false;
  }
  return false;
}

class Evaluator {
 public:
  explicit Evaluator(const DynSystem& sys) : sys_(sys) {}

  StateSet eval(const Formula& f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    StateSet result = compute(f);
    memo_.emplace(f, result);
    return result;
  }

  const std::map<Formula, StateSet, Formula::Less>& memo() const { return memo_; }

 private:
  const Lasso& lasso_of(StateId s) {
    if (lassos_.empty()) {
      lassos_.reserve(sys_.num_states());
      for (StateId q = 0; q < sys_.num_states(); ++q) lassos_.push_back(trajectory_lasso(sys_, q));
    }
    return lassos_[s];
  }

  StateSet zip_states(const StateSet& sat_a, const StateSet& sat_b) {
    require_kind(sys_, {TimeKind::Nat, TimeKind::Int}, "zip requires nat or int time");
    StateSet out;
    for (StateId s = 0; s < sys_.num_states(); ++s) {
      if (zip_holds(lasso_of(s), sat_a, sat_b)) out.insert(s);
    }
    return out;
  }

  StateSet chg_states(std::int64_t t, const StateSet& sat_a, const StateSet& sat_b,
                      const StateSet& sat_c) {
    require_kind(sys_, {TimeKind::Nat}, "chg and the duration forms require nat time");
    StateSet out;
    for (StateId s = 0; s < sys_.num_states(); ++s) {
      if (chg_holds(lasso_of(s), t, sat_a, sat_b, sat_c)) out.insert(s);
    }
    return out;
  }

  StateSet until_states(const StateSet& sat_a, const StateSet& sat_b) {
    require_kind(sys_, {TimeKind::Nat}, "until requires nat time");
    StateSet out;
    for (StateId s = 0; s < sys_.num_states(); ++s) {
      if (until_holds(lasso_of(s), sat_a, sat_b)) out.insert(s);
    }
    return out;
  }

  StateSet eat_states(const Dfa& dfa, const StateSet& sat_a, const StateSet& sat_b) {
    require_kind(sys_, {TimeKind::Word}, "eat requires word time");
    const auto& alphabet = sys_.time().alphabet();
    std::vector<int> dfa_symbol(alphabet.size());
    if (dfa.alphabet().size() != alphabet.size()) {
      throw SemanticError("the pattern's alphabet does not match the system's");
    }
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      auto sym = dfa.symbol_index(alphabet[i]);
      if (!sym) throw SemanticError("the pattern's alphabet does not match the system's");
      dfa_symbol[i] = *sym;
    }

    // Product walk: every reachable (state, dfa state) pair must satisfy
    // sat_a when accepting and sat_b otherwise.
    StateSet out;
    for (StateId s = 0; s < sys_.num_states(); ++s) {
      std::vector<std::pair<StateId, int>> stack = {{s, dfa.initial()}};
      std::set<std::pair<StateId, int>> seen = {stack.back()};
      bool ok = true;
      while (ok && !stack.empty()) {
        auto [q, d] = stack.back();
        stack.pop_back();
        if ((dfa.is_accepting(d) ? sat_a : sat_b).count(q) == 0) {
          ok = false;
          break;
        }
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
          std::pair<StateId, int> next = {sys_.gen_step(static_cast<int>(i), q),
                                          dfa.next(d, dfa_symbol[i])};
          if (seen.insert(next).second) stack.push_back(next);
        }
      }
      if (ok) out.insert(s);
    }
    return out;
  }

  StateSet preimage_at(const TimeValue& t, const StateSet& sat) {
    StateSet out;
    for (StateId s = 0; s < sys_.num_states(); ++s) {
      if (sat.count(apply(sys_, s, t)) > 0) out.insert(s);
    }
    return out;
  }

  StateSet compute(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom: {
        const StateSet* set = sys_.label_set(f.atom_name());
        if (!set) throw SemanticError("unknown atom '" + f.atom_name() + "'");
        return *set;
      }
      case FormulaKind::Top:
        return all_states(sys_);
      case FormulaKind::Bot:
        return {};
      case FormulaKind::Not:
        return complement(sys_, eval(f.children()[0]));
      case FormulaKind::And: {
        StateSet out = all_states(sys_);
        for (const auto& child : f.children()) {
          StateSet sat = eval(child);
          StateSet next;
          std::set_intersection(out.begin(), out.end(), sat.begin(), sat.end(),
                                std::inserter(next, next.end()));
          out = std::move(next);
        }
        return out;
      }
      case FormulaKind::Or: {
        StateSet out;
        for (const auto& child : f.children()) {
          const StateSet sat = eval(child);
          out.insert(sat.begin(), sat.end());
        }
        return out;
      }
      case FormulaKind::Implies: {
        const StateSet a = eval(f.children()[0]);
        const StateSet b = eval(f.children()[1]);
        StateSet out;
        for (StateId s = 0; s < sys_.num_states(); ++s) {
          if (a.count(s) == 0 || b.count(s) > 0) out.insert(s);
        }
        return out;
      }
      case FormulaKind::NablaStep:
      case FormulaKind::Next: {
        require_kind(sys_, {TimeKind::Nat, TimeKind::Int},
                     "the step modality requires nat or int time");
        return preimage_at(TimeValue::number(1), eval(f.children()[0]));
      }
      case FormulaKind::NablaMulti: {
        // Keys absent from the entry map default to true, so only the
        // present ones constrain anything.
        StateSet out = all_states(sys_);
        for (std::size_t i = 0; i < f.times().size(); ++i) {
          const StateSet sat = preimage_at(f.times()[i], eval(f.children()[i]));
          StateSet next;
          std::set_intersection(out.begin(), out.end(), sat.begin(), sat.end(),
                                std::inserter(next, next.end()));
          out = std::move(next);
        }
        return out;
      }
      case FormulaKind::NextVia:
        return preimage_at(f.times()[0], eval(f.children()[0]));
      case FormulaKind::Prev: {
        require_kind(sys_, {TimeKind::Int}, "the previous-step modality requires int time");
        return preimage_at(TimeValue::number(-1), eval(f.children()[0]));
      }
      case FormulaKind::NablaOrbit: {
        // Egli-Milner over the orbit: every orbit member satisfies some
        // listed formula, and every listed formula holds somewhere in
        // the orbit. With an empty list this is unsatisfiable, since
        // orbits contain their base point.
        std::vector<StateSet> sats;
        sats.reserve(f.children().size());
        for (const auto& member : f.children()) sats.push_back(eval(member));
        StateSet out;
        for (StateId s = 0; s < sys_.num_states(); ++s) {
          const StateSet reach = orbit(sys_, s);
          const bool covered =
              std::all_of(reach.begin(), reach.end(), [&](StateId q) {
                return std::any_of(sats.begin(), sats.end(),
                                   [&](const StateSet& sat) { return sat.count(q) > 0; });
              });
          const bool witnessed =
              std::all_of(sats.begin(), sats.end(), [&](const StateSet& sat) {
                return std::any_of(reach.begin(), reach.end(),
                                   [&](StateId q) { return sat.count(q) > 0; });
              });
          if (covered && witnessed) out.insert(s);
        }
        return out;
      }
      case FormulaKind::Box: {
        const StateSet sat = eval(f.children()[0]);
        StateSet out;
        for (StateId s = 0; s < sys_.num_states(); ++s) {
          const StateSet reach = orbit(sys_, s);
          if (std::all_of(reach.begin(), reach.end(),
                          [&](StateId q) { return sat.count(q) > 0; })) {
            out.insert(s);
          }
        }
        return out;
      }
      case FormulaKind::Diamond: {
        const StateSet sat = eval(f.children()[0]);
        StateSet out;
        for (StateId s = 0; s < sys_.num_states(); ++s) {
          const StateSet reach = orbit(sys_, s);
          if (std::any_of(reach.begin(), reach.end(),
                          [&](StateId q) { return sat.count(q) > 0; })) {
            out.insert(s);
          }
        }
        return out;
      }
      case FormulaKind::Zip:
        return zip_states(eval(f.children()[0]), eval(f.children()[1]));
      case FormulaKind::Eat:
        return eat_states(f.dfa(), eval(f.children()[0]), eval(f.children()[1]));
      case FormulaKind::Chg:
        return chg_states(f.duration(), eval(f.children()[0]), eval(f.children()[1]),
                          eval(f.children()[2]));
      case FormulaKind::Until:
        return until_states(eval(f.children()[0]), eval(f.children()[1]));
      case FormulaKind::MinDur:
        return chg_states(f.duration(), eval(f.children()[0]), all_states(sys_),
                          all_states(sys_));
      case FormulaKind::MinDurIncl: {
        const StateSet sat = eval(f.children()[0]);
        return chg_states(f.duration(), sat, sat, all_states(sys_));
      }
      case FormulaKind::MaxDur: {
        const StateSet rest = complement(sys_, eval(f.children()[0]));
        return chg_states(f.duration(), all_states(sys_), all_states(sys_), rest);
      }
      case FormulaKind::MaxDurExcl: {
        const StateSet rest = complement(sys_, eval(f.children()[0]));
        return chg_states(f.duration(), all_states(sys_), rest, rest);
      }
    }
    throw SemanticError("unreachable formula node");
  }

  const DynSystem& sys_;
  std::map<Formula, StateSet, Formula::Less> memo_;
  std::vector<Lasso> lassos_;
};

}  // namespace

StateSet eval_direct(const DynSystem& sys, const Formula& f) {
  return Evaluator(sys).eval(f);
}

StateSet eval(const DynSystem& sys, const Formula& f) {
  return eval_direct(sys, desugar(f));
}

SatResult check_formula(const DynSystem& sys, const Formula& f) {
  SatResult result;
  result.formula = f;
  const Formula rewritten = desugar(f);
  Evaluator evaluator(sys);
  result.satisfying = evaluator.eval(rewritten);
  for (const auto& sub : subformulas(rewritten)) {
    result.memo.push_back({sub, evaluator.memo().at(sub)});
  }
  return result;
}

bool valid(const DynSystem& sys, const Formula& f) {
  return eval(sys, f) == all_states(sys);
}

StateSet eval_zip(const DynSystem& sys, const Formula& a, const Formula& b) {
  return eval(sys, Formula::zip(a, b));
}

StateSet eval_eat(const DynSystem& sys, const Dfa& dfa, const Formula& a, const Formula& b) {
  return eval(sys, Formula::eat(dfa, "", a, b));
}

StateSet eval_chg(const DynSystem& sys, std::int64_t t, const Formula& a, const Formula& b,
                  const Formula& c) {
  return eval(sys, Formula::chg(t, a, b, c));
}

StateSet eval_until(const DynSystem& sys, const Formula& a, const Formula& b) {
  return eval(sys, Formula::until(a, b));
}

}  // namespace dynlog
