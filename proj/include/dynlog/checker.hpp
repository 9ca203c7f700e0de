#ifndef DYNLOG_CHECKER_HPP
#define DYNLOG_CHECKER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dynlog/dfa.hpp"
#include "dynlog/formula.hpp"
#include "dynlog/system.hpp"

namespace dynlog {

// Satisfying set of f, computed bottom-up over desugar(f). Unknown atoms
// are errors, never false.
StateSet eval(const DynSystem& sys, const Formula& f);

// Same semantics, but derived operators are evaluated by their primitive
// clauses (G as a universal over the orbit, X via the step table, ...)
// instead of being rewritten first. eval(sys, f) == eval_direct(sys, f)
// on every system; the two routes cross-check the rewrite rules.
StateSet eval_direct(const DynSystem& sys, const Formula& f);

struct SatResult {
  Formula formula;  // as given, before rewriting
  StateSet satisfying;
  // Desugared subformulas with their satisfying sets, children first.
  std::vector<std::pair<Formula, StateSet>> memo;
};

SatResult check_formula(const DynSystem& sys, const Formula& f);

bool valid(const DynSystem& sys, const Formula& f);

// Trajectory operators, exposed directly. Time-kind requirements:
// zip needs nat or int, chg/until need nat, eat needs word time with
// the dfa's alphabet equal to the system's.
StateSet eval_zip(const DynSystem& sys, const Formula& a, const Formula& b);
StateSet eval_eat(const DynSystem& sys, const Dfa& dfa, const Formula& a, const Formula& b);
StateSet eval_chg(const DynSystem& sys, std::int64_t t, const Formula& a,
                  const Formula& b, const Formula& c);
StateSet eval_until(const DynSystem& sys, const Formula& a, const Formula& b);

}  // namespace dynlog

#endif
