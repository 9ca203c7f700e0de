#ifndef DYNLOG_FORMULA_HPP
#define DYNLOG_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dynlog/dfa.hpp"
#include "dynlog/time.hpp"

namespace dynlog {

enum class FormulaKind {
  Atom,
  Top,
  Bot,
  Not,
  And,
  Or,
  Implies,
  NablaStep,    // cover modality of the 1-step view
  NablaMulti,   // cover modality of a finite multi-step view (key -> member)
  NablaOrbit,   // cover modality of the orbit view (finite member set)
  Next,         // X f
  NextVia,      // X[t] f
  Prev,         // Y f
  Box,          // G f
  Diamond,      // F f
  Zip,          // zip(a; b): even positions a, odd positions b
  Eat,          // eat(/L/; a; b): words in L land in a, others in b
  Chg,          // chg(t; a; b; c): a before t, b at t, c after t
  MinDur,       // mind(t; f)
  MinDurIncl,   // mind'(t; f)
  MaxDur,       // maxd(t; f)
  MaxDurExcl,   // maxd'(t; f)
  Until,        // U(a; b)
};

// Immutable formula tree with structural equality. Orbit-cover members
// are kept sorted and deduplicated (set semantics); multi-step entries
// are kept sorted by key.
class Formula {
 public:
  Formula() : Formula(top()) {}

  static Formula atom(std::string name);
  static Formula top();
  static Formula bot();
  static Formula negation(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula nabla_step(Formula f);
  static Formula nabla_multi(std::vector<std::pair<TimeValue, Formula>> entries);
  static Formula nabla_orbit(std::vector<Formula> members);
  static Formula next(Formula f);
  static Formula next_via(TimeValue t, Formula f);
  static Formula prev(Formula f);
  static Formula box(Formula f);
  static Formula diamond(Formula f);
  static Formula zip(Formula a, Formula b);
  static Formula eat(Dfa dfa, std::string pattern, Formula a, Formula b);
  static Formula chg(std::int64_t t, Formula a, Formula b, Formula c);
  static Formula min_dur(std::int64_t t, Formula f);
  static Formula min_dur_incl(std::int64_t t, Formula f);
  static Formula max_dur(std::int64_t t, Formula f);
  static Formula max_dur_excl(std::int64_t t, Formula f);
  static Formula until(Formula a, Formula b);

  FormulaKind kind() const;
  const std::string& atom_name() const;        // Atom
  const std::vector<Formula>& children() const;
  const std::vector<TimeValue>& times() const; // NextVia/NablaMulti keys
  std::int64_t duration() const;               // Chg and duration forms
  const Dfa& dfa() const;                      // Eat
  const std::string& eat_pattern() const;      // Eat

  friend bool operator==(const Formula& a, const Formula& b);
  static int order(const Formula& a, const Formula& b);
  struct Less {
    bool operator()(const Formula& a, const Formula& b) const {
      return order(a, b) < 0;
    }
  };

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::string name = {}, std::vector<TimeValue> times = {},
                      std::vector<Formula> children = {},
                      std::shared_ptr<const Dfa> dfa = nullptr);
  std::shared_ptr<const Node> node_;
};

// Rewrites the derived operators into cover-modality form:
//   G f       -> nabla_orbit{f} | nabla_orbit{}
//   F f       -> nabla_orbit{f, true}
//   X f       -> nabla_step f
//   X[t] f    -> nabla_multi{t: f}   (absent keys read as true)
//   Y f       -> nabla_multi{-1: f}
//   mind(t;f) -> chg(t; f; true; true)      mind'(t;f) -> chg(t; f; f; true)
//   maxd(t;f) -> chg(t; true; true; ~f)     maxd'(t;f) -> chg(t; true; ~f; ~f)
// zip/eat/chg/U, the cover modalities, and the boolean skeleton are kept.
// Idempotent, and preserves satisfaction.
Formula desugar(const Formula& f);

// All distinct subformulas, children before parents.
std::vector<Formula> subformulas(const Formula& f);

}  // namespace dynlog

#endif
