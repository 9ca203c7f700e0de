#include "dynlog/formula.hpp"

#include <algorithm>
#include <map>

#include "dynlog/error.hpp"

namespace dynlog {

struct Formula::Node {
  FormulaKind kind;
  std::string name;              // Atom name; Eat source pattern
  std::vector<TimeValue> times;  // multi-step keys, [t], durations
  std::vector<Formula> children;
  std::shared_ptr<const Dfa> dfa;
};

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::atom_name() const { return node_->name; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
const std::vector<TimeValue>& Formula::times() const { return node_->times; }
std::int64_t Formula::duration() const { return node_->times.at(0).as_number(); }
const Dfa& Formula::dfa() const { return *node_->dfa; }
const std::string& Formula::eat_pattern() const { return node_->name; }

int Formula::order(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.node_->name.compare(b.node_->name); c != 0) return c < 0 ? -1 : 1;
  if (a.node_->times.size() != b.node_->times.size()) {
    return a.node_->times.size() < b.node_->times.size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.node_->times.size(); ++i) {
    if (int c = compare(a.node_->times[i], b.node_->times[i]); c != 0) return c;
  }
  const bool has_dfa_a = a.node_->dfa != nullptr;
  if (has_dfa_a != (b.node_->dfa != nullptr)) return has_dfa_a ? 1 : -1;
  if (has_dfa_a) {
    if (int c = Dfa::order(*a.node_->dfa, *b.node_->dfa); c != 0) return c;
  }
  if (a.children().size() != b.children().size()) {
    return a.children().size() < b.children().size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (int c = order(a.children()[i], b.children()[i]); c != 0) return c;
  }
  return 0;
}

bool operator==(const Formula& a, const Formula& b) { return Formula::order(a, b) == 0; }

Formula Formula::make(FormulaKind kind, std::string name, std::vector<TimeValue> times,
                      std::vector<Formula> children, std::shared_ptr<const Dfa> dfa) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->times = std::move(times);
  node->children = std::move(children);
  node->dfa = std::move(dfa);
  return Formula(std::shared_ptr<const Node>(std::move(node)));
}

namespace {

std::int64_t require_duration(std::int64_t t) {
  if (t < 0) throw SemanticError("durations must be nat values");
  return t;
}

}  // namespace

Formula Formula::atom(std::string name) {
  if (name.empty()) throw SemanticError("empty atom name");
  return make(FormulaKind::Atom, std::move(name));
}

Formula Formula::top() { return make(FormulaKind::Top); }
Formula Formula::bot() { return make(FormulaKind::Bot); }

Formula Formula::negation(Formula f) { return make(FormulaKind::Not, {}, {}, {std::move(f)}); }

Formula Formula::conj(std::vector<Formula> fs) {
  return make(FormulaKind::And, {}, {}, std::move(fs));
}

Formula Formula::disj(std::vector<Formula> fs) {
  return make(FormulaKind::Or, {}, {}, std::move(fs));
}

Formula Formula::implies(Formula a, Formula b) {
  return make(FormulaKind::Implies, {}, {}, {std::move(a), std::move(b)});
}

Formula Formula::nabla_step(Formula f) {
  return make(FormulaKind::NablaStep, {}, {}, {std::move(f)});
}

Formula Formula::nabla_multi(std::vector<std::pair<TimeValue, Formula>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<TimeValue> times;
  std::vector<Formula> children;
  for (auto& [key, member] : entries) {
    if (!times.empty() && compare(times.back(), key) == 0) {
      throw SemanticError("duplicate multi-step key");
    }
    times.push_back(key);
    children.push_back(std::move(member));
  }
  return make(FormulaKind::NablaMulti, {}, std::move(times), std::move(children));
}

Formula Formula::nabla_orbit(std::vector<Formula> members) {
  std::sort(members.begin(), members.end(), Less{});
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return make(FormulaKind::NablaOrbit, {}, {}, std::move(members));
}

Formula Formula::next(Formula f) { return make(FormulaKind::Next, {}, {}, {std::move(f)}); }

Formula Formula::next_via(TimeValue t, Formula f) {
  return make(FormulaKind::NextVia, {}, {std::move(t)}, {std::move(f)});
}

Formula Formula::prev(Formula f) { return make(FormulaKind::Prev, {}, {}, {std::move(f)}); }
Formula Formula::box(Formula f) { return make(FormulaKind::Box, {}, {}, {std::move(f)}); }

Formula Formula::diamond(Formula f) {
  return make(FormulaKind::Diamond, {}, {}, {std::move(f)});
}

Formula Formula::zip(Formula a, Formula b) {
  return make(FormulaKind::Zip, {}, {}, {std::move(a), std::move(b)});
}

Formula Formula::eat(Dfa dfa, std::string pattern, Formula a, Formula b) {
  return make(FormulaKind::Eat, std::move(pattern), {}, {std::move(a), std::move(b)},
                   std::make_shared<const Dfa>(std::move(dfa)));
}

Formula Formula::chg(std::int64_t t, Formula a, Formula b, Formula c) {
  return make(FormulaKind::Chg, {}, {TimeValue::number(require_duration(t))},
                   {std::move(a), std::move(b), std::move(c)});
}

Formula Formula::min_dur(std::int64_t t, Formula f) {
  return make(FormulaKind::MinDur, {}, {TimeValue::number(require_duration(t))},
                   {std::move(f)});
}

Formula Formula::min_dur_incl(std::int64_t t, Formula f) {
  return make(FormulaKind::MinDurIncl, {}, {TimeValue::number(require_duration(t))},
                   {std::move(f)});
}

Formula Formula::max_dur(std::int64_t t, Formula f) {
  return make(FormulaKind::MaxDur, {}, {TimeValue::number(require_duration(t))},
                   {std::move(f)});
}

Formula Formula::max_dur_excl(std::int64_t t, Formula f) {
  return make(FormulaKind::MaxDurExcl, {}, {TimeValue::number(require_duration(t))},
                   {std::move(f)});
}

Formula Formula::until(Formula a, Formula b) {
  return make(FormulaKind::Until, {}, {}, {std::move(a), std::move(b)});
}

Formula desugar(const Formula& f) {
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& child : f.children()) kids.push_back(desugar(child));

  switch (f.kind()) {
    case FormulaKind::Box:
      return Formula::disj({Formula::nabla_orbit({kids[0]}), Formula::nabla_orbit({})});
    case FormulaKind::Diamond:
      return Formula::nabla_orbit({kids[0], Formula::top()});
    case FormulaKind::Next:
      return Formula::nabla_step(kids[0]);
    case FormulaKind::NextVia:
      return Formula::nabla_multi({{f.times()[0], kids[0]}});
    case FormulaKind::Prev:
      return Formula::nabla_multi({{TimeValue::number(-1), kids[0]}});
    case FormulaKind::MinDur:
      return Formula::chg(f.duration(), kids[0], Formula::top(), Formula::top());
    case FormulaKind::MinDurIncl:
      return Formula::chg(f.duration(), kids[0], kids[0], Formula::top());
    case FormulaKind::MaxDur:
      return Formula::chg(f.duration(), Formula::top(), Formula::top(),
                          Formula::negation(kids[0]));
    case FormulaKind::MaxDurExcl:
      return Formula::chg(f.duration(), Formula::top(), Formula::negation(kids[0]),
                          Formula::negation(kids[0]));
    case FormulaKind::Atom:
    case FormulaKind::Top:
    case FormulaKind::Bot:
      return f;
    case FormulaKind::Not:
      return Formula::negation(kids[0]);
    case FormulaKind::And:
      return Formula::conj(std::move(kids));
    case FormulaKind::Or:
      return Formula::disj(std::move(kids));
    case FormulaKind::Implies:
      return Formula::implies(kids[0], kids[1]);
    case FormulaKind::NablaStep:
      return Formula::nabla_step(kids[0]);
    case FormulaKind::NablaMulti: {
      std::vector<std::pair<TimeValue, Formula>> entries;
      for (std::size_t i = 0; i < kids.size(); ++i) entries.push_back({f.times()[i], kids[i]});
      return Formula::nabla_multi(std::move(entries));
    }
    case FormulaKind::NablaOrbit:
      return Formula::nabla_orbit(std::move(kids));
    case FormulaKind::Zip:
      return Formula::zip(kids[0], kids[1]);
    case FormulaKind::Eat:
      return Formula::eat(f.dfa(), f.eat_pattern(), kids[0], kids[1]);
    case FormulaKind::Chg:
      return Formula::chg(f.duration(), kids[0], kids[1], kids[2]);
    case FormulaKind::Until:
      return Formula::until(kids[0], kids[1]);
  }
  throw SemanticError("unreachable formula node");
}

namespace {

void collect(const Formula& f, std::map<Formula, bool, Formula::Less>& seen,
             std::vector<Formula>& out) {
  if (seen.count(f) > 0) return;
  for (const auto& child : f.children()) collect(child, seen, out);
  if (seen.emplace(f, true).second) out.push_back(f);
}

}  // namespace

std::vector<Formula> subformulas(const Formula& f) {
  std::map<Formula, bool, Formula::Less> seen;
  std::vector<Formula> out;
  collect(f, seen, out);
  return out;
}

}  // namespace dynlog
