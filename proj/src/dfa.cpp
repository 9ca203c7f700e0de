#include "dynlog/dfa.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <queue>

#include "dynlog/error.hpp"

namespace dynlog {

Dfa::Dfa(std::vector<std::string> alphabet, int num_states, int initial,
         std::set<int> accepting, std::vector<std::vector<int>> transitions)
    : alphabet_(std::move(alphabet)),
      num_states_(num_states),
      initial_(initial),
      accepting_(std::move(accepting)),
      transitions_(std::move(transitions)) {
  if (num_states_ < 1 || initial_ < 0 || initial_ >= num_states_ ||
      transitions_.size() != static_cast<std::size_t>(num_states_)) {
    throw SemanticError("malformed automaton");
  }
  for (const auto& row : transitions_) {
    if (row.size() != alphabet_.size()) throw SemanticError("automaton is not total");
    for (int target : row) {
      if (target < 0 || target >= num_states_) throw SemanticError("automaton target out of range");
    }
  }
  for (int state : accepting_) {
    if (state < 0 || state >= num_states_) throw SemanticError("accepting state out of range");
  }
}

std::optional<int> Dfa::symbol_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(alphabet_.size()); ++i) {
    if (alphabet_[i] == name) return i;
  }
  return std::nullopt;
}

bool Dfa::accepts(const std::vector<std::string>& word) const {
  int state = initial_;
  for (const auto& letter : word) {
    auto sym = symbol_index(letter);
    if (!sym) throw SemanticError("symbol '" + letter + "' is not in the automaton's alphabet");
    state = transitions_[state][*sym];
  }
  return is_accepting(state);
}

int Dfa::order(const Dfa& a, const Dfa& b) {
  if (a.alphabet_ != b.alphabet_) return a.alphabet_ < b.alphabet_ ? -1 : 1;
  if (a.num_states_ != b.num_states_) return a.num_states_ < b.num_states_ ? -1 : 1;
  if (a.initial_ != b.initial_) return a.initial_ < b.initial_ ? -1 : 1;
  if (a.accepting_ != b.accepting_) return a.accepting_ < b.accepting_ ? -1 : 1;
  if (a.transitions_ != b.transitions_) return a.transitions_ < b.transitions_ ? -1 : 1;
  return 0;
}

namespace {

// Regular expression AST over alphabet symbol indices.
struct Re {
  enum class Tag { Empty, Lit, Cat, Alt, Star } tag;
  int symbol = -1;
  std::unique_ptr<Re> left, right;
};

using RePtr = std::unique_ptr<Re>;

RePtr re_node(Re::Tag tag, RePtr left = nullptr, RePtr right = nullptr, int symbol = -1) {
  auto node = std::make_unique<Re>();
  node->tag = tag;
  node->symbol = symbol;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

class ReParser {
 public:
  ReParser(const std::string& pattern, const std::vector<std::string>& alphabet)
      : pattern_(pattern), alphabet_(alphabet) {}

  RePtr parse() {
    if (pattern_.empty()) throw ParseError("empty pattern", 0, 1);
    auto re = alternation();
    if (pos_ < pattern_.size()) {
      throw ParseError("unexpected '" + std::string(1, pattern_[pos_]) + "' in pattern", 0,
                       static_cast<int>(pos_) + 1);
    }
    return re;
  }

 private:
  bool at(char c) const { return pos_ < pattern_.size() && pattern_[pos_] == c; }

  RePtr alternation() {
    auto left = concatenation();
    while (at('|')) {
      ++pos_;
      left = re_node(Re::Tag::Alt, std::move(left), concatenation());
    }
    return left;
  }

  RePtr concatenation() {
    auto left = repetition();
    while (pos_ < pattern_.size() && !at('|') && !at(')')) {
      left = re_node(Re::Tag::Cat, std::move(left), repetition());
    }
    return left;
  }

  RePtr repetition() {
    auto base = primary();
    while (at('*')) {
      ++pos_;
      base = re_node(Re::Tag::Star, std::move(base));
    }
    return base;
  }

  RePtr primary() {
    const int column = static_cast<int>(pos_) + 1;
    if (pos_ >= pattern_.size()) throw ParseError("pattern ends unexpectedly", 0, column);
    const char c = pattern_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = alternation();
      if (!at(')')) throw ParseError("missing ')' in pattern", 0, static_cast<int>(pos_) + 1);
      ++pos_;
      return inner;
    }
    if (c == '~') {
      ++pos_;
      return re_node(Re::Tag::Empty);
    }
    if (c == ')' || c == '*' || c == '|') {
      throw ParseError("unexpected '" + std::string(1, c) + "' in pattern", 0, column);
    }
    const std::string name(1, c);
    auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
    if (it == alphabet_.end()) {
      throw ParseError("symbol '" + name + "' is not in the alphabet", 0, column);
    }
    ++pos_;
    return re_node(Re::Tag::Lit, nullptr, nullptr,
                   static_cast<int>(it - alphabet_.begin()));
  }

  const std::string& pattern_;
  const std::vector<std::string>& alphabet_;
  std::size_t pos_ = 0;
};

// Thompson construction: one start and one accept state per fragment,
// epsilon edges stitched between fragments.
struct Nfa {
  struct State {
    std::vector<std::pair<int, int>> edges;  // (symbol index, target); -1 = epsilon
  };
  std::vector<State> states;

  int fresh() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }
  void edge(int from, int symbol, int to) { states[from].edges.push_back({symbol, to}); }
};

struct Fragment {
  int start;
  int accept;
};

Fragment build_nfa(Nfa& nfa, const Re& re) {
  switch (re.tag) {
    case Re::Tag::Empty: {
      int s = nfa.fresh(), a = nfa.fresh();
      nfa.edge(s, -1, a);
      return {s, a};
    }
    case Re::Tag::Lit: {
      int s = nfa.fresh(), a = nfa.fresh();
      nfa.edge(s, re.symbol, a);
      return {s, a};
    }
    case Re::Tag::Cat: {
      auto l = build_nfa(nfa, *re.left);
      auto r = build_nfa(nfa, *re.right);
      nfa.edge(l.accept, -1, r.start);
      return {l.start, r.accept};
    }
    case Re::Tag::Alt: {
      auto l = build_nfa(nfa, *re.left);
      auto r = build_nfa(nfa, *re.right);
      int s = nfa.fresh(), a = nfa.fresh();
      nfa.edge(s, -1, l.start);
      nfa.edge(s, -1, r.start);
      nfa.edge(l.accept, -1, a);
      nfa.edge(r.accept, -1, a);
      return {s, a};
    }
    case Re::Tag::Star: {
      auto inner = build_nfa(nfa, *re.left);
      int s = nfa.fresh(), a = nfa.fresh();
      nfa.edge(s, -1, inner.start);
      nfa.edge(s, -1, a);
      nfa.edge(inner.accept, -1, inner.start);
      nfa.edge(inner.accept, -1, a);
      return {s, a};
    }
  }
  throw SemanticError("unreachable pattern node");
}

std::set<int> epsilon_closure(const Nfa& nfa, std::set<int> states) {
  std::queue<int> frontier;
  for (int s : states) frontier.push(s);
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop();
    for (const auto& [symbol, target] : nfa.states[cur].edges) {
      if (symbol == -1 && states.insert(target).second) frontier.push(target);
    }
  }
  return states;
}

Dfa determinize(const Nfa& nfa, const Fragment& frag, const std::vector<std::string>& alphabet) {
  std::map<std::set<int>, int> ids;
  std::vector<std::set<int>> subsets;
  std::vector<std::vector<int>> transitions;
  std::set<int> accepting;

  auto intern = [&](std::set<int> subset) {
    auto [it, fresh] = ids.emplace(std::move(subset), static_cast<int>(subsets.size()));
    if (fresh) {
      subsets.push_back(it->first);
      transitions.emplace_back(alphabet.size(), -1);
      if (it->first.count(frag.accept) > 0) accepting.insert(it->second);
    }
    return it->second;
  };

  const int initial = intern(epsilon_closure(nfa, {frag.start}));
  for (int id = 0; id < static_cast<int>(subsets.size()); ++id) {
    for (int sym = 0; sym < static_cast<int>(alphabet.size()); ++sym) {
      std::set<int> moved;
      for (int s : subsets[id]) {
        for (const auto& [symbol, target] : nfa.states[s].edges) {
          if (symbol == sym) moved.insert(target);
        }
      }
      transitions[id][sym] = intern(epsilon_closure(nfa, std::move(moved)));
    }
  }
  return Dfa(alphabet, static_cast<int>(subsets.size()), initial, std::move(accepting),
             std::move(transitions));
}

}  // namespace

Dfa minimize(const Dfa& dfa) {
  // Drop unreachable states first.
  std::vector<int> reach_id(dfa.num_states(), -1);
  std::vector<int> reached;
  reach_id[dfa.initial()] = 0;
  reached.push_back(dfa.initial());
  for (std::size_t i = 0; i < reached.size(); ++i) {
    for (int sym = 0; sym < static_cast<int>(dfa.alphabet().size()); ++sym) {
      int target = dfa.next(reached[i], sym);
      if (reach_id[target] == -1) {
        reach_id[target] = static_cast<int>(reached.size());
        reached.push_back(target);
      }
    }
  }

  // Moore refinement over the reachable part.
  const int n = static_cast<int>(reached.size());
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) cls[i] = dfa.is_accepting(reached[i]) ? 1 : 0;
  while (true) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next_cls(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> sig = {cls[i]};
      for (int sym = 0; sym < static_cast<int>(dfa.alphabet().size()); ++sym) {
        sig.push_back(cls[reach_id[dfa.next(reached[i], sym)]]);
      }
      auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      (void)fresh;
      next_cls[i] = it->second;
    }
    if (next_cls == cls) break;
    cls = std::move(next_cls);
  }

  // Renumber classes by first occurrence in reach order.
  std::map<int, int> renumber;
  for (int i = 0; i < n; ++i) renumber.emplace(cls[i], static_cast<int>(renumber.size()));
  const int m = static_cast<int>(renumber.size());
  std::vector<std::vector<int>> transitions(m, std::vector<int>(dfa.alphabet().size()));
  std::set<int> accepting;
  for (int i = 0; i < n; ++i) {
    const int id = renumber[cls[i]];
    if (dfa.is_accepting(reached[i])) accepting.insert(id);
    for (int sym = 0; sym < static_cast<int>(dfa.alphabet().size()); ++sym) {
      transitions[id][sym] = renumber[cls[reach_id[dfa.next(reached[i], sym)]]];
    }
  }
  return Dfa(dfa.alphabet(), m, renumber[cls[0]], std::move(accepting), std::move(transitions));
}

Dfa regex_to_dfa(const std::string& pattern, const std::vector<std::string>& alphabet) {
  for (const auto& sym : alphabet) {
    if (sym.size() != 1) {
      throw ParseError("alphabet symbol '" + sym + "' is not a single character", 0, 0);
    }
  }
  auto re = ReParser(pattern, alphabet).parse();
  Nfa nfa;
  auto frag = build_nfa(nfa, *re);
  return minimize(determinize(nfa, frag, alphabet));
}

}  // namespace dynlog
