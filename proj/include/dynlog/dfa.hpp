#ifndef DYNLOG_DFA_HPP
#define DYNLOG_DFA_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dynlog {

// Deterministic, total finite automaton over a named alphabet.
class Dfa {
 public:
  Dfa(std::vector<std::string> alphabet, int num_states, int initial,
      std::set<int> accepting, std::vector<std::vector<int>> transitions);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  int num_states() const { return num_states_; }
  int initial() const { return initial_; }
  const std::set<int>& accepting() const { return accepting_; }
  bool is_accepting(int state) const { return accepting_.count(state) > 0; }

  // transitions()[state][symbol index]
  const std::vector<std::vector<int>>& transitions() const { return transitions_; }
  int next(int state, int symbol) const { return transitions_[state][symbol]; }

  std::optional<int> symbol_index(const std::string& name) const;
  bool accepts(const std::vector<std::string>& word) const;

  friend bool operator==(const Dfa&, const Dfa&) = default;
  static int order(const Dfa& a, const Dfa& b);

 private:
  std::vector<std::string> alphabet_;
  int num_states_;
  int initial_;
  std::set<int> accepting_;
  std::vector<std::vector<int>> transitions_;
};

// Compiles a regular expression to a minimal total DFA over `alphabet`.
// Grammar: single-character literals, concatenation, '|', '*', '(...)',
// and '~' for the empty word. Literals must name alphabet symbols.
Dfa regex_to_dfa(const std::string& pattern, const std::vector<std::string>& alphabet);

Dfa minimize(const Dfa& dfa);

}  // namespace dynlog

#endif
