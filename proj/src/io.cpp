#include "dynlog/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynlog/checker.hpp"
#include "dynlog/coalgebra.hpp"
#include "dynlog/error.hpp"

namespace dynlog {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] void fail(const std::string& msg, int line) { throw ParseError(msg, line); }

}  // namespace

// ---------------------------------------------------------------- systems

DynSystem parse_system(const std::string& text) {
  std::optional<TimeMonoid> time;
  std::vector<std::string> states;
  std::map<std::string, int> state_ids;
  std::map<std::string, std::vector<StateId>> step_rows;  // generator name -> row
  std::vector<std::pair<std::string, StateSet>> labels;
  int time_line = 0;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = split_tokens(strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];

    if (head == "time") {
      if (time) fail("duplicate time declaration", line_no);
      if (tokens.size() < 2) fail("time declaration needs a kind", line_no);
      const std::string& kind = tokens[1];
      if (kind == "nat") {
        if (tokens.size() > 2) fail("time nat takes no arguments", line_no);
        time = TimeMonoid::nat();
      } else if (kind == "int") {
        if (tokens.size() > 2) fail("time int takes no arguments", line_no);
        time = TimeMonoid::integers();
      } else if (kind == "word") {
        std::vector<std::string> alphabet(tokens.begin() + 2, tokens.end());
        try {
          time = TimeMonoid::word(std::move(alphabet));
        } catch (const SemanticError& e) {
          fail(e.what(), line_no);
        }
      } else if (kind == "free") {
        if (tokens.size() != 3) fail("time free takes one generator count", line_no);
        int count = 0;
        try {
          count = std::stoi(tokens[2]);
        } catch (...) {
          fail("invalid generator count '" + tokens[2] + "'", line_no);
        }
        if (count < 1) fail("time free needs a positive generator count", line_no);
        time = TimeMonoid::free_index(count);
      } else {
        fail("unknown time kind '" + kind + "'", line_no);
      }
      time_line = line_no;
    } else if (head == "states") {
      if (!states.empty()) fail("duplicate states declaration", line_no);
      if (tokens.size() < 2) fail("states declaration needs at least one state", line_no);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!state_ids.emplace(tokens[i], static_cast<int>(states.size())).second) {
          fail("duplicate state '" + tokens[i] + "'", line_no);
        }
        states.push_back(tokens[i]);
      }
    } else if (head == "step") {
      if (!time) fail("step before time declaration", line_no);
      if (states.empty()) fail("step before states declaration", line_no);
      if (tokens.size() < 2 || tokens[1].size() < 2 || tokens[1].back() != ':') {
        fail("expected 'step <generator>:'", line_no);
      }
      const std::string gen = tokens[1].substr(0, tokens[1].size() - 1);
      if (time->kind() == TimeKind::Int && gen == "-1") {
        fail("int systems declare only step 1; the -1 step is derived", line_no);
      }
      const std::vector<std::string> declared =
          time->kind() == TimeKind::Nat || time->kind() == TimeKind::Int
              ? std::vector<std::string>{"1"}
              : time->alphabet();
      if (std::find(declared.begin(), declared.end(), gen) == declared.end()) {
        fail("unknown generator '" + gen + "'", line_no);
      }
      if (step_rows.count(gen) > 0) fail("duplicate step declaration for '" + gen + "'", line_no);
      std::vector<StateId> row(states.size(), -1);
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        const auto arrow = tokens[i].find("->");
        if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= tokens[i].size()) {
          fail("expected '<src>-><dst>', got '" + tokens[i] + "'", line_no);
        }
        const std::string src = tokens[i].substr(0, arrow);
        const std::string dst = tokens[i].substr(arrow + 2);
        const auto src_it = state_ids.find(src);
        if (src_it == state_ids.end()) fail("unknown state '" + src + "'", line_no);
        const auto dst_it = state_ids.find(dst);
        if (dst_it == state_ids.end()) fail("unknown state '" + dst + "'", line_no);
        if (row[src_it->second] != -1) fail("state '" + src + "' mapped twice", line_no);
        row[src_it->second] = dst_it->second;
      }
      for (std::size_t s = 0; s < states.size(); ++s) {
        if (row[s] == -1) fail("step " + gen + " does not map state '" + states[s] + "'", line_no);
      }
      step_rows.emplace(gen, std::move(row));
    } else if (head == "label") {
      if (states.empty()) fail("label before states declaration", line_no);
      if (tokens.size() < 2 || tokens[1].size() < 2 || tokens[1].back() != ':') {
        fail("expected 'label <atom>:'", line_no);
      }
      const std::string atom = tokens[1].substr(0, tokens[1].size() - 1);
      for (const auto& [existing, set] : labels) {
        (void)set;
        if (existing == atom) fail("duplicate label '" + atom + "'", line_no);
      }
      StateSet set;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        const auto it = state_ids.find(tokens[i]);
        if (it == state_ids.end()) fail("unknown state '" + tokens[i] + "'", line_no);
        set.insert(it->second);
      }
      labels.push_back({atom, std::move(set)});
    } else {
      fail("unknown directive '" + head + "'", line_no);
    }
  }

  if (!time) fail("missing time declaration", line_no);
  if (states.empty()) fail("missing states declaration", line_no);
  const std::vector<std::string> declared =
      time->kind() == TimeKind::Nat || time->kind() == TimeKind::Int
          ? std::vector<std::string>{"1"}
          : time->alphabet();
  std::vector<std::vector<StateId>> tables;
  for (const auto& gen : declared) {
    const auto it = step_rows.find(gen);
    if (it == step_rows.end()) fail("missing step declaration for '" + gen + "'", time_line);
    tables.push_back(it->second);
  }
  return DynSystem::make(*time, std::move(states), std::move(tables), std::move(labels));
}

std::string print_system(const DynSystem& sys) {
  std::ostringstream out;
  const TimeMonoid& time = sys.time();
  switch (time.kind()) {
    case TimeKind::Nat:
      out << "time nat\n";
      break;
    case TimeKind::Int:
      out << "time int\n";
      break;
    case TimeKind::Word:
      out << "time word";
      for (const auto& sym : time.alphabet()) out << ' ' << sym;
      out << '\n';
      break;
    case TimeKind::FreeIdx:
      out << "time free " << time.alphabet().size() << '\n';
      break;
  }
  out << "states";
  for (const auto& name : sys.states()) out << ' ' << name;
  out << '\n';
  const std::vector<std::string> declared =
      time.kind() == TimeKind::Nat || time.kind() == TimeKind::Int
          ? std::vector<std::string>{"1"}
          : time.alphabet();
  for (std::size_t g = 0; g < declared.size(); ++g) {
    out << "step " << declared[g] << ':';
    for (StateId s = 0; s < sys.num_states(); ++s) {
      out << ' ' << sys.state_name(s) << "->" << sys.state_name(sys.gen_step(static_cast<int>(g), s));
    }
    out << '\n';
  }
  for (const auto& [atom, set] : sys.labels()) {
    out << "label " << atom << ':';
    for (StateId s : set) out << ' ' << sys.state_name(s);
    out << '\n';
  }
  return out.str();
}

// ----------------------------------------------------------------- frames

Frame parse_frame(const std::string& text) {
  Frame frame;
  std::map<std::string, int> ids;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = split_tokens(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens[0] == "worlds") {
      if (!frame.worlds.empty()) fail("duplicate worlds declaration", line_no);
      if (tokens.size() < 2) fail("worlds declaration needs at least one world", line_no);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!ids.emplace(tokens[i], static_cast<int>(frame.worlds.size())).second) {
          fail("duplicate world '" + tokens[i] + "'", line_no);
        }
        frame.worlds.push_back(tokens[i]);
      }
    } else if (tokens[0] == "edge") {
      if (frame.worlds.empty()) fail("edge before worlds declaration", line_no);
      if (tokens.size() != 3) fail("expected 'edge <src> <dst>'", line_no);
      const auto src = ids.find(tokens[1]);
      if (src == ids.end()) fail("unknown world '" + tokens[1] + "'", line_no);
      const auto dst = ids.find(tokens[2]);
      if (dst == ids.end()) fail("unknown world '" + tokens[2] + "'", line_no);
      frame.relation.insert({src->second, dst->second});
    } else {
      fail("unknown directive '" + tokens[0] + "'", line_no);
    }
  }
  if (frame.worlds.empty()) fail("missing worlds declaration", line_no);
  return frame;
}

std::string print_frame(const Frame& frame) {
  std::ostringstream out;
  out << "worlds";
  for (const auto& name : frame.worlds) out << ' ' << name;
  out << '\n';
  for (const auto& [src, dst] : frame.relation) {
    out << "edge " << frame.worlds[src] << ' ' << frame.worlds[dst] << '\n';
  }
  return out.str();
}

// --------------------------------------------------------------- formulas

std::string print_time(const TimeValue& v) {
  if (v.is_number()) return std::to_string(v.as_number());
  if (v.letters().empty()) return "~";
  const bool compact = std::all_of(v.letters().begin(), v.letters().end(),
                                   [](const std::string& l) { return l.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < v.letters().size(); ++i) {
    if (i > 0 && !compact) out += '.';
    out += v.letters()[i];
  }
  return out;
}

namespace {

enum class Tok {
  Ident,
  Number,
  Regex,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Semi,
  Comma,
  Colon,
  AndOp,
  OrOp,
  Arrow,
  NotOp,
  End,
};

struct Token {
  Tok type;
  std::string text;
  int column;
};

std::vector<Token> lex_formula(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const int column = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-') {
      if (i + 1 < text.size() && text[i + 1] == '>') {
        tokens.push_back({Tok::Arrow, "->", column});
        i += 2;
        continue;
      }
      if (i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        std::size_t j = i + 1;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        tokens.push_back({Tok::Number, text.substr(i, j - i), column});
        i = j;
        continue;
      }
      throw ParseError("stray '-'", 0, column);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tokens.push_back({Tok::Number, text.substr(i, j - i), column});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      if (j < text.size() && text[j] == '\'') ++j;
      tokens.push_back({Tok::Ident, text.substr(i, j - i), column});
      i = j;
      continue;
    }
    if (c == '/') {
      const auto end = text.find('/', i + 1);
      if (end == std::string::npos) throw ParseError("unterminated pattern", 0, column);
      tokens.push_back({Tok::Regex, text.substr(i + 1, end - i - 1), column});
      i = end + 1;
      continue;
    }
    switch (c) {
      case '(':
        tokens.push_back({Tok::LParen, "(", column});
        break;
      case ')':
        tokens.push_back({Tok::RParen, ")", column});
        break;
      case '{':
        tokens.push_back({Tok::LBrace, "{", column});
        break;
      case '}':
        tokens.push_back({Tok::RBrace, "}", column});
        break;
      case '[':
        tokens.push_back({Tok::LBracket, "[", column});
        break;
      case ']':
        tokens.push_back({Tok::RBracket, "]", column});
        break;
      case ';':
        tokens.push_back({Tok::Semi, ";", column});
        break;
      case ',':
        tokens.push_back({Tok::Comma, ",", column});
        break;
      case ':':
        tokens.push_back({Tok::Colon, ":", column});
        break;
      case '&':
        tokens.push_back({Tok::AndOp, "&", column});
        break;
      case '|':
        tokens.push_back({Tok::OrOp, "|", column});
        break;
      case '~':
        tokens.push_back({Tok::NotOp, "~", column});
        break;
      default:
        throw ParseError("unexpected character '" + std::string(1, c) + "'", 0, column);
    }
    ++i;
  }
  tokens.push_back({Tok::End, "", static_cast<int>(text.size()) + 1});
  return tokens;
}

bool reserved_word(const std::string& word) {
  static const std::set<std::string> words = {"true", "false", "zip",  "eat",   "chg",
                                              "mind", "mind'", "maxd", "maxd'", "U",
                                              "X",    "Y",     "G",    "F",     "nabla",
                                              "nablam"};
  return words.count(word) > 0;
}

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, const TimeMonoid* time)
      : tokens_(std::move(tokens)), time_(time) {}

  Formula parse() {
    Formula f = implies();
    expect(Tok::End, "end of formula");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token advance() { return tokens_[pos_++]; }
  bool at(Tok type) const { return peek().type == type; }

  Token expect(Tok type, const std::string& what) {
    if (!at(type)) {
      throw ParseError("expected " + what + ", got '" + peek().text + "'", 0, peek().column);
    }
    return advance();
  }

  bool at_keyword(const std::string& word) const {
    return at(Tok::Ident) && peek().text == word;
  }

  Formula implies() {
    Formula left = disjunction();
    if (at(Tok::Arrow)) {
      advance();
      return Formula::implies(std::move(left), implies());
    }
    return left;
  }

  Formula disjunction() {
    std::vector<Formula> parts = {conjunction()};
    while (at(Tok::OrOp)) {
      advance();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts[0] : Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts = {unary()};
    while (at(Tok::AndOp)) {
      advance();
      parts.push_back(unary());
    }
    return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  }

  Formula unary() {
    if (at(Tok::NotOp)) {
      advance();
      return Formula::negation(unary());
    }
    if (at_keyword("X")) {
      advance();
      if (at(Tok::LBracket)) {
        advance();
        TimeValue t = time_literal();
        expect(Tok::RBracket, "']'");
        return Formula::next_via(std::move(t), unary());
      }
      return Formula::next(unary());
    }
    if (at_keyword("Y")) {
      advance();
      return Formula::prev(unary());
    }
    if (at_keyword("G")) {
      advance();
      return Formula::box(unary());
    }
    if (at_keyword("F")) {
      advance();
      return Formula::diamond(unary());
    }
    return primary();
  }

  TimeValue time_literal() {
    if (at(Tok::Number)) {
      return TimeValue::number(std::stoll(advance().text));
    }
    if (at(Tok::NotOp)) {  // '~' doubles as the empty word
      advance();
      return TimeValue::word({});
    }
    if (at(Tok::Ident)) {
      const Token token = advance();
      if (time_ && time_->kind() != TimeKind::Word && time_->kind() != TimeKind::FreeIdx) {
        throw ParseError("expected a numeric time value", 0, token.column);
      }
      std::vector<std::string> letters;
      for (char c : token.text) {
        std::string letter(1, c);
        if (time_ && !time_->generator_index(letter)) {
          throw ParseError("symbol '" + letter + "' is not in the alphabet", 0, token.column);
        }
        letters.push_back(std::move(letter));
      }
      return TimeValue::word(std::move(letters));
    }
    throw ParseError("expected a time value, got '" + peek().text + "'", 0, peek().column);
  }

  std::int64_t duration_literal() {
    const Token token = expect(Tok::Number, "a duration");
    const std::int64_t value = std::stoll(token.text);
    if (value < 0) throw ParseError("durations must be nat values", 0, token.column);
    return value;
  }

  Formula eat_form(int column) {
    expect(Tok::LParen, "'('");
    const Token pattern = expect(Tok::Regex, "a /pattern/");
    std::vector<std::string> alphabet;
    if (time_) {
      if (time_->kind() != TimeKind::Word) {
        throw ParseError("eat requires a word-time system", 0, column);
      }
      alphabet = time_->alphabet();
    } else {
      std::set<char> seen;
      for (char c : pattern.text) {
        if (c != '(' && c != ')' && c != '|' && c != '*' && c != '~') seen.insert(c);
      }
      alphabet.assign(seen.size(), "");
      std::transform(seen.begin(), seen.end(), alphabet.begin(),
                     [](char c) { return std::string(1, c); });
    }
    Dfa dfa = regex_to_dfa(pattern.text, alphabet);
    expect(Tok::Semi, "';'");
    Formula a = implies();
    expect(Tok::Semi, "';'");
    Formula b = implies();
    expect(Tok::RParen, "')'");
    return Formula::eat(std::move(dfa), pattern.text, std::move(a), std::move(b));
  }

  Formula primary() {
    if (at(Tok::LParen)) {
      advance();
      Formula inner = implies();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (!at(Tok::Ident)) {
      throw ParseError("expected a formula, got '" + peek().text + "'", 0, peek().column);
    }
    const Token token = advance();
    const std::string& word = token.text;

    if (word == "true") return Formula::top();
    if (word == "false") return Formula::bot();

    if (word == "nabla") {
      expect(Tok::LBrace, "'{'");
      std::vector<Formula> members;
      if (!at(Tok::RBrace)) {
        members.push_back(implies());
        while (at(Tok::Comma)) {
          advance();
          members.push_back(implies());
        }
      }
      expect(Tok::RBrace, "'}'");
      return Formula::nabla_orbit(std::move(members));
    }
    if (word == "nablam") {
      expect(Tok::LBrace, "'{'");
      std::vector<std::pair<TimeValue, Formula>> entries;
      if (!at(Tok::RBrace)) {
        do {
          TimeValue key = time_literal();
          expect(Tok::Colon, "':'");
          entries.push_back({std::move(key), implies()});
        } while (at(Tok::Comma) && (advance(), true));
      }
      expect(Tok::RBrace, "'}'");
      return Formula::nabla_multi(std::move(entries));
    }
    if (word == "zip") {
      expect(Tok::LParen, "'('");
      Formula a = implies();
      expect(Tok::Semi, "';'");
      Formula b = implies();
      expect(Tok::RParen, "')'");
      return Formula::zip(std::move(a), std::move(b));
    }
    if (word == "eat") return eat_form(token.column);
    if (word == "chg") {
      expect(Tok::LParen, "'('");
      const std::int64_t t = duration_literal();
      expect(Tok::Semi, "';'");
      Formula a = implies();
      expect(Tok::Semi, "';'");
      Formula b = implies();
      expect(Tok::Semi, "';'");
      Formula c = implies();
      expect(Tok::RParen, "')'");
      return Formula::chg(t, std::move(a), std::move(b), std::move(c));
    }
    if (word == "mind" || word == "mind'" || word == "maxd" || word == "maxd'") {
      expect(Tok::LParen, "'('");
      const std::int64_t t = duration_literal();
      expect(Tok::Semi, "';'");
      Formula f = implies();
      expect(Tok::RParen, "')'");
      if (word == "mind") return Formula::min_dur(t, std::move(f));
      if (word == "mind'") return Formula::min_dur_incl(t, std::move(f));
      if (word == "maxd") return Formula::max_dur(t, std::move(f));
      return Formula::max_dur_excl(t, std::move(f));
    }
    if (word == "U") {
      expect(Tok::LParen, "'('");
      Formula a = implies();
      expect(Tok::Semi, "';'");
      Formula b = implies();
      expect(Tok::RParen, "')'");
      return Formula::until(std::move(a), std::move(b));
    }
    if (reserved_word(word)) {
      throw ParseError("'" + word + "' is reserved", 0, token.column);
    }
    return Formula::atom(word);
  }

  std::vector<Token> tokens_;
  const TimeMonoid* time_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text, const TimeMonoid* time) {
  return FormulaParser(lex_formula(text), time).parse();
}

namespace {

// Precedence levels for printing: implies 0, or 1, and 2, unary 3,
// atoms and call forms 4.
int print_level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Implies:
      return 0;
    case FormulaKind::Or:
      return 1;
    case FormulaKind::And:
      return 2;
    case FormulaKind::Not:
    case FormulaKind::NablaStep:
    case FormulaKind::Next:
    case FormulaKind::NextVia:
    case FormulaKind::Prev:
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      return 3;
    default:
      return 4;
  }
}

void print_into(const Formula& f, int min_level, std::string& out);

void print_call(const std::string& name, const std::vector<Formula>& args, std::string& out,
                const std::string& head = {}) {
  out += name;
  out += '(';
  if (!head.empty()) {
    out += head;
    out += "; ";
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += "; ";
    print_into(args[i], 0, out);
  }
  out += ')';
}

void print_into(const Formula& f, int min_level, std::string& out) {
  const int level = print_level(f);
  const bool parens = level < min_level;
  if (parens) out += '(';
  switch (f.kind()) {
    case FormulaKind::Atom:
      out += f.atom_name();
      break;
    case FormulaKind::Top:
      out += "true";
      break;
    case FormulaKind::Bot:
      out += "false";
      break;
    case FormulaKind::Not:
      out += '~';
      print_into(f.children()[0], 3, out);
      break;
    case FormulaKind::And:
      if (f.children().empty()) {
        out += "true";
      } else {
        for (std::size_t i = 0; i < f.children().size(); ++i) {
          if (i > 0) out += " & ";
          print_into(f.children()[i], 3, out);
        }
      }
      break;
    case FormulaKind::Or:
      if (f.children().empty()) {
        out += "false";
      } else {
        for (std::size_t i = 0; i < f.children().size(); ++i) {
          if (i > 0) out += " | ";
          print_into(f.children()[i], 2, out);
        }
      }
      break;
    case FormulaKind::Implies:
      print_into(f.children()[0], 1, out);
      out += " -> ";
      print_into(f.children()[1], 0, out);
      break;
    case FormulaKind::NablaStep:
    case FormulaKind::Next:
      out += "X ";
      print_into(f.children()[0], 3, out);
      break;
    case FormulaKind::NextVia:
      out += "X[";
      out += print_time(f.times()[0]);
      out += "] ";
      print_into(f.children()[0], 3, out);
      break;
    case FormulaKind::Prev:
      out += "Y ";
      print_into(f.children()[0], 3, out);
      break;
    case FormulaKind::Box:
      out += "G ";
      print_into(f.children()[0], 3, out);
      break;
    case FormulaKind::Diamond:
      out += "F ";
      print_into(f.children()[0], 3, out);
      break;
    case FormulaKind::NablaOrbit: {
      out += "nabla{";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i > 0) out += ", ";
        print_into(f.children()[i], 0, out);
      }
      out += '}';
      break;
    }
    case FormulaKind::NablaMulti: {
      out += "nablam{";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i > 0) out += ", ";
        out += print_time(f.times()[i]);
        out += ": ";
        print_into(f.children()[i], 0, out);
      }
      out += '}';
      break;
    }
    case FormulaKind::Zip:
      print_call("zip", f.children(), out);
      break;
    case FormulaKind::Eat:
      print_call("eat", f.children(), out, "/" + f.eat_pattern() + "/");
      break;
    case FormulaKind::Chg:
      print_call("chg", f.children(), out, std::to_string(f.duration()));
      break;
    case FormulaKind::MinDur:
      print_call("mind", f.children(), out, std::to_string(f.duration()));
      break;
    case FormulaKind::MinDurIncl:
      print_call("mind'", f.children(), out, std::to_string(f.duration()));
      break;
    case FormulaKind::MaxDur:
      print_call("maxd", f.children(), out, std::to_string(f.duration()));
      break;
    case FormulaKind::MaxDurExcl:
      print_call("maxd'", f.children(), out, std::to_string(f.duration()));
      break;
    case FormulaKind::Until:
      print_call("U", f.children(), out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, 0, out);
  return out;
}

// -------------------------------------------------------------------- cli

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> state_names(const DynSystem& sys, const StateSet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (StateId s : set) out.push_back(sys.state_name(s));
  return out;
}

StateId require_state(const DynSystem& sys, const std::string& name) {
  const auto id = sys.state_index(name);
  if (!id) throw SemanticError("unknown state '" + name + "'");
  return *id;
}

CoalgView view_by_name(const DynSystem& sys, const std::string& name) {
  if (name == "step") {
    if (sys.time().kind() != TimeKind::Nat && sys.time().kind() != TimeKind::Int) {
      throw SemanticError("the step view requires nat or int time; use --view multi");
    }
    return build_view_step(sys, TimeValue::number(1));
  }
  if (name == "multi") return build_view_multi(sys, sys.time().generators());
  if (name == "orbit") return build_view_orbit(sys);
  throw SemanticError("unknown view '" + name + "' (expected step, multi, or orbit)");
}

std::string scheme_label(AxiomScheme scheme) {
  switch (scheme) {
    case AxiomScheme::T:
      return "T";
    case AxiomScheme::Four:
      return "4";
    case AxiomScheme::DotThree:
      return ".3";
    case AxiomScheme::Five:
      return "5";
  }
  return "";
}

AxiomScheme scheme_by_name(const std::string& name) {
  if (name == "T") return AxiomScheme::T;
  if (name == "4") return AxiomScheme::Four;
  if (name == ".3") return AxiomScheme::DotThree;
  if (name == "5") return AxiomScheme::Five;
  throw SemanticError("unknown scheme '" + name + "' (expected T, 4, .3, or 5)");
}

std::vector<std::string> world_names(const Frame& frame, const std::vector<int>& worlds) {
  std::vector<std::string> out;
  out.reserve(worlds.size());
  for (int w : worlds) out.push_back(frame.worlds[w]);
  return out;
}

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ' ';
    out += parts[i];
  }
  return out;
}

struct CommandContext {
  std::ostream& out;
  bool json_mode;
};

int cmd_check(CommandContext& ctx, const std::string& sys_path, const std::string& formula_text,
              const std::string& state) {
  const DynSystem sys = parse_system(read_file(sys_path));
  const Formula f = parse_formula(formula_text, &sys.time());
  const StateSet sat = eval(sys, f);
  const bool is_valid = static_cast<int>(sat.size()) == sys.num_states();
  std::optional<bool> holds;
  if (!state.empty()) holds = sat.count(require_state(sys, state)) > 0;
  if (ctx.json_mode) {
    json doc = {{"command", "check"},
                {"formula", print_formula(f)},
                {"satisfying", state_names(sys, sat)},
                {"valid", is_valid}};
    if (holds) {
      doc["state"] = state;
      doc["holds"] = *holds;
    }
    ctx.out << doc.dump(2) << '\n';
  } else {
    ctx.out << "satisfying: " << joined(state_names(sys, sat)) << '\n';
    ctx.out << "valid: " << (is_valid ? "yes" : "no") << '\n';
    if (holds) {
      ctx.out << "state " << state << ": " << (*holds ? "satisfied" : "not satisfied") << '\n';
    }
  }
  if (holds) return *holds ? 0 : 1;
  return is_valid ? 0 : 1;
}

int cmd_bisim(CommandContext& ctx, const std::string& sys_path, const std::string& view_name) {
  const DynSystem sys = parse_system(read_file(sys_path));
  const CoalgView view = view_by_name(sys, view_name);
  const Partition partition = bisimilarity(view);
  if (ctx.json_mode) {
    json blocks = json::array();
    for (const auto& block : partition.blocks) {
      json names = json::array();
      for (StateId s : block) names.push_back(sys.state_name(s));
      blocks.push_back(names);
    }
    ctx.out << json{{"command", "bisim"}, {"view", view_name}, {"blocks", blocks}}.dump(2) << '\n';
  } else {
    ctx.out << "blocks:";
    for (const auto& block : partition.blocks) {
      ctx.out << " {";
      for (std::size_t i = 0; i < block.size(); ++i) {
        if (i > 0) ctx.out << ' ';
        ctx.out << sys.state_name(block[i]);
      }
      ctx.out << '}';
    }
    ctx.out << '\n';
  }
  return 0;
}

int cmd_distinguish(CommandContext& ctx, const std::string& sys_path, const std::string& view_name,
                    const std::string& lhs, const std::string& rhs) {
  const DynSystem sys = parse_system(read_file(sys_path));
  const CoalgView view = view_by_name(sys, view_name);
  const StateId x = require_state(sys, lhs);
  const StateId y = require_state(sys, rhs);
  const Partition partition = bisimilarity(view);
  if (partition.same_block(x, y)) {
    if (ctx.json_mode) {
      ctx.out << json{{"command", "distinguish"}, {"bisimilar", true}}.dump(2) << '\n';
    } else {
      ctx.out << "states " << lhs << " and " << rhs << " are bisimilar\n";
    }
    return 1;
  }
  const Formula f = distinguishing_formula(view, x, y);
  if (ctx.json_mode) {
    ctx.out << json{{"command", "distinguish"},
                    {"bisimilar", false},
                    {"formula", print_formula(f)},
                    {"holds_at", lhs},
                    {"fails_at", rhs}}
                   .dump(2)
            << '\n';
  } else {
    ctx.out << "formula: " << print_formula(f) << '\n';
    ctx.out << "holds at " << lhs << ", fails at " << rhs << '\n';
  }
  return 0;
}

int cmd_orbit(CommandContext& ctx, const std::string& sys_path, const std::string& state) {
  const DynSystem sys = parse_system(read_file(sys_path));
  const StateSet reach = orbit(sys, require_state(sys, state));
  if (ctx.json_mode) {
    ctx.out << json{{"command", "orbit"}, {"state", state}, {"orbit", state_names(sys, reach)}}
                   .dump(2)
            << '\n';
  } else {
    ctx.out << "orbit: " << joined(state_names(sys, reach)) << '\n';
  }
  return 0;
}

int cmd_verify(CommandContext& ctx, const std::string& sys_path, int bound) {
  const DynSystem sys = parse_system(read_file(sys_path));
  const ActionReport report = validate_action(sys, bound);
  if (ctx.json_mode) {
    json violations = json::array();
    for (const auto& v : report.violations) {
      violations.push_back(
          {{"kind", v.kind == ActionViolation::Kind::Unit ? "unit" : "composition"},
           {"state", sys.state_name(v.state)},
           {"t", print_time(v.t)},
           {"u", print_time(v.u)},
           {"expected", sys.state_name(v.expected)},
           {"got", sys.state_name(v.got)}});
    }
    ctx.out << json{{"command", "verify"}, {"ok", report.ok()}, {"violations", violations}}.dump(2)
            << '\n';
  } else {
    if (report.ok()) {
      ctx.out << "action laws hold (bound " << bound << ")\n";
    } else {
      ctx.out << report.violations.size() << " violation(s):\n";
      for (const auto& v : report.violations) {
        if (v.kind == ActionViolation::Kind::Unit) {
          ctx.out << "  unit law fails at " << sys.state_name(v.state) << ": got "
                  << sys.state_name(v.got) << '\n';
        } else {
          ctx.out << "  composition fails at " << sys.state_name(v.state) << " for t="
                  << print_time(v.t) << ", u=" << print_time(v.u) << ": stepwise "
                  << sys.state_name(v.got) << ", joined " << sys.state_name(v.expected) << '\n';
        }
      }
    }
  }
  return report.ok() ? 0 : 1;
}

DynSystem synthesize_by_mode(const Frame& frame, const std::string& mode) {
  if (mode == "invertible") return synthesize_invertible(frame);
  if (mode == "linear") return synthesize_linear(frame);
  if (mode == "general") return synthesize_general(frame);
  throw SemanticError("unknown mode '" + mode + "' (expected invertible, linear, or general)");
}

int cmd_synthesize(CommandContext& ctx, const std::string& frame_path, const std::string& mode) {
  const Frame frame = parse_frame(read_file(frame_path));
  const DynSystem sys = synthesize_by_mode(frame, mode);
  if (ctx.json_mode) {
    ctx.out << json{{"command", "synthesize"}, {"mode", mode}, {"system", print_system(sys)}}.dump(2)
            << '\n';
  } else {
    ctx.out << print_system(sys);
  }
  return 0;
}

int cmd_classify(CommandContext& ctx, const std::string& frame_path) {
  const Frame frame = parse_frame(read_file(frame_path));
  const FrameProfile profile = classify_frame(frame);
  const auto emit = [&](const char* name, const FrameFlag& flag) {
    if (ctx.json_mode) return;
    ctx.out << name << ": " << (flag.holds ? "yes" : "no");
    if (!flag.holds) {
      ctx.out << " (counterexample: " << joined(world_names(frame, flag.counterexample)) << ')';
    }
    ctx.out << '\n';
  };
  if (ctx.json_mode) {
    const auto flag_json = [&](const FrameFlag& flag) {
      json doc = {{"holds", flag.holds}};
      if (!flag.holds) doc["counterexample"] = world_names(frame, flag.counterexample);
      return doc;
    };
    ctx.out << json{{"command", "classify"},
                    {"preorder", flag_json(profile.preorder)},
                    {"nonbranching", flag_json(profile.nonbranching)},
                    {"symmetric", flag_json(profile.symmetric)},
                    {"linear", flag_json(profile.linear)},
                    {"transient_scc_singleton", flag_json(profile.transient_scc_singleton)}}
                   .dump(2)
            << '\n';
  } else {
    emit("preorder", profile.preorder);
    emit("nonbranching", profile.nonbranching);
    emit("symmetric", profile.symmetric);
    emit("linear", profile.linear);
    emit("transient-scc-singleton", profile.transient_scc_singleton);
  }
  return 0;
}

int cmd_axioms(CommandContext& ctx, const std::string& frame_path, const std::string& scheme_name,
               int bound) {
  const Frame frame = parse_frame(read_file(frame_path));
  const AxiomScheme scheme = scheme_by_name(scheme_name);
  const AxiomResult result = axiom_validity(frame, scheme, bound);
  if (ctx.json_mode) {
    json doc = {{"command", "axioms"}, {"scheme", scheme_label(scheme)}, {"valid", result.valid}};
    if (!result.valid) {
      doc["world"] = frame.worlds[result.world];
      doc["valuation_a"] = world_names(frame, result.valuation_a);
      if (scheme == AxiomScheme::DotThree) {
        doc["valuation_b"] = world_names(frame, result.valuation_b);
      }
    }
    ctx.out << doc.dump(2) << '\n';
  } else {
    ctx.out << "scheme " << scheme_label(scheme) << ": " << (result.valid ? "valid" : "invalid")
            << '\n';
    if (!result.valid) {
      ctx.out << "counter-valuation A={" << joined(world_names(frame, result.valuation_a)) << '}';
      if (scheme == AxiomScheme::DotThree) {
        ctx.out << " B={" << joined(world_names(frame, result.valuation_b)) << '}';
      }
      ctx.out << " at world " << frame.worlds[result.world] << '\n';
    }
  }
  return result.valid ? 0 : 1;
}

int cmd_roundtrip(CommandContext& ctx, const std::string& frame_path) {
  const Frame frame = parse_frame(read_file(frame_path));
  const FrameProfile profile = classify_frame(frame);
  if (!profile.preorder.holds) {
    throw PreconditionError("synthesis needs a preorder",
                            world_names(frame, profile.preorder.counterexample));
  }
  std::string mode;
  if (profile.symmetric.holds) {
    mode = "invertible";
  } else if (profile.nonbranching.holds && profile.transient_scc_singleton.holds) {
    mode = "linear";
  } else {
    mode = "general";
  }
  const DynSystem sys = synthesize_by_mode(frame, mode);
  const bool verified = verify_synthesis(frame, sys);
  if (ctx.json_mode) {
    ctx.out << json{{"command", "roundtrip"},
                    {"mode", mode},
                    {"system", print_system(sys)},
                    {"verified", verified}}
                   .dump(2)
            << '\n';
  } else {
    ctx.out << "mode: " << mode << '\n';
    ctx.out << print_system(sys);
    ctx.out << "verified: " << (verified ? "yes" : "no") << '\n';
  }
  return verified ? 0 : 1;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"model checking and synthesis for finite dynamical systems"};
  app.name("dynlog");
  bool json_mode = false;
  app.add_flag("--json", json_mode, "machine-readable output");
  app.require_subcommand(1);

  std::string sys_path, frame_path, formula_text, state, view_name = "step", lhs, rhs;
  std::string mode, scheme_name;
  int bound = 4;
  int axiom_bound = 12;

  CLI::App* check = app.add_subcommand("check", "evaluate a formula over a system");
  check->add_option("system", sys_path, "system file (.dyn)")->required();
  check->add_option("formula", formula_text, "formula text")->required();
  check->add_option("--state", state, "check a single state instead of validity");

  CLI::App* bisim = app.add_subcommand("bisim", "bisimilarity partition of a view");
  bisim->add_option("system", sys_path, "system file (.dyn)")->required();
  bisim->add_option("--view", view_name, "step, multi, or orbit")->required();

  CLI::App* distinguish =
      app.add_subcommand("distinguish", "formula separating two non-bisimilar states");
  distinguish->add_option("system", sys_path, "system file (.dyn)")->required();
  distinguish->add_option("lhs", lhs, "state the formula holds at")->required();
  distinguish->add_option("rhs", rhs, "state the formula fails at")->required();
  distinguish->add_option("--view", view_name, "step, multi, or orbit")->required();

  CLI::App* orbit_cmd = app.add_subcommand("orbit", "reachable states");
  orbit_cmd->add_option("system", sys_path, "system file (.dyn)")->required();
  orbit_cmd->add_option("state", state, "starting state")->required();

  CLI::App* verify = app.add_subcommand("verify", "check the monoid action laws");
  verify->add_option("system", sys_path, "system file (.dyn)")->required();
  verify->add_option("--bound", bound, "generator-length bound (default 4)");

  CLI::App* synthesize = app.add_subcommand("synthesize", "build a system from a frame");
  synthesize->add_option("frame", frame_path, "frame file (.kf)")->required();
  synthesize->add_option("--mode", mode, "invertible, linear, or general")->required();

  CLI::App* classify = app.add_subcommand("classify", "relational profile of a frame");
  classify->add_option("frame", frame_path, "frame file (.kf)")->required();

  CLI::App* axioms = app.add_subcommand("axioms", "frame validity of an axiom scheme");
  axioms->add_option("frame", frame_path, "frame file (.kf)")->required();
  axioms->add_option("--scheme", scheme_name, "T, 4, .3, or 5")->required();
  axioms->add_option("--bound", axiom_bound, "world-count cap (default 12)");

  CLI::App* roundtrip = app.add_subcommand("roundtrip", "synthesize, then verify reachability");
  roundtrip->add_option("frame", frame_path, "frame file (.kf)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CommandContext ctx{out, json_mode};
  try {
    if (check->parsed()) return cmd_check(ctx, sys_path, formula_text, state);
    if (bisim->parsed()) return cmd_bisim(ctx, sys_path, view_name);
    if (distinguish->parsed()) return cmd_distinguish(ctx, sys_path, view_name, lhs, rhs);
    if (orbit_cmd->parsed()) return cmd_orbit(ctx, sys_path, state);
    if (verify->parsed()) return cmd_verify(ctx, sys_path, bound);
    if (synthesize->parsed()) return cmd_synthesize(ctx, frame_path, mode);
    if (classify->parsed()) return cmd_classify(ctx, frame_path);
    if (axioms->parsed()) return cmd_axioms(ctx, frame_path, scheme_name, axiom_bound);
    if (roundtrip->parsed()) return cmd_roundtrip(ctx, frame_path);
  } catch (const ParseError& e) {
    err << "parse error";
    if (e.line > 0) err << " (line " << e.line << ')';
    if (e.column > 0) err << " (column " << e.column << ')';
    err << ": " << e.what() << '\n';
    return 2;
  } catch (const UnrealizableFrameError& e) {
    err << "error: " << e.what() << '\n';
    err << "witness component: {" << joined(e.witness_scc) << "}\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    if (!e.witness.empty()) err << "counterexample: " << joined(e.witness) << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace dynlog
