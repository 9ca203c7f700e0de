#include <doctest.h>

#include "dynlog/dfa.hpp"
#include "dynlog/error.hpp"
#include "dynlog/formula.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dynlog;
using testutil::Rng;

namespace {

Formula fatom(const char* name) { return Formula::atom(name); }

bool accepts(const Dfa& dfa, const std::string& word) {
  std::vector<std::string> letters;
  for (char c : word) letters.push_back(std::string(1, c));
  return dfa.accepts(letters);
}

}  // namespace

TEST_SUITE("formula") {

TEST_CASE("regex acceptance on frozen examples") {
  const Dfa even = regex_to_dfa("(xx)*", {"x"});
  CHECK(accepts(even, ""));
  CHECK(accepts(even, "xx"));
  CHECK(accepts(even, "xxxx"));
  CHECK_FALSE(accepts(even, "x"));
  CHECK_FALSE(accepts(even, "xxx"));

  const Dfa eps = regex_to_dfa("~", {"x"});
  CHECK(accepts(eps, ""));
  CHECK_FALSE(accepts(eps, "x"));

  const Dfa pick = regex_to_dfa("x|y", {"x", "y"});
  CHECK(accepts(pick, "x"));
  CHECK(accepts(pick, "y"));
  CHECK_FALSE(accepts(pick, ""));
  CHECK_FALSE(accepts(pick, "xy"));
}

TEST_CASE("regex parse errors carry positions") {
  CHECK_THROWS_AS(regex_to_dfa("(x", {"x"}), ParseError);
  CHECK_THROWS_AS(regex_to_dfa("x)", {"x"}), ParseError);
  CHECK_THROWS_AS(regex_to_dfa("*x", {"x"}), ParseError);
  CHECK_THROWS_AS(regex_to_dfa("", {"x"}), ParseError);
  CHECK_THROWS_WITH_AS(regex_to_dfa("xz", {"x", "y"}),
                       "symbol 'z' is not in the alphabet", ParseError);
  try {
    regex_to_dfa("x(", {"x"});
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.column == 3);  // just past the unclosed group
  }
}

TEST_CASE("dfas are total and minimal") {
  const Dfa even = regex_to_dfa("(xx)*", {"x"});
  CHECK(even.num_states() == 2);
  for (int s = 0; s < even.num_states(); ++s) {
    CHECK(even.next(s, 0) >= 0);
    CHECK(even.next(s, 0) < even.num_states());
  }
  // A redundant alternation minimizes to the same automaton as its half.
  CHECK(regex_to_dfa("x|x", {"x"}) == regex_to_dfa("x", {"x"}));
  CHECK(minimize(regex_to_dfa("(xx)*", {"x"})) == regex_to_dfa("(xx)*", {"x"}));
}

TEST_CASE("regex agrees with the derivative matcher") {
  Rng rng(23);
  const std::vector<std::vector<std::string>> alphabets = {
      {"x"}, {"x", "y"}, {"x", "y", "z"}};
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto& alphabet = alphabets[trial % alphabets.size()];
    const std::string pattern = testutil::random_regex(rng, alphabet, 3);
    const Dfa dfa = regex_to_dfa(pattern, alphabet);
    const testutil::ReMatcher matcher(pattern);
    for (const auto& letters : testutil::words_up_to(alphabet, 6)) {
      CAPTURE(pattern);
      CAPTURE(testutil::flat(letters));
      REQUIRE(dfa.accepts(letters) == matcher.matches(testutil::flat(letters)));
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("formula equality is structural") {
  CHECK(fatom("p") == fatom("p"));
  CHECK_FALSE(fatom("p") == fatom("q"));
  CHECK(Formula::box(fatom("p")) == Formula::box(fatom("p")));
  CHECK_FALSE(Formula::box(fatom("p")) == Formula::diamond(fatom("p")));
  CHECK(Formula::chg(2, fatom("p"), Formula::top(), Formula::top()) ==
        Formula::chg(2, fatom("p"), Formula::top(), Formula::top()));
  CHECK_FALSE(Formula::chg(2, fatom("p"), Formula::top(), Formula::top()) ==
              Formula::chg(3, fatom("p"), Formula::top(), Formula::top()));
}

TEST_CASE("orbit nabla members are a set") {
  CHECK(Formula::nabla_orbit({fatom("p"), fatom("p")}) == Formula::nabla_orbit({fatom("p")}));
  CHECK(Formula::nabla_orbit({fatom("q"), fatom("p")}) ==
        Formula::nabla_orbit({fatom("p"), fatom("q")}));
}

TEST_CASE("multi-step nabla keys are sorted and unique") {
  const auto t1 = TimeValue::number(1);
  const auto t2 = TimeValue::number(2);
  CHECK(Formula::nabla_multi({{t2, fatom("q")}, {t1, fatom("p")}}) ==
        Formula::nabla_multi({{t1, fatom("p")}, {t2, fatom("q")}}));
  CHECK_THROWS_AS(Formula::nabla_multi({{t1, fatom("p")}, {t1, fatom("q")}}), SemanticError);
}

TEST_CASE("durations must be nat values") {
  CHECK_THROWS_AS(Formula::chg(-1, fatom("p"), fatom("p"), fatom("p")), SemanticError);
  CHECK_THROWS_AS(Formula::min_dur(-2, fatom("p")), SemanticError);
}

TEST_CASE("desugar rewrites match the translation table") {
  const Formula p = fatom("p");
  CHECK(desugar(Formula::box(p)) ==
        Formula::disj({Formula::nabla_orbit({p}), Formula::nabla_orbit({})}));
  CHECK(desugar(Formula::diamond(p)) == Formula::nabla_orbit({p, Formula::top()}));
  CHECK(desugar(Formula::next(p)) == Formula::nabla_step(p));
  CHECK(desugar(Formula::next_via(TimeValue::number(2), p)) ==
        Formula::nabla_multi({{TimeValue::number(2), p}}));
  CHECK(desugar(Formula::prev(p)) == Formula::nabla_multi({{TimeValue::number(-1), p}}));
  CHECK(desugar(Formula::min_dur(2, p)) == Formula::chg(2, p, Formula::top(), Formula::top()));
  CHECK(desugar(Formula::min_dur_incl(2, p)) == Formula::chg(2, p, p, Formula::top()));
  CHECK(desugar(Formula::max_dur(2, p)) ==
        Formula::chg(2, Formula::top(), Formula::top(), Formula::negation(p)));
  CHECK(desugar(Formula::max_dur_excl(2, p)) ==
        Formula::chg(2, Formula::top(), Formula::negation(p), Formula::negation(p)));
}

TEST_CASE("desugar reaches inside compounds and trajectory arguments") {
  const Formula p = fatom("p");
  const Formula inner = Formula::zip(Formula::box(p), p);
  const Formula rewritten = desugar(inner);
  CHECK(rewritten.kind() == FormulaKind::Zip);
  CHECK(rewritten.children()[0] ==
        Formula::disj({Formula::nabla_orbit({p}), Formula::nabla_orbit({})}));
}

TEST_CASE("desugar is idempotent on random formulas") {
  Rng rng(31);
  const TimeKind kinds[] = {TimeKind::Nat, TimeKind::Int, TimeKind::Word};
  for (int trial = 0; trial < 60; ++trial) {
    const DynSystem sys = testutil::random_system(rng, kinds[trial % 3]);
    const Formula f = testutil::random_formula(rng, sys, 3, testutil::Fragment::Full);
    const Formula once = desugar(f);
    CHECK(desugar(once) == once);
  }
}

TEST_CASE("subformulas lists children before parents without duplicates") {
  const Formula p = fatom("p");
  const Formula impl = Formula::implies(p, Formula::box(p));
  const auto subs = subformulas(impl);
  REQUIRE(subs.size() == 3);
  CHECK(subs[0] == p);
  CHECK(subs[1] == Formula::box(p));
  CHECK(subs[2] == impl);

  CHECK(subformulas(p) == std::vector<Formula>{p});

  const Formula both = Formula::conj({p, p});
  const auto dedup = subformulas(both);
  REQUIRE(dedup.size() == 2);
  CHECK(dedup[0] == p);
  CHECK(dedup[1] == both);
}

}
