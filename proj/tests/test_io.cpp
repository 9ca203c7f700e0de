#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynlog/checker.hpp"
#include "dynlog/error.hpp"
#include "dynlog/io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dynlog;
using testutil::Rng;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(DYNLOG_FIXTURES) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "io_tmp_" + name;
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out);
  out << content;
  return path;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dynlog");
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& arg : args) argv.push_back(arg.c_str());
  std::ostringstream out, err;
  const int code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int parse_error_line(const std::string& text, bool frame = false) {
  try {
    if (frame) {
      parse_frame(text);
    } else {
      parse_system(text);
    }
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

int formula_error_column(const std::string& text, const TimeMonoid* time = nullptr) {
  try {
    parse_formula(text, time);
  } catch (const ParseError& e) {
    return e.column;
  }
  return -1;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("system documents parse into the expected structures") {
  const DynSystem cyc2 = parse_system(slurp(fixture_path("sys_cyc2.dyn")));
  CHECK(cyc2.time().kind() == TimeKind::Nat);
  CHECK(cyc2.states() == std::vector<std::string>{"s0", "s1"});
  CHECK(cyc2.step_tables() == std::vector<std::vector<StateId>>{{1, 0}});
  CHECK(*cyc2.label_set("p") == StateSet{0});

  const DynSystem dfa = parse_system(slurp(fixture_path("sys_dfa.dyn")));
  CHECK(dfa.time().kind() == TimeKind::Word);
  CHECK(dfa.time().alphabet() == std::vector<std::string>{"x"});

  const DynSystem fidx = parse_system(
      "time free 2\nstates a b\nstep 0: a->b b->a\nstep 1: a->a b->b\nlabel p: a\n");
  CHECK(fidx.time().kind() == TimeKind::FreeIdx);
  CHECK(fidx.time().alphabet() == std::vector<std::string>{"0", "1"});
  CHECK(fidx.step_tables() == std::vector<std::vector<StateId>>{{1, 0}, {0, 1}});

  // The derived inverse row exists but is not part of the document.
  const DynSystem turn = parse_system("time int\nstates a b\nstep 1: a->b b->a\n");
  CHECK(turn.step_tables() == std::vector<std::vector<StateId>>{{1, 0}, {1, 0}});

  // Comments and blank lines are ignored.
  const DynSystem commented =
      parse_system("# swap\ntime nat\n\nstates a b  # two states\nstep 1: a->b b->a\n");
  CHECK(commented.states() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("printing a parsed canonical document reproduces its bytes") {
  for (const char* name : {"sys_cyc2.dyn", "sys_abs.dyn", "sys_dfa.dyn"}) {
    const std::string text = slurp(fixture_path(name));
    CAPTURE(name);
    CHECK(print_system(parse_system(text)) == text);
  }
  for (const char* name : {"frm_chain.kf", "frm_clique2.kf", "frm_bad.kf", "frm_fork.kf"}) {
    const std::string text = slurp(fixture_path(name));
    CAPTURE(name);
    CHECK(print_frame(parse_frame(text)) == text);
  }
}

TEST_CASE("parsing a printed in-memory value reproduces it") {
  Rng rng(107);
  const TimeKind kinds[] = {TimeKind::Nat, TimeKind::Int, TimeKind::Word,
                            TimeKind::FreeIdx};
  for (int trial = 0; trial < 40; ++trial) {
    const DynSystem sys = testutil::random_system(rng, kinds[trial % 4]);
    const DynSystem again = parse_system(print_system(sys));
    CAPTURE(trial);
    CHECK(again.states() == sys.states());
    CHECK(again.step_tables() == sys.step_tables());
    CHECK(again.labels() == sys.labels());
    CHECK(again.time().kind() == sys.time().kind());
    CHECK(again.time().alphabet() == sys.time().alphabet());
  }
  for (int trial = 0; trial < 40; ++trial) {
    const Frame frame = testutil::random_preorder(rng);
    const Frame again = parse_frame(print_frame(frame));
    CHECK(again.worlds == frame.worlds);
    CHECK(again.relation == frame.relation);
  }
}

TEST_CASE("system parse errors carry line numbers") {
  CHECK(parse_error_line("time nat\nstates a\nstep 1: a->b\n") == 3);
  CHECK(parse_error_line("time nat\nstates a\nstep 1: b->a\n") == 3);
  CHECK(parse_error_line("time nat\nstates a a\nstep 1: a->a\n") == 2);
  CHECK(parse_error_line("time nat\nstates a\nstep 1: a->a\nstep 1: a->a\n") == 4);
  CHECK(parse_error_line("time nat\nstates a\nstep 1: a->a\nlabel p: b\n") == 4);
  CHECK(parse_error_line("time nat\nstates a\nstep 1: a->a\nlabel p: a\nlabel p: a\n") == 5);
  CHECK(parse_error_line("time int\nstates a\nstep 1: a->a\nstep -1: a->a\n") == 4);
  CHECK(parse_error_line("time nat\nstates a\nstep 2: a->a\n") == 3);
  CHECK(parse_error_line("time word x y\nstates a\nstep x: a->a\n") == 1);
  CHECK(parse_error_line("time word x x\nstates a\nstep x: a->a\n") == 1);
  CHECK(parse_error_line("time free 0\nstates a\n") == 1);
  CHECK(parse_error_line("time free two\nstates a\n") == 1);
  CHECK(parse_error_line("time nat\nbogus a\n") == 2);
  CHECK(parse_error_line("states a\nstep 1: a->a\n") == 2);
  CHECK(parse_error_line("") >= 0);
  CHECK(parse_error_line("time nat\nstates a\nstep 1: a=>a\n") == 3);

  // Non-bijective int steps are a semantic failure, not a syntax one.
  CHECK_THROWS_AS(parse_system("time int\nstates a b\nstep 1: a->a b->a\n"), SemanticError);
}

TEST_CASE("frame parse errors carry line numbers") {
  CHECK(parse_error_line("worlds a\nedge a b\n", true) == 2);
  CHECK(parse_error_line("edge a b\n", true) == 1);
  CHECK(parse_error_line("worlds a a\n", true) == 1);
  CHECK(parse_error_line("worlds a\nedge a\n", true) == 2);
  CHECK(parse_error_line("worlds a\nbogus\n", true) == 2);
  CHECK(parse_error_line("", true) >= 0);
}

TEST_CASE("formula surface syntax on frozen examples") {
  const Formula p = Formula::atom("p");
  const Formula q = Formula::atom("q");
  const Formula r = Formula::atom("r");

  CHECK(parse_formula("p -> G p") == Formula::implies(p, Formula::box(p)));
  CHECK(parse_formula("zip(p; ~p) | zip(~p; p)") ==
        Formula::disj({Formula::zip(p, Formula::negation(p)),
                       Formula::zip(Formula::negation(p), p)}));
  CHECK(parse_formula("eat(/(xx)*/; acc; ~acc)") ==
        Formula::eat(regex_to_dfa("(xx)*", {"x"}), "(xx)*", Formula::atom("acc"),
                     Formula::negation(Formula::atom("acc"))));

  CHECK(parse_formula("~p & q | r -> s") ==
        Formula::implies(Formula::disj({Formula::conj({Formula::negation(p), q}), r}),
                         Formula::atom("s")));
  CHECK(parse_formula("p -> q -> r") ==
        Formula::implies(p, Formula::implies(q, r)));
  CHECK(parse_formula("p & q & r") == Formula::conj({p, q, r}));
  CHECK(parse_formula("~~p") == Formula::negation(Formula::negation(p)));

  CHECK(parse_formula("X p") == Formula::next(p));
  CHECK(parse_formula("X[2] p") == Formula::next_via(TimeValue::number(2), p));
  CHECK(parse_formula("X[~] p") == Formula::next_via(TimeValue::word({}), p));
  CHECK(parse_formula("Y p") == Formula::prev(p));
  CHECK(parse_formula("F p") == Formula::diamond(p));
  CHECK(parse_formula("true & false") ==
        Formula::conj({Formula::top(), Formula::bot()}));

  CHECK(parse_formula("nabla{}") == Formula::nabla_orbit({}));
  CHECK(parse_formula("nabla{p, q}") == Formula::nabla_orbit({p, q}));
  CHECK(parse_formula("nablam{1: p, 2: q}") ==
        Formula::nabla_multi({{TimeValue::number(1), p}, {TimeValue::number(2), q}}));
  CHECK(parse_formula("chg(1; p; q; r)") == Formula::chg(1, p, q, r));
  CHECK(parse_formula("mind(2; p)") == Formula::min_dur(2, p));
  CHECK(parse_formula("mind'(2; p)") == Formula::min_dur_incl(2, p));
  CHECK(parse_formula("maxd(2; p)") == Formula::max_dur(2, p));
  CHECK(parse_formula("maxd'(2; p)") == Formula::max_dur_excl(2, p));
  CHECK(parse_formula("U(p; q)") == Formula::until(p, q));

  // Idents that merely start with a keyword letter are atoms.
  CHECK(parse_formula("Gp") == Formula::atom("Gp"));
  CHECK(parse_formula("p'") == Formula::atom("p'"));
}

TEST_CASE("formula parse errors carry columns") {
  CHECK(formula_error_column("p && q") == 4);
  CHECK(formula_error_column("p - q") == 3);
  CHECK(formula_error_column("eat(/xx; p; q)") == 5);
  CHECK(formula_error_column("") == 1);
  CHECK(formula_error_column("p q") == 3);
  CHECK(formula_error_column("(p") == 3);
  CHECK(formula_error_column("zip(p)") == 6);
  CHECK(formula_error_column("chg(-1; p; q; r)") == 5);
  CHECK(formula_error_column("p $ q") == 3);
  CHECK(formula_error_column("nabla(p)") == 6);
}

TEST_CASE("formula parsing consults the system's time monoid") {
  const TimeMonoid nat = TimeMonoid::nat();
  const TimeMonoid word = TimeMonoid::word({"x", "y"});

  CHECK_THROWS_AS(parse_formula("eat(/x/; p; p)", &nat), ParseError);
  CHECK_THROWS_AS(parse_formula("X[x] p", &nat), ParseError);
  CHECK_THROWS_AS(parse_formula("X[z] p", &word), ParseError);

  CHECK(parse_formula("X[xy] p", &word) ==
        Formula::next_via(TimeValue::word({"x", "y"}), Formula::atom("p")));
  const Formula eat = parse_formula("eat(/xy|yx/; p; q)", &word);
  CHECK(eat.kind() == FormulaKind::Eat);
  CHECK(eat.dfa().alphabet() == std::vector<std::string>{"x", "y"});
  CHECK(eat.eat_pattern() == "xy|yx");
}

TEST_CASE("formula printing is canonical") {
  const Formula p = Formula::atom("p");
  const Formula q = Formula::atom("q");

  CHECK(print_formula(Formula::implies(p, Formula::box(p))) == "p -> G p");
  CHECK(print_formula(Formula::conj({})) == "true");
  CHECK(print_formula(Formula::disj({})) == "false");
  CHECK(print_formula(Formula::implies(Formula::implies(p, q), p)) == "(p -> q) -> p");
  CHECK(print_formula(Formula::conj({Formula::disj({p, q}), p})) == "(p | q) & p");
  CHECK(print_formula(Formula::negation(Formula::conj({p, q}))) == "~(p & q)");
  CHECK(print_formula(Formula::next(Formula::conj({p, q}))) == "X (p & q)");
  CHECK(print_formula(Formula::nabla_orbit({q, p})) == "nabla{p, q}");
  CHECK(print_formula(Formula::nabla_multi({{TimeValue::number(1), p}})) ==
        "nablam{1: p}");
  CHECK(print_formula(Formula::zip(p, Formula::negation(p))) == "zip(p; ~p)");
  CHECK(print_formula(Formula::eat(regex_to_dfa("(xx)*", {"x"}), "(xx)*",
                                   Formula::atom("acc"),
                                   Formula::negation(Formula::atom("acc")))) ==
        "eat(/(xx)*/; acc; ~acc)");
  CHECK(print_formula(Formula::chg(1, p, q, p)) == "chg(1; p; q; p)");
  CHECK(print_formula(Formula::min_dur_incl(3, p)) == "mind'(3; p)");
  CHECK(print_formula(Formula::until(p, q)) == "U(p; q)");
  CHECK(print_formula(Formula::next_via(TimeValue::word({"x", "y"}), p)) == "X[xy] p");

  CHECK(print_time(TimeValue::number(-3)) == "-3");
  CHECK(print_time(TimeValue::word({})) == "~");
  CHECK(print_time(TimeValue::word({"x", "y"})) == "xy");
  CHECK(print_time(TimeValue::word({"ab", "c"})) == "ab.c");
}

TEST_CASE("formula round trips survive printing") {
  // The surface syntax is not injective over the full AST (the raw
  // step-cover modality prints as X, index-addressed keys reparse as
  // numbers), so the checks are: printing is stable, meaning is
  // preserved, and parse-print is the exact identity on parser output.
  Rng rng(109);
  const TimeKind kinds[] = {TimeKind::Nat, TimeKind::Int, TimeKind::Word,
                            TimeKind::FreeIdx};
  for (int trial = 0; trial < 80; ++trial) {
    const DynSystem sys = testutil::random_system(rng, kinds[trial % 4]);
    const Formula f = testutil::random_formula(rng, sys, 3, testutil::Fragment::Full);
    const Formula reparsed = parse_formula(print_formula(f), &sys.time());
    const std::string text = print_formula(reparsed);
    CAPTURE(trial);
    CAPTURE(text);
    CHECK(eval(sys, reparsed) == eval(sys, f));
    CHECK(parse_formula(text, &sys.time()) == reparsed);
    CHECK(print_formula(parse_formula(text, &sys.time())) == text);
  }
}

TEST_CASE("cli check reports satisfying sets and validity") {
  const CliResult ok = cli({"check", fixture_path("sys_abs.dyn"), "p -> G p"});
  CHECK(ok.code == 0);
  CHECK(ok.out == "satisfying: a b\nvalid: yes\n");

  const CliResult invalid = cli({"check", fixture_path("sys_cyc2.dyn"), "p"});
  CHECK(invalid.code == 1);
  CHECK(invalid.out == "satisfying: s0\nvalid: no\n");

  const CliResult at_state =
      cli({"check", fixture_path("sys_cyc2.dyn"), "p", "--state", "s1"});
  CHECK(at_state.code == 1);
  CHECK(at_state.out == "satisfying: s0\nvalid: no\nstate s1: not satisfied\n");

  const CliResult held =
      cli({"check", fixture_path("sys_cyc2.dyn"), "p", "--state", "s0"});
  CHECK(held.code == 0);
  CHECK(held.out == "satisfying: s0\nvalid: no\nstate s0: satisfied\n");

  const CliResult json_run =
      cli({"--json", "check", fixture_path("sys_abs.dyn"), "p -> G p"});
  CHECK(json_run.code == 0);
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["command"] == "check");
  CHECK(doc["formula"] == "p -> G p");
  CHECK(doc["valid"] == true);
  CHECK(doc["satisfying"] == nlohmann::json({"a", "b"}));
}

TEST_CASE("cli surfaces parse and semantic errors with exit code 2") {
  const CliResult bad_formula = cli({"check", fixture_path("sys_abs.dyn"), "p &"});
  CHECK(bad_formula.code == 2);
  CHECK(bad_formula.err == "parse error (column 4): expected a formula, got ''\n");

  const CliResult bad_file = cli({"check", "no_such_file.dyn", "p"});
  CHECK(bad_file.code == 2);
  CHECK(bad_file.err == "parse error: cannot open 'no_such_file.dyn'\n");

  const std::string broken = temp_file("broken.dyn", "time nat\nstates a\nstep 1: a->b\n");
  const CliResult bad_doc = cli({"check", broken, "p"});
  CHECK(bad_doc.code == 2);
  CHECK(bad_doc.err == "parse error (line 3): unknown state 'b'\n");

  const CliResult bad_atom = cli({"check", fixture_path("sys_abs.dyn"), "q"});
  CHECK(bad_atom.code == 2);
  CHECK(bad_atom.err == "error: unknown atom 'q'\n");

  const CliResult usage = cli({});
  CHECK(usage.code == 2);
  const CliResult unknown = cli({"frobnicate"});
  CHECK(unknown.code == 2);

  const CliResult help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Usage") != std::string::npos);
}

TEST_CASE("cli bisim and distinguish") {
  const CliResult blocks = cli({"bisim", fixture_path("sys_cyc2.dyn"), "--view", "step"});
  CHECK(blocks.code == 0);
  CHECK(blocks.out == "blocks: {s0} {s1}\n");

  const CliResult multi = cli({"bisim", fixture_path("sys_dfa.dyn"), "--view", "multi"});
  CHECK(multi.code == 0);
  CHECK(multi.out == "blocks: {e} {o}\n");

  const CliResult wrong_view =
      cli({"bisim", fixture_path("sys_dfa.dyn"), "--view", "step"});
  CHECK(wrong_view.code == 2);
  CHECK(wrong_view.err ==
        "error: the step view requires nat or int time; use --view multi\n");

  const CliResult missing = cli({"bisim", fixture_path("sys_cyc2.dyn")});
  CHECK(missing.code == 2);

  const CliResult split =
      cli({"distinguish", fixture_path("sys_cyc2.dyn"), "s0", "s1", "--view", "step"});
  CHECK(split.code == 0);
  CHECK(split.out == "formula: p\nholds at s0, fails at s1\n");

  const std::string bare =
      temp_file("bare.dyn", "time nat\nstates s0 s1\nstep 1: s0->s1 s1->s0\n");
  const CliResult same = cli({"distinguish", bare, "s0", "s1", "--view", "step"});
  CHECK(same.code == 1);
  CHECK(same.out == "states s0 and s1 are bisimilar\n");

  const CliResult json_run = cli({"--json", "bisim", fixture_path("sys_cyc2.dyn"),
                                  "--view", "orbit"});
  CHECK(json_run.code == 0);
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["view"] == "orbit");
  CHECK(doc["blocks"].is_array());
}

TEST_CASE("cli orbit and verify") {
  const CliResult reach = cli({"orbit", fixture_path("sys_abs.dyn"), "a"});
  CHECK(reach.code == 0);
  CHECK(reach.out == "orbit: a b\n");

  const CliResult missing_state = cli({"orbit", fixture_path("sys_abs.dyn"), "z"});
  CHECK(missing_state.code == 2);
  CHECK(missing_state.err == "error: unknown state 'z'\n");

  const CliResult laws = cli({"verify", fixture_path("sys_cyc2.dyn")});
  CHECK(laws.code == 0);
  CHECK(laws.out == "action laws hold (bound 4)\n");

  const CliResult bounded = cli({"verify", fixture_path("sys_dfa.dyn"), "--bound", "2"});
  CHECK(bounded.code == 0);
  CHECK(bounded.out == "action laws hold (bound 2)\n");

  const CliResult json_run = cli({"--json", "verify", fixture_path("sys_cyc2.dyn")});
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["ok"] == true);
  CHECK(doc["violations"].empty());
}

TEST_CASE("cli synthesize, classify, and axioms") {
  const CliResult linear =
      cli({"synthesize", fixture_path("frm_chain.kf"), "--mode", "linear"});
  CHECK(linear.code == 0);
  CHECK(linear.out == "time nat\nstates a b\nstep 1: a->b b->b\n");

  const CliResult gap =
      cli({"synthesize", fixture_path("frm_bad.kf"), "--mode", "linear"});
  CHECK(gap.code == 3);
  CHECK(gap.err ==
        "error: no nat-time system has this reachability: transient world 'a' sits in a "
        "non-singleton component\nwitness component: {a b}\n");

  const CliResult refused =
      cli({"synthesize", fixture_path("frm_chain.kf"), "--mode", "invertible"});
  CHECK(refused.code == 3);
  CHECK(refused.err ==
        "error: invertible synthesis needs a symmetric relation\ncounterexample: a b\n");

  const CliResult bad_mode =
      cli({"synthesize", fixture_path("frm_chain.kf"), "--mode", "bogus"});
  CHECK(bad_mode.code == 2);

  const CliResult profile = cli({"classify", fixture_path("frm_bad.kf")});
  CHECK(profile.code == 0);
  CHECK(profile.out ==
        "preorder: yes\n"
        "nonbranching: yes\n"
        "symmetric: no (counterexample: a c)\n"
        "linear: yes\n"
        "transient-scc-singleton: no (counterexample: a b)\n");

  const CliResult five = cli({"axioms", fixture_path("frm_chain.kf"), "--scheme", "5"});
  CHECK(five.code == 1);
  CHECK(five.out == "scheme 5: invalid\ncounter-valuation A={a} at world a\n");

  const CliResult t_scheme = cli({"axioms", fixture_path("frm_chain.kf"), "--scheme", "T"});
  CHECK(t_scheme.code == 0);
  CHECK(t_scheme.out == "scheme T: valid\n");

  const CliResult dot3 = cli({"axioms", fixture_path("frm_fork.kf"), "--scheme", ".3"});
  CHECK(dot3.code == 1);
  CHECK(dot3.out == "scheme .3: invalid\ncounter-valuation A={y} B={z} at world x\n");

  const CliResult capped =
      cli({"axioms", fixture_path("frm_fork.kf"), "--scheme", "T", "--bound", "2"});
  CHECK(capped.code == 2);

  const CliResult json_run =
      cli({"--json", "axioms", fixture_path("frm_chain.kf"), "--scheme", "5"});
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["valid"] == false);
  CHECK(doc["world"] == "a");
  CHECK(doc["valuation_a"] == nlohmann::json({"a"}));
}

TEST_CASE("cli roundtrip picks the strongest applicable construction") {
  const CliResult general = cli({"roundtrip", fixture_path("frm_bad.kf")});
  CHECK(general.code == 0);
  CHECK(general.out.substr(0, 14) == "mode: general\n");
  CHECK(general.out.find("verified: yes\n") != std::string::npos);

  const CliResult invertible = cli({"roundtrip", fixture_path("frm_clique2.kf")});
  CHECK(invertible.code == 0);
  CHECK(invertible.out ==
        "mode: invertible\ntime int\nstates a b\nstep 1: a->b b->a\nverified: yes\n");

  const CliResult linear = cli({"roundtrip", fixture_path("frm_chain.kf")});
  CHECK(linear.code == 0);
  CHECK(linear.out ==
        "mode: linear\ntime nat\nstates a b\nstep 1: a->b b->b\nverified: yes\n");

  const std::string open = temp_file("open.kf", "worlds a b\nedge a b\n");
  const CliResult refused = cli({"roundtrip", open});
  CHECK(refused.code == 3);
  CHECK(refused.err == "error: synthesis needs a preorder\ncounterexample: a\n");

  const CliResult json_run = cli({"--json", "roundtrip", fixture_path("frm_bad.kf")});
  const auto doc = nlohmann::json::parse(json_run.out);
  CHECK(doc["mode"] == "general");
  CHECK(doc["verified"] == true);
  CHECK(parse_system(doc["system"].get<std::string>()).num_states() == 3);
}

}
