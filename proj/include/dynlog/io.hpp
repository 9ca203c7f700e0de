#ifndef DYNLOG_IO_HPP
#define DYNLOG_IO_HPP

#include <iosfwd>
#include <string>

#include "dynlog/formula.hpp"
#include "dynlog/synthesis.hpp"
#include "dynlog/system.hpp"

namespace dynlog {

// System documents (.dyn): newline-oriented, '#' comments, UTF-8.
//   time nat | time int | time word <sym>... | time free <K>
//   states <name>...
//   step <gen>: <src>-><dst> ...   (one mapping per state; int declares
//                                   only step 1, which must be bijective)
//   label <atom>: <state>...
DynSystem parse_system(const std::string& text);
std::string print_system(const DynSystem& sys);

// Frame documents (.kf):
//   worlds <name>...
//   edge <src> <dst>
Frame parse_frame(const std::string& text);
std::string print_frame(const Frame& frame);

// Formula surface syntax. Precedence ~ > & > | > ->, with -> right
// associative; X/Y/G/F bind like ~. When `time` is given, word literals
// and eat patterns are resolved against its alphabet; otherwise word
// literals split per character and eat patterns range over the symbols
// they mention.
Formula parse_formula(const std::string& text, const TimeMonoid* time = nullptr);
std::string print_formula(const Formula& f);

std::string print_time(const TimeValue& v);

// The command-line tool, callable in-process. Exit codes: 0 the checked
// property holds / success, 1 it fails, 2 usage or parse error, 3 a
// synthesis precondition is violated or the frame is unrealizable.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dynlog

#endif
