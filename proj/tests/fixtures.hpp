#ifndef DYNLOG_TESTS_FIXTURES_HPP
#define DYNLOG_TESTS_FIXTURES_HPP

// The named examples used throughout the suites, built in code so the
// tests do not depend on the parser.

#include "dynlog/synthesis.hpp"
#include "dynlog/system.hpp"
#include "dynlog/time.hpp"

namespace testutil {

// Two-state swap over nat time, p on s0.
inline dynlog::DynSystem sys_cyc2() {
  return dynlog::DynSystem::make(dynlog::TimeMonoid::nat(), {"s0", "s1"}, {{1, 0}},
                                 {{"p", {0}}});
}

// Absorbing two-state system over nat time, p on b.
inline dynlog::DynSystem sys_abs() {
  return dynlog::DynSystem::make(dynlog::TimeMonoid::nat(), {"a", "b"}, {{1, 1}},
                                 {{"p", {1}}});
}

// Word-time swap over {x}, acc on e: accepts even-length x-words from e.
inline dynlog::DynSystem sys_dfa() {
  return dynlog::DynSystem::make(dynlog::TimeMonoid::word({"x"}), {"e", "o"}, {{1, 0}},
                                 {{"acc", {0}}});
}

// a below b, both reflexive.
inline dynlog::Frame frm_chain() {
  return {{"a", "b"}, {{0, 0}, {0, 1}, {1, 1}}};
}

// Full relation on two worlds.
inline dynlog::Frame frm_clique2() {
  return {{"a", "b"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
}

// Transient component {a,b} below c: a preorder no nat-time system realizes.
inline dynlog::Frame frm_bad() {
  return {{"a", "b", "c"}, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {2, 2}}};
}

// x below the incomparable y and z.
inline dynlog::Frame frm_fork() {
  return {{"x", "y", "z"}, {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 2}}};
}

}  // namespace testutil

#endif
