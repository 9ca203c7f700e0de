#ifndef DYNLOG_SYNTHESIS_HPP
#define DYNLOG_SYNTHESIS_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynlog/partition.hpp"
#include "dynlog/system.hpp"

namespace dynlog {

// A finite Kripke frame: named worlds and a relation over them.
struct Frame {
  std::vector<std::string> worlds;
  std::set<std::pair<int, int>> relation;

  int num_worlds() const { return static_cast<int>(worlds.size()); }
  bool related(int x, int y) const { return relation.count({x, y}) > 0; }
  std::optional<int> world_index(const std::string& name) const;
};

// One relational property with, when it fails, the lexicographically
// first violating world tuple.
struct FrameFlag {
  bool holds = true;
  std::vector<int> counterexample;
};

struct FrameProfile {
  FrameFlag preorder;                // reflexive + transitive
  FrameFlag nonbranching;            // xRy, xRz => yRz or zRy
  FrameFlag symmetric;               // xRy => yRx
  FrameFlag linear;                  // xRy or yRx for all x, y
  FrameFlag transient_scc_singleton; // transient worlds sit in singleton sccs
};

FrameProfile classify_frame(const Frame& frame);

// Mutual-relatedness classes of a preorder. Errors if not a preorder.
Partition scc_partition(const Frame& frame);

// Frame-to-system constructions. Each requires a preorder; the produced
// system's reachability equals the frame relation.
//  - invertible: symmetric preorder -> int-time system (per-scc cycles)
//  - linear: non-branching preorder with singleton transient sccs ->
//    nat-time system (transients step to their least successor);
//    violating the scc condition raises UnrealizableFrameError
//  - general: any preorder -> free-index-time system, one generator per
//    successor slot (K = max out-degree)
DynSystem synthesize_invertible(const Frame& frame);
DynSystem synthesize_linear(const Frame& frame);
DynSystem synthesize_general(const Frame& frame);

// Does the system's reachability relation equal the frame relation?
// Uses its own breadth-first search over the step tables. Errors if the
// carriers differ.
bool verify_synthesis(const Frame& frame, const DynSystem& sys);

enum class AxiomScheme { T, Four, DotThree, Five };

struct AxiomResult {
  bool valid = true;
  int world = -1;                 // first failing world
  std::vector<int> valuation_a;   // falsifying valuation of the first metavariable
  std::vector<int> valuation_b;   // second metavariable (DotThree only)
};

// Frame validity of the scheme, by exhaustive valuation search
// (metavariables range over all world sets, ascending bitmask order).
// Errors if the frame has more than max_worlds worlds.
AxiomResult axiom_validity(const Frame& frame, AxiomScheme scheme, int max_worlds = 12);

}  // namespace dynlog

#endif
