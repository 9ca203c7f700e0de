#include "dynlog/synthesis.hpp"

#include <algorithm>
#include <queue>

#include "dynlog/error.hpp"

namespace dynlog {

std::optional<int> Frame::world_index(const std::string& name) const {
  for (int i = 0; i < num_worlds(); ++i) {
    if (worlds[i] == name) return i;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> names_of(const Frame& frame, const std::vector<int>& worlds) {
  std::vector<std::string> out;
  out.reserve(worlds.size());
  for (int w : worlds) out.push_back(frame.worlds[w]);
  return out;
}

bool transient(const Frame& frame, int x) {
  for (int y = 0; y < frame.num_worlds(); ++y) {
    if (frame.related(x, y) && !frame.related(y, x)) return true;
  }
  return false;
}

// Mutual-relatedness class of x (always contains x itself).
std::vector<int> mutual_class(const Frame& frame, int x) {
  std::vector<int> out;
  for (int y = 0; y < frame.num_worlds(); ++y) {
    if (y == x || (frame.related(x, y) && frame.related(y, x))) out.push_back(y);
  }
  return out;
}

}  // namespace

FrameProfile classify_frame(const Frame& frame) {
  FrameProfile profile;
  const int n = frame.num_worlds();

  for (int x = 0; x < n && profile.preorder.holds; ++x) {
    if (!frame.related(x, x)) profile.preorder = {false, {x}};
  }
  for (int x = 0; x < n && profile.preorder.holds; ++x) {
    for (int y = 0; y < n && profile.preorder.holds; ++y) {
      if (!frame.related(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (frame.related(y, z) && !frame.related(x, z)) {
          profile.preorder = {false, {x, y, z}};
          break;
        }
      }
    }
  }

  for (int x = 0; x < n && profile.nonbranching.holds; ++x) {
    for (int y = 0; y < n && profile.nonbranching.holds; ++y) {
      if (!frame.related(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (frame.related(x, z) && !frame.related(y, z) && !frame.related(z, y)) {
          profile.nonbranching = {false, {x, y, z}};
          break;
        }
      }
    }
  }

  for (int x = 0; x < n && profile.symmetric.holds; ++x) {
    for (int y = 0; y < n; ++y) {
      if (frame.related(x, y) && !frame.related(y, x)) {
        profile.symmetric = {false, {x, y}};
        break;
      }
    }
  }

  for (int x = 0; x < n && profile.linear.holds; ++x) {
    for (int y = 0; y < n; ++y) {
      if (!frame.related(x, y) && !frame.related(y, x)) {
        profile.linear = {false, {x, y}};
        break;
      }
    }
  }

  for (int x = 0; x < n && profile.transient_scc_singleton.holds; ++x) {
    if (!transient(frame, x)) continue;
    for (int y = 0; y < n; ++y) {
      if (y != x && frame.related(x, y) && frame.related(y, x)) {
        profile.transient_scc_singleton = {false, {x, y}};
        break;
      }
    }
  }

  return profile;
}

Partition scc_partition(const Frame& frame) {
  const FrameProfile profile = classify_frame(frame);
  if (!profile.preorder.holds) {
    throw PreconditionError("the relation is not a preorder",
                            names_of(frame, profile.preorder.counterexample));
  }
  std::vector<int> classes(frame.num_worlds(), -1);
  for (int x = 0; x < frame.num_worlds(); ++x) {
    if (classes[x] != -1) continue;
    for (int y : mutual_class(frame, x)) classes[y] = x;
  }
  return Partition::from_classes(classes);
}

namespace {

DynSystem cycle_system(TimeMonoid time, const Frame& frame, const std::vector<int>& step) {
  return DynSystem::make(std::move(time), frame.worlds, {step}, {});
}

}  // namespace

DynSystem synthesize_invertible(const Frame& frame) {
  const FrameProfile profile = classify_frame(frame);
  if (!profile.preorder.holds) {
    throw PreconditionError("invertible synthesis needs a preorder",
                            names_of(frame, profile.preorder.counterexample));
  }
  if (!profile.symmetric.holds) {
    throw PreconditionError("invertible synthesis needs a symmetric relation",
                            names_of(frame, profile.symmetric.counterexample));
  }
  // One cyclic permutation per equivalence class, in declaration order.
  const Partition sccs = scc_partition(frame);
  std::vector<int> step(frame.num_worlds());
  for (const auto& block : sccs.blocks) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      step[block[i]] = block[(i + 1) % block.size()];
    }
  }
  return cycle_system(TimeMonoid::integers(), frame, step);
}

DynSystem synthesize_linear(const Frame& frame) {
  const FrameProfile profile = classify_frame(frame);
  if (!profile.preorder.holds) {
    throw PreconditionError("linear synthesis needs a preorder",
                            names_of(frame, profile.preorder.counterexample));
  }
  if (!profile.nonbranching.holds) {
    throw PreconditionError("linear synthesis needs a non-branching relation",
                            names_of(frame, profile.nonbranching.counterexample));
  }
  if (!profile.transient_scc_singleton.holds) {
    const int x = profile.transient_scc_singleton.counterexample[0];
    throw UnrealizableFrameError(
        "no nat-time system has this reachability: transient world '" + frame.worlds[x] +
            "' sits in a non-singleton component",
        names_of(frame, mutual_class(frame, x)));
  }
  std::vector<int> step(frame.num_worlds());
  for (int x = 0; x < frame.num_worlds(); ++x) {
    if (transient(frame, x)) {
      // Step to the least strict successor: the one that reaches all
      // others. Ties inside its component resolve by declaration order.
      std::vector<int> successors;
      for (int y = 0; y < frame.num_worlds(); ++y) {
        if (frame.related(x, y) && !frame.related(y, x)) successors.push_back(y);
      }
      for (int y : successors) {
        const bool least = std::all_of(successors.begin(), successors.end(),
                                       [&](int z) { return frame.related(y, z); });
        if (least) {
          step[x] = y;
          break;
        }
      }
    } else {
      // Cycle through the terminal component in declaration order.
      const std::vector<int> cls = mutual_class(frame, x);
      const auto it = std::find(cls.begin(), cls.end(), x);
      step[x] = cls[(it - cls.begin() + 1) % cls.size()];
    }
  }
  return cycle_system(TimeMonoid::nat(), frame, step);
}

DynSystem synthesize_general(const Frame& frame) {
  const FrameProfile profile = classify_frame(frame);
  if (!profile.preorder.holds) {
    throw PreconditionError("general synthesis needs a preorder",
                            names_of(frame, profile.preorder.counterexample));
  }
  // One generator per successor slot: generator i sends x to the i-th
  // successor of x, wrapping around, so every successor is one step away.
  std::vector<std::vector<int>> successor_list(frame.num_worlds());
  std::size_t max_degree = 1;
  for (int x = 0; x < frame.num_worlds(); ++x) {
    for (int y = 0; y < frame.num_worlds(); ++y) {
      if (frame.related(x, y)) successor_list[x].push_back(y);
    }
    max_degree = std::max(max_degree, successor_list[x].size());
  }
  std::vector<std::vector<int>> tables(max_degree, std::vector<int>(frame.num_worlds()));
  for (std::size_t g = 0; g < max_degree; ++g) {
    for (int x = 0; x < frame.num_worlds(); ++x) {
      const auto& list = successor_list[x];
      tables[g][x] = list[g % list.size()];
    }
  }
  return DynSystem::make(TimeMonoid::free_index(static_cast<int>(max_degree)), frame.worlds,
                         std::move(tables), {});
}

bool verify_synthesis(const Frame& frame, const DynSystem& sys) {
  if (sys.states() != frame.worlds) {
    throw SemanticError("the system's states do not match the frame's worlds");
  }
  // Deliberately re-derives reachability with its own search rather than
  // reusing the orbit computation.
  std::set<std::pair<int, int>> reach;
  for (int start = 0; start < sys.num_states(); ++start) {
    std::vector<bool> seen(sys.num_states(), false);
    std::queue<int> frontier;
    seen[start] = true;
    frontier.push(start);
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop();
      reach.insert({start, cur});
      for (const auto& row : sys.step_tables()) {
        if (!seen[row[cur]]) {
          seen[row[cur]] = true;
          frontier.push(row[cur]);
        }
      }
    }
  }
  return reach == frame.relation;
}

AxiomResult axiom_validity(const Frame& frame, AxiomScheme scheme, int max_worlds) {
  const int n = frame.num_worlds();
  if (n > max_worlds) {
    throw SemanticError("frame has " + std::to_string(n) + " worlds; the valuation search is capped at " +
                        std::to_string(max_worlds));
  }
  const std::uint32_t full = n >= 32 ? ~0u : (1u << n) - 1u;
  std::vector<std::uint32_t> row(n, 0);
  for (const auto& [x, y] : frame.relation) row[x] |= 1u << y;

  const auto box = [&](std::uint32_t set) {
    std::uint32_t out = 0;
    for (int w = 0; w < n; ++w) {
      if ((row[w] & ~set) == 0) out |= 1u << w;
    }
    return out;
  };
  const auto dia = [&](std::uint32_t set) {
    std::uint32_t out = 0;
    for (int w = 0; w < n; ++w) {
      if ((row[w] & set) != 0) out |= 1u << w;
    }
    return out;
  };
  const auto worlds_of = [&](std::uint32_t set) {
    std::vector<int> out;
    for (int w = 0; w < n; ++w) {
      if (set & (1u << w)) out.push_back(w);
    }
    return out;
  };
  const auto first_world = [&](std::uint32_t set) {
    for (int w = 0; w < n; ++w) {
      if (set & (1u << w)) return w;
    }
    return -1;
  };

  AxiomResult result;
  if (scheme == AxiomScheme::DotThree) {
    // Precompute box over every valuation; the scheme needs it twice per
    // pair of valuations.
    std::vector<std::uint32_t> boxes(full + 1u);
    for (std::uint32_t set = 0; set <= full; ++set) boxes[set] = box(set);
    for (std::uint32_t a = 0; a <= full; ++a) {
      for (std::uint32_t b = 0; b <= full; ++b) {
        const std::uint32_t left = boxes[(~boxes[a] | b) & full];
        const std::uint32_t right = boxes[(~boxes[b] | a) & full];
        const std::uint32_t failing = full & ~(left | right);
        if (failing != 0) {
          result.valid = false;
          result.world = first_world(failing);
          result.valuation_a = worlds_of(a);
          result.valuation_b = worlds_of(b);
          return result;
        }
      }
    }
    return result;
  }

  for (std::uint32_t a = 0; a <= full; ++a) {
    std::uint32_t failing = 0;
    switch (scheme) {
      case AxiomScheme::T:
        failing = box(a) & ~a;
        break;
      case AxiomScheme::Four:
        failing = box(a) & ~box(box(a));
        break;
      case AxiomScheme::Five: {
        const std::uint32_t d = dia(a);
        failing = d & ~box(d);
        break;
      }
      case AxiomScheme::DotThree:
        break;
    }
    failing &= full;
    if (failing != 0) {
      result.valid = false;
      result.world = first_world(failing);
      result.valuation_a = worlds_of(a);
      return result;
    }
  }
  return result;
}

}  // namespace dynlog
