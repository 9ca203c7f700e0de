#ifndef DYNLOG_PARTITION_HPP
#define DYNLOG_PARTITION_HPP

#include <vector>

namespace dynlog {

// A partition of {0..n-1}. Blocks are ordered by their smallest member's
// first occurrence scanning 0..n-1, members ascending, so block ids are
// stable across runs.
struct Partition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  bool same_block(int a, int b) const { return block_of[a] == block_of[b]; }

  // Builds the canonical partition from an arbitrary class assignment.
  static Partition from_classes(const std::vector<int>& classes);

  friend bool operator==(const Partition&, const Partition&) = default;
};

}  // namespace dynlog

#endif
