#include "dynlog/partition.hpp"

#include <map>

namespace dynlog {

Partition Partition::from_classes(const std::vector<int>& classes) {
  Partition p;
  p.block_of.resize(classes.size());
  std::map<int, int> renumber;
  for (int i = 0; i < static_cast<int>(classes.size()); ++i) {
    auto [it, fresh] = renumber.emplace(classes[i], static_cast<int>(p.blocks.size()));
    if (fresh) p.blocks.emplace_back();
    p.block_of[i] = it->second;
    p.blocks[it->second].push_back(i);
  }
  return p;
}

}  // namespace dynlog
