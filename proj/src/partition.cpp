#include "symrl/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace symrl {

Partition Partition::from_block_of(const std::vector<int>& assignment) {
  Partition p;
  p.universe_size = static_cast<int>(assignment.size());
  p.block_of.assign(assignment.size(), -1);
  std::map<int, int> renumber;
  for (int e = 0; e < p.universe_size; ++e) {
    auto [it, inserted] = renumber.try_emplace(assignment[e], p.block_count);
    if (inserted) ++p.block_count;
    p.block_of[e] = it->second;
  }
  return p;
}

Partition Partition::from_blocks(int universe_size, const std::vector<std::vector<int>>& blocks) {
  if (!validate_partition(blocks, universe_size))
    throw std::invalid_argument("Partition::from_blocks: blocks do not partition the universe");
  std::vector<int> assignment(universe_size, -1);
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    for (int e : blocks[b]) assignment[e] = b;
  return from_block_of(assignment);
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(block_count);
  for (int e = 0; e < universe_size; ++e) out[block_of[e]].push_back(e);
  return out;
}

bool validate_partition(const std::vector<std::vector<int>>& blocks, int universe_size) {
  if (universe_size < 0) return false;
  std::vector<char> seen(universe_size, 0);
  int covered = 0;
  for (const auto& block : blocks) {
    if (block.empty()) return false;
    for (int e : block) {
      if (e < 0 || e >= universe_size || seen[e]) return false;
      seen[e] = 1;
      ++covered;
    }
  }
  return covered == universe_size;
}

bool is_coarser(const Partition& b1, const Partition& b2) {
  if (b1.universe_size != b2.universe_size)
    throw std::invalid_argument("is_coarser: partitions over different universes");
  // Every b2-block must map into one b1-block: record the b1-block of the
  // first element seen per b2-block and compare the rest against it.
  std::vector<int> image(b2.block_count, -1);
  for (int e = 0; e < b2.universe_size; ++e) {
    int& img = image[b2.block_of[e]];
    if (img == -1)
      img = b1.block_of[e];
    else if (img != b1.block_of[e])
      return false;
  }
  return true;
}

Partition project_partition(const Partition& b,
                            const std::vector<std::pair<int, int>>& pair_of_element,
                            int x_size) {
  if (static_cast<int>(pair_of_element.size()) != b.universe_size)
    throw std::invalid_argument("project_partition: element/pair count mismatch");
  std::vector<std::vector<int>> touching(x_size);
  for (int e = 0; e < b.universe_size; ++e) {
    int x = pair_of_element[e].first;
    if (x < 0 || x >= x_size)
      throw std::invalid_argument("project_partition: pair component out of range");
    touching[x].push_back(b.block_of[e]);
  }
  std::map<std::vector<int>, int> key_to_block;
  std::vector<int> assignment(x_size);
  for (int x = 0; x < x_size; ++x) {
    auto& key = touching[x];
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    auto it = key_to_block.try_emplace(key, static_cast<int>(key_to_block.size())).first;
    assignment[x] = it->second;
  }
  return Partition::from_block_of(assignment);
}

}  // namespace symrl
