#pragma once

#include <utility>
#include <vector>

namespace symrl {

// Partition of {0, ..., universe_size-1} into dense, non-empty blocks.
// Block ids are assigned by first occurrence, so equal partitions compare
// equal element-wise.
struct Partition {
  int universe_size = 0;
  int block_count = 0;
  std::vector<int> block_of;  // element id -> block id

  // Renumbers an arbitrary assignment so block ids are dense and ordered by
  // first occurrence.
  static Partition from_block_of(const std::vector<int>& assignment);

  // Builds from explicit blocks; throws std::invalid_argument if the blocks
  // do not form a partition of the universe.
  static Partition from_blocks(int universe_size, const std::vector<std::vector<int>>& blocks);

  // Blocks in id order, elements ascending inside each block.
  std::vector<std::vector<int>> blocks() const;

  bool operator==(const Partition& other) const = default;
};

// True iff `blocks` covers {0, ..., universe_size-1} disjointly with
// non-empty blocks. Malformed input (out-of-range ids, overlaps, gaps)
// yields false rather than an error.
bool validate_partition(const std::vector<std::vector<int>>& blocks, int universe_size);

// True iff every b2-block lies inside a single b1-block.
// Throws std::invalid_argument on mismatched universe sizes.
bool is_coarser(const Partition& b1, const Partition& b2);

// Projects a partition of a pair set onto its first component: elements of
// b's universe are identified by pair_of_element, and x, x' share a projected
// block iff the sets of b-blocks touching them are equal. x values that touch
// no block (possible when the pair set misses them) share one block.
Partition project_partition(const Partition& b,
                            const std::vector<std::pair<int, int>>& pair_of_element,
                            int x_size);

}  // namespace symrl
