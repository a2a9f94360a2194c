#pragma once

#include "symrl/sa_key.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace symrl {

// Nearest integer multiple of quantum, as an exact integer label.
// Throws on non-finite input.
std::int64_t quantize_reward(double r, double quantum);

// Rooted tree of quantized reward-sequence prefixes. From every step t of an
// ingested episode, the window of up to `depth_limit` rewards starting at t
// is walked from the root, and the visiting (state, action) key's occurrence
// count is incremented at every node on the path. A node at depth j thus
// holds (key, o) iff its label path was observed o times immediately after
// key.
class RewardHistoryTree {
 public:
  struct Entry {
    std::int32_t key_id;
    std::int32_t count;
  };
  struct Node {
    std::vector<std::pair<std::int64_t, std::int32_t>> children;  // label -> node id, sorted
    std::vector<Entry> entries;                                   // sorted by key_id
    std::int32_t depth = 0;
  };

  RewardHistoryTree(int depth_limit, double quantum = 1e-6, int node_entry_cap = 512);

  int depth_limit() const { return depth_limit_; }
  double quantum() const { return quantum_; }

  void insert_episode(const std::vector<SAKey>& keys, const std::vector<double>& rewards);

  const std::vector<Node>& nodes() const { return nodes_; }  // nodes_[0] is the root
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int key_count() const { return static_cast<int>(key_of_id_.size()); }
  const std::vector<SAKey>& keys() const { return key_of_id_; }
  int id_of_key(const SAKey& key) const;  // -1 when never observed
  // Number of entry increments dropped by the per-node entry cap.
  std::int64_t dropped_entries() const { return dropped_entries_; }

 private:
  int intern(const SAKey& key);
  std::int32_t child(std::int32_t node, std::int64_t label);
  void bump(Node& node, std::int32_t key_id);

  int depth_limit_;
  double quantum_;
  int node_entry_cap_;
  std::vector<Node> nodes_;
  std::map<SAKey, std::int32_t> key_ids_;
  std::vector<SAKey> key_of_id_;
  std::int64_t dropped_entries_ = 0;
};

}  // namespace symrl
