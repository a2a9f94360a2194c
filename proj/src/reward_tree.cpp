#include "symrl/reward_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symrl {

std::int64_t quantize_reward(double r, double quantum) {
  if (quantum <= 0) throw std::invalid_argument("quantize_reward: quantum must be positive");
  if (!std::isfinite(r)) throw std::invalid_argument("quantize_reward: non-finite reward");
  return std::llround(r / quantum);
}

RewardHistoryTree::RewardHistoryTree(int depth_limit, double quantum, int node_entry_cap)
    : depth_limit_(depth_limit), quantum_(quantum), node_entry_cap_(node_entry_cap) {
  if (depth_limit < 1) throw std::invalid_argument("RewardHistoryTree: depth_limit must be >= 1");
  if (quantum <= 0) throw std::invalid_argument("RewardHistoryTree: quantum must be positive");
  if (node_entry_cap < 1) throw std::invalid_argument("RewardHistoryTree: entry cap must be >= 1");
  nodes_.emplace_back();  // root
}

int RewardHistoryTree::intern(const SAKey& key) {
  auto it = key_ids_.try_emplace(key, static_cast<std::int32_t>(key_of_id_.size())).first;
  if (it->second == static_cast<std::int32_t>(key_of_id_.size())) key_of_id_.push_back(key);
  return it->second;
}

int RewardHistoryTree::id_of_key(const SAKey& key) const {
  auto it = key_ids_.find(key);
  return it == key_ids_.end() ? -1 : it->second;
}

std::int32_t RewardHistoryTree::child(std::int32_t node, std::int64_t label) {
  auto& children = nodes_[node].children;
  auto it = std::lower_bound(children.begin(), children.end(), label,
                             [](const auto& c, std::int64_t l) { return c.first < l; });
  if (it != children.end() && it->first == label) return it->second;
  const auto id = static_cast<std::int32_t>(nodes_.size());
  const auto depth = static_cast<std::int32_t>(nodes_[node].depth + 1);
  // nodes_ may reallocate; insert into children only after emplace_back.
  nodes_.emplace_back();
  nodes_.back().depth = depth;
  auto& parent_children = nodes_[node].children;
  auto pos = std::lower_bound(parent_children.begin(), parent_children.end(), label,
                              [](const auto& c, std::int64_t l) { return c.first < l; });
  parent_children.insert(pos, {label, id});
  return id;
}

void RewardHistoryTree::bump(Node& node, std::int32_t key_id) {
  auto& entries = node.entries;
  auto it = std::lower_bound(entries.begin(), entries.end(), key_id,
                             [](const Entry& e, std::int32_t k) { return e.key_id < k; });
  if (it != entries.end() && it->key_id == key_id) {
    ++it->count;
    return;
  }
  if (static_cast<int>(entries.size()) >= node_entry_cap_) {
    ++dropped_entries_;
    return;
  }
  entries.insert(it, Entry{key_id, 1});
}

void RewardHistoryTree::insert_episode(const std::vector<SAKey>& keys,
                                       const std::vector<double>& rewards) {
  if (keys.size() != rewards.size())
    throw std::invalid_argument("RewardHistoryTree: keys and rewards differ in length");
  const int length = static_cast<int>(keys.size());
  std::vector<std::int64_t> labels(length);
  for (int t = 0; t < length; ++t) labels[t] = quantize_reward(rewards[t], quantum_);
  for (int t = 0; t < length; ++t) {
    const int key_id = intern(keys[t]);
    std::int32_t node = 0;
    const int end = std::min(t + depth_limit_, length);
    for (int j = t; j < end; ++j) {
      node = child(node, labels[j]);
      bump(nodes_[node], key_id);
    }
  }
}

}  // namespace symrl
