#pragma once

#include "symrl/reward_tree.hpp"
#include "symrl/sa_key.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace symrl {

// Occurrence and co-occurrence counts accumulated over tree depths
// [l0, i]: A_u(k) sums k's entry counts, A_p(k, k') sums the pairwise
// minimum counts per node. Key ids refer to the source tree's interning.
class SimilarityTable {
 public:
  SimilarityTable() = default;
  SimilarityTable(std::vector<SAKey> keys, int l0, int i);

  int l0() const { return l0_; }
  int i() const { return i_; }
  int key_count() const { return static_cast<int>(keys_.size()); }
  const std::vector<SAKey>& keys() const { return keys_; }
  int id_of_key(const SAKey& key) const;  // -1 when unknown

  std::int64_t occurrences(int key_id) const { return a_u_[key_id]; }
  std::int64_t co_occurrences(int key_id_a, int key_id_b) const;  // diagonal = occurrences

  // chi = A_p / sqrt(A_u(a) * A_u(b)); nullopt when either key has no
  // support at the accumulated depths.
  std::optional<double> similarity(const SAKey& a, const SAKey& b) const;
  std::optional<double> similarity_by_id(int key_id_a, int key_id_b) const;

  void add_occurrence(int key_id, std::int64_t count);
  void add_co_occurrence(int key_id_a, int key_id_b, std::int64_t count);
  const std::unordered_map<std::uint64_t, std::int64_t>& co_occurrence_map() const {
    return a_p_;
  }

 private:
  std::vector<SAKey> keys_;
  std::map<SAKey, std::int32_t> key_ids_;
  int l0_ = 1;
  int i_ = 1;
  std::vector<std::int64_t> a_u_;
  std::unordered_map<std::uint64_t, std::int64_t> a_p_;  // packed (low id, high id)
};

// Breadth-first accumulation over all tree nodes at depths [l0, i].
SimilarityTable compute_similarities(const RewardHistoryTree& tree, int l0, int i);

// Thresholded partner lists: for each key, up to `cap` partners with
// chi >= delta and both supports >= min_support, sorted by descending chi
// (ties by key), stored symmetrically. Also keeps the most recent
// continuous observation per key as the partner's network-input
// representative.
class SymmetryIndex {
 public:
  struct Partner {
    SAKey key;
    double chi;
  };

  void update(const SimilarityTable& table, double delta, std::int64_t min_support, int cap);

  const std::vector<Partner>& partners(const SAKey& key) const;
  int partner_pair_count() const { return partner_pair_count_; }

  void observe(const SAKey& key, const double* obs, int obs_size);
  const std::vector<double>* representative(const SAKey& key) const;

 private:
  std::map<SAKey, std::vector<Partner>> partners_;
  std::map<SAKey, std::vector<double>> representatives_;
  int partner_pair_count_ = 0;
};

}  // namespace symrl
