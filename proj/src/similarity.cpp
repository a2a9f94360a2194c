#include "symrl/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symrl {

namespace {

std::uint64_t pack_pair(int low, int high) {
  return (static_cast<std::uint64_t>(low) << 32) | static_cast<std::uint32_t>(high);
}

}  // namespace

SimilarityTable::SimilarityTable(std::vector<SAKey> keys, int l0, int i)
    : keys_(std::move(keys)), l0_(l0), i_(i), a_u_(keys_.size(), 0) {
  if (l0 < 1 || i < l0) throw std::invalid_argument("SimilarityTable: need 1 <= l0 <= i");
  for (std::int32_t id = 0; id < static_cast<std::int32_t>(keys_.size()); ++id)
    key_ids_.emplace(keys_[id], id);
}

int SimilarityTable::id_of_key(const SAKey& key) const {
  auto it = key_ids_.find(key);
  return it == key_ids_.end() ? -1 : it->second;
}

std::int64_t SimilarityTable::co_occurrences(int key_id_a, int key_id_b) const {
  if (key_id_a == key_id_b) return a_u_[key_id_a];
  auto it = a_p_.find(pack_pair(std::min(key_id_a, key_id_b), std::max(key_id_a, key_id_b)));
  return it == a_p_.end() ? 0 : it->second;
}

std::optional<double> SimilarityTable::similarity_by_id(int key_id_a, int key_id_b) const {
  const std::int64_t ua = a_u_[key_id_a];
  const std::int64_t ub = a_u_[key_id_b];
  if (ua <= 0 || ub <= 0) return std::nullopt;
  return static_cast<double>(co_occurrences(key_id_a, key_id_b)) /
         std::sqrt(static_cast<double>(ua) * static_cast<double>(ub));
}

std::optional<double> SimilarityTable::similarity(const SAKey& a, const SAKey& b) const {
  const int ia = id_of_key(a);
  const int ib = id_of_key(b);
  if (ia < 0 || ib < 0) return std::nullopt;
  return similarity_by_id(ia, ib);
}

void SimilarityTable::add_occurrence(int key_id, std::int64_t count) { a_u_[key_id] += count; }

void SimilarityTable::add_co_occurrence(int key_id_a, int key_id_b, std::int64_t count) {
  if (key_id_a == key_id_b)
    throw std::invalid_argument("SimilarityTable: diagonal co-occurrences are implicit");
  a_p_[pack_pair(std::min(key_id_a, key_id_b), std::max(key_id_a, key_id_b))] += count;
}

SimilarityTable compute_similarities(const RewardHistoryTree& tree, int l0, int i) {
  if (l0 < 1 || i < l0 || i > tree.depth_limit())
    throw std::invalid_argument("compute_similarities: need 1 <= l0 <= i <= tree depth limit");
  SimilarityTable table(tree.keys(), l0, i);
  for (const auto& node : tree.nodes()) {
    if (node.depth < l0 || node.depth > i) continue;
    const auto& entries = node.entries;
    const int n = static_cast<int>(entries.size());
    for (int a = 0; a < n; ++a) {
      table.add_occurrence(entries[a].key_id, entries[a].count);
      for (int b = a + 1; b < n; ++b)
        table.add_co_occurrence(entries[a].key_id, entries[b].key_id,
                                std::min(entries[a].count, entries[b].count));
    }
  }
  return table;
}

void SymmetryIndex::update(const SimilarityTable& table, double delta, std::int64_t min_support,
                           int cap) {
  if (delta <= 0 || delta > 1)
    throw std::invalid_argument("SymmetryIndex: delta must lie in (0, 1]");
  if (cap < 1) throw std::invalid_argument("SymmetryIndex: cap must be >= 1");
  partners_.clear();
  partner_pair_count_ = 0;
  std::map<std::int32_t, std::vector<Partner>> by_id;
  for (const auto& [packed, count] : table.co_occurrence_map()) {
    const auto id_a = static_cast<std::int32_t>(packed >> 32);
    const auto id_b = static_cast<std::int32_t>(packed & 0xffffffffu);
    if (table.occurrences(id_a) < min_support || table.occurrences(id_b) < min_support) continue;
    const double chi = static_cast<double>(count) /
                       std::sqrt(static_cast<double>(table.occurrences(id_a)) *
                                 static_cast<double>(table.occurrences(id_b)));
    if (chi < delta) continue;
    by_id[id_a].push_back({table.keys()[id_b], chi});
    by_id[id_b].push_back({table.keys()[id_a], chi});
  }
  // Sort, truncate to cap, then drop one-sided survivors so the stored
  // relation stays symmetric.
  auto order = [](const Partner& x, const Partner& y) {
    return x.chi != y.chi ? x.chi > y.chi : x.key < y.key;
  };
  std::map<SAKey, std::vector<Partner>> kept;
  for (auto& [id, list] : by_id) {
    std::sort(list.begin(), list.end(), order);
    if (static_cast<int>(list.size()) > cap) list.resize(cap);
    kept.emplace(table.keys()[id], std::move(list));
  }
  for (const auto& [key, list] : kept) {
    std::vector<Partner> confirmed;
    for (const Partner& p : list) {
      auto it = kept.find(p.key);
      if (it == kept.end()) continue;
      const auto& reverse = it->second;
      if (std::any_of(reverse.begin(), reverse.end(),
                      [&](const Partner& r) { return r.key == key; }))
        confirmed.push_back(p);
    }
    if (!confirmed.empty()) {
      partner_pair_count_ += static_cast<int>(confirmed.size());
      partners_.emplace(key, std::move(confirmed));
    }
  }
  partner_pair_count_ /= 2;
}

const std::vector<SymmetryIndex::Partner>& SymmetryIndex::partners(const SAKey& key) const {
  static const std::vector<Partner> kEmpty;
  auto it = partners_.find(key);
  return it == partners_.end() ? kEmpty : it->second;
}

void SymmetryIndex::observe(const SAKey& key, const double* obs, int obs_size) {
  auto& rep = representatives_[key];
  rep.assign(obs, obs + obs_size);
}

const std::vector<double>* SymmetryIndex::representative(const SAKey& key) const {
  auto it = representatives_.find(key);
  return it == representatives_.end() ? nullptr : &it->second;
}

}  // namespace symrl
