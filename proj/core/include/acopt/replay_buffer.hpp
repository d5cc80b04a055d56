#pragma once

#include <cstddef>
#include <deque>
#include <random>
#include <vector>

#include "acopt/design.hpp"

namespace acopt {

// Append-only store of scored designs with uniform with-replacement
// mini-batch sampling. With a finite capacity the oldest entry is evicted
// first; the tracked best is always the maximum over retained entries, ties
// resolved toward the earliest stored.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 0);  // 0 = unbounded

  void store(ScoredDesign entry);  // rejects non-finite scores

  std::vector<ScoredDesign> sample(std::size_t n, std::mt19937_64& rng) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }
  const ScoredDesign& operator[](std::size_t i) const { return entries_[i]; }

  const ScoredDesign& best() const;  // throws if empty

 private:
  std::deque<ScoredDesign> entries_;
  std::size_t capacity_;
  std::size_t first_id_ = 0;  // store id of entries_.front()
  std::size_t best_id_ = 0;
  bool has_best_ = false;
};

}  // namespace acopt
