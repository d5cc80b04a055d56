#include "acopt/replay_buffer.hpp"

#include <cmath>
#include <stdexcept>

#include "acopt/rng.hpp"

namespace acopt {

std::vector<double> encode_design(const Design& design, int input_dim) {
  if (const auto* x = std::get_if<std::vector<double>>(&design)) {
    if (static_cast<int>(x->size()) != input_dim) {
      throw std::invalid_argument("encode_design: continuous design dimension mismatch");
    }
    return *x;
  }
  const auto& cat = std::get<CategoryDesign>(design);
  if (cat.cardinality != input_dim) {
    throw std::invalid_argument("encode_design: category cardinality mismatch");
  }
  if (cat.index < 0 || cat.index >= cat.cardinality) {
    throw std::invalid_argument("encode_design: category index out of range");
  }
  std::vector<double> onehot(static_cast<std::size_t>(input_dim), 0.0);
  onehot[static_cast<std::size_t>(cat.index)] = 1.0;
  return onehot;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

void ReplayBuffer::store(ScoredDesign entry) {
  if (!std::isfinite(entry.score)) {
    throw std::invalid_argument("ReplayBuffer::store: non-finite score");
  }
  const std::size_t id = first_id_ + entries_.size();
  entries_.push_back(std::move(entry));

  if (!has_best_ || entries_.back().score > entries_[best_id_ - first_id_].score) {
    best_id_ = id;
    has_best_ = true;
  }

  if (capacity_ > 0 && entries_.size() > capacity_) {
    entries_.pop_front();
    const bool evicted_best = best_id_ == first_id_;
    ++first_id_;
    if (evicted_best) {
      // Rescan retained entries, earliest wins on ties.
      best_id_ = first_id_;
      for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].score > entries_[best_id_ - first_id_].score) {
          best_id_ = first_id_ + i;
        }
      }
    }
  }
}

std::vector<ScoredDesign> ReplayBuffer::sample(std::size_t n, std::mt19937_64& rng) const {
  if (entries_.empty()) throw std::invalid_argument("ReplayBuffer::sample: empty buffer");
  std::vector<ScoredDesign> batch;
  batch.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    batch.push_back(entries_[draw_index(rng, entries_.size())]);
  }
  return batch;
}

const ScoredDesign& ReplayBuffer::best() const {
  if (!has_best_ || entries_.empty()) {
    throw std::logic_error("ReplayBuffer::best: empty buffer");
  }
  return entries_[best_id_ - first_id_];
}

}  // namespace acopt
