#include "ecmem/memory.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace ecmem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_ranking(Strategy s) {
  return s == Strategy::Lru || s == Strategy::Rew || s == Strategy::Sur;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Lru: return "lru";
    case Strategy::Rew: return "rew";
    case Strategy::Sur: return "sur";
    case Strategy::Km: return "km";
    case Strategy::Dkm: return "dkm";
  }
  return "?";
}

std::string_view to_string(Backend b) {
  return b == Backend::NaiveScan ? "naive" : "spatial-tree";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  if (name == "lru") return Strategy::Lru;
  if (name == "rew") return Strategy::Rew;
  if (name == "sur") return Strategy::Sur;
  if (name == "km") return Strategy::Km;
  if (name == "dkm") return Strategy::Dkm;
  return std::nullopt;
}

std::optional<Backend> backend_from_string(std::string_view name) {
  if (name == "naive" || name == "naive-scan") return Backend::NaiveScan;
  if (name == "spatial-tree" || name == "tree") return Backend::SpatialTree;
  return std::nullopt;
}

double kernel_weight(std::span<const double> a, std::span<const double> b,
                     double delta) {
  if (a.size() != b.size())
    throw std::invalid_argument("kernel_weight: key dimension mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("kernel_weight: delta must be > 0");
  return 1.0 / (squared_distance(a, b) + delta);
}

ActionMemory::ActionMemory(Options opts) : opts_(opts) {
  if (opts_.capacity < 1)
    throw std::invalid_argument("ActionMemory: capacity must be >= 1");
  if (opts_.key_dim < 1)
    throw std::invalid_argument("ActionMemory: key_dim must be >= 1");
  if (!(opts_.kernel.delta > 0.0))
    throw std::invalid_argument("ActionMemory: kernel delta must be > 0");
  if (opts_.kernel.k < 1)
    throw std::invalid_argument("ActionMemory: kernel k must be >= 1");
  if (opts_.dkm_decrement && *opts_.dkm_decrement < 0.0)
    throw std::invalid_argument("ActionMemory: dkm_decrement must be >= 0");
  dkm_decrement_ =
      opts_.dkm_decrement.value_or(1.0 / static_cast<double>(opts_.capacity));

  keys_.resize(opts_.capacity * opts_.key_dim);
  q_.resize(opts_.capacity);
  surprise_.resize(opts_.capacity);
  count_.resize(opts_.capacity);
  last_used_.resize(opts_.capacity);
  dirty_.assign(opts_.capacity, 0);
}

std::span<const double> ActionMemory::key(std::size_t slot) const {
  return {keys_.data() + slot * opts_.key_dim, opts_.key_dim};
}

void ActionMemory::check_key(std::span<const double> key) const {
  if (key.size() != opts_.key_dim)
    throw std::invalid_argument("ActionMemory: key dimension mismatch");
  for (double v : key)
    if (!std::isfinite(v))
      throw std::invalid_argument("ActionMemory: key has non-finite component");
}

void ActionMemory::mark_dirty(std::uint32_t slot) {
  if (opts_.backend != Backend::SpatialTree) return;
  if (!dirty_[slot]) {
    dirty_[slot] = 1;
    extras_.push_back(slot);
  }
}

void ActionMemory::refresh_index() const {
  // Amortized rebuild: dirty slots are scanned linearly until they exceed
  // the threshold, then the snapshot is rebuilt over everything.
  const std::size_t threshold = std::max<std::size_t>(64, size_ / 8);
  if (tree_.built() && extras_.size() <= threshold) return;
  tree_.build(keys_.data(), size_, opts_.key_dim);
  if (tree_.built()) {
    std::fill(dirty_.begin(), dirty_.end(), 0);
    extras_.clear();
  }
}

void ActionMemory::collect_all(std::span<const double> query,
                               KnnCollector& out) const {
  for (std::uint32_t slot = 0; slot < size_; ++slot)
    out.offer(slot, squared_distance(query, key(slot)));
}

std::vector<Neighbor> ActionMemory::knn(std::span<const double> query,
                                        int k) const {
  check_key(query);
  if (empty()) throw std::logic_error("ActionMemory: k-NN query on empty memory");
  if (k < 1) throw std::invalid_argument("ActionMemory: k must be >= 1");

  KnnCollector collector(std::min<std::size_t>(static_cast<std::size_t>(k), size_));
  if (opts_.backend == Backend::SpatialTree) {
    refresh_index();
    tree_.knn(query, collector, dirty_);
    for (std::uint32_t slot : extras_)
      collector.offer(slot, squared_distance(query, key(slot)));
  } else {
    collect_all(query, collector);
  }
  return collector.take_sorted();
}

double ActionMemory::estimate(std::span<const double> query, std::uint64_t now) {
  const auto neighbours = knn(query, opts_.kernel.k);
  double weight_sum = 0.0;
  double weighted = 0.0;
  for (const Neighbor& n : neighbours) {
    const double w = 1.0 / (n.d2 + opts_.kernel.delta);
    weight_sum += w;
    weighted += w * q_[n.index];
  }
  for (const Neighbor& n : neighbours) last_used_[n.index] = now;
  return weighted / weight_sum;
}

double ActionMemory::estimate(std::span<const double> query) const {
  const auto neighbours = knn(query, opts_.kernel.k);
  double weight_sum = 0.0;
  double weighted = 0.0;
  for (const Neighbor& n : neighbours) {
    const double w = 1.0 / (n.d2 + opts_.kernel.delta);
    weight_sum += w;
    weighted += w * q_[n.index];
  }
  return weighted / weight_sum;
}

std::optional<std::uint32_t> ActionMemory::find_exact(
    std::span<const double> key_query) const {
  check_key(key_query);
  const std::size_t bytes = opts_.key_dim * sizeof(double);
  auto matches = [&](std::uint32_t slot) {
    return std::memcmp(key_query.data(), key(slot).data(), bytes) == 0;
  };

  if (opts_.backend == Backend::SpatialTree && !empty()) {
    refresh_index();
    // Bitwise-equal keys are a subset of zero-distance ones.
    std::vector<std::uint32_t> candidates;
    tree_.collect_equal(key_query, candidates, dirty_);
    for (std::uint32_t slot : extras_)
      if (squared_distance(key_query, key(slot)) == 0.0)
        candidates.push_back(slot);
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t slot : candidates)
      if (slot < best && matches(slot)) best = slot;
    if (best != std::numeric_limits<std::uint32_t>::max()) return best;
    return std::nullopt;
  }

  for (std::uint32_t slot = 0; slot < size_; ++slot)
    if (matches(slot)) return slot;
  return std::nullopt;
}

double ActionMemory::new_entry_surprise(std::span<const double> key,
                                        double return_value) const {
  // Internal bookkeeping probe: does not count as memory use, so it leaves
  // the recency stamps alone.
  if (empty()) return kInf;
  return std::abs(return_value - estimate(key));
}

void ActionMemory::write_entry(std::uint32_t slot, std::span<const double> key,
                               double q, double surprise, std::uint64_t now) {
  std::copy(key.begin(), key.end(), mutable_key(slot));
  q_[slot] = q;
  surprise_[slot] = surprise;
  last_used_[slot] = now;
}

void ActionMemory::merge_into_nearest(std::span<const double> key,
                                      double return_value, std::uint64_t now,
                                      std::uint32_t* merged_slot) {
  const auto nearest = knn(key, 1);
  const std::uint32_t slot = nearest.front().index;
  const double n = count_[slot];
  double* centroid = mutable_key(slot);
  for (std::size_t d = 0; d < opts_.key_dim; ++d)
    centroid[d] = (n * centroid[d] + key[d]) / (n + 1.0);
  q_[slot] = (n * q_[slot] + return_value) / (n + 1.0);
  count_[slot] = n + 1.0;
  last_used_[slot] = now;
  mark_dirty(slot);
  *merged_slot = slot;
}

std::uint32_t ActionMemory::select_victim() const {
  if (!is_ranking(opts_.strategy))
    throw std::logic_error("select_victim: requires lru/rew/sur strategy");
  if (!full())
    throw std::logic_error("select_victim: memory is not full");

  std::uint32_t victim = 0;
  if (opts_.strategy == Strategy::Lru) {
    for (std::uint32_t i = 1; i < size_; ++i)
      if (last_used_[i] < last_used_[victim]) victim = i;
  } else {
    const std::vector<double>& metric =
        opts_.strategy == Strategy::Rew ? q_ : surprise_;
    for (std::uint32_t i = 1; i < size_; ++i)
      if (metric[i] < metric[victim]) victim = i;
  }
  return victim;
}

InsertEffect ActionMemory::insert(std::span<const double> key,
                                  double return_value, std::uint64_t now) {
  check_key(key);
  if (!std::isfinite(return_value))
    throw std::invalid_argument("ActionMemory: non-finite return");

  // Tabular path: revisited states keep the highest return ever obtained.
  // Clustering strategies only behave tabularly until the memory fills.
  if (is_ranking(opts_.strategy) || size_ < opts_.capacity) {
    if (const auto slot = find_exact(key)) {
      const double old_q = q_[*slot];
      surprise_[*slot] = std::abs(return_value - old_q);
      if (return_value > old_q) q_[*slot] = return_value;
      last_used_[*slot] = now;
      return {InsertKind::UpdatedExactMatch, *slot};
    }
  }

  if (size_ < opts_.capacity) {
    const double surprise = new_entry_surprise(key, return_value);
    const std::uint32_t slot = static_cast<std::uint32_t>(size_++);
    write_entry(slot, key, return_value, surprise, now);
    count_[slot] = 1.0;
    mark_dirty(slot);
    return {InsertKind::Appended, slot};
  }

  switch (opts_.strategy) {
    case Strategy::Lru:
    case Strategy::Rew:
    case Strategy::Sur: {
      const double surprise = new_entry_surprise(key, return_value);
      const std::uint32_t victim = select_victim();
      write_entry(victim, key, return_value, surprise, now);
      count_[victim] = 1.0;
      mark_dirty(victim);
      return {InsertKind::Replaced, victim};
    }
    case Strategy::Km: {
      std::uint32_t slot = 0;
      merge_into_nearest(key, return_value, now, &slot);
      return {InsertKind::Merged, slot};
    }
    case Strategy::Dkm: {
      // A cluster whose count has decayed to zero anywhere in the memory is
      // recycled wholesale; the decay itself only runs on merge inserts.
      std::uint32_t dead = 0;
      for (std::uint32_t i = 1; i < size_; ++i)
        if (count_[i] < count_[dead]) dead = i;
      if (count_[dead] <= 0.0) {
        const double surprise = new_entry_surprise(key, return_value);
        write_entry(dead, key, return_value, surprise, now);
        count_[dead] = 1.0;
        mark_dirty(dead);
        return {InsertKind::ReplacedDeadCluster, dead};
      }
      std::uint32_t slot = 0;
      merge_into_nearest(key, return_value, now, &slot);
      for (std::size_t i = 0; i < size_; ++i) count_[i] -= dkm_decrement_;
      return {InsertKind::Merged, slot};
    }
  }
  throw std::logic_error("ActionMemory: unreachable strategy");
}

double ActionMemory::total_count() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size_; ++i) total += count_[i];
  return total;
}

std::optional<ActionValue> lookup_best_action(std::span<ActionMemory> memories,
                                              std::span<const double> key,
                                              std::uint64_t now, bool touch) {
  if (memories.empty())
    throw std::invalid_argument("lookup_best_action: no action memories");

  std::optional<ActionValue> best;
  bool any_nonempty = false;
  for (int a = 0; a < static_cast<int>(memories.size()); ++a) {
    double value;
    if (memories[a].empty()) {
      value = std::numeric_limits<double>::infinity();  // unseen: try it
    } else {
      any_nonempty = true;
      value = touch ? memories[a].estimate(key, now)
                    : std::as_const(memories[a]).estimate(key);
    }
    if (!best || value > best->value) best = ActionValue{a, value};
  }
  if (!any_nonempty) return std::nullopt;
  return best;
}

}  // namespace ecmem
