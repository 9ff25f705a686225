#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecmem/kdtree.hpp"

namespace ecmem {

// What happens to a full memory when a new state arrives: replace a ranked
// victim (Lru/Rew/Sur) or merge into a cluster (Km/Dkm).
enum class Strategy { Lru, Rew, Sur, Km, Dkm };

enum class Backend { NaiveScan, SpatialTree };

std::string_view to_string(Strategy s);
std::string_view to_string(Backend b);
std::optional<Strategy> strategy_from_string(std::string_view name);
std::optional<Backend> backend_from_string(std::string_view name);

struct KernelParams {
  double delta = 1e-3;  // regularizer added to squared distances
  int k = 11;           // neighbours averaged per estimate
};

// Inverse-distance weight 1/(||a-b||^2 + delta). Maximal (1/delta) iff the
// keys coincide, strictly decreasing in distance.
double kernel_weight(std::span<const double> a, std::span<const double> b,
                     double delta);

enum class InsertKind {
  Appended,
  UpdatedExactMatch,
  Replaced,
  Merged,
  ReplacedDeadCluster,
};

struct InsertEffect {
  InsertKind kind;
  std::uint32_t index;  // slot written or merged into
};

// Bounded per-action Q-memory: stores (key, return) pairs, answers
// kernel-weighted k-NN value estimates, and applies one of five
// insertion/replacement strategies once full.
//
// Slots are stable: entries are only appended or overwritten in place, never
// compacted, so a slot index identifies an entry for its whole lifetime. All
// tie-breaks (nearest neighbours, victims) go to the lowest slot index.
class ActionMemory {
 public:
  struct Options {
    std::size_t capacity = 0;
    std::size_t key_dim = 0;
    Strategy strategy = Strategy::Lru;
    Backend backend = Backend::SpatialTree;
    KernelParams kernel{};
    // Per-insert cluster-count decay for Dkm; defaults to 1/capacity.
    // Setting 0 reduces Dkm to Km exactly.
    std::optional<double> dkm_decrement{};
  };

  explicit ActionMemory(Options opts);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == opts_.capacity; }
  std::size_t capacity() const { return opts_.capacity; }
  std::size_t key_dim() const { return opts_.key_dim; }
  Strategy strategy() const { return opts_.strategy; }
  Backend backend() const { return opts_.backend; }
  const KernelParams& kernel() const { return opts_.kernel; }

  // Entry accessors (slot must be < size()).
  std::span<const double> key(std::size_t slot) const;
  double q(std::size_t slot) const { return q_[slot]; }
  double surprise(std::size_t slot) const { return surprise_[slot]; }
  double count(std::size_t slot) const { return count_[slot]; }
  std::uint64_t last_used(std::size_t slot) const { return last_used_[slot]; }

  // min(k, size) nearest entries by squared Euclidean distance, ascending
  // (d2, slot). Throws std::logic_error on an empty memory.
  std::vector<Neighbor> knn(std::span<const double> query, int k) const;

  // Kernel-weighted average of the k nearest stored returns. The mutable
  // overload stamps each neighbour's last_used with `now` (retrieval counts
  // as use for Lru); the const overload is for evaluation probes and leaves
  // the memory bit-identical.
  double estimate(std::span<const double> query, std::uint64_t now);
  double estimate(std::span<const double> query) const;

  InsertEffect insert(std::span<const double> key, double return_value,
                      std::uint64_t now);

  // Replacement victim under Lru/Rew/Sur (argmin recency/return/surprise,
  // ties to the lowest slot). Throws std::logic_error for Km/Dkm or a
  // non-full memory.
  std::uint32_t select_victim() const;

  // Lowest slot whose key is bitwise-equal to `key`, if any.
  std::optional<std::uint32_t> find_exact(std::span<const double> key) const;

  double total_count() const;  // sum of cluster counts (Km/Dkm diagnostics)

 private:
  double* mutable_key(std::size_t slot) { return keys_.data() + slot * opts_.key_dim; }
  void check_key(std::span<const double> key) const;
  double new_entry_surprise(std::span<const double> key,
                            double return_value) const;
  void write_entry(std::uint32_t slot, std::span<const double> key, double q,
                   double surprise, std::uint64_t now);
  void merge_into_nearest(std::span<const double> key, double return_value,
                          std::uint64_t now, std::uint32_t* merged_slot);
  void mark_dirty(std::uint32_t slot);
  void refresh_index() const;
  void collect_all(std::span<const double> query, KnnCollector& out) const;

  Options opts_;
  double dkm_decrement_;
  std::size_t size_ = 0;
  std::vector<double> keys_;  // slot-major, key_dim doubles per slot
  std::vector<double> q_;
  std::vector<double> surprise_;
  std::vector<double> count_;
  std::vector<std::uint64_t> last_used_;

  // SpatialTree state: the tree holds a snapshot; slots that moved or were
  // added since the last build are masked out and scanned linearly until the
  // dirty set grows past the rebuild threshold.
  mutable KdTree tree_;
  mutable std::vector<char> dirty_;            // per-slot: not valid in tree
  mutable std::vector<std::uint32_t> extras_;  // dirty slots, scan linearly
};

struct ActionValue {
  int action;
  double value;
};

// Argmax of per-action estimates. Actions with empty memories are treated
// optimistically (preferred over any finite estimate) so each gets tried;
// ties break to the lowest action index. Returns nullopt when every memory
// is empty (caller falls back to a uniform-random action).
std::optional<ActionValue> lookup_best_action(std::span<ActionMemory> memories,
                                              std::span<const double> key,
                                              std::uint64_t now, bool touch);

}  // namespace ecmem
