#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ecmem {

struct Neighbor {
  std::uint32_t index;  // slot in the owning memory
  double d2;            // squared Euclidean distance
};

// Gathers the k nearest candidates ordered by (d2, index); the index
// tie-break makes results deterministic and backend-independent.
class KnnCollector {
 public:
  explicit KnnCollector(std::size_t k) : k_(k) { heap_.reserve(k); }

  void offer(std::uint32_t index, double d2);
  bool full() const { return heap_.size() == k_; }
  // Pruning bound: only candidates strictly worse than this are skippable.
  double worst_d2() const;
  // Ascending (d2, index). Leaves the collector empty.
  std::vector<Neighbor> take_sorted();

 private:
  static bool better(const Neighbor& a, const Neighbor& b) {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
  }

  std::size_t k_;
  std::vector<Neighbor> heap_;  // max-heap under `better`
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Static k-d tree over a snapshot of points. The owner handles points that
// move or appear after build() by masking them out of the tree (`skip`) and
// scanning them linearly instead.
class KdTree {
 public:
  void clear();
  void build(const double* points, std::size_t count, std::size_t dim);
  bool built() const { return !nodes_.empty(); }
  std::size_t size() const { return count_; }

  // skip[i] != 0 excludes snapshot point i. Pass an empty span to skip none.
  void knn(std::span<const double> query, KnnCollector& out,
           std::span<const char> skip) const;
  // Indices of snapshot points at exactly zero squared distance from query.
  void collect_equal(std::span<const double> query,
                     std::vector<std::uint32_t>& out,
                     std::span<const char> skip) const;

 private:
  struct Node {
    double split;          // splitting coordinate value
    std::int32_t dim;      // -1 for leaves
    std::uint32_t left;    // child node ids (internal)
    std::uint32_t right;
    std::uint32_t begin;   // order_ range (leaf)
    std::uint32_t end;
  };

  static constexpr std::size_t kLeafSize = 16;

  std::uint32_t build_node(std::uint32_t begin, std::uint32_t end);
  void knn_visit(std::uint32_t node, std::span<const double> query,
                 KnnCollector& out, std::span<const char> skip) const;
  void equal_visit(std::uint32_t node, std::span<const double> query,
                   std::vector<std::uint32_t>& out,
                   std::span<const char> skip) const;

  const double* point(std::uint32_t i) const { return pts_.data() + i * dim_; }

  std::vector<double> pts_;           // snapshot copy, original slot order
  std::vector<std::uint32_t> order_;  // slot ids grouped into leaf ranges
  std::vector<Node> nodes_;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
};

}  // namespace ecmem
