#include "ecmem/kdtree.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace ecmem {

void KnnCollector::offer(std::uint32_t index, double d2) {
  const Neighbor candidate{index, d2};
  if (heap_.size() < k_) {
    heap_.push_back(candidate);
    std::push_heap(heap_.begin(), heap_.end(), better);
    return;
  }
  if (better(candidate, heap_.front())) {
    std::pop_heap(heap_.begin(), heap_.end(), better);
    heap_.back() = candidate;
    std::push_heap(heap_.begin(), heap_.end(), better);
  }
}

double KnnCollector::worst_d2() const {
  if (heap_.size() < k_) return std::numeric_limits<double>::infinity();
  return heap_.front().d2;
}

std::vector<Neighbor> KnnCollector::take_sorted() {
  std::vector<Neighbor> out = std::move(heap_);
  heap_.clear();
  std::sort(out.begin(), out.end(), better);
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

void KdTree::clear() {
  pts_.clear();
  order_.clear();
  nodes_.clear();
  count_ = 0;
  dim_ = 0;
}

void KdTree::build(const double* points, std::size_t count, std::size_t dim) {
  clear();
  if (count == 0) return;
  count_ = count;
  dim_ = dim;
  pts_.assign(points, points + count * dim);
  order_.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) order_[i] = i;
  nodes_.reserve(2 * count / kLeafSize + 2);
  build_node(0, static_cast<std::uint32_t>(count));
}

std::uint32_t KdTree::build_node(std::uint32_t begin, std::uint32_t end) {
  const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({0.0, -1, 0, 0, begin, end});
  if (end - begin <= kLeafSize) return id;

  // Split along the widest extent of the subset's bounding box.
  std::size_t split_dim = 0;
  double widest = -1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    double lo = point(order_[begin])[d];
    double hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      const double v = point(order_[i])[d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      split_dim = d;
    }
  }
  if (widest <= 0.0) return id;  // all points coincide: keep as leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return point(a)[split_dim] < point(b)[split_dim];
                   });
  const double split_val = point(order_[mid])[split_dim];

  const std::uint32_t left = build_node(begin, mid);
  const std::uint32_t right = build_node(mid, end);
  nodes_[id].split = split_val;
  nodes_[id].dim = static_cast<std::int32_t>(split_dim);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::knn(std::span<const double> query, KnnCollector& out,
                 std::span<const char> skip) const {
  if (!built()) return;
  knn_visit(0, query, out, skip);
}

void KdTree::knn_visit(std::uint32_t node, std::span<const double> query,
                       KnnCollector& out, std::span<const char> skip) const {
  const Node& n = nodes_[node];
  if (n.dim < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      const std::uint32_t slot = order_[i];
      if (!skip.empty() && skip[slot]) continue;
      out.offer(slot, squared_distance(query, {point(slot), dim_}));
    }
    return;
  }
  const double diff = query[static_cast<std::size_t>(n.dim)] - n.split;
  const std::uint32_t near = diff < 0.0 ? n.left : n.right;
  const std::uint32_t far = diff < 0.0 ? n.right : n.left;
  knn_visit(near, query, out, skip);
  // At equal distance a lower slot index can still displace the current
  // worst, so the far side is pruned only on a strict bound violation.
  if (diff * diff <= out.worst_d2()) knn_visit(far, query, out, skip);
}

void KdTree::collect_equal(std::span<const double> query,
                           std::vector<std::uint32_t>& out,
                           std::span<const char> skip) const {
  if (!built()) return;
  equal_visit(0, query, out, skip);
}

void KdTree::equal_visit(std::uint32_t node, std::span<const double> query,
                         std::vector<std::uint32_t>& out,
                         std::span<const char> skip) const {
  const Node& n = nodes_[node];
  if (n.dim < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      const std::uint32_t slot = order_[i];
      if (!skip.empty() && skip[slot]) continue;
      if (squared_distance(query, {point(slot), dim_}) == 0.0)
        out.push_back(slot);
    }
    return;
  }
  const double diff = query[static_cast<std::size_t>(n.dim)] - n.split;
  if (diff <= 0.0) equal_visit(n.left, query, out, skip);
  if (diff >= 0.0) equal_visit(n.right, query, out, skip);
}

}  // namespace ecmem
