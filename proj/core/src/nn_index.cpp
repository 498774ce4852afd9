#include "insight/nn_index.hpp"

#include <algorithm>
#include <numeric>

#include "insight/errors.hpp"

namespace insight {

namespace {
constexpr std::size_t kLeafSize = 16;
}

NnIndex::NnIndex(const std::vector<Vec3>& points) : points_(points) {
  for (const Vec3& p : points_) {
    if (!p.allFinite()) throw ValidationError("nn index requires finite coordinates");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, points_.size());
  }
}

int32_t NnIndex::build(std::size_t begin, std::size_t end) {
  Node node;
  node.begin = static_cast<uint32_t>(begin);
  node.end = static_cast<uint32_t>(end);

  if (end - begin <= kLeafSize) {
    // Leaf payload sorts by index so in-leaf ties resolve low-index first.
    std::sort(order_.begin() + begin, order_.begin() + end);
    nodes_.push_back(node);
    return static_cast<int32_t>(nodes_.size() - 1);
  }

  // Split on the widest dimension at the median.
  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::size_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  const Vec3 extent = hi - lo;
  uint8_t axis = 0;
  if (extent.y() > extent.x()) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](uint32_t a, uint32_t b) {
                     const double va = points_[a][axis];
                     const double vb = points_[b][axis];
                     if (va != vb) return va < vb;
                     return a < b;
                   });
  node.axis = axis;
  node.split = points_[order_[mid]][axis];

  const int32_t self = static_cast<int32_t>(nodes_.size());
  nodes_.push_back(node);
  const int32_t left = build(begin, mid);
  const int32_t right = build(mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

NnIndex::Result NnIndex::nearest(const Vec3& query) const {
  if (points_.empty()) throw ValidationError("nearest query on empty index");
  Result best;
  best.index = points_.size();  // sentinel: any real point beats it
  best.distance2 = std::numeric_limits<double>::infinity();
  search(root_, query, best);
  return best;
}

void NnIndex::search(int32_t node_id, const Vec3& query, Result& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (uint32_t i = node.begin; i < node.end; ++i) {
      const uint32_t idx = order_[i];
      const double d2 = (points_[idx] - query).squaredNorm();
      if (d2 < best.distance2 || (d2 == best.distance2 && idx < best.index)) {
        best.distance2 = d2;
        best.index = idx;
      }
    }
    return;
  }

  const double delta = query[node.axis] - node.split;
  const int32_t near = delta < 0.0 ? node.left : node.right;
  const int32_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, best);
  // Visit the far side on exact ties too: it may hold an equally distant
  // point with a lower index.
  if (delta * delta <= best.distance2) search(far, query, best);
}

}  // namespace insight
