#pragma once

#include <cstdint>
#include <vector>

#include "insight/geometry.hpp"

namespace insight {

/// Exact nearest-neighbor index over 3D points (kd-tree). Queries return
/// the true nearest point; equal distances resolve to the lowest point
/// index, so results are independent of build or traversal order.
/// Immutable after construction and safe to share across threads.
class NnIndex {
 public:
  struct Result {
    std::size_t index = 0;
    double distance2 = 0.0;
  };

  NnIndex() = default;
  explicit NnIndex(const std::vector<Vec3>& points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }

  /// Throws ValidationError when the index is empty.
  Result nearest(const Vec3& query) const;

 private:
  struct Node {
    int32_t left = -1;
    int32_t right = -1;
    uint32_t begin = 0;  // leaf payload range in order_
    uint32_t end = 0;
    uint8_t axis = 0;
    double split = 0.0;
  };

  int32_t build(std::size_t begin, std::size_t end);
  void search(int32_t node, const Vec3& query, Result& best) const;

  std::vector<Vec3> points_;
  std::vector<uint32_t> order_;
  std::vector<Node> nodes_;
  int32_t root_ = -1;
};

}  // namespace insight
