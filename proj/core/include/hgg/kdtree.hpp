#pragma once

#include "hgg/types.hpp"

#include <vector>

namespace hgg {

/// Axis-aligned splitting tree over 3D points for exact nearest-neighbor
/// queries. Contract: identical results to an exhaustive scan, including the
/// lowest-index rule on exact distance ties.
class KdTree3 {
public:
    explicit KdTree3(const std::vector<Vec3>& points);

    /// Index of the nearest point (lowest index on ties). Points must be
    /// non-empty; throws EmptyVertexSet otherwise.
    int nearest(const Vec3& query) const;

    int size() const { return static_cast<int>(points_.size()); }

private:
    struct Node {
        int axis = -1;        // -1 marks a leaf
        double split = 0.0;
        int left = -1, right = -1;
        int begin = 0, end = 0;  // leaf range into order_
    };

    int build(int begin, int end);
    void search(int node, const Vec3& q, double& best_d2, int& best_idx) const;

    std::vector<Vec3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Squared distance written out so the tree and any reference scan agree
/// bit-for-bit on tie comparisons.
inline double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x() - b.x();
    const double dy = a.y() - b.y();
    const double dz = a.z() - b.z();
    return dx * dx + dy * dy + dz * dz;
}

}  // namespace hgg
