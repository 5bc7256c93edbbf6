#include "hgg/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace hgg {

namespace {
constexpr int kLeafSize = 8;
}

KdTree3::KdTree3(const std::vector<Vec3>& points) : points_(points) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!points_.empty()) {
        nodes_.reserve(2 * points_.size() / kLeafSize + 4);
        root_ = build(0, static_cast<int>(points_.size()));
    }
}

int KdTree3::build(int begin, int end) {
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
        nodes_[node_index].begin = begin;
        nodes_[node_index].end = end;
        return node_index;
    }

    // Split the widest axis at the median point.
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (int i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         const double pa = points_[a][axis], pb = points_[b][axis];
                         if (pa != pb) return pa < pb;
                         return a < b;  // stable under duplicates
                     });

    Node node;
    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    node.left = left;
    node.right = right;
    nodes_[node_index] = node;
    return node_index;
}

int KdTree3::nearest(const Vec3& query) const {
    if (points_.empty()) throw EmptyVertexSet("KdTree3::nearest on empty point set");
    double best_d2 = std::numeric_limits<double>::infinity();
    int best_idx = -1;
    search(root_, query, best_d2, best_idx);
    return best_idx;
}

void KdTree3::search(int ni, const Vec3& q, double& best_d2, int& best_idx) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            const double d2 = squared_distance(q, points_[idx]);
            if (d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
                best_d2 = d2;
                best_idx = idx;
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near_child = delta < 0.0 ? node.left : node.right;
    const int far_child = delta < 0.0 ? node.right : node.left;
    search(near_child, q, best_d2, best_idx);
    // <= so equal-distance candidates across the plane can still win a tie.
    if (delta * delta <= best_d2) {
        search(far_child, q, best_d2, best_idx);
    }
}

}  // namespace hgg
