#include "hgg/graph.hpp"

#include "hgg/kdtree.hpp"
#include "hgg/skinning.hpp"

#include <algorithm>
#include <queue>

namespace hgg {

std::vector<int> nearest_vertex_assign(const std::vector<Vec3>& centers,
                                       const std::vector<Vec3>& posed_vertices) {
    if (posed_vertices.empty()) {
        throw EmptyVertexSet("nearest_vertex_assign: no vertices");
    }
    KdTree3 tree(posed_vertices);
    std::vector<int> assignment(centers.size());
    for (size_t m = 0; m < centers.size(); ++m) {
        assignment[m] = tree.nearest(centers[m]);
    }
    return assignment;
}

std::vector<std::vector<int>> face_hop_neighbors(const std::vector<std::array<int, 3>>& faces,
                                                 int n_vertices, int d0) {
    // Share-a-face adjacency, deduplicated.
    std::vector<std::vector<int>> adjacency(n_vertices);
    for (const auto& f : faces) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (a != b) adjacency[f[a]].push_back(f[b]);
            }
        }
    }
    for (auto& list : adjacency) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    // Bounded BFS from every vertex.
    std::vector<std::vector<int>> neighbors(n_vertices);
    std::vector<int> depth(n_vertices, -1);
    std::vector<int> touched;
    std::queue<int> frontier;
    for (int v = 0; v < n_vertices; ++v) {
        depth[v] = 0;
        touched.push_back(v);
        frontier.push(v);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            if (depth[u] == d0) continue;
            for (int w : adjacency[u]) {
                if (depth[w] < 0) {
                    depth[w] = depth[u] + 1;
                    touched.push_back(w);
                    frontier.push(w);
                }
            }
        }
        neighbors[v] = touched;
        std::sort(neighbors[v].begin(), neighbors[v].end());
        for (int w : touched) depth[w] = -1;
        touched.clear();
    }
    return neighbors;
}

HumanGaussianGraph build_graph(std::vector<GaussianFrame> frames, std::vector<Pose> poses,
                               BodyTemplate tmpl, int d0) {
    if (frames.size() != poses.size()) {
        throw DimensionMismatch("build_graph: " + std::to_string(frames.size()) +
                                " frames vs " + std::to_string(poses.size()) + " poses");
    }
    if (frames.empty()) throw DimensionMismatch("build_graph: no frames");

    HumanGaussianGraph g;
    g.d0 = d0;
    g.evv = face_hop_neighbors(tmpl.faces, tmpl.n_vertices(), d0);
    g.groups.resize(tmpl.n_vertices());
    g.evg.resize(frames.size());
    for (size_t t = 0; t < frames.size(); ++t) {
        const std::vector<Vec3> posed = lbs_pose_vertices(tmpl, poses[t]);
        std::vector<Vec3> centers(frames[t].gaussians.size());
        for (size_t m = 0; m < centers.size(); ++m) centers[m] = frames[t].gaussians[m].center;
        g.evg[t] = nearest_vertex_assign(centers, posed);
        for (size_t m = 0; m < g.evg[t].size(); ++m) {
            g.groups[g.evg[t][m]].push_back({static_cast<int>(t), static_cast<int>(m)});
        }
    }
    g.frames = std::move(frames);
    g.poses = std::move(poses);
    g.tmpl = std::move(tmpl);
    return g;
}

}  // namespace hgg
