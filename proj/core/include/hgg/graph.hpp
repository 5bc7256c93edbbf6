#pragma once

#include "hgg/types.hpp"

#include <vector>

namespace hgg {

/// Identifies one first-layer node: Gaussian m of frame t (both 0-based).
struct GaussianId {
    int frame = 0;
    int index = 0;

    friend bool operator==(const GaussianId&, const GaussianId&) = default;
};

/// Dual-layer graph: per-frame Gaussians (first layer) assigned to template
/// vertices (second layer) by nearest neighbor, plus face-hop vertex
/// neighborhoods. Immutable once built.
struct HumanGaussianGraph {
    std::vector<GaussianFrame> frames;            // first-layer nodes
    BodyTemplate tmpl;                            // second-layer nodes
    std::vector<Pose> poses;                      // pose per frame
    std::vector<std::vector<int>> evg;            // per frame: vertex index per Gaussian
    std::vector<std::vector<int>> evv;            // per vertex: sorted neighbors, self included
    int d0 = 0;
    std::vector<std::vector<GaussianId>> groups;  // per vertex: attached Gaussians, (t, m) order

    int n_frames() const { return static_cast<int>(frames.size()); }
    int n_vertices() const { return tmpl.n_vertices(); }
    int gaussians_per_frame() const { return frames.empty() ? 0 : frames.front().size(); }
    int total_gaussians() const {
        int total = 0;
        for (const auto& f : frames) total += f.size();
        return total;
    }
};

/// Assign each center to its Euclidean-nearest vertex (lowest index on ties).
/// Runs on a spatial tree but is contractually identical to an exhaustive
/// scan. Throws EmptyVertexSet when there are no vertices.
std::vector<int> nearest_vertex_assign(const std::vector<Vec3>& centers,
                                       const std::vector<Vec3>& posed_vertices);

/// Vertices within d0 face hops of each vertex, where sharing a face means
/// distance 1. Lists are ascending and always include the vertex itself.
std::vector<std::vector<int>> face_hop_neighbors(const std::vector<std::array<int, 3>>& faces,
                                                 int n_vertices, int d0);

/// Build the full graph: per-frame LBS posing + nearest-vertex edges, plus
/// the mesh-level neighborhoods and the inverse vertex-to-Gaussian index.
HumanGaussianGraph build_graph(std::vector<GaussianFrame> frames, std::vector<Pose> poses,
                               BodyTemplate tmpl, int d0);

}  // namespace hgg
