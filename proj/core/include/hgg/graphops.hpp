#pragma once

#include "hgg/graph.hpp"
#include "hgg/activation.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hgg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct GraphOpsConfig {
    int n_layers = 6;
    int token_dim = 64;
    int n_heads = 1;
    // Paper-literal variant where the value projection reuses h_K.
    bool share_key_value = false;
};

inline constexpr double kLayerNormEps = 1e-5;

double gelu(double x);
double gelu_derivative(double x);

struct AttentionProjections {
    MatrixXd wq, wk, wv;  // D x D
    MatrixXd wo;          // D x D for block sub-ops; empty for the refine head
};

struct LayerNormParams {
    VectorXd gamma, beta;
};

struct FeedForwardParams {
    MatrixXd w1;  // 4D x D
    VectorXd b1;
    MatrixXd w2;  // D x 4D
    VectorXd b2;
};

/// One pre-norm residual sub-block: x + Wo*Attn(norm1(x), ...) followed by
/// x + FFN(norm2(x)).
struct SubBlockParams {
    AttentionProjections attn;
    LayerNormParams norm1, norm2;
    FeedForwardParams ffn;
};

struct BlockParams {
    SubBlockParams intra, inter;
};

/// All learnable state: per-vertex queries, L stacked intra/inter blocks,
/// the feature embedder/decoder and the refinement attention head.
struct GraphBlockParams {
    GraphOpsConfig config;
    MatrixXd queries;              // N x D
    std::vector<BlockParams> layers;
    MatrixXd embed_w;              // D x 11
    VectorXd embed_b;              // D
    MatrixXd decode_w;             // 14 x D (center delta + feature deltas)
    VectorXd decode_b;             // 14
    AttentionProjections refine;   // wq/wk/wv only

    int n_vertices() const { return static_cast<int>(queries.rows()); }

    /// Xavier-uniform weights, zero biases, unit norms; queries are
    /// zero-mean Gaussian noise with scale 0.02. Each tensor draws from its
    /// own name-derived stream, so values do not depend on L.
    static GraphBlockParams init(const GraphOpsConfig& config, int n_vertices, uint64_t seed);

    /// Same shapes, all tensors zero. Used for gradient accumulators.
    GraphBlockParams zeros_like() const;

    /// Visit every tensor as (name, contiguous column-major data, rows, cols).
    void for_each_tensor(const std::function<void(const std::string&, double*, int, int)>& fn);
    void for_each_tensor(
        const std::function<void(const std::string&, const double*, int, int)>& fn) const;
};

struct QueryState {
    MatrixXd q;     // N x D
    int layer = 0;  // last block applied (1-based; 0 = initial queries)
};

// ---------------------------------------------------------------------------
// Forward passes

/// Single-query attention core (no output projection):
/// softmax((Wq q)(Wk keys)^T / sqrt(Dh)) (Wv values), per head.
/// Throws EmptySet when keys are empty.
VectorXd attention(const VectorXd& query, const MatrixXd& keys, const MatrixXd& values,
                   const AttentionProjections& proj, const GraphOpsConfig& config);

/// Unconstrained 11-channel feature rows for every Gaussian of every frame,
/// frame-major ((t, m) -> row frame_offset[t] + m).
MatrixXd gaussian_feature_matrix(const std::vector<GaussianFrame>& frames);

/// Affine width adapter onto token space: rows of features * embed_w^T + b.
MatrixXd embed_gaussian_tokens(const MatrixXd& features, const GraphBlockParams& params);

/// Token-row lookup for graph groups.
struct TokenIndex {
    std::vector<int> frame_offset;             // T+1 prefix sums
    std::vector<std::vector<int>> group_rows;  // per vertex, ascending (t, m)

    static TokenIndex from_graph(const HumanGaussianGraph& graph);
    int total_tokens() const { return frame_offset.back(); }
};

/// Cached intermediates of one sub-block forward, enough to run its backward.
struct SubBlockCache {
    MatrixXd input;                     // state at entry
    MatrixXd normed1;                   // ln1 rows (updated vertices only)
    std::vector<VectorXd> softmax;      // per vertex, per-head weights concatenated
    MatrixXd core;                      // attention core outputs
    MatrixXd after_attn;                // u = input + Wo core
    MatrixXd ffn_pre;                   // N x 4D pre-activation
    std::vector<char> updated;          // skip rule bookkeeping
};

struct ForwardCache {
    MatrixXd features;  // MT x 11
    MatrixXd tokens;    // MT x D
    std::vector<SubBlockCache> intra, inter;  // one per layer
    QueryState state;
};

/// Intra-node operation: every vertex with a non-empty Gaussian group runs a
/// pre-norm residual cross-attention over the group's tokens, then a residual
/// FFN. Vertices with empty groups keep their query (skip rule).
QueryState intra_node_update(const QueryState& state, const TokenIndex& index,
                             const MatrixXd& tokens, const GraphBlockParams& params, int layer,
                             SubBlockCache* cache = nullptr);

/// Inter-node operation: every vertex attends over the snapshot queries of
/// its mesh neighborhood (synchronous update), then a residual FFN.
QueryState inter_node_update(const QueryState& state, const std::vector<std::vector<int>>& evv,
                             const GraphBlockParams& params, int layer,
                             SubBlockCache* cache = nullptr);

/// L stacked (intra, inter) blocks from the initial learnable queries.
QueryState run_blocks(const HumanGaussianGraph& graph, const GraphBlockParams& params);

/// Same, retaining every intermediate for the training backward pass.
QueryState run_blocks_cached(const HumanGaussianGraph& graph, const GraphBlockParams& params,
                             ForwardCache& cache);

// ---------------------------------------------------------------------------
// Refinement

struct RefineCache {
    MatrixXd source_params;  // M x 14 unconstrained inputs
    MatrixXd core;           // M x D value reads
    MatrixXd refined_params;
};

struct RefineResult {
    std::vector<GaussianPrimitive> gaussians;  // template-aligned output
    MatrixXd refined_params;                   // M x 14 unconstrained
};

/// Residual refinement of the chosen frame against the aggregated vertex
/// queries: delta = decode(attention(embed(f), q_n, q_n)) added in
/// unconstrained space, then re-activated. Throws DimensionMismatch when the
/// assignment disagrees with the query count.
RefineResult refine_gaussians(const GaussianFrame& frame_t0, const std::vector<int>& evg_t0,
                              const QueryState& queries, const GraphBlockParams& params,
                              RefineCache* cache = nullptr);

// ---------------------------------------------------------------------------
// Naive reference

/// Full self-attention over all token rows (every Gaussian attends to every
/// Gaussian). Quadratic-cost baseline for the complexity benchmark; streams
/// row chunks so memory stays O(MT * D).
MatrixXd naive_all_pairs_attention(const MatrixXd& tokens, const AttentionProjections& proj,
                                   const GraphOpsConfig& config);

}  // namespace hgg
