#include "hgg/graphops.hpp"

#include "hgg/rng.hpp"

#include <cmath>

namespace hgg {

double gelu(double x) {
    return 0.5 * x * (1.0 + std::erf(x * 0.7071067811865475244));
}

double gelu_derivative(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x * 0.7071067811865475244));
    const double pdf = std::exp(-0.5 * x * x) * 0.3989422804014326779;
    return cdf + x * pdf;
}

VectorXd layer_norm(const VectorXd& x, const LayerNormParams& p) {
    const double mu = x.mean();
    const double var = (x.array() - mu).square().mean();
    const double rstd = 1.0 / std::sqrt(var + kLayerNormEps);
    return (p.gamma.array() * ((x.array() - mu) * rstd) + p.beta.array()).matrix();
}

// ---------------------------------------------------------------------------
// Parameter construction

namespace {

void fill_xavier(MatrixXd& m, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    double* p = m.data();
    for (Eigen::Index i = 0; i < m.size(); ++i) p[i] = rng.uniform(-a, a);
}

MatrixXd xavier(int rows, int cols, uint64_t seed, const char* name) {
    MatrixXd m(rows, cols);
    Rng rng(seed ^ hash_name(name));
    fill_xavier(m, rng);
    return m;
}

AttentionProjections make_projections(int dim, uint64_t seed, const std::string& base,
                                      bool with_output) {
    AttentionProjections p;
    p.wq = xavier(dim, dim, seed, (base + ".wq").c_str());
    p.wk = xavier(dim, dim, seed, (base + ".wk").c_str());
    p.wv = xavier(dim, dim, seed, (base + ".wv").c_str());
    if (with_output) p.wo = xavier(dim, dim, seed, (base + ".wo").c_str());
    return p;
}

SubBlockParams make_subblock(int dim, uint64_t seed, const std::string& base) {
    SubBlockParams s;
    s.attn = make_projections(dim, seed, base + ".attn", true);
    s.norm1.gamma = VectorXd::Ones(dim);
    s.norm1.beta = VectorXd::Zero(dim);
    s.norm2.gamma = VectorXd::Ones(dim);
    s.norm2.beta = VectorXd::Zero(dim);
    s.ffn.w1 = xavier(4 * dim, dim, seed, (base + ".ffn.w1").c_str());
    s.ffn.b1 = VectorXd::Zero(4 * dim);
    s.ffn.w2 = xavier(dim, 4 * dim, seed, (base + ".ffn.w2").c_str());
    s.ffn.b2 = VectorXd::Zero(dim);
    return s;
}

}  // namespace

GraphBlockParams GraphBlockParams::init(const GraphOpsConfig& config, int n_vertices,
                                        uint64_t seed) {
    if (config.token_dim < 1 || config.n_heads < 1 ||
        config.token_dim % config.n_heads != 0) {
        throw DimensionMismatch("GraphBlockParams: token_dim must be a multiple of n_heads");
    }
    if (config.n_layers < 0) throw DimensionMismatch("GraphBlockParams: n_layers < 0");

    GraphBlockParams p;
    p.config = config;
    const int d = config.token_dim;
    p.queries.resize(n_vertices, d);
    {
        Rng rng(seed ^ hash_name("queries"));
        double* data = p.queries.data();
        for (Eigen::Index i = 0; i < p.queries.size(); ++i) data[i] = rng.normal(0.0, 0.02);
    }
    for (int l = 0; l < config.n_layers; ++l) {
        const std::string base = "layer" + std::to_string(l);
        BlockParams block;
        block.intra = make_subblock(d, seed, base + ".intra");
        block.inter = make_subblock(d, seed, base + ".inter");
        p.layers.push_back(std::move(block));
    }
    p.embed_w = xavier(d, kFeatureDim, seed, "embed.w");
    p.embed_b = VectorXd::Zero(d);
    p.decode_w = xavier(kParamDim, d, seed, "decode.w");
    p.decode_b = VectorXd::Zero(kParamDim);
    p.refine = make_projections(d, seed, "refine", false);
    return p;
}

GraphBlockParams GraphBlockParams::zeros_like() const {
    GraphBlockParams z = *this;
    z.for_each_tensor([](const std::string&, double* data, int rows, int cols) {
        std::fill(data, data + static_cast<size_t>(rows) * cols, 0.0);
    });
    return z;
}

namespace {

template <typename Params, typename Fn>
void visit_tensors(Params& p, Fn&& fn) {
    auto mat = [&](const std::string& name, auto& m) {
        fn(name, m.data(), static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    };
    auto vec = [&](const std::string& name, auto& v) {
        fn(name, v.data(), static_cast<int>(v.size()), 1);
    };
    mat("queries", p.queries);
    for (size_t l = 0; l < p.layers.size(); ++l) {
        auto sub = [&](auto& s, const std::string& base) {
            mat(base + ".attn.wq", s.attn.wq);
            mat(base + ".attn.wk", s.attn.wk);
            mat(base + ".attn.wv", s.attn.wv);
            mat(base + ".attn.wo", s.attn.wo);
            vec(base + ".norm1.gamma", s.norm1.gamma);
            vec(base + ".norm1.beta", s.norm1.beta);
            mat(base + ".ffn.w1", s.ffn.w1);
            vec(base + ".ffn.b1", s.ffn.b1);
            mat(base + ".ffn.w2", s.ffn.w2);
            vec(base + ".ffn.b2", s.ffn.b2);
            vec(base + ".norm2.gamma", s.norm2.gamma);
            vec(base + ".norm2.beta", s.norm2.beta);
        };
        const std::string base = "layer" + std::to_string(l);
        sub(p.layers[l].intra, base + ".intra");
        sub(p.layers[l].inter, base + ".inter");
    }
    mat("embed.w", p.embed_w);
    vec("embed.b", p.embed_b);
    mat("decode.w", p.decode_w);
    vec("decode.b", p.decode_b);
    mat("refine.wq", p.refine.wq);
    mat("refine.wk", p.refine.wk);
    mat("refine.wv", p.refine.wv);
}

}  // namespace

void GraphBlockParams::for_each_tensor(
    const std::function<void(const std::string&, double*, int, int)>& fn) {
    visit_tensors(*this, fn);
}

void GraphBlockParams::for_each_tensor(
    const std::function<void(const std::string&, const double*, int, int)>& fn) const {
    visit_tensors(*this, fn);
}

// ---------------------------------------------------------------------------
// Attention core

namespace {

// Per-head softmax attention against precomputed projected rows.
// Writes the concatenated head weights into *weights_out when requested.
VectorXd attention_core(const VectorXd& projected_query, const MatrixXd& keys_projected,
                        const MatrixXd& values_projected, const std::vector<int>& rows,
                        int n_heads, VectorXd* weights_out) {
    const int d = static_cast<int>(projected_query.size());
    const int dh = d / n_heads;
    const int g = static_cast<int>(rows.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    VectorXd core = VectorXd::Zero(d);
    if (weights_out) weights_out->resize(static_cast<Eigen::Index>(g) * n_heads);
    VectorXd logits(g);
    for (int h = 0; h < n_heads; ++h) {
        const int off = h * dh;
        for (int i = 0; i < g; ++i) {
            logits[i] =
                scale * projected_query.segment(off, dh)
                            .dot(keys_projected.row(rows[i]).segment(off, dh));
        }
        const double peak = logits.maxCoeff();
        double denom = 0.0;
        for (int i = 0; i < g; ++i) {
            logits[i] = std::exp(logits[i] - peak);
            denom += logits[i];
        }
        for (int i = 0; i < g; ++i) {
            const double w = logits[i] / denom;
            core.segment(off, dh) += w * values_projected.row(rows[i]).segment(off, dh);
            if (weights_out) (*weights_out)[static_cast<Eigen::Index>(h) * g + i] = w;
        }
    }
    return core;
}

std::vector<int> iota_rows(int g) {
    std::vector<int> rows(g);
    for (int i = 0; i < g; ++i) rows[i] = i;
    return rows;
}

}  // namespace

VectorXd attention(const VectorXd& query, const MatrixXd& keys, const MatrixXd& values,
                   const AttentionProjections& proj, const GraphOpsConfig& config) {
    if (keys.rows() == 0) throw EmptySet("attention: empty key set");
    if (keys.rows() != values.rows()) {
        throw DimensionMismatch("attention: keys/values row mismatch");
    }
    const MatrixXd& value_proj = config.share_key_value ? proj.wk : proj.wv;
    const VectorXd qh = proj.wq * query;
    const MatrixXd kp = keys * proj.wk.transpose();
    const MatrixXd vp = values * value_proj.transpose();
    return attention_core(qh, kp, vp, iota_rows(static_cast<int>(keys.rows())),
                          config.n_heads, nullptr);
}

// ---------------------------------------------------------------------------
// Tokens

MatrixXd gaussian_feature_matrix(const std::vector<GaussianFrame>& frames) {
    int total = 0;
    for (const auto& f : frames) total += f.size();
    MatrixXd features(total, kFeatureDim);
    int row = 0;
    for (const auto& f : frames) {
        for (const auto& g : f.gaussians) {
            features.row(row++) = gaussian_features(g).transpose();
        }
    }
    return features;
}

MatrixXd embed_gaussian_tokens(const MatrixXd& features, const GraphBlockParams& params) {
    return (features * params.embed_w.transpose()).rowwise() + params.embed_b.transpose();
}

TokenIndex TokenIndex::from_graph(const HumanGaussianGraph& graph) {
    TokenIndex index;
    index.frame_offset.resize(graph.n_frames() + 1, 0);
    for (int t = 0; t < graph.n_frames(); ++t) {
        index.frame_offset[t + 1] = index.frame_offset[t] + graph.frames[t].size();
    }
    index.group_rows.resize(graph.n_vertices());
    for (int n = 0; n < graph.n_vertices(); ++n) {
        index.group_rows[n].reserve(graph.groups[n].size());
        for (const GaussianId& id : graph.groups[n]) {
            index.group_rows[n].push_back(index.frame_offset[id.frame] + id.index);
        }
    }
    return index;
}

// ---------------------------------------------------------------------------
// Sub-block forward

namespace {

// Shared pre-norm residual sub-block. Keys/values come from key_matrix rows
// selected per vertex; intra skips vertices with no keys, inter never does
// (every vertex neighbors itself).
QueryState subblock_forward(const QueryState& state,
                            const std::vector<std::vector<int>>& key_rows,
                            const MatrixXd& key_matrix, const SubBlockParams& p,
                            const GraphOpsConfig& config, int layer, bool skip_empty,
                            SubBlockCache* cache) {
    const int n = static_cast<int>(state.q.rows());
    const int d = config.token_dim;

    const MatrixXd& value_weights = config.share_key_value ? p.attn.wk : p.attn.wv;
    const MatrixXd keys_projected = key_matrix * p.attn.wk.transpose();
    const MatrixXd values_projected = key_matrix * value_weights.transpose();

    QueryState out;
    out.q = state.q;
    out.layer = layer + 1;

    if (cache) {
        cache->input = state.q;
        cache->normed1.setZero(n, d);
        cache->softmax.assign(n, VectorXd());
        cache->core.setZero(n, d);
        cache->after_attn.setZero(n, d);
        cache->ffn_pre.setZero(n, 4 * d);
        cache->updated.assign(n, 0);
    }

    for (int v = 0; v < n; ++v) {
        const std::vector<int>& rows = key_rows[v];
        if (rows.empty()) {
            if (skip_empty) continue;  // empty group keeps its query
            throw EmptySet("subblock_forward: vertex with empty neighborhood");
        }
        const VectorXd x = state.q.row(v).transpose();
        const VectorXd normed = layer_norm(x, p.norm1);
        const VectorXd qh = p.attn.wq * normed;
        VectorXd weights;
        const VectorXd core = attention_core(qh, keys_projected, values_projected, rows,
                                             config.n_heads, cache ? &weights : nullptr);
        const VectorXd after_attn = x + p.attn.wo * core;
        const VectorXd normed2 = layer_norm(after_attn, p.norm2);
        const VectorXd ffn_pre = p.ffn.w1 * normed2 + p.ffn.b1;
        VectorXd activated(ffn_pre.size());
        for (Eigen::Index i = 0; i < ffn_pre.size(); ++i) activated[i] = gelu(ffn_pre[i]);
        out.q.row(v) = (after_attn + p.ffn.w2 * activated + p.ffn.b2).transpose();

        if (cache) {
            cache->normed1.row(v) = normed.transpose();
            cache->softmax[v] = std::move(weights);
            cache->core.row(v) = core.transpose();
            cache->after_attn.row(v) = after_attn.transpose();
            cache->ffn_pre.row(v) = ffn_pre.transpose();
            cache->updated[v] = 1;
        }
    }
    return out;
}

}  // namespace

QueryState intra_node_update(const QueryState& state, const TokenIndex& index,
                             const MatrixXd& tokens, const GraphBlockParams& params, int layer,
                             SubBlockCache* cache) {
    return subblock_forward(state, index.group_rows, tokens, params.layers[layer].intra,
                            params.config, layer, /*skip_empty=*/true, cache);
}

QueryState inter_node_update(const QueryState& state, const std::vector<std::vector<int>>& evv,
                             const GraphBlockParams& params, int layer, SubBlockCache* cache) {
    return subblock_forward(state, evv, state.q, params.layers[layer].inter, params.config,
                            layer, /*skip_empty=*/false, cache);
}

QueryState run_blocks(const HumanGaussianGraph& graph, const GraphBlockParams& params) {
    const TokenIndex index = TokenIndex::from_graph(graph);
    const MatrixXd features = gaussian_feature_matrix(graph.frames);
    const MatrixXd tokens = embed_gaussian_tokens(features, params);
    QueryState state{params.queries, 0};
    for (int l = 0; l < params.config.n_layers; ++l) {
        state = intra_node_update(state, index, tokens, params, l);
        state = inter_node_update(state, graph.evv, params, l);
    }
    return state;
}

QueryState run_blocks_cached(const HumanGaussianGraph& graph, const GraphBlockParams& params,
                             ForwardCache& cache) {
    const TokenIndex index = TokenIndex::from_graph(graph);
    cache.features = gaussian_feature_matrix(graph.frames);
    cache.tokens = embed_gaussian_tokens(cache.features, params);
    cache.intra.resize(params.config.n_layers);
    cache.inter.resize(params.config.n_layers);
    QueryState state{params.queries, 0};
    for (int l = 0; l < params.config.n_layers; ++l) {
        state = intra_node_update(state, index, cache.tokens, params, l, &cache.intra[l]);
        state = inter_node_update(state, graph.evv, params, l, &cache.inter[l]);
    }
    cache.state = state;
    return state;
}

// ---------------------------------------------------------------------------
// Refinement

RefineResult refine_gaussians(const GaussianFrame& frame_t0, const std::vector<int>& evg_t0,
                              const QueryState& queries, const GraphBlockParams& params,
                              RefineCache* cache) {
    const int m = frame_t0.size();
    if (static_cast<int>(evg_t0.size()) != m) {
        throw DimensionMismatch("refine_gaussians: assignment length differs from frame size");
    }
    const int n = static_cast<int>(queries.q.rows());

    RefineResult result;
    result.gaussians.resize(m);
    result.refined_params.resize(m, kParamDim);
    if (cache) {
        cache->source_params.resize(m, kParamDim);
        cache->core.resize(m, params.config.token_dim);
    }

    for (int i = 0; i < m; ++i) {
        const int v = evg_t0[i];
        if (v < 0 || v >= n) {
            throw DimensionMismatch("refine_gaussians: assignment index out of range");
        }
        const ParamVec source = unpack_gaussian(frame_t0.gaussians[i]);
        const VectorXd query_token =
            params.embed_w * source.tail<kFeatureDim>() + params.embed_b;
        const VectorXd core = attention(query_token, queries.q.row(v), queries.q.row(v),
                                        params.refine, params.config);
        const ParamVec delta = params.decode_w * core + params.decode_b;
        const ParamVec refined = source + delta;
        result.refined_params.row(i) = refined.transpose();
        result.gaussians[i] = pack_gaussian(refined);
        if (cache) {
            cache->source_params.row(i) = source.transpose();
            cache->core.row(i) = core.transpose();
        }
    }
    if (cache) cache->refined_params = result.refined_params;
    return result;
}

// ---------------------------------------------------------------------------
// Naive reference

MatrixXd naive_all_pairs_attention(const MatrixXd& tokens, const AttentionProjections& proj,
                                   const GraphOpsConfig& config) {
    const int n = static_cast<int>(tokens.rows());
    const int d = config.token_dim;
    const int heads = config.n_heads;
    const int dh = d / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    const MatrixXd& value_weights = config.share_key_value ? proj.wk : proj.wv;
    const MatrixXd q_all = tokens * proj.wq.transpose();
    const MatrixXd k_all = tokens * proj.wk.transpose();
    const MatrixXd v_all = tokens * value_weights.transpose();

    // Chunk query rows so the logits buffer stays around 64 MB.
    const int chunk = std::max(1, std::min(n, static_cast<int>((64ll << 20) / (8ll * n))));
    MatrixXd out(n, d);
    MatrixXd logits;
    for (int begin = 0; begin < n; begin += chunk) {
        const int rows = std::min(chunk, n - begin);
        for (int h = 0; h < heads; ++h) {
            const int off = h * dh;
            logits.noalias() = scale * q_all.block(begin, off, rows, dh) *
                               k_all.middleCols(off, dh).transpose();
            for (int r = 0; r < rows; ++r) {
                auto row = logits.row(r);
                const double peak = row.maxCoeff();
                row = (row.array() - peak).exp();
                row /= row.sum();
            }
            out.block(begin, off, rows, dh).noalias() = logits * v_all.middleCols(off, dh);
        }
    }
    return out;
}

}  // namespace hgg
