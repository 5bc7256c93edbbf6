#include "hgg/activation.hpp"

#include <cmath>

namespace hgg {

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) {
    return std::log(p) - std::log1p(-p);
}

GaussianPrimitive pack_gaussian(const RawVec& raw, const Vec3& color_logits) {
    if (!raw.allFinite() || !color_logits.allFinite()) {
        throw NonFiniteInput("pack_gaussian: non-finite raw parameter");
    }
    GaussianPrimitive g;
    g.center = raw.head<3>();
    g.opacity = sigmoid(raw[3]);
    g.scale = raw.segment<3>(4).array().exp();
    // Quaternion offset around the identity seed (1,0,0,0); the seed keeps
    // the all-zero raw vector on a valid rotation.
    const double w = 1.0 + raw[7];
    const double x = raw[8], y = raw[9], z = raw[10];
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (n < 1e-12) {
        g.rotation = Quat::Identity();
    } else {
        g.rotation = Quat(w / n, x / n, y / n, z / n);
    }
    for (int c = 0; c < 3; ++c) g.color[c] = sigmoid(color_logits[c]);
    return g;
}

GaussianPrimitive pack_gaussian(const ParamVec& params) {
    return pack_gaussian(params.head<11>(), params.tail<3>());
}

ParamVec unpack_gaussian(const GaussianPrimitive& g) {
    auto safe_logit = [](double p) {
        const double kEps = 1e-12;
        return logit(std::min(1.0 - kEps, std::max(kEps, p)));
    };
    ParamVec u;
    u.head<3>() = g.center;
    u[3] = safe_logit(g.opacity);
    u.segment<3>(4) = g.scale.array().log();
    u[7] = g.rotation.w() - 1.0;
    u[8] = g.rotation.x();
    u[9] = g.rotation.y();
    u[10] = g.rotation.z();
    for (int c = 0; c < 3; ++c) u[11 + c] = safe_logit(g.color[c]);
    return u;
}

FeatureVec gaussian_features(const GaussianPrimitive& g) {
    return unpack_gaussian(g).tail<kFeatureDim>();
}

}  // namespace hgg
