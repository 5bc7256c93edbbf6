#pragma once

#include "hgg/types.hpp"

namespace hgg {

// Unconstrained ("raw") Gaussian parameterization. Trainable state lives in
// this space; pack_gaussian maps it onto a valid GaussianPrimitive.
//
//   channel  0..2   center (unconstrained)
//   channel  3      opacity logit          -> sigmoid
//   channel  4..6   log scale              -> exp
//   channel  7..10  quaternion offset wxyz -> normalize(seed + offset),
//                                             seed = (1,0,0,0)
//   channel 11..13  color logits           -> sigmoid
//
// The 11 non-center channels [3..14) are the per-Gaussian feature vector
// consumed by the graph attention blocks.
inline constexpr int kParamDim = 14;
inline constexpr int kFeatureDim = 11;

using ParamVec = Eigen::Matrix<double, kParamDim, 1>;
using FeatureVec = Eigen::Matrix<double, kFeatureDim, 1>;
using RawVec = Eigen::Matrix<double, 11, 1>;  // pack_gaussian layout (no color)

double sigmoid(double x);
double logit(double p);

/// Activate an unconstrained 11-vector [center(3), opacity-logit(1),
/// log-scale(3), quaternion offset(4)] plus separate color logits into a
/// valid primitive. Throws NonFiniteInput on NaN/inf entries.
GaussianPrimitive pack_gaussian(const RawVec& raw, const Vec3& color_logits);

/// Same, from the combined 14-channel parameter vector.
GaussianPrimitive pack_gaussian(const ParamVec& params);

/// Inverse map. Opacity/color are clamped away from {0,1} by 1e-12 before the
/// logit so that boundary primitives stay finite.
ParamVec unpack_gaussian(const GaussianPrimitive& g);

/// Non-center channels of the unconstrained parameterization.
FeatureVec gaussian_features(const GaussianPrimitive& g);

}  // namespace hgg
