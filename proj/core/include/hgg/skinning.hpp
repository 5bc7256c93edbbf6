#pragma once

#include "hgg/types.hpp"

#include <vector>

namespace hgg {

/// Per-joint rigid transform mapping canonical space to posed space (rest
/// inverse already folded in, root translation applied last).
struct JointTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

struct JointTransforms {
    std::vector<JointTransform> joints;

    int size() const { return static_cast<int>(joints.size()); }
    const JointTransform& operator[](int k) const { return joints[k]; }
};

/// Weight-blended (non-rigid) transform for one skin row. The matrix blend
/// drives positions; the normalized quaternion blend drives orientations.
struct BlendedTransform {
    Mat3 linear = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    Quat rotation = Quat::Identity();

    Vec3 apply(const Vec3& x) const { return linear * x + translation; }
};

/// Pose-drivable attachment of one Gaussian frame to the template.
struct GaussianBinding {
    std::vector<int> vertex;                // bound vertex per Gaussian
    std::vector<SkinRow> weights;           // inherited from the bound vertex
    std::vector<Vec3> canonical_offset;     // canonical center minus rest vertex
    std::vector<Quat> canonical_rotation;   // source blend rotation removed

    int size() const { return static_cast<int>(vertex.size()); }
};

Mat3 rodrigues(const Vec3& axis_angle);

/// Forward kinematics: the canonical-to-posed transform of every joint.
/// Throws DimensionMismatch when pose.theta length differs from the joint
/// count.
JointTransforms joint_transforms(const BodyTemplate& tmpl, const Pose& pose);

BlendedTransform blend_transforms(const JointTransforms& jt, const SkinRow& row);

/// Linear blend skinning of the template vertices, with the optional shape
/// blend applied in canonical space first.
std::vector<Vec3> lbs_pose_vertices(const BodyTemplate& tmpl, const Pose& pose);

/// Bind a Gaussian frame produced under bind_pose to its nearest template
/// vertices. Offsets and rotations are stored canonically so the binding can
/// be re-posed anywhere. Throws EmptyFrame when the frame has no Gaussians.
GaussianBinding bind_gaussians(const GaussianFrame& frame, const BodyTemplate& tmpl,
                               const Pose& bind_pose);

/// Same, but reusing a precomputed nearest-vertex assignment (e.g. the
/// frame-t0 edges of a built graph).
GaussianBinding bind_with_assignment(const std::vector<GaussianPrimitive>& gaussians,
                                     const std::vector<int>& assignment,
                                     const BodyTemplate& tmpl, const Pose& bind_pose);

/// Re-pose bound Gaussians: centers follow the blended transform, rotations
/// compose with its rotation part, opacity/scale/color stay put.
std::vector<GaussianPrimitive> repose_gaussians(const std::vector<GaussianPrimitive>& gaussians,
                                                const GaussianBinding& binding,
                                                const BodyTemplate& tmpl, const Pose& pose_dst);

}  // namespace hgg
