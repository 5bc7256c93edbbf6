#include "hgg/skinning.hpp"

#include "hgg/kdtree.hpp"

#include <Eigen/LU>
#include <cmath>

namespace hgg {

Mat3 rodrigues(const Vec3& axis_angle) {
    const double angle = axis_angle.norm();
    if (angle < 1e-12) return Mat3::Identity();
    return Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
}

JointTransforms joint_transforms(const BodyTemplate& tmpl, const Pose& pose) {
    const int k = tmpl.n_joints();
    if (static_cast<int>(pose.theta.size()) != k) {
        throw DimensionMismatch("joint_transforms: pose has " +
                                std::to_string(pose.theta.size()) + " joints, template has " +
                                std::to_string(k));
    }

    // World transforms joint-local -> posed, chained along the parent tree.
    std::vector<Mat3> world_rot(k);
    std::vector<Vec3> world_pos(k);
    for (int j = 0; j < k; ++j) {
        const Mat3 local = rodrigues(pose.theta[j]);
        const int parent = tmpl.joint_parents[j];
        if (parent < 0) {
            world_rot[j] = local;
            world_pos[j] = tmpl.joint_rest[j];
        } else {
            world_rot[j] = world_rot[parent] * local;
            world_pos[j] =
                world_rot[parent] * (tmpl.joint_rest[j] - tmpl.joint_rest[parent]) +
                world_pos[parent];
        }
    }

    // Fold in the rest-pose inverse so the result maps canonical -> posed.
    JointTransforms out;
    out.joints.resize(k);
    for (int j = 0; j < k; ++j) {
        out.joints[j].rotation = world_rot[j];
        out.joints[j].translation =
            world_pos[j] - world_rot[j] * tmpl.joint_rest[j] + pose.root_translation;
    }
    return out;
}

BlendedTransform blend_transforms(const JointTransforms& jt, const SkinRow& row) {
    BlendedTransform b;
    b.linear.setZero();
    b.translation.setZero();
    Eigen::Vector4d quat_acc = Eigen::Vector4d::Zero();
    Quat reference = Quat::Identity();
    bool have_reference = false;
    for (const SkinInfluence& inf : row) {
        const JointTransform& t = jt[inf.joint];
        b.linear += inf.weight * t.rotation;
        b.translation += inf.weight * t.translation;
        Quat q(t.rotation);
        if (!have_reference) {
            reference = q;
            have_reference = true;
        } else if (q.dot(reference) < 0.0) {
            q.coeffs() = -q.coeffs();
        }
        quat_acc += inf.weight * Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
    }
    const double n = quat_acc.norm();
    if (n < 1e-12) {
        b.rotation = Quat::Identity();
    } else {
        quat_acc /= n;
        b.rotation = Quat(quat_acc[0], quat_acc[1], quat_acc[2], quat_acc[3]);
    }
    return b;
}

std::vector<Vec3> lbs_pose_vertices(const BodyTemplate& tmpl, const Pose& pose) {
    const JointTransforms jt = joint_transforms(tmpl, pose);
    const int n = tmpl.n_vertices();
    std::vector<Vec3> posed(n);
    for (int v = 0; v < n; ++v) {
        Vec3 canonical = tmpl.rest_vertices[v];
        if (tmpl.has_shape_dirs()) {
            canonical += tmpl.shape_dirs[v] * pose.beta;
        }
        Vec3 acc = Vec3::Zero();
        for (const SkinInfluence& inf : tmpl.skin_weights[v]) {
            acc += inf.weight * jt[inf.joint].apply(canonical);
        }
        posed[v] = acc;
    }
    return posed;
}

GaussianBinding bind_with_assignment(const std::vector<GaussianPrimitive>& gaussians,
                                     const std::vector<int>& assignment,
                                     const BodyTemplate& tmpl, const Pose& bind_pose) {
    if (gaussians.empty()) throw EmptyFrame("bind_gaussians: frame has no Gaussians");
    if (assignment.size() != gaussians.size()) {
        throw DimensionMismatch("bind_with_assignment: assignment length mismatch");
    }
    const JointTransforms jt = joint_transforms(tmpl, bind_pose);
    GaussianBinding binding;
    const int m = static_cast<int>(gaussians.size());
    binding.vertex.resize(m);
    binding.weights.resize(m);
    binding.canonical_offset.resize(m);
    binding.canonical_rotation.resize(m);
    for (int i = 0; i < m; ++i) {
        const int v = assignment[i];
        binding.vertex[i] = v;
        binding.weights[i] = tmpl.skin_weights[v];
        const BlendedTransform bt = blend_transforms(jt, binding.weights[i]);
        // Canonical center solves A(x) = mu for the binding-pose blend.
        const Vec3 canonical =
            bt.linear.partialPivLu().solve(gaussians[i].center - bt.translation);
        binding.canonical_offset[i] = canonical - tmpl.rest_vertices[v];
        binding.canonical_rotation[i] = bt.rotation.conjugate() * gaussians[i].rotation;
    }
    return binding;
}

GaussianBinding bind_gaussians(const GaussianFrame& frame, const BodyTemplate& tmpl,
                               const Pose& bind_pose) {
    if (frame.gaussians.empty()) throw EmptyFrame("bind_gaussians: frame has no Gaussians");
    const std::vector<Vec3> posed = lbs_pose_vertices(tmpl, bind_pose);
    KdTree3 tree(posed);
    std::vector<int> assignment(frame.gaussians.size());
    for (size_t i = 0; i < frame.gaussians.size(); ++i) {
        assignment[i] = tree.nearest(frame.gaussians[i].center);
    }
    return bind_with_assignment(frame.gaussians, assignment, tmpl, bind_pose);
}

std::vector<GaussianPrimitive> repose_gaussians(const std::vector<GaussianPrimitive>& gaussians,
                                                const GaussianBinding& binding,
                                                const BodyTemplate& tmpl, const Pose& pose_dst) {
    if (binding.size() != static_cast<int>(gaussians.size())) {
        throw DimensionMismatch("repose_gaussians: binding size mismatch");
    }
    const JointTransforms jt = joint_transforms(tmpl, pose_dst);
    std::vector<GaussianPrimitive> out(gaussians.size());
    for (size_t i = 0; i < gaussians.size(); ++i) {
        const BlendedTransform bt = blend_transforms(jt, binding.weights[i]);
        const Vec3 canonical =
            tmpl.rest_vertices[binding.vertex[i]] + binding.canonical_offset[i];
        GaussianPrimitive g = gaussians[i];
        g.center = bt.apply(canonical);
        g.rotation = (bt.rotation * binding.canonical_rotation[i]).normalized();
        out[i] = g;
    }
    return out;
}

}  // namespace hgg
