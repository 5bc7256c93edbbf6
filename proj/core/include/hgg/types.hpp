#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteInput : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct EmptyFrame : Error {
    using Error::Error;
};
struct EmptyVertexSet : Error {
    using Error::Error;
};
struct EmptySet : Error {
    using Error::Error;
};
struct NonFiniteGradient : Error {
    using Error::Error;
};
struct Diverged : Error {
    using Error::Error;
};
// File / container problems (maps to CLI exit code 2).
struct DataError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Gaussian primitives

/// One splat: center, opacity, anisotropic scale, rotation, RGB color.
/// Valid instances satisfy: opacity in [0,1], scale > 0, |rotation| = 1,
/// color in [0,1]. Construct via pack_gaussian to get that by construction.
struct GaussianPrimitive {
    Vec3 center = Vec3::Zero();
    double opacity = 1.0;
    Vec3 scale = Vec3::Ones();
    Quat rotation = Quat::Identity();  // unit quaternion
    Vec3 color = Vec3::Zero();
};

/// All Gaussians predicted for one video frame.
struct GaussianFrame {
    int timestep = 1;  // t in [1, T]
    std::vector<GaussianPrimitive> gaussians;

    int size() const { return static_cast<int>(gaussians.size()); }
};

// ---------------------------------------------------------------------------
// Body template

/// Sparse skinning row: up to 4 (joint, weight) influences summing to 1.
struct SkinInfluence {
    int joint = 0;
    double weight = 0.0;
};
using SkinRow = std::vector<SkinInfluence>;

/// Skinned rest-pose body: vertices, faces, joint tree and skin weights.
/// shape_dirs, when present, is a per-vertex linear blend-shape basis with
/// 10 shape directions (N x 3 x 10, stored as a flat vector of N matrices).
struct BodyTemplate {
    std::vector<Vec3> rest_vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<Vec3> joint_rest;
    std::vector<int> joint_parents;  // parent of root = -1
    std::vector<SkinRow> skin_weights;
    std::vector<Eigen::Matrix<double, 3, 10>> shape_dirs;  // empty when absent

    int n_vertices() const { return static_cast<int>(rest_vertices.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
    int n_joints() const { return static_cast<int>(joint_rest.size()); }
    bool has_shape_dirs() const { return !shape_dirs.empty(); }
};

/// Pose parameters: per-joint axis-angle, shape coefficients, root offset.
struct Pose {
    std::vector<Vec3> theta;                           // K axis-angle vectors
    Eigen::Matrix<double, 10, 1> beta = Eigen::Matrix<double, 10, 1>::Zero();
    Vec3 root_translation = Vec3::Zero();

    static Pose identity(int n_joints) {
        Pose p;
        p.theta.assign(n_joints, Vec3::Zero());
        return p;
    }
};

// ---------------------------------------------------------------------------
// Camera

/// Pinhole camera with a world-to-camera rigid transform. Pixel (x, y)
/// samples the image plane at exactly (x, y); +z is the viewing direction.
struct Camera {
    double fx = 1.0, fy = 1.0;
    double cx = 0.0, cy = 0.0;
    Mat3 rotation = Mat3::Identity();  // world -> camera
    Vec3 translation = Vec3::Zero();
    int width = 0, height = 0;
    double near = 0.1;

    Vec3 to_camera(const Vec3& world) const { return rotation * world + translation; }
};

// ---------------------------------------------------------------------------
// Validation report

enum class Severity { Warning, Error };

struct ValidationIssue {
    Severity severity = Severity::Error;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;

    void add(Severity sev, std::string msg) {
        if (sev == Severity::Error) ok = false;
        issues.push_back({sev, std::move(msg)});
    }
};

}  // namespace hgg
