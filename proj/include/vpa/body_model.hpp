#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vpa/geometry.hpp"
#include "vpa/vec.hpp"

namespace vpa {

// General affine pair x -> M x + t (M need not be orthonormal).
struct Affine {
    Mat3f M = Mat3f::identity();
    Vec3f t;

    Vec3f apply(const Vec3f& p) const { return M * p + t; }
    Affine operator*(const Affine& o) const { return {M * o.M, M * o.t + t}; }
    Affine inverse() const {
        Mat3f Mi = M.inverse();
        return {Mi, -(Mi * t)};
    }
};

// Uniform-scale similarity x -> s R x + t.
struct Similarity {
    double scale = 1.0;
    Mat3d R = Mat3d::identity();
    Vec3d t;

    Vec3d apply(const Vec3d& p) const { return R * p * scale + t; }
    Vec3f apply(const Vec3f& p) const { return apply(p.cast<double>()).cast<float>(); }
    Similarity inverse() const {
        Mat3d Rt = R.transposed();
        double is = 1.0 / scale;
        return {is, Rt, -(Rt * t * is)};
    }
    Affine affine() const {
        return {R.cast<float>() * static_cast<float>(scale), t.cast<float>()};
    }
};

struct Joints {
    std::vector<int> parent;           // -1 for the single root; parent[j] < j
    std::vector<Vec3f> rest;           // rest-pose joint locations
    int jaw = -1;                      // joint driven by theta_jaw, -1 if absent
    std::vector<std::uint8_t> lower_body;  // per joint, drives the pose regularizers

    int count() const { return static_cast<int>(parent.size()); }
    int body_count() const { return count() - (jaw >= 0 ? 1 : 0); }
    // Body joints are all joints except the jaw, in joint order.
    int body_index(int joint) const { return jaw >= 0 && joint > jaw ? joint - 1 : joint; }
    int joint_of_body(int b) const { return jaw >= 0 && b >= jaw ? b + 1 : b; }
    void validate() const;
};

struct PoseParams {
    Vec3f theta_jaw;
    std::vector<Vec3f> theta_body;  // one axis-angle per body joint
    std::vector<float> beta;        // shape coefficients
    std::vector<float> psi;         // expression coefficients

    bool finite() const;
    std::vector<float> flat() const;  // [jaw, body..., psi...]; beta excluded
    static PoseParams zeros(int body_joints, int n_beta, int n_psi);
};

struct SkinnedModel {
    TriMesh mesh;  // rest mesh; labels mark the face region
    Joints joints;
    std::vector<float> weights;   // V x J, rows sum to 1
    int n_shape = 0, n_expr = 0;
    std::vector<float> shape_bs;  // B x V x 3
    std::vector<float> expr_bs;   // E x V x 3
    std::vector<std::uint32_t> landmarks;  // vertex indices

    int vertex_count() const { return static_cast<int>(mesh.vertices.size()); }
    void validate() const;
};

SkinnedModel load_rig(const std::string& path);
void save_rig(const std::string& path, const SkinnedModel& model);

// Scan template with transferred skinning. Lives in scene space; animation is
// expressed as per-joint delta transforms relative to the alignment pose the
// scan was captured in, conjugated by the model->scene similarity.
struct RiggedTemplate {
    TriMesh mesh;  // the scan, usually with per-vertex colors
    Joints joints;
    std::vector<float> weights;  // V x J
    int n_expr = 0;
    std::vector<float> expr_bs;  // E x V x 3, baked into scene space
    std::vector<std::uint32_t> landmarks;

    std::vector<Affine> base_inv;  // G_j(alignment)^-1 in model space
    Affine sim;                    // model -> scene
    Affine sim_inv;
    std::vector<float> base_psi;   // expression state baked into the scan

    int vertex_count() const { return static_cast<int>(mesh.vertices.size()); }
    void validate() const;
};

RiggedTemplate transfer_rig(const SkinnedModel& model, const TriMesh& scan,
                            const PoseParams& alignment, const Similarity& sim);

RiggedTemplate load_template(const std::string& path);
void save_template(const std::string& path, const RiggedTemplate& t);

// One pose evaluation with everything the adjoint pass needs.
struct PosedState {
    std::vector<Vec3f> vertices;
    std::vector<Vec3f> shaped;       // rest + blendshape offsets
    std::vector<Mat3f> vrot;         // per-vertex blended linear part
    std::vector<Affine> joint_global;  // G_j(theta), model space
    std::vector<Affine> skin;          // per-joint transform applied to shaped verts
};

PosedState evaluate_state(const SkinnedModel& model, const PoseParams& params);
TriMesh evaluate(const SkinnedModel& model, const PoseParams& params);
PosedState evaluate_state(const RiggedTemplate& rig, const PoseParams& params);
TriMesh evaluate_template(const RiggedTemplate& rig, const PoseParams& params);

struct ParamGrad {
    Vec3f jaw;
    std::vector<Vec3f> body;
    std::vector<float> beta;
    std::vector<float> psi;
};

// Adjoint of evaluate: accumulates dE/dparams from per-vertex dE/dvertex.
ParamGrad backprop_params(const SkinnedModel& model, const PoseParams& params,
                          const PosedState& state, std::span<const Vec3f> dvert);
ParamGrad backprop_params(const RiggedTemplate& rig, const PoseParams& params,
                          const PosedState& state, std::span<const Vec3f> dvert);

}  // namespace vpa
