#include "vpa/body_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vpa/blobfile.hpp"
#include "vpa/error.hpp"
#include "vpa/parallel.hpp"

namespace vpa {

void Joints::validate() const {
    require(!parent.empty(), "rig has no joints");
    require(rest.size() == parent.size(), "joint rest positions do not match joint count");
    require(lower_body.size() == parent.size(), "lower_body flags do not match joint count");
    int roots = 0;
    for (int j = 0; j < count(); ++j) {
        if (parent[j] < 0) {
            ++roots;
        } else {
            require(parent[j] < j, "joint ", j, " has parent ", parent[j],
                    "; parents must precede children");
        }
    }
    require(roots == 1, "joint tree must have exactly one root, found ", roots);
    if (jaw >= 0) require(jaw < count(), "jaw joint index out of range");
}

bool PoseParams::finite() const {
    auto ok = [](float v) { return std::isfinite(v); };
    if (!ok(theta_jaw.x) || !ok(theta_jaw.y) || !ok(theta_jaw.z)) return false;
    for (const Vec3f& v : theta_body)
        if (!ok(v.x) || !ok(v.y) || !ok(v.z)) return false;
    for (float v : beta)
        if (!ok(v)) return false;
    for (float v : psi)
        if (!ok(v)) return false;
    return true;
}

std::vector<float> PoseParams::flat() const {
    std::vector<float> out;
    out.reserve(3 + 3 * theta_body.size() + psi.size());
    out.push_back(theta_jaw.x);
    out.push_back(theta_jaw.y);
    out.push_back(theta_jaw.z);
    for (const Vec3f& v : theta_body) {
        out.push_back(v.x);
        out.push_back(v.y);
        out.push_back(v.z);
    }
    out.insert(out.end(), psi.begin(), psi.end());
    return out;
}

PoseParams PoseParams::zeros(int body_joints, int n_beta, int n_psi) {
    PoseParams p;
    p.theta_body.resize(body_joints, Vec3f{});
    p.beta.resize(n_beta, 0.0f);
    p.psi.resize(n_psi, 0.0f);
    return p;
}

namespace {

void validate_weights(std::span<const float> w, int V, int J) {
    require(static_cast<int>(w.size()) == V * J, "weight matrix shape mismatch");
    for (int v = 0; v < V; ++v) {
        float sum = 0;
        for (int j = 0; j < J; ++j) {
            float x = w[std::size_t(v) * J + j];
            require(x >= -1e-6f, "negative skinning weight at vertex ", v);
            sum += x;
        }
        require(std::abs(sum - 1.0f) <= 1e-5f, "skinning weights of vertex ", v, " sum to ", sum);
    }
}

}  // namespace

void SkinnedModel::validate() const {
    mesh.validate();
    joints.validate();
    const int V = vertex_count(), J = joints.count();
    validate_weights(weights, V, J);
    require(static_cast<int>(shape_bs.size()) == n_shape * V * 3, "shape blendshape stack shape");
    require(static_cast<int>(expr_bs.size()) == n_expr * V * 3, "expression blendshape stack shape");
    for (std::uint32_t l : landmarks)
        require(l < static_cast<std::uint32_t>(V), "landmark vertex index out of range");
}

void RiggedTemplate::validate() const {
    mesh.validate();
    joints.validate();
    const int V = vertex_count(), J = joints.count();
    validate_weights(weights, V, J);
    require(static_cast<int>(expr_bs.size()) == n_expr * V * 3, "expression blendshape stack shape");
    require(static_cast<int>(base_inv.size()) == J, "base transform count");
    require(static_cast<int>(base_psi.size()) == n_expr, "base psi size");
    for (std::uint32_t l : landmarks)
        require(l < static_cast<std::uint32_t>(V), "landmark vertex index out of range");
}

// ---------------------------------------------------------------------------
// Rig file I/O

namespace {

constexpr const char* kRigMagic = "RIG1";

std::vector<float> pack_vec3(std::span<const Vec3f> v) {
    std::vector<float> out(v.size() * 3);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i * 3] = v[i].x;
        out[i * 3 + 1] = v[i].y;
        out[i * 3 + 2] = v[i].z;
    }
    return out;
}

std::vector<Vec3f> unpack_vec3(const std::vector<float>& v) {
    std::vector<Vec3f> out(v.size() / 3);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {v[i * 3], v[i * 3 + 1], v[i * 3 + 2]};
    return out;
}

void put_mesh(BlobFile& bf, const TriMesh& mesh) {
    auto verts = pack_vec3(mesh.vertices);
    bf.put_f32("vertices", verts, {static_cast<std::int64_t>(mesh.vertices.size()), 3});
    std::vector<std::uint32_t> tris(mesh.triangles.size() * 3);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int k = 0; k < 3; ++k) tris[t * 3 + k] = mesh.triangles[t][k];
    bf.put_u32("triangles", tris, {static_cast<std::int64_t>(mesh.triangles.size()), 3});
    if (mesh.has_colors()) {
        auto cols = pack_vec3(mesh.colors);
        bf.put_f32("colors", cols, {static_cast<std::int64_t>(mesh.colors.size()), 3});
    }
    if (mesh.has_labels()) {
        std::vector<std::uint8_t> labels(mesh.labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            labels[i] = static_cast<std::uint8_t>(mesh.labels[i]);
        bf.put_u8("labels", labels);
    }
}

TriMesh get_mesh(const BlobFile& bf) {
    TriMesh mesh;
    mesh.vertices = unpack_vec3(bf.get_f32("vertices"));
    auto tris = bf.get_u32("triangles");
    mesh.triangles.resize(tris.size() / 3);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        mesh.triangles[t] = {tris[t * 3], tris[t * 3 + 1], tris[t * 3 + 2]};
    if (bf.has("colors")) mesh.colors = unpack_vec3(bf.get_f32("colors"));
    if (bf.has("labels")) {
        auto labels = bf.get_u8("labels");
        mesh.labels.resize(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) mesh.labels[i] = static_cast<Region>(labels[i]);
    }
    return mesh;
}

void put_joints(BlobFile& bf, const Joints& joints) {
    std::vector<std::int32_t> parents(joints.parent.begin(), joints.parent.end());
    bf.put_i32("joint_parents", parents);
    auto rest = pack_vec3(joints.rest);
    bf.put_f32("joint_rest", rest, {joints.count(), 3});
    bf.put_u8("joint_lower_body", joints.lower_body);
    bf.meta["jaw_joint"] = joints.jaw;
}

Joints get_joints(const BlobFile& bf) {
    Joints joints;
    auto parents = bf.get_i32("joint_parents");
    joints.parent.assign(parents.begin(), parents.end());
    joints.rest = unpack_vec3(bf.get_f32("joint_rest"));
    joints.lower_body = bf.get_u8("joint_lower_body");
    joints.jaw = bf.meta.value("jaw_joint", -1);
    return joints;
}

std::vector<float> pack_affines(std::span<const Affine> a) {
    std::vector<float> out(a.size() * 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int k = 0; k < 9; ++k) out[i * 12 + k] = a[i].M.m[k];
        out[i * 12 + 9] = a[i].t.x;
        out[i * 12 + 10] = a[i].t.y;
        out[i * 12 + 11] = a[i].t.z;
    }
    return out;
}

std::vector<Affine> unpack_affines(const std::vector<float>& v) {
    std::vector<Affine> out(v.size() / 12);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (int k = 0; k < 9; ++k) out[i].M.m[k] = v[i * 12 + k];
        out[i].t = {v[i * 12 + 9], v[i * 12 + 10], v[i * 12 + 11]};
    }
    return out;
}

}  // namespace

void save_rig(const std::string& path, const SkinnedModel& model) {
    model.validate();
    BlobFile bf;
    bf.meta["kind"] = "rig";
    put_mesh(bf, model.mesh);
    put_joints(bf, model.joints);
    bf.put_f32("weights", model.weights, {model.vertex_count(), model.joints.count()});
    bf.put_f32("shape_bs", model.shape_bs, {model.n_shape, model.vertex_count(), 3});
    bf.put_f32("expr_bs", model.expr_bs, {model.n_expr, model.vertex_count(), 3});
    bf.put_u32("landmarks", model.landmarks);
    bf.write(path, kRigMagic);
}

SkinnedModel load_rig(const std::string& path) {
    BlobFile bf = BlobFile::read(path, kRigMagic);
    require(bf.meta.value("kind", "") == "rig", path, ": not a rig file");
    SkinnedModel model;
    model.mesh = get_mesh(bf);
    model.joints = get_joints(bf);
    model.weights = bf.get_f32("weights");
    model.shape_bs = bf.get_f32("shape_bs");
    model.expr_bs = bf.get_f32("expr_bs");
    model.n_shape = static_cast<int>(bf.shape("shape_bs")[0]);
    model.n_expr = static_cast<int>(bf.shape("expr_bs")[0]);
    model.landmarks = bf.get_u32("landmarks");
    model.validate();
    return model;
}

void save_template(const std::string& path, const RiggedTemplate& t) {
    t.validate();
    BlobFile bf;
    bf.meta["kind"] = "template";
    put_mesh(bf, t.mesh);
    put_joints(bf, t.joints);
    bf.put_f32("weights", t.weights, {t.vertex_count(), t.joints.count()});
    bf.put_f32("expr_bs", t.expr_bs, {t.n_expr, t.vertex_count(), 3});
    bf.put_u32("landmarks", t.landmarks);
    auto base = pack_affines(t.base_inv);
    bf.put_f32("base_inv", base, {t.joints.count(), 12});
    Affine sims[2] = {t.sim, t.sim_inv};
    auto simv = pack_affines(sims);
    bf.put_f32("sim", simv, {2, 12});
    bf.put_f32("base_psi", t.base_psi);
    bf.write(path, kRigMagic);
}

RiggedTemplate load_template(const std::string& path) {
    BlobFile bf = BlobFile::read(path, kRigMagic);
    require(bf.meta.value("kind", "") == "template", path, ": not a template file");
    RiggedTemplate t;
    t.mesh = get_mesh(bf);
    t.joints = get_joints(bf);
    t.weights = bf.get_f32("weights");
    t.expr_bs = bf.get_f32("expr_bs");
    t.n_expr = static_cast<int>(bf.shape("expr_bs")[0]);
    t.landmarks = bf.get_u32("landmarks");
    t.base_inv = unpack_affines(bf.get_f32("base_inv"));
    auto simv = unpack_affines(bf.get_f32("sim"));
    t.sim = simv[0];
    t.sim_inv = simv[1];
    t.base_psi = bf.get_f32("base_psi");
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Skinning

namespace {

// Per-joint axis-angle for the assembled pose.
Vec3f joint_rotation(const Joints& joints, const PoseParams& p, int j) {
    if (j == joints.jaw) return p.theta_jaw;
    return p.theta_body[joints.body_index(j)];
}

std::vector<Affine> forward_kinematics(const Joints& joints, const PoseParams& p) {
    const int J = joints.count();
    std::vector<Affine> global(J);
    for (int j = 0; j < J; ++j) {
        Mat3f R = rodrigues(joint_rotation(joints, p, j));
        Vec3f off = joints.parent[j] < 0 ? joints.rest[j] : joints.rest[j] - joints.rest[joints.parent[j]];
        Affine local{R, off};
        global[j] = joints.parent[j] < 0 ? local : global[joints.parent[j]] * local;
    }
    return global;
}

// Core: blend per-joint transforms over shaped vertices.
void skin_vertices(std::span<const Vec3f> shaped, std::span<const float> weights,
                   std::span<const Affine> skin, PosedState& out) {
    const int V = static_cast<int>(shaped.size());
    const int J = static_cast<int>(skin.size());
    out.vertices.resize(V);
    out.vrot.resize(V);
    parallel_for(V, [&](std::int64_t v) {
        Mat3f W = Mat3f::zero();
        Vec3f u{};
        const float* wrow = weights.data() + std::size_t(v) * J;
        for (int j = 0; j < J; ++j) {
            float w = wrow[j];
            if (w == 0.0f) continue;
            for (int k = 0; k < 9; ++k) W.m[k] += w * skin[j].M.m[k];
            u += skin[j].t * w;
        }
        out.vrot[v] = W;
        out.vertices[v] = W * shaped[v] + u;
    });
}

// dE/dtheta for S_j = C1_j * G_j(theta) * C2_j given the per-joint adjoints
// A_j = sum_v w_vj dv_v shaped_v^T and b_j = sum_v w_vj dv_v.
void backprop_theta(const Joints& joints, const PoseParams& params,
                    std::span<const Affine> global, std::span<const Affine> C1,
                    std::span<const Affine> C2, std::span<const Mat3f> A,
                    std::span<const Vec3f> b, ParamGrad& grad) {
    const int J = joints.count();
    std::vector<Affine> dG(J);
    std::vector<char> touched(J);
    for (int a = 0; a < J; ++a) {
        auto dR = rodrigues_jacobian(joint_rotation(joints, params, a));
        for (int k = 0; k < 3; ++k) {
            std::fill(touched.begin(), touched.end(), 0);
            // G_a = G_par * (R(theta_a), off); off is constant, so the local
            // derivative is (dR, 0) and children pick up translation terms
            // through the chain below.
            if (joints.parent[a] < 0) {
                dG[a] = {dR[k], Vec3f{}};
            } else {
                dG[a] = {global[joints.parent[a]].M * dR[k], Vec3f{}};
            }
            touched[a] = 1;
            for (int j = a + 1; j < J; ++j) {
                int p = joints.parent[j];
                if (p >= 0 && touched[p]) {
                    Mat3f Rj = rodrigues(joint_rotation(joints, params, j));
                    Vec3f offj = joints.rest[j] - joints.rest[p];
                    dG[j].M = dG[p].M * Rj;
                    dG[j].t = dG[p].M * offj + dG[p].t;
                    touched[j] = 1;
                }
            }
            double acc = 0;
            for (int j = 0; j < J; ++j) {
                if (!touched[j]) continue;
                // dS_j = C1 * dG_j * C2 (only G depends on theta).
                Mat3f dSM = C1[j].M * dG[j].M * C2[j].M;
                Vec3f dSt = C1[j].M * (dG[j].M * C2[j].t + dG[j].t);
                for (int m = 0; m < 9; ++m) acc += double(dSM.m[m]) * A[j].m[m];
                acc += double(dot(dSt, b[j]));
            }
            float g = static_cast<float>(acc);
            if (a == joints.jaw)
                grad.jaw[k] += g;
            else
                grad.body[joints.body_index(a)][k] += g;
        }
    }
}

ParamGrad backprop_core(const Joints& joints, const PoseParams& params, const PosedState& state,
                        std::span<const float> weights, std::span<const Affine> C1,
                        std::span<const Affine> C2, std::span<const float> expr_bs, int n_expr,
                        std::span<const float> shape_bs, int n_shape, std::span<const Vec3f> dvert) {
    const int V = static_cast<int>(state.shaped.size());
    const int J = joints.count();
    ParamGrad grad;
    grad.body.resize(params.theta_body.size(), Vec3f{});
    grad.beta.resize(params.beta.size(), 0.0f);
    grad.psi.resize(params.psi.size(), 0.0f);

    // Joint adjoints; fixed vertex order keeps this deterministic.
    std::vector<Mat3f> A(J, Mat3f::zero());
    std::vector<Vec3f> b(J, Vec3f{});
    for (int v = 0; v < V; ++v) {
        const Vec3f dv = dvert[v];
        if (dv.x == 0 && dv.y == 0 && dv.z == 0) continue;
        const float* wrow = weights.data() + std::size_t(v) * J;
        for (int j = 0; j < J; ++j) {
            float w = wrow[j];
            if (w == 0.0f) continue;
            Vec3f wd = dv * w;
            const Vec3f& s = state.shaped[v];
            A[j](0, 0) += wd.x * s.x; A[j](0, 1) += wd.x * s.y; A[j](0, 2) += wd.x * s.z;
            A[j](1, 0) += wd.y * s.x; A[j](1, 1) += wd.y * s.y; A[j](1, 2) += wd.y * s.z;
            A[j](2, 0) += wd.z * s.x; A[j](2, 1) += wd.z * s.y; A[j](2, 2) += wd.z * s.z;
            b[j] += wd;
        }
    }

    backprop_theta(joints, params, state.joint_global, C1, C2, A, b, grad);

    // Blendshape coefficients: dv' = vrot_v * basis_row.
    auto basis_grad = [&](std::span<const float> basis, std::span<float> out) {
        const int n = static_cast<int>(out.size());
        for (int e = 0; e < n; ++e) {
            const float* row = basis.data() + std::size_t(e) * V * 3;
            double acc = 0;
            for (int v = 0; v < V; ++v) {
                const Vec3f dv = dvert[v];
                if (dv.x == 0 && dv.y == 0 && dv.z == 0) continue;
                Vec3f d{row[v * 3], row[v * 3 + 1], row[v * 3 + 2]};
                acc += double(dot(dv, state.vrot[v] * d));
            }
            out[e] += static_cast<float>(acc);
        }
    };
    if (n_expr > 0) basis_grad(expr_bs.subspan(0, std::size_t(n_expr) * V * 3), grad.psi);
    if (n_shape > 0) basis_grad(shape_bs.subspan(0, std::size_t(n_shape) * V * 3), grad.beta);
    return grad;
}

}  // namespace

PosedState evaluate_state(const SkinnedModel& model, const PoseParams& params) {
    const int V = model.vertex_count();
    const int J = model.joints.count();
    require(static_cast<int>(params.theta_body.size()) == model.joints.body_count(),
            "theta_body size ", params.theta_body.size(), " != body joint count ",
            model.joints.body_count());
    require(static_cast<int>(params.beta.size()) == model.n_shape, "beta size mismatch");
    require(static_cast<int>(params.psi.size()) == model.n_expr, "psi size mismatch");

    PosedState st;
    st.shaped.assign(model.mesh.vertices.begin(), model.mesh.vertices.end());
    for (int b = 0; b < model.n_shape; ++b) {
        float c = params.beta[b];
        if (c == 0.0f) continue;
        const float* row = model.shape_bs.data() + std::size_t(b) * V * 3;
        for (int v = 0; v < V; ++v)
            st.shaped[v] += Vec3f{row[v * 3], row[v * 3 + 1], row[v * 3 + 2]} * c;
    }
    for (int e = 0; e < model.n_expr; ++e) {
        float c = params.psi[e];
        if (c == 0.0f) continue;
        const float* row = model.expr_bs.data() + std::size_t(e) * V * 3;
        for (int v = 0; v < V; ++v)
            st.shaped[v] += Vec3f{row[v * 3], row[v * 3 + 1], row[v * 3 + 2]} * c;
    }

    st.joint_global = forward_kinematics(model.joints, params);
    st.skin.resize(J);
    for (int j = 0; j < J; ++j)
        st.skin[j] = st.joint_global[j] * Affine{Mat3f::identity(), -model.joints.rest[j]};
    skin_vertices(st.shaped, model.weights, st.skin, st);
    return st;
}

TriMesh evaluate(const SkinnedModel& model, const PoseParams& params) {
    PosedState st = evaluate_state(model, params);
    TriMesh out = model.mesh;
    out.vertices = std::move(st.vertices);
    return out;
}

PosedState evaluate_state(const RiggedTemplate& rig, const PoseParams& params) {
    const int V = rig.vertex_count();
    const int J = rig.joints.count();
    require(static_cast<int>(params.theta_body.size()) == rig.joints.body_count(),
            "theta_body size mismatch");
    require(static_cast<int>(params.psi.size()) == rig.n_expr, "psi size mismatch");

    PosedState st;
    st.shaped.assign(rig.mesh.vertices.begin(), rig.mesh.vertices.end());
    for (int e = 0; e < rig.n_expr; ++e) {
        float c = params.psi[e] - rig.base_psi[e];
        if (c == 0.0f) continue;
        const float* row = rig.expr_bs.data() + std::size_t(e) * V * 3;
        for (int v = 0; v < V; ++v)
            st.shaped[v] += Vec3f{row[v * 3], row[v * 3 + 1], row[v * 3 + 2]} * c;
    }

    st.joint_global = forward_kinematics(rig.joints, params);
    st.skin.resize(J);
    for (int j = 0; j < J; ++j)
        st.skin[j] = rig.sim * st.joint_global[j] * rig.base_inv[j] * rig.sim_inv;
    skin_vertices(st.shaped, rig.weights, st.skin, st);
    return st;
}

TriMesh evaluate_template(const RiggedTemplate& rig, const PoseParams& params) {
    PosedState st = evaluate_state(rig, params);
    TriMesh out = rig.mesh;
    out.vertices = std::move(st.vertices);
    return out;
}

ParamGrad backprop_params(const SkinnedModel& model, const PoseParams& params,
                          const PosedState& state, std::span<const Vec3f> dvert) {
    const int J = model.joints.count();
    std::vector<Affine> C1(J), C2(J);
    for (int j = 0; j < J; ++j) C2[j] = {Mat3f::identity(), -model.joints.rest[j]};
    return backprop_core(model.joints, params, state, model.weights, C1, C2, model.expr_bs,
                         model.n_expr, model.shape_bs, model.n_shape, dvert);
}

ParamGrad backprop_params(const RiggedTemplate& rig, const PoseParams& params,
                          const PosedState& state, std::span<const Vec3f> dvert) {
    const int J = rig.joints.count();
    std::vector<Affine> C1(J), C2(J);
    for (int j = 0; j < J; ++j) {
        C1[j] = rig.sim;
        C2[j] = rig.base_inv[j] * rig.sim_inv;
    }
    ParamGrad g = backprop_core(rig.joints, params, state, rig.weights, C1, C2, rig.expr_bs,
                                rig.n_expr, {}, 0, dvert);
    return g;
}

RiggedTemplate transfer_rig(const SkinnedModel& model, const TriMesh& scan,
                            const PoseParams& alignment, const Similarity& sim) {
    PosedState posed = evaluate_state(model, alignment);
    const int Vm = model.vertex_count();
    const int Vs = static_cast<int>(scan.vertices.size());
    require(Vs > 0, "transfer_rig: empty scan");

    Affine sim_aff = sim.affine();
    std::vector<Vec3f> posed_scene(Vm);
    for (int v = 0; v < Vm; ++v) posed_scene[v] = sim_aff.apply(posed.vertices[v]);

    // Nearest posed model vertex per scan vertex, ties to the lowest index.
    std::vector<int> nn(Vs);
    std::vector<float> nn_d2(Vs);
    parallel_for(Vs, [&](std::int64_t v) {
        float best = std::numeric_limits<float>::max();
        int bi = 0;
        const Vec3f p = scan.vertices[v];
        for (int m = 0; m < Vm; ++m) {
            float d2 = norm2(p - posed_scene[m]);
            if (d2 < best) {
                best = d2;
                bi = m;
            }
        }
        nn[v] = bi;
        nn_d2[v] = best;
    });

    std::vector<float> sorted = nn_d2;
    std::nth_element(sorted.begin(), sorted.begin() + Vs / 2, sorted.end());
    float median = std::sqrt(sorted[Vs / 2]);
    require(median < 0.1f, "transfer_rig: model and scan are misaligned (median nearest distance ",
            median, ")");

    const int J = model.joints.count();
    RiggedTemplate t;
    t.mesh = scan;
    t.mesh.labels.resize(Vs);
    t.joints = model.joints;
    t.weights.resize(std::size_t(Vs) * J);
    t.n_expr = model.n_expr;
    t.expr_bs.resize(std::size_t(model.n_expr) * Vs * 3);
    t.sim = sim_aff;
    t.sim_inv = sim_aff.inverse();
    t.base_psi = alignment.psi;
    // Delta skinning: skin_j(theta) = sim * G_j(theta) * G_j(alignment)^-1 * sim^-1.
    // The usual joint-offset factor cancels between the two globals.
    t.base_inv.resize(J);
    for (int j = 0; j < J; ++j) t.base_inv[j] = posed.joint_global[j].inverse();

    for (int v = 0; v < Vs; ++v) {
        int m = nn[v];
        for (int j = 0; j < J; ++j) t.weights[std::size_t(v) * J + j] = model.weights[std::size_t(m) * J + j];
        if (model.mesh.has_labels()) t.mesh.labels[v] = model.mesh.labels[m];
        // Bake expression rows into scene space at the alignment pose.
        for (int e = 0; e < model.n_expr; ++e) {
            const float* row = model.expr_bs.data() + (std::size_t(e) * Vm + m) * 3;
            Vec3f d{row[0], row[1], row[2]};
            Vec3f baked = sim_aff.M * (posed.vrot[m] * d);
            float* out = t.expr_bs.data() + (std::size_t(e) * Vs + v) * 3;
            out[0] = baked.x;
            out[1] = baked.y;
            out[2] = baked.z;
        }
    }
    if (!model.mesh.has_labels()) t.mesh.labels.clear();

    // Landmarks: scan vertex nearest to each posed model landmark.
    t.landmarks.resize(model.landmarks.size());
    for (std::size_t l = 0; l < model.landmarks.size(); ++l) {
        Vec3f p = posed_scene[model.landmarks[l]];
        float best = std::numeric_limits<float>::max();
        std::uint32_t bi = 0;
        for (int v = 0; v < Vs; ++v) {
            float d2 = norm2(scan.vertices[v] - p);
            if (d2 < best) {
                best = d2;
                bi = static_cast<std::uint32_t>(v);
            }
        }
        t.landmarks[l] = bi;
    }
    t.validate();
    return t;
}

}  // namespace vpa
