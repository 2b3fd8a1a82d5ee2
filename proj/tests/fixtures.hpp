#pragma once

// Shared procedural fixtures for the test suites.

#include <cmath>
#include <filesystem>
#include <string>

#include "vpa/body_model.hpp"
#include "vpa/geometry.hpp"

namespace vpa::test {

inline std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Cylinder around +Y with `joints` chained along the axis; the last joint is
// the jaw when with_jaw is set. Dyadic coordinates and weights keep the
// zero-pose identity bit-exact.
inline SkinnedModel cylinder_rig(int rings = 7, int segments = 8, int joints = 2,
                                 bool with_jaw = true) {
    SkinnedModel m;
    const float radius = 0.25f;
    const float height = 1.0f;
    for (int r = 0; r < rings; ++r) {
        float y = height * float(r) / float(rings - 1) - 0.5f;
        for (int s = 0; s < segments; ++s) {
            float a = 6.28318530718f * float(s) / float(segments);
            m.mesh.vertices.push_back({radius * std::cos(a), y, radius * std::sin(a)});
        }
    }
    for (int r = 0; r + 1 < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            std::uint32_t a = r * segments + s;
            std::uint32_t b = r * segments + (s + 1) % segments;
            std::uint32_t c = (r + 1) * segments + s;
            std::uint32_t d = (r + 1) * segments + (s + 1) % segments;
            m.mesh.triangles.push_back({a, b, c});
            m.mesh.triangles.push_back({b, d, c});
        }

    const int V = static_cast<int>(m.mesh.vertices.size());
    m.joints.parent.resize(joints);
    m.joints.rest.resize(joints);
    m.joints.lower_body.assign(joints, 0);
    for (int j = 0; j < joints; ++j) {
        m.joints.parent[j] = j - 1;
        // dyadic positions along the axis
        m.joints.rest[j] = {0.0f, -0.5f + float(j) * (1.0f / float(joints)), 0.0f};
    }
    m.joints.jaw = with_jaw ? joints - 1 : -1;

    // Weights: vertices blend between the two nearest joints along y with
    // dyadic fractions (multiples of 1/8).
    m.weights.assign(std::size_t(V) * joints, 0.0f);
    for (int v = 0; v < V; ++v) {
        float y = m.mesh.vertices[v].y;
        float fj = (y + 0.5f) / (1.0f / float(joints));  // joint-space coord
        int j0 = std::min(joints - 1, std::max(0, static_cast<int>(fj)));
        int j1 = std::min(joints - 1, j0 + 1);
        float f = std::min(1.0f, std::max(0.0f, fj - float(j0)));
        f = std::round(f * 8.0f) / 8.0f;
        m.weights[std::size_t(v) * joints + j0] += 1.0f - f;
        m.weights[std::size_t(v) * joints + j1] += f;
    }

    // Two shape and three expression blendshapes: smooth radial bulges.
    m.n_shape = 2;
    m.n_expr = 3;
    m.shape_bs.assign(std::size_t(m.n_shape) * V * 3, 0.0f);
    m.expr_bs.assign(std::size_t(m.n_expr) * V * 3, 0.0f);
    for (int v = 0; v < V; ++v) {
        Vec3f p = m.mesh.vertices[v];
        Vec3f radial = normalized(Vec3f{p.x, 0, p.z});
        for (int b = 0; b < m.n_shape; ++b) {
            float amp = 0.05f * std::cos(float(b + 1) * p.y * 3.0f);
            float* row = m.shape_bs.data() + (std::size_t(b) * V + v) * 3;
            row[0] = amp * radial.x;
            row[1] = amp * radial.y;
            row[2] = amp * radial.z;
        }
        for (int e = 0; e < m.n_expr; ++e) {
            float amp = 0.04f * std::sin(float(e + 1) * (p.y * 2.0f + p.x));
            float* row = m.expr_bs.data() + (std::size_t(e) * V + v) * 3;
            row[0] = amp * radial.x;
            row[1] = 0.02f * std::cos(float(e + 1) * p.x * 4.0f);
            row[2] = amp * radial.z;
        }
    }

    // Face region: upper half; landmarks: four vertices of the top ring.
    m.mesh.labels.resize(V);
    for (int v = 0; v < V; ++v)
        m.mesh.labels[v] = m.mesh.vertices[v].y > 0 ? Region::Face : Region::NonFace;
    for (int s = 0; s < std::min(4, segments); ++s)
        m.landmarks.push_back((rings - 1) * segments + s * (segments / 4));

    m.validate();
    return m;
}

inline PoseParams zero_params(const SkinnedModel& m) {
    return PoseParams::zeros(m.joints.body_count(), m.n_shape, m.n_expr);
}

}  // namespace vpa::test
