#pragma once

// Plain serial reference implementations used by tests and the benchmark as
// oracles for the OpenMP/BVH-accelerated kernels in the main library. These
// deliberately avoid the acceleration structures they are used to check.

#include <span>
#include <vector>

#include "vpa/geometry.hpp"
#include "vpa/vec.hpp"

namespace vpa::ref {

struct BruteHit {
    std::uint32_t triangle = 0;
    Vec3f point;
    float distance = 0;
};

// Linear scan over all triangles; ties broken by lowest triangle index.
BruteHit brute_nearest_triangle(const TriMesh& mesh, const Vec3f& p);

// Single-threaded chamfer with the same formula as vpa::chamfer_distance.
double chamfer_serial(std::span<const Vec3f> a, std::span<const Vec3f> b);

// Trilinear interpolation of one hash-grid level written out longhand:
// corner features are fetched through `fetch(ix, iy, iz)` supplied by the
// caller, so this stays independent of the production indexing code.
template <typename FetchFn>
void trilinear_reference(float px, float py, float pz, int res, int features, FetchFn&& fetch,
                         float* out) {
    auto clampi = [&](int v) { return v < 0 ? 0 : (v > res - 1 ? res - 1 : v); };
    float cx = px < 0 ? 0 : (px > float(res) ? float(res) : px);
    float cy = py < 0 ? 0 : (py > float(res) ? float(res) : py);
    float cz = pz < 0 ? 0 : (pz > float(res) ? float(res) : pz);
    int x0 = clampi(static_cast<int>(cx)), y0 = clampi(static_cast<int>(cy)),
        z0 = clampi(static_cast<int>(cz));
    float fx = cx - x0, fy = cy - y0, fz = cz - z0;
    for (int f = 0; f < features; ++f) out[f] = 0;
    std::vector<float> corner(features);
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                float w = (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy) * (dz ? fz : 1 - fz);
                fetch(x0 + dx, y0 + dy, z0 + dz, corner.data());
                for (int f = 0; f < features; ++f) out[f] += w * corner[f];
            }
}

// Emission-absorption compositing written as the direct recurrence.
void composite_serial(std::span<const float> sigma, std::span<const Vec3f> color,
                      std::span<const float> delta, const Vec3f& background, Vec3f* out_color,
                      float* out_opacity);

}  // namespace vpa::ref
