#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vpa/vec.hpp"

namespace vpa {

enum class Region : std::uint8_t { NonFace = 0, Face = 1 };

struct TriMesh {
    std::vector<Vec3f> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<Vec3f> colors;          // optional, same length as vertices, values in [0,1]
    std::vector<Region> labels;         // optional, same length as vertices

    bool has_colors() const { return !colors.empty(); }
    bool has_labels() const { return !labels.empty(); }

    // Throws on broken indices, repeated indices within a triangle, or
    // attribute arrays of the wrong length.
    void validate() const;

    std::array<Vec3f, 3> triangle_points(std::uint32_t t) const {
        const auto& tri = triangles[t];
        return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
    }
};

// OBJ subset: "v x y z [r g b]" and "f a b c" (1-based, optional /vt /vn
// suffixes are ignored). Per-vertex RGB follows the common xyzrgb extension.
TriMesh load_mesh(const std::string& path);
void save_mesh(const std::string& path, const TriMesh& mesh);

struct ClosestPoint {
    Vec3f point;
    float dist = 0;
    Vec3f bary;  // barycentric coords w.r.t. (a, b, c)
};

// Closest point in the closed triangle (a,b,c). Degenerate triangles fall
// back to the closest point on the longest edge.
ClosestPoint point_triangle_closest(const Vec3f& p, const Vec3f& a, const Vec3f& b, const Vec3f& c);

// Symmetric mean of squared nearest-neighbor distances, a->b plus b->a.
double chamfer_distance(std::span<const Vec3f> a, std::span<const Vec3f> b);

struct Camera {
    Rigidf cam_to_world;   // right-handed, +Z forward
    float fl_x = 0, fl_y = 0;
    float cx = 0, cy = 0;
    int width = 0, height = 0;

    Vec3f origin() const { return cam_to_world.t; }
    Vec3f to_camera(const Vec3f& p_world) const { return cam_to_world.inverse().apply(p_world); }
};

// Pinhole projection to pixel coordinates. Throws when the point is not in
// front of the camera (camera-space z <= 1e-9).
Vec2f project(const Camera& cam, const Vec3f& p_world);

// Pixel + depth back to a world-space point (depth along camera +Z).
Vec3f unproject(const Camera& cam, const Vec2f& pixel, float depth);

struct Sphere {
    Vec3f center;
    float radius = 0;
};

// Ritter bounding sphere; radius within 1.5x of optimal.
Sphere bounding_sphere(const TriMesh& mesh);
Sphere bounding_sphere(std::span<const Vec3f> points);

struct Ray {
    Vec3f origin;
    Vec3f dir;  // unit length
    float t_near = 0, t_far = 0;
};

// Intersection interval of a ray with a sphere; empty optional on miss.
std::optional<std::pair<float, float>> ray_sphere_range(const Vec3f& origin, const Vec3f& dir,
                                                        const Sphere& s);

}  // namespace vpa
