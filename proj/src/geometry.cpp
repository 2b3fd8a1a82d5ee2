#include "vpa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vpa/error.hpp"
#include "vpa/parallel.hpp"

namespace vpa {

void TriMesh::validate() const {
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k)
            require(tri[k] < vertices.size(), "triangle ", t, " references vertex ", tri[k],
                    " but mesh has ", vertices.size(), " vertices");
        require(tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2],
                "triangle ", t, " repeats a vertex index");
    }
    if (!colors.empty())
        require(colors.size() == vertices.size(), "color count ", colors.size(),
                " does not match vertex count ", vertices.size());
    if (!labels.empty())
        require(labels.size() == vertices.size(), "label count ", labels.size(),
                " does not match vertex count ", vertices.size());
}

TriMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open mesh file: ", path);
    TriMesh mesh;
    bool any_color = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            float x, y, z;
            if (!(ls >> x >> y >> z)) fail(path, ":", line_no, ": malformed vertex line");
            mesh.vertices.push_back({x, y, z});
            float r, g, b;
            if (ls >> r >> g >> b) {
                mesh.colors.resize(mesh.vertices.size(), Vec3f{});
                mesh.colors.back() = {r, g, b};
                any_color = true;
            } else if (any_color) {
                fail(path, ":", line_no, ": vertex without color in a colored mesh");
            }
        } else if (tag == "f") {
            std::array<std::uint32_t, 3> tri;
            for (int k = 0; k < 3; ++k) {
                std::string tok;
                if (!(ls >> tok)) fail(path, ":", line_no, ": face needs three indices");
                // Take the vertex index before any '/vt/vn' suffix.
                long idx = std::strtol(tok.c_str(), nullptr, 10);
                if (idx <= 0 || static_cast<std::size_t>(idx) > mesh.vertices.size())
                    fail(path, ":", line_no, ": face index ", idx, " out of range (1..",
                         mesh.vertices.size(), ")");
                tri[k] = static_cast<std::uint32_t>(idx - 1);
            }
            std::string extra;
            if (ls >> extra) fail(path, ":", line_no, ": only triangle faces are supported");
            mesh.triangles.push_back(tri);
        }
        // vt / vn / o / g / usemtl etc. are ignored.
    }
    if (any_color) mesh.colors.resize(mesh.vertices.size(), Vec3f{});
    mesh.validate();
    return mesh;
}

void save_mesh(const std::string& path, const TriMesh& mesh) {
    std::ofstream out(path);
    require(out.good(), "cannot write mesh file: ", path);
    char buf[256];
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3f& v = mesh.vertices[i];
        if (mesh.has_colors()) {
            const Vec3f& c = mesh.colors[i];
            std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g %.9g %.9g %.9g\n", v.x, v.y, v.z,
                          c.x, c.y, c.z);
        } else {
            std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        }
        out << buf;
    }
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    require(out.good(), "write failed: ", path);
}

namespace {

ClosestPoint closest_on_segment(const Vec3f& p, const Vec3f& a, const Vec3f& b, int ia, int ib) {
    Vec3f ab = b - a;
    float denom = norm2(ab);
    float t = denom > 0 ? dot(p - a, ab) / denom : 0.0f;
    t = std::clamp(t, 0.0f, 1.0f);
    ClosestPoint r;
    r.point = a + ab * t;
    r.dist = norm(p - r.point);
    r.bary = Vec3f{};
    r.bary[ia] = 1.0f - t;
    r.bary[ib] = t;
    return r;
}

}  // namespace

ClosestPoint point_triangle_closest(const Vec3f& p, const Vec3f& a, const Vec3f& b, const Vec3f& c) {
    // Ericson, Real-Time Collision Detection, 5.1.5.
    Vec3f ab = b - a, ac = c - a, ap = p - a;
    float d1 = dot(ab, ap), d2 = dot(ac, ap);

    // Degenerate triangle: fall back to the longest edge.
    float area2 = norm2(cross(ab, ac));
    float scale = std::max({norm2(ab), norm2(ac), norm2(b - c)});
    if (area2 <= 1e-24f || area2 <= 1e-12f * scale * scale) {
        float lab = norm2(ab), lac = norm2(ac), lbc = norm2(b - c);
        if (lab >= lac && lab >= lbc) return closest_on_segment(p, a, b, 0, 1);
        if (lac >= lbc) return closest_on_segment(p, a, c, 0, 2);
        return closest_on_segment(p, b, c, 1, 2);
    }

    auto make = [&](float u, float v, float w) {
        ClosestPoint r;
        r.point = a * u + b * v + c * w;
        r.dist = norm(p - r.point);
        r.bary = {u, v, w};
        return r;
    };

    if (d1 <= 0 && d2 <= 0) return make(1, 0, 0);

    Vec3f bp = p - b;
    float d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return make(0, 1, 0);

    float vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        float v = d1 / (d1 - d3);
        return make(1 - v, v, 0);
    }

    Vec3f cp = p - c;
    float d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return make(0, 0, 1);

    float vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        float w = d2 / (d2 - d6);
        return make(1 - w, 0, w);
    }

    float va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        float w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return make(0, 1 - w, w);
    }

    float denom = 1.0f / (va + vb + vc);
    float v = vb * denom, w = vc * denom;
    return make(1 - v - w, v, w);
}

double chamfer_distance(std::span<const Vec3f> a, std::span<const Vec3f> b) {
    require(!a.empty() && !b.empty(), "chamfer_distance: empty point set");
    auto one_sided = [](std::span<const Vec3f> from, std::span<const Vec3f> to) {
        std::vector<float> mins(from.size());
        parallel_for(static_cast<std::int64_t>(from.size()), [&](std::int64_t i) {
            float best = std::numeric_limits<float>::max();
            const Vec3f p = from[i];
            for (const Vec3f& q : to) best = std::min(best, norm2(p - q));
            mins[i] = best;
        });
        double sum = 0;
        for (float m : mins) sum += m;
        return sum / static_cast<double>(from.size());
    };
    return one_sided(a, b) + one_sided(b, a);
}

Vec2f project(const Camera& cam, const Vec3f& p_world) {
    Vec3f p = cam.to_camera(p_world);
    require(p.z > 1e-9f, "project: point behind camera (z=", p.z, ")");
    return {cam.fl_x * p.x / p.z + cam.cx, cam.fl_y * p.y / p.z + cam.cy};
}

Vec3f unproject(const Camera& cam, const Vec2f& pixel, float depth) {
    Vec3f p_cam{(pixel.x - cam.cx) / cam.fl_x * depth, (pixel.y - cam.cy) / cam.fl_y * depth, depth};
    return cam.cam_to_world.apply(p_cam);
}

Sphere bounding_sphere(std::span<const Vec3f> points) {
    require(!points.empty(), "bounding_sphere: empty point set");
    // Ritter: far-point pair seeds the sphere, then grow over all points.
    const Vec3f& p0 = points[0];
    auto farthest = [&](const Vec3f& from) {
        std::size_t best = 0;
        float bd = -1;
        for (std::size_t i = 0; i < points.size(); ++i) {
            float d = norm2(points[i] - from);
            if (d > bd) { bd = d; best = i; }
        }
        return best;
    };
    Vec3f a = points[farthest(p0)];
    Vec3f b = points[farthest(a)];
    Vec3f center = (a + b) * 0.5f;
    float radius = norm(b - a) * 0.5f;
    for (const Vec3f& p : points) {
        float d = norm(p - center);
        if (d > radius) {
            float nr = (radius + d) * 0.5f;
            center += (p - center) * ((nr - radius) / d);
            radius = nr;
        }
    }
    return {center, radius};
}

Sphere bounding_sphere(const TriMesh& mesh) {
    return bounding_sphere(std::span<const Vec3f>(mesh.vertices));
}

std::optional<std::pair<float, float>> ray_sphere_range(const Vec3f& origin, const Vec3f& dir,
                                                        const Sphere& s) {
    Vec3f oc = origin - s.center;
    float b = dot(oc, dir);
    float c = norm2(oc) - s.radius * s.radius;
    float disc = b * b - c;
    if (disc < 0) return std::nullopt;
    float sq = std::sqrt(disc);
    float t0 = -b - sq, t1 = -b + sq;
    if (t1 <= 0) return std::nullopt;
    return std::make_pair(std::max(t0, 0.0f), t1);
}

}  // namespace vpa
