#include "reference.hpp"

#include <cmath>
#include <limits>

namespace vpa::ref {

BruteHit brute_nearest_triangle(const TriMesh& mesh, const Vec3f& p) {
    BruteHit best;
    best.distance = std::numeric_limits<float>::max();
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
        auto [a, b, c] = mesh.triangle_points(t);
        ClosestPoint cp = point_triangle_closest(p, a, b, c);
        if (cp.dist < best.distance) {
            best.distance = cp.dist;
            best.triangle = t;
            best.point = cp.point;
        }
    }
    return best;
}

double chamfer_serial(std::span<const Vec3f> a, std::span<const Vec3f> b) {
    auto one_sided = [](std::span<const Vec3f> from, std::span<const Vec3f> to) {
        double sum = 0;
        for (const Vec3f& p : from) {
            float best = std::numeric_limits<float>::max();
            for (const Vec3f& q : to) {
                float d2 = norm2(p - q);
                if (d2 < best) best = d2;
            }
            sum += best;
        }
        return sum / static_cast<double>(from.size());
    };
    return one_sided(a, b) + one_sided(b, a);
}

void composite_serial(std::span<const float> sigma, std::span<const Vec3f> color,
                      std::span<const float> delta, const Vec3f& background, Vec3f* out_color,
                      float* out_opacity) {
    double T = 1.0;
    double cr = 0, cg = 0, cb = 0, opacity = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        double alpha = 1.0 - std::exp(-double(sigma[i]) * double(delta[i]));
        double w = T * alpha;
        cr += w * color[i].x;
        cg += w * color[i].y;
        cb += w * color[i].z;
        opacity += w;
        T *= 1.0 - alpha;
    }
    out_color->x = static_cast<float>(cr + (1.0 - opacity) * background.x);
    out_color->y = static_cast<float>(cg + (1.0 - opacity) * background.y);
    out_color->z = static_cast<float>(cb + (1.0 - opacity) * background.z);
    *out_opacity = static_cast<float>(opacity);
}

}  // namespace vpa::ref
