#include "vpa/bvh.hpp"

#include <algorithm>
#include <numeric>

#include "vpa/error.hpp"
#include "vpa/parallel.hpp"

namespace vpa {

void Bvh::build(const TriMesh& mesh) {
    require(!mesh.triangles.empty(), "Bvh::build: mesh has no triangles");
    const std::size_t n = mesh.triangles.size();
    tri_a_.resize(n);
    tri_b_.resize(n);
    tri_c_.resize(n);
    std::vector<Vec3f> centroids(n);
    for (std::size_t t = 0; t < n; ++t) {
        auto [a, b, c] = mesh.triangle_points(static_cast<std::uint32_t>(t));
        tri_a_[t] = a;
        tri_b_[t] = b;
        tri_c_[t] = c;
        centroids[t] = (a + b + c) / 3.0f;
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.clear();
    nodes_.reserve(2 * n);
    build_node(0, static_cast<std::uint32_t>(n), centroids);
}

std::uint32_t Bvh::build_node(std::uint32_t begin, std::uint32_t end, std::vector<Vec3f>& centroids) {
    std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    for (std::uint32_t i = begin; i < end; ++i) {
        std::uint32_t t = order_[i];
        box.grow(tri_a_[t]);
        box.grow(tri_b_[t]);
        box.grow(tri_c_[t]);
    }
    nodes_[idx].box = box;
    std::uint32_t count = end - begin;
    if (count <= kLeafSize) {
        // Sorted leaves keep the layout independent of the split history.
        std::sort(order_.begin() + begin, order_.begin() + end);
        nodes_[idx].first = begin;
        nodes_[idx].count = count;
        return idx;
    }
    Vec3f extent = box.hi - box.lo;
    int axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > extent[axis]) axis = 2;
    std::uint32_t mid = begin + count / 2;
    // Full sort with an index tie-break makes the median split deterministic.
    std::sort(order_.begin() + begin, order_.begin() + end,
              [&](std::uint32_t a, std::uint32_t b) {
                  float ca = centroids[a][axis], cb = centroids[b][axis];
                  return ca < cb || (ca == cb && a < b);
              });
    std::uint32_t left = build_node(begin, mid, centroids);
    std::uint32_t right = build_node(mid, end, centroids);
    nodes_[idx].left = left;
    nodes_[idx].right = right;
    return idx;
}

NearestHit Bvh::nearest_triangle(const Vec3f& p) const {
    NearestHit best;
    best.distance = std::numeric_limits<float>::max();
    best.triangle = std::numeric_limits<std::uint32_t>::max();
    float best_d2 = std::numeric_limits<float>::max();

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        std::uint32_t ni = stack[--top];
        const Node& node = nodes_[ni];
        // Slack of a few ulps keeps boxes at exactly the best distance alive,
        // so equal-distance candidates still get visited for the index
        // tie-break despite sqrt/square rounding.
        if (node.box.dist2(p) > best_d2 * 1.00001f + 1e-30f) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                std::uint32_t t = order_[i];
                ClosestPoint cp = point_triangle_closest(p, tri_a_[t], tri_b_[t], tri_c_[t]);
                if (cp.dist < best.distance ||
                    (cp.dist == best.distance && t < best.triangle)) {
                    best.distance = cp.dist;
                    best.triangle = t;
                    best.point = cp.point;
                    best.bary = cp.bary;
                    best_d2 = cp.dist * cp.dist;
                }
            }
        } else {
            float dl = nodes_[node.left].box.dist2(p);
            float dr = nodes_[node.right].box.dist2(p);
            // Push the farther child first so the nearer one is explored next.
            if (dl <= dr) {
                stack[top++] = node.right;
                stack[top++] = node.left;
            } else {
                stack[top++] = node.left;
                stack[top++] = node.right;
            }
        }
    }
    return best;
}

void Bvh::nearest_batch(std::span<const Vec3f> points, std::span<NearestHit> out) const {
    require(points.size() == out.size(), "nearest_batch: size mismatch");
    parallel_for(static_cast<std::int64_t>(points.size()),
                 [&](std::int64_t i) { out[i] = nearest_triangle(points[i]); });
}

}  // namespace vpa
