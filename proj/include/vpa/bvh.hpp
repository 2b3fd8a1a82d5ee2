#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vpa/geometry.hpp"

namespace vpa {

struct Aabb {
    Vec3f lo{1e30f, 1e30f, 1e30f};
    Vec3f hi{-1e30f, -1e30f, -1e30f};

    void grow(const Vec3f& p) {
        for (int k = 0; k < 3; ++k) {
            if (p[k] < lo[k]) lo[k] = p[k];
            if (p[k] > hi[k]) hi[k] = p[k];
        }
    }
    void grow(const Aabb& o) {
        grow(o.lo);
        grow(o.hi);
    }
    bool contains(const Vec3f& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
    }
    float dist2(const Vec3f& p) const {
        float d2 = 0;
        for (int k = 0; k < 3; ++k) {
            float d = (p[k] < lo[k]) ? lo[k] - p[k] : (p[k] > hi[k] ? p[k] - hi[k] : 0.0f);
            d2 += d * d;
        }
        return d2;
    }
};

struct NearestHit {
    std::uint32_t triangle = 0;
    Vec3f point;
    float distance = 0;
    Vec3f bary;
};

// Bounding volume hierarchy over a mesh's triangles. Median split on the
// longest box axis, leaves hold at most 4 triangles; the build is fully
// deterministic so identical meshes produce identical layouts.
class Bvh {
  public:
    struct Node {
        Aabb box;
        std::uint32_t left = 0;   // internal: child node index
        std::uint32_t right = 0;  // internal: child node index
        std::uint32_t first = 0;  // leaf: offset into order()
        std::uint32_t count = 0;  // leaf: triangle count (> 0 marks a leaf)
        bool is_leaf() const { return count > 0; }
    };

    static constexpr std::uint32_t kLeafSize = 4;

    Bvh() = default;
    explicit Bvh(const TriMesh& mesh) { build(mesh); }

    void build(const TriMesh& mesh);

    NearestHit nearest_triangle(const Vec3f& p) const;
    float distance_to_surface(const Vec3f& p) const { return nearest_triangle(p).distance; }

    // OpenMP-parallel query batch; each output slot is written by exactly one
    // iteration, so results are reproducible for any thread count.
    void nearest_batch(std::span<const Vec3f> points, std::span<NearestHit> out) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::uint32_t>& order() const { return order_; }
    std::size_t triangle_count() const { return tri_a_.size(); }
    bool empty() const { return nodes_.empty(); }

  private:
    std::uint32_t build_node(std::uint32_t begin, std::uint32_t end,
                             std::vector<Vec3f>& centroids);

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;  // triangle index permutation
    // Flat triangle copies in input order; queries stay valid if the source
    // mesh moves.
    std::vector<Vec3f> tri_a_, tri_b_, tri_c_;
};

}  // namespace vpa
