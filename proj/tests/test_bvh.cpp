#include <doctest.h>

#include <vector>

#include "ref/reference.hpp"
#include "vpa/bvh.hpp"
#include "vpa/error.hpp"
#include "vpa/rng.hpp"

using namespace vpa;

namespace {

// Random triangle soup inside the unit box with clustered sizes, a decent
// stand-in for scan geometry.
TriMesh random_soup(int triangles, std::uint64_t seed) {
    Pcg32 rng(seed);
    TriMesh m;
    for (int t = 0; t < triangles; ++t) {
        Vec3f base{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        float s = rng.uniform(0.01f, 0.2f);
        Vec3f a = base;
        Vec3f b = base + Vec3f{rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s)};
        Vec3f c = base + Vec3f{rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s)};
        std::uint32_t i = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(a);
        m.vertices.push_back(b);
        m.vertices.push_back(c);
        m.triangles.push_back({i, i + 1, i + 2});
    }
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("bvh");

TEST_CASE("single triangle builds a single leaf") {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    Bvh bvh(m);
    REQUIRE(bvh.nodes().size() == 1);
    CHECK(bvh.nodes()[0].is_leaf());
    CHECK(bvh.nodes()[0].count == 1);
}

TEST_CASE("every triangle lands in exactly one leaf") {
    TriMesh m = random_soup(1000, 42);
    Bvh bvh(m);
    std::vector<int> seen(m.triangles.size(), 0);
    for (const auto& node : bvh.nodes()) {
        if (!node.is_leaf()) continue;
        CHECK(node.count <= Bvh::kLeafSize);
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
            seen[bvh.order()[i]]++;
    }
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("node boxes contain their triangles") {
    TriMesh m = random_soup(500, 1);
    Bvh bvh(m);
    // walk: leaf boxes contain triangle verts; internal boxes contain children
    for (const auto& node : bvh.nodes()) {
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                auto [a, b, c] = m.triangle_points(bvh.order()[i]);
                CHECK(node.box.contains(a));
                CHECK(node.box.contains(b));
                CHECK(node.box.contains(c));
            }
        } else {
            CHECK(node.box.contains(bvh.nodes()[node.left].box.lo));
            CHECK(node.box.contains(bvh.nodes()[node.left].box.hi));
            CHECK(node.box.contains(bvh.nodes()[node.right].box.lo));
            CHECK(node.box.contains(bvh.nodes()[node.right].box.hi));
        }
    }
}

TEST_CASE("rebuild is deterministic") {
    TriMesh m = random_soup(800, 9);
    Bvh a(m), b(m);
    REQUIRE(a.nodes().size() == b.nodes().size());
    CHECK(a.order() == b.order());
    for (std::size_t i = 0; i < a.nodes().size(); ++i) {
        CHECK(a.nodes()[i].left == b.nodes()[i].left);
        CHECK(a.nodes()[i].first == b.nodes()[i].first);
        CHECK(a.nodes()[i].count == b.nodes()[i].count);
    }
}

TEST_CASE("vertex shared by two triangles: lowest index wins") {
    TriMesh m;
    // triangles 0 and 1 share vertex (0,0,0)
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    m.triangles = {{0, 1, 2}, {0, 3, 4}};
    Bvh bvh(m);
    NearestHit hit = bvh.nearest_triangle({0, 0, 0});
    CHECK(hit.distance == 0.0f);
    CHECK(hit.triangle == 0);
}

TEST_CASE("matches brute force on random meshes") {
    for (std::uint64_t seed : {7ull, 8ull}) {
        TriMesh m = random_soup(600, seed);
        Bvh bvh(m);
        Pcg32 rng(seed * 101);
        for (int q = 0; q < 2000; ++q) {
            Vec3f p{rng.uniform(-1.5f, 1.5f), rng.uniform(-1.5f, 1.5f), rng.uniform(-1.5f, 1.5f)};
            NearestHit hit = bvh.nearest_triangle(p);
            ref::BruteHit brute = ref::brute_nearest_triangle(m, p);
            CHECK(hit.distance == brute.distance);
            CHECK(hit.triangle == brute.triangle);
        }
    }
}

TEST_CASE("query far outside the bounds returns a finite hit") {
    TriMesh m = random_soup(50, 3);
    Bvh bvh(m);
    NearestHit hit = bvh.nearest_triangle({100, 100, 100});
    CHECK(std::isfinite(hit.distance));
    CHECK(hit.triangle < m.triangles.size());
}

TEST_CASE("distance_to_surface equals nearest_triangle distance") {
    TriMesh m = random_soup(300, 5);
    Bvh bvh(m);
    Pcg32 rng(77);
    for (int q = 0; q < 1000; ++q) {
        Vec3f p{rng.uniform(-1.5f, 1.5f), rng.uniform(-1.5f, 1.5f), rng.uniform(-1.5f, 1.5f)};
        CHECK(bvh.distance_to_surface(p) == bvh.nearest_triangle(p).distance);
    }
}

TEST_CASE("planar offset distance") {
    // two triangles forming the unit square in z=0
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    Bvh bvh(m);
    CHECK(bvh.distance_to_surface({0.5f, 0.5f, 0.25f}) == doctest::Approx(0.25f));
    CHECK(bvh.distance_to_surface({0.5f, 0.5f, 0.0f}) == doctest::Approx(0.0f));
}

TEST_CASE("batched queries agree with single queries") {
    TriMesh m = random_soup(400, 13);
    Bvh bvh(m);
    Pcg32 rng(5);
    std::vector<Vec3f> pts(500);
    for (auto& p : pts) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::vector<NearestHit> hits(pts.size());
    bvh.nearest_batch(pts, hits);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        NearestHit h = bvh.nearest_triangle(pts[i]);
        CHECK(h.triangle == hits[i].triangle);
        CHECK(h.distance == hits[i].distance);
    }
}

TEST_CASE("empty mesh is rejected") {
    TriMesh m;
    m.vertices = {{0, 0, 0}};
    Bvh bvh;
    CHECK_THROWS_AS(bvh.build(m), Error);
}

TEST_SUITE_END();
