#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ref/reference.hpp"
#include "vpa/error.hpp"
#include "vpa/geometry.hpp"
#include "vpa/rng.hpp"

using namespace vpa;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

TriMesh unit_triangle() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("obj loads a single triangle") {
    std::string path = temp_path("tri.obj");
    {
        std::ofstream f(path);
        f << "# tiny\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
    }
    TriMesh m = load_mesh(path);
    CHECK(m.vertices.size() == 3);
    CHECK(m.triangles.size() == 1);
    CHECK(!m.has_colors());
}

TEST_CASE("obj rejects zero face index") {
    std::string path = temp_path("bad.obj");
    {
        std::ofstream f(path);
        f << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n";
    }
    CHECK_THROWS_AS(load_mesh(path), Error);
}

TEST_CASE("obj reports a line number on parse errors") {
    std::string path = temp_path("bad2.obj");
    {
        std::ofstream f(path);
        f << "v 0 0 0\nv 1 0\n";
    }
    try {
        load_mesh(path);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
}

TEST_CASE("obj round trip preserves vertices and colors") {
    TriMesh m = unit_triangle();
    m.colors = {{0.1f, 0.2f, 0.3f}, {1, 0, 0}, {0, 0.5f, 1}};
    std::string path = temp_path("rt.obj");
    save_mesh(path, m);
    TriMesh r = load_mesh(path);
    REQUIRE(r.vertices.size() == m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        CHECK(norm(r.vertices[i] - m.vertices[i]) < 1e-6f);
        CHECK(norm(r.colors[i] - m.colors[i]) < 1e-6f);
    }
    CHECK(r.triangles == m.triangles);
}

TEST_CASE("closest point on triangle: spec cases") {
    Vec3f a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
    auto r1 = point_triangle_closest({0, 0, 1}, a, b, c);
    CHECK(norm(r1.point - Vec3f{0, 0, 0}) < 1e-6f);
    CHECK(r1.dist == doctest::Approx(1.0f));

    auto r2 = point_triangle_closest({0.25f, 0.25f, 2}, a, b, c);
    CHECK(norm(r2.point - Vec3f{0.25f, 0.25f, 0}) < 1e-6f);
    CHECK(r2.dist == doctest::Approx(2.0f));

    auto r3 = point_triangle_closest({2, 0, 0}, a, b, c);
    CHECK(norm(r3.point - Vec3f{1, 0, 0}) < 1e-6f);
    CHECK(r3.dist == doctest::Approx(1.0f));
}

TEST_CASE("closest point: barycentrics valid and beats vertex distances") {
    Pcg32 rng(7);
    for (int it = 0; it < 2000; ++it) {
        Vec3f a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec3f b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec3f c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec3f p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        auto r = point_triangle_closest(p, a, b, c);
        CHECK(r.bary.x >= -1e-5f);
        CHECK(r.bary.y >= -1e-5f);
        CHECK(r.bary.z >= -1e-5f);
        CHECK(r.bary.x + r.bary.y + r.bary.z == doctest::Approx(1.0f).epsilon(1e-4));
        Vec3f recon = a * r.bary.x + b * r.bary.y + c * r.bary.z;
        CHECK(norm(recon - r.point) < 1e-4f);
        CHECK(r.dist <= norm(p - a) + 1e-5f);
        CHECK(r.dist <= norm(p - b) + 1e-5f);
        CHECK(r.dist <= norm(p - c) + 1e-5f);
    }
}

TEST_CASE("closest point: degenerate triangle falls back to longest edge") {
    Vec3f a{0, 0, 0}, b{2, 0, 0}, c{1, 0, 0};  // collinear
    auto r = point_triangle_closest({1, 1, 0}, a, b, c);
    CHECK(r.dist == doctest::Approx(1.0f));
    CHECK(norm(r.point - Vec3f{1, 0, 0}) < 1e-6f);
}

TEST_CASE("chamfer: identity, hand value, symmetry") {
    std::vector<Vec3f> a = {{0, 0, 0}};
    std::vector<Vec3f> b = {{1, 0, 0}};
    CHECK(chamfer_distance(a, a) == doctest::Approx(0.0));
    CHECK(chamfer_distance(a, b) == doctest::Approx(2.0));

    Pcg32 rng(3);
    std::vector<Vec3f> u, v;
    for (int i = 0; i < 40; ++i) {
        u.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        v.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    }
    CHECK(chamfer_distance(u, v) == doctest::Approx(chamfer_distance(v, u)));
    CHECK(chamfer_distance(u, v) == doctest::Approx(ref::chamfer_serial(u, v)));
    CHECK(chamfer_distance(u, v) >= 0.0);
    CHECK_THROWS_AS(chamfer_distance(u, {}), Error);
}

TEST_CASE("projection: spec cases and round trip") {
    Camera cam;
    cam.fl_x = cam.fl_y = 100;
    cam.cx = cam.cy = 50;
    cam.width = cam.height = 100;

    Vec2f p1 = project(cam, {0, 0, 1});
    CHECK(p1.x == doctest::Approx(50.0f));
    CHECK(p1.y == doctest::Approx(50.0f));

    Vec2f p2 = project(cam, {0.5f, 0, 1});
    CHECK(p2.x == doctest::Approx(100.0f));
    CHECK(p2.y == doctest::Approx(50.0f));

    CHECK_THROWS_AS(project(cam, {0, 0, -1}), Error);

    // project then unproject at a known depth
    Pcg32 rng(11);
    for (int i = 0; i < 100; ++i) {
        Vec2f px{rng.uniform(0, 100), rng.uniform(0, 100)};
        float depth = rng.uniform(0.5f, 4.0f);
        Vec3f world = unproject(cam, px, depth);
        Vec2f back = project(cam, world);
        CHECK(std::abs(back.x - px.x) < 1e-4f);
        CHECK(std::abs(back.y - px.y) < 1e-4f);
    }
}

TEST_CASE("projection respects the camera pose") {
    Camera cam;
    cam.fl_x = cam.fl_y = 100;
    cam.cx = cam.cy = 50;
    cam.width = cam.height = 100;
    // camera at (0,0,-2) looking down +Z
    cam.cam_to_world.t = {0, 0, -2};
    Vec2f p = project(cam, {0, 0, 0});
    CHECK(p.x == doctest::Approx(50.0f));
    CHECK(p.y == doctest::Approx(50.0f));
}

TEST_CASE("bounding sphere: cube, single point, translation") {
    TriMesh cube;
    for (int i = 0; i < 8; ++i)
        cube.vertices.push_back({float(i & 1), float((i >> 1) & 1), float((i >> 2) & 1)});
    cube.triangles = {{0, 1, 2}};
    Sphere s = bounding_sphere(cube);
    CHECK(norm(s.center - Vec3f{0.5f, 0.5f, 0.5f}) < 0.1f);
    CHECK(s.radius >= std::sqrt(3.0f) / 2 - 1e-5f);
    CHECK(s.radius <= 1.5f * std::sqrt(3.0f) / 2);

    std::vector<Vec3f> one = {{3, 4, 5}};
    Sphere s1 = bounding_sphere(one);
    CHECK(s1.radius == 0.0f);

    TriMesh moved = cube;
    for (auto& v : moved.vertices) v += Vec3f{10, -5, 2};
    Sphere s2 = bounding_sphere(moved);
    CHECK(norm(s2.center - (s.center + Vec3f{10, -5, 2})) < 1e-4f);
    CHECK(s2.radius == doctest::Approx(s.radius));
}

TEST_CASE("ray-sphere interval") {
    Sphere s{{0, 0, 0}, 1.0f};
    auto hit = ray_sphere_range({0, 0, -3}, {0, 0, 1}, s);
    REQUIRE(hit.has_value());
    CHECK(hit->first == doctest::Approx(2.0f));
    CHECK(hit->second == doctest::Approx(4.0f));
    CHECK(!ray_sphere_range({0, 5, -3}, {0, 0, 1}, s).has_value());
}

TEST_SUITE_END();
