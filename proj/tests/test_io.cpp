#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "vpa/blobfile.hpp"
#include "vpa/error.hpp"
#include "vpa/image.hpp"
#include "vpa/rng.hpp"

using namespace vpa;

TEST_SUITE_BEGIN("io");

TEST_CASE("png round trip within quantization") {
    Pcg32 rng(1);
    Image img(17, 9, 3);
    for (float& v : img.data) v = rng.uniform();
    std::string path = test::temp_file("rt.png");
    save_png(path, img);
    Image back = load_png(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    REQUIRE(back.channels == 3);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5f / 255.0f + 1e-6f);
}

TEST_CASE("gray png round trip") {
    Image img(5, 4, 1);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = float(i) / 20.0f;
    std::string path = test::temp_file("gray.png");
    save_png(path, img);
    Image back = load_png(path);
    CHECK(back.channels == 1);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5f / 255.0f + 1e-6f);
}

TEST_CASE("gaussian blur preserves constants and mass") {
    Image img(16, 16, 1);
    for (float& v : img.data) v = 0.37f;
    Image b = gaussian_blur(img, 2.0f);
    for (float v : b.data) CHECK(v == doctest::Approx(0.37f).epsilon(1e-5));

    Image spike(31, 31, 1);
    spike.at(15, 15, 0) = 1.0f;
    Image bs = gaussian_blur(spike, 1.5f);
    double mass = 0;
    for (float v : bs.data) mass += v;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(bs.at(15, 15, 0) < 1.0f);
    CHECK(bs.at(15, 15, 0) > bs.at(12, 15, 0));
}

TEST_CASE("bilinear sampling: values and gradients") {
    Image img(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at(x, y, 0) = float(x) + 10.0f * float(y);

    float v;
    bilinear_sample(img, 1.5f, 2.5f, &v);  // pixel center (1,2)
    CHECK(v == doctest::Approx(21.0f));
    bilinear_sample(img, 2.0f, 2.5f, &v);  // halfway between pixels 1 and 2 in x
    CHECK(v == doctest::Approx(21.5f));

    // gradient against central differences at interior non-lattice points
    Pcg32 rng(3);
    for (int i = 0; i < 200; ++i) {
        float x = rng.uniform(1.1f, 2.9f), y = rng.uniform(1.1f, 2.9f);
        float val, dx, dy;
        bilinear_sample(img, x, y, &val, &dx, &dy);
        const float h = 1e-3f;
        float vp, vm;
        bilinear_sample(img, x + h, y, &vp);
        bilinear_sample(img, x - h, y, &vm);
        CHECK(dx == doctest::Approx((vp - vm) / (2 * h)).epsilon(1e-2));
        bilinear_sample(img, x, y + h, &vp);
        bilinear_sample(img, x, y - h, &vm);
        CHECK(dy == doctest::Approx((vp - vm) / (2 * h)).epsilon(1e-2));
    }
}

TEST_CASE("downsample averages blocks") {
    Image img(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at(x, y, 0) = float(x < 2 && y < 2 ? 1 : 0);
    Image d = downsample_avg(img, 2);
    CHECK(d.width == 2);
    CHECK(d.at(0, 0, 0) == doctest::Approx(1.0f));
    CHECK(d.at(1, 0, 0) == doctest::Approx(0.0f));
}

TEST_CASE("blobfile round trip with meta") {
    BlobFile bf;
    std::vector<float> f = {1.5f, -2.0f, 3.25f};
    std::vector<std::uint32_t> u = {7, 9};
    std::vector<std::uint8_t> b = {0, 1, 1};
    bf.put_f32("floats", f, {3});
    bf.put_u32("ints", u);
    bf.put_u8("flags", b);
    bf.meta["answer"] = 42;
    std::string path = test::temp_file("blob.bin");
    bf.write(path, "RIG1");

    BlobFile r = BlobFile::read(path, "RIG1");
    CHECK(r.get_f32("floats") == f);
    CHECK(r.get_u32("ints") == u);
    CHECK(r.get_u8("flags") == b);
    CHECK(r.meta["answer"] == 42);
    CHECK(r.shape("floats") == std::vector<std::int64_t>{3});
    CHECK_THROWS_AS(r.get_f32("missing"), Error);
    CHECK_THROWS_AS(BlobFile::read(path, "CKP1"), Error);
}

TEST_SUITE_END();
