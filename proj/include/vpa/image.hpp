#pragma once

#include <string>
#include <vector>

#include "vpa/vec.hpp"

namespace vpa {

// Row-major float image, channels interleaved, values nominally in [0,1].
struct Image {
    int width = 0, height = 0, channels = 0;
    std::vector<float> data;

    Image() = default;
    Image(int w, int h, int c) : width(w), height(h), channels(c), data(std::size_t(w) * h * c, 0.0f) {}

    float& at(int x, int y, int c) { return data[(std::size_t(y) * width + x) * channels + c]; }
    const float& at(int x, int y, int c) const {
        return data[(std::size_t(y) * width + x) * channels + c];
    }
    Vec3f rgb(int x, int y) const {
        return {at(x, y, 0), at(x, y, channels > 1 ? 1 : 0), at(x, y, channels > 2 ? 2 : 0)};
    }
    void set_rgb(int x, int y, const Vec3f& v) {
        at(x, y, 0) = v.x;
        if (channels > 1) at(x, y, 1) = v.y;
        if (channels > 2) at(x, y, 2) = v.z;
    }
    bool empty() const { return data.empty(); }
};

// 8-bit PNG, gray or RGB (alpha is dropped on load).
Image load_png(const std::string& path);
void save_png(const std::string& path, const Image& img);

// Separable Gaussian, kernel radius ceil(3*sigma), edges clamped.
// sigma <= 0 returns the input unchanged.
Image gaussian_blur(const Image& img, float sigma);

// Bilinear sample at pixel coordinates (x refers to the pixel center grid:
// the center of pixel (0,0) is at (0.5, 0.5)). Coordinates are clamped to
// the image. Optional derivatives w.r.t. x and y per channel.
void bilinear_sample(const Image& img, float x, float y, float* out, float* dx = nullptr,
                     float* dy = nullptr);

// k x k average pooling; width/height must be divisible by k.
Image downsample_avg(const Image& img, int k);

}  // namespace vpa
