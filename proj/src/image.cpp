#include "vpa/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "vpa/error.hpp"

namespace vpa {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    require(fp != nullptr, "cannot open image: ", path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("failed to decode PNG: ", path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    int channels = png_get_channels(png, info);
    require(channels == 1 || channels == 3, "unsupported PNG channel count: ", channels);

    std::vector<png_byte> row(std::size_t(w) * channels);
    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (std::size_t i = 0; i < row.size(); ++i)
            img.data[std::size_t(y) * w * channels + i] = row[i] / 255.0f;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const std::string& path, const Image& img) {
    require(img.channels == 1 || img.channels == 3, "save_png: channel count must be 1 or 3");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    require(fp != nullptr, "cannot write image: ", path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("failed to encode PNG: ", path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(std::size_t(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            float v = img.data[std::size_t(y) * img.width * img.channels + i];
            row[i] = static_cast<png_byte>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image gaussian_blur(const Image& img, float sigma) {
    if (sigma <= 0.0f) return img;
    int radius = static_cast<int>(std::ceil(3.0f * sigma));
    std::vector<float> kernel(2 * radius + 1);
    double sum = 0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-0.5 * (i * i) / double(sigma * sigma));
        kernel[i + radius] = static_cast<float>(v);
        sum += v;
    }
    for (float& k : kernel) k = static_cast<float>(k / sum);

    auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
    Image tmp(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                float acc = 0;
                for (int i = -radius; i <= radius; ++i)
                    acc += kernel[i + radius] * img.at(clampi(x + i, img.width), y, c);
                tmp.at(x, y, c) = acc;
            }
    Image out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                float acc = 0;
                for (int i = -radius; i <= radius; ++i)
                    acc += kernel[i + radius] * tmp.at(x, clampi(y + i, img.height), c);
                out.at(x, y, c) = acc;
            }
    return out;
}

void bilinear_sample(const Image& img, float x, float y, float* out, float* dx, float* dy) {
    // Shift so integer coordinates land on pixel centers.
    float fx = std::clamp(x - 0.5f, 0.0f, float(img.width - 1));
    float fy = std::clamp(y - 0.5f, 0.0f, float(img.height - 1));
    int x0 = std::min(static_cast<int>(fx), img.width - 2 >= 0 ? img.width - 2 : 0);
    int y0 = std::min(static_cast<int>(fy), img.height - 2 >= 0 ? img.height - 2 : 0);
    int x1 = std::min(x0 + 1, img.width - 1);
    int y1 = std::min(y0 + 1, img.height - 1);
    float ax = fx - x0, ay = fy - y0;
    bool clamped_x = (x - 0.5f) < 0.0f || (x - 0.5f) > float(img.width - 1);
    bool clamped_y = (y - 0.5f) < 0.0f || (y - 0.5f) > float(img.height - 1);
    for (int c = 0; c < img.channels; ++c) {
        float v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
        float v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
        float top = v00 + (v10 - v00) * ax;
        float bot = v01 + (v11 - v01) * ax;
        out[c] = top + (bot - top) * ay;
        if (dx) dx[c] = clamped_x ? 0.0f : (v10 - v00) * (1 - ay) + (v11 - v01) * ay;
        if (dy) dy[c] = clamped_y ? 0.0f : bot - top;
    }
}

Image downsample_avg(const Image& img, int k) {
    require(k > 0 && img.width % k == 0 && img.height % k == 0,
            "downsample_avg: size not divisible by k");
    Image out(img.width / k, img.height / k, img.channels);
    float inv = 1.0f / float(k * k);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                float acc = 0;
                for (int j = 0; j < k; ++j)
                    for (int i = 0; i < k; ++i) acc += img.at(x * k + i, y * k + j, c);
                out.at(x, y, c) = acc * inv;
            }
    return out;
}

}  // namespace vpa
