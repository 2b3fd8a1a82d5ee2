#include "vpa/encoding.hpp"

#include <algorithm>
#include <cmath>

#include "vpa/error.hpp"
#include "vpa/parallel.hpp"
#include "vpa/rng.hpp"

namespace vpa {

namespace {
constexpr std::uint32_t kPrimeY = 2654435761u;
constexpr std::uint32_t kPrimeZ = 805459861u;
}  // namespace

HashGrid::HashGrid(const HashGridConfig& cfg, const Vec3f& box_lo, const Vec3f& box_hi)
    : cfg_(cfg), lo_(box_lo), hi_(box_hi) {
    require(cfg.levels >= 1 && cfg.features >= 1, "hash grid needs levels >= 1, features >= 1");
    require(cfg.n_min >= 1 && cfg.n_max >= cfg.n_min, "hash grid resolution range invalid");
    for (int k = 0; k < 3; ++k) require(hi_[k] > lo_[k], "hash grid domain box is empty");

    res_.resize(cfg.levels);
    double growth = cfg.levels > 1
                        ? std::exp((std::log(double(cfg.n_max)) - std::log(double(cfg.n_min))) /
                                   double(cfg.levels - 1))
                        : 1.0;
    for (int l = 0; l < cfg.levels; ++l) {
        res_[l] = static_cast<int>(std::floor(double(cfg.n_min) * std::pow(growth, l) + 0.5));
        if (l > 0 && res_[l] <= res_[l - 1]) res_[l] = res_[l - 1] + 1;
    }

    dense_.resize(cfg.levels);
    entries_.resize(cfg.levels);
    offset_.resize(cfg.levels);
    std::size_t total = 0;
    for (int l = 0; l < cfg.levels; ++l) {
        std::size_t corners = std::size_t(res_[l] + 1) * (res_[l] + 1) * (res_[l] + 1);
        dense_[l] = corners <= cfg.table_size;
        entries_[l] = dense_[l] ? corners : cfg.table_size;
        offset_[l] = total;
        total += entries_[l];
    }
    table_.assign(total * cfg.features, 0.0f);
    grad_.assign(table_.size(), 0.0f);
}

void HashGrid::init(std::uint64_t seed) {
    Pcg32 rng(seed, 0x9e3779b97f4a7c15ULL);
    for (float& v : table_) v = rng.uniform(-1e-4f, 1e-4f);
    zero_grad();
}

void HashGrid::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0f); }

std::size_t HashGrid::entry_index(int level, int ix, int iy, int iz) const {
    if (dense_[level]) {
        std::size_t n1 = std::size_t(res_[level] + 1);
        return offset_[level] + (std::size_t(iz) * n1 + iy) * n1 + ix;
    }
    std::uint32_t h = std::uint32_t(ix) ^ (std::uint32_t(iy) * kPrimeY) ^ (std::uint32_t(iz) * kPrimeZ);
    return offset_[level] + (h % cfg_.table_size);
}

void HashGrid::cell_setup(int level, const Vec3f& x, CellSetup& cs) const {
    const int N = res_[level];
    float p[3], f[3];
    int c[3];
    bool clamped[3];
    for (int k = 0; k < 3; ++k) {
        float u = (x[k] - lo_[k]) / (hi_[k] - lo_[k]);
        clamped[k] = u <= 0.0f || u >= 1.0f;
        u = std::clamp(u, 0.0f, 1.0f);
        p[k] = u * float(N);
        int ci = std::min(static_cast<int>(p[k]), N - 1);
        c[k] = ci;
        f[k] = p[k] - float(ci);
    }
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                int i = dz * 4 + dy * 2 + dx;
                float wx = dx ? f[0] : 1.0f - f[0];
                float wy = dy ? f[1] : 1.0f - f[1];
                float wz = dz ? f[2] : 1.0f - f[2];
                cs.corner[i] = entry_index(level, c[0] + dx, c[1] + dy, c[2] + dz);
                cs.w[i] = wx * wy * wz;
                cs.dwx[i] = (dx ? 1.0f : -1.0f) * wy * wz;
                cs.dwy[i] = (dy ? 1.0f : -1.0f) * wx * wz;
                cs.dwz[i] = (dz ? 1.0f : -1.0f) * wx * wy;
            }
    cs.scale_x = clamped[0] ? 0.0f : float(N) / (hi_.x - lo_.x);
    cs.scale_y = clamped[1] ? 0.0f : float(N) / (hi_.y - lo_.y);
    cs.scale_z = clamped[2] ? 0.0f : float(N) / (hi_.z - lo_.z);
}

void HashGrid::query(const Vec3f& x, float* out) const {
    const int F = cfg_.features;
    CellSetup cs;
    for (int l = 0; l < cfg_.levels; ++l) {
        cell_setup(l, x, cs);
        float* dst = out + std::size_t(l) * F;
        for (int fch = 0; fch < F; ++fch) dst[fch] = 0.0f;
        for (int i = 0; i < 8; ++i) {
            const float* src = table_.data() + cs.corner[i] * F;
            float w = cs.w[i];
            for (int fch = 0; fch < F; ++fch) dst[fch] += w * src[fch];
        }
    }
}

void HashGrid::query_batch(std::span<const Vec3f> xs, float* out) const {
    const std::size_t dim = std::size_t(cfg_.feature_dim());
    parallel_for(static_cast<std::int64_t>(xs.size()),
                 [&](std::int64_t i) { query(xs[i], out + std::size_t(i) * dim); });
}

void HashGrid::backward_batch(std::span<const Vec3f> xs, const float* upstream, Vec3f* dpos) {
    const int F = cfg_.features;
    const std::size_t dim = std::size_t(cfg_.feature_dim());

    if (dpos) {
        parallel_for(static_cast<std::int64_t>(xs.size()), [&](std::int64_t i) {
            CellSetup cs;
            Vec3f acc{};
            const float* up = upstream + std::size_t(i) * dim;
            for (int l = 0; l < cfg_.levels; ++l) {
                cell_setup(l, xs[i], cs);
                const float* ul = up + std::size_t(l) * F;
                float gx = 0, gy = 0, gz = 0;
                for (int c = 0; c < 8; ++c) {
                    const float* src = table_.data() + cs.corner[c] * F;
                    float s = 0;
                    for (int fch = 0; fch < F; ++fch) s += ul[fch] * src[fch];
                    gx += cs.dwx[c] * s;
                    gy += cs.dwy[c] * s;
                    gz += cs.dwz[c] * s;
                }
                acc.x += gx * cs.scale_x;
                acc.y += gy * cs.scale_y;
                acc.z += gz * cs.scale_z;
            }
            dpos[i] = acc;
        });
    }

    // Table scatter in sample order: colliding entries accumulate by addition
    // and the result is independent of the thread count.
    CellSetup cs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const float* up = upstream + i * dim;
        for (int l = 0; l < cfg_.levels; ++l) {
            cell_setup(l, xs[i], cs);
            const float* ul = up + std::size_t(l) * F;
            for (int c = 0; c < 8; ++c) {
                float* dst = grad_.data() + cs.corner[c] * F;
                float w = cs.w[c];
                for (int fch = 0; fch < F; ++fch) dst[fch] += w * ul[fch];
            }
        }
    }
}

void freq_encode(std::span<const float> v, int components, std::span<float> out) {
    require(components >= 1, "freq_encode: components must be >= 1");
    require(out.size() == v.size() * std::size_t(2 * components), "freq_encode: bad output size");
    constexpr float kPi = 3.14159265358979323846f;
    std::size_t o = 0;
    for (float x : v) {
        float base = kPi * x;
        for (int p = 0; p < components; ++p) {
            float arg = std::ldexp(base, p);  // 2^p * pi * x
            out[o++] = std::sin(arg);
            out[o++] = std::cos(arg);
        }
    }
}

}  // namespace vpa
