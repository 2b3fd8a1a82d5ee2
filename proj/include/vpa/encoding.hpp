#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vpa/vec.hpp"

namespace vpa {

struct HashGridConfig {
    int levels = 16;
    std::uint32_t table_size = 1u << 17;  // entries per level (hashed levels)
    int features = 4;
    int n_min = 16;
    int n_max = 2048;

    int feature_dim() const { return levels * features; }
};

// Multi-resolution feature grid over an axis-aligned domain box. Levels with
// (N+1)^3 <= table_size index densely; finer levels hash integer coordinates
// with per-axis multipliers {1, 2654435761, 805459861} XORed together.
// Queries outside the box are clamped to it.
class HashGrid {
  public:
    HashGrid() = default;
    HashGrid(const HashGridConfig& cfg, const Vec3f& box_lo, const Vec3f& box_hi);

    // Fills tables with uniform values in [-1e-4, 1e-4]; deterministic per seed.
    void init(std::uint64_t seed);

    void query(const Vec3f& x, float* out) const;
    void query_batch(std::span<const Vec3f> xs, float* out) const;

    // Accumulates table gradients (serial scatter in sample order, so results
    // do not depend on the thread count) and optionally the gradient w.r.t.
    // the query position.
    void backward_batch(std::span<const Vec3f> xs, const float* upstream, Vec3f* dpos = nullptr);

    void zero_grad();

    const HashGridConfig& config() const { return cfg_; }
    Vec3f box_lo() const { return lo_; }
    Vec3f box_hi() const { return hi_; }
    int level_resolution(int l) const { return res_[l]; }
    bool level_dense(int l) const { return dense_[l]; }
    std::size_t level_entries(int l) const { return entries_[l]; }

    std::vector<float>& table() { return table_; }
    const std::vector<float>& table() const { return table_; }
    std::vector<float>& grad() { return grad_; }

    std::size_t entry_index(int level, int ix, int iy, int iz) const;

  private:
    struct CellSetup {
        std::size_t corner[8];  // entry indices
        float w[8];             // trilinear weights
        float dwx[8], dwy[8], dwz[8];
        float scale_x, scale_y, scale_z;  // d(grid pos)/d(world pos), 0 when clamped
    };
    void cell_setup(int level, const Vec3f& x, CellSetup& cs) const;

    HashGridConfig cfg_;
    Vec3f lo_, hi_;
    std::vector<int> res_;
    std::vector<bool> dense_;
    std::vector<std::size_t> entries_;
    std::vector<std::size_t> offset_;  // entry offset per level
    std::vector<float> table_;         // [sum(entries) * features]
    std::vector<float> grad_;
};

// [sin(2^p pi v), cos(2^p pi v)] for p = 0..P-1, per input component; output
// length dim(v) * 2P, components blocked together.
void freq_encode(std::span<const float> v, int components, std::span<float> out);

}  // namespace vpa
