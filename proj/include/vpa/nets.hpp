#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vpa/vec.hpp"

namespace vpa {

enum class Activation { None, Relu, Softplus, Sigmoid };

float apply_activation(Activation a, float z);
float activation_grad(Activation a, float z);  // derivative at pre-activation z

struct MlpConfig {
    std::vector<int> dims;  // [input, hidden..., output]
    Activation hidden = Activation::Relu;
    Activation output = Activation::None;
    bool zero_last = false;  // zero-init the final layer (outputs start at 0)
};

// Saved intermediates of one forward batch.
struct MlpTape {
    int n = 0;
    std::vector<std::vector<float>> x;  // input per layer, n x dims[l]
    std::vector<std::vector<float>> z;  // pre-activation per layer, n x dims[l+1]
};

// Dense MLP on f32 batches. Forward/backward parallelize over rows, gradient
// reductions over parameter coordinates with a fixed inner order, so results
// are identical for any thread count.
class Mlp {
  public:
    Mlp() = default;
    explicit Mlp(const MlpConfig& cfg);

    void init(std::uint64_t seed);

    int input_dim() const { return cfg_.dims.front(); }
    int output_dim() const { return cfg_.dims.back(); }
    int layer_count() const { return static_cast<int>(cfg_.dims.size()) - 1; }
    const MlpConfig& config() const { return cfg_; }

    // X: n x input_dim, Y: n x output_dim. The tape, when given, records what
    // backward() needs; it stays valid until the parameters change.
    void forward(const float* X, int n, float* Y, MlpTape* tape = nullptr) const;

    // dY: n x output_dim gradients w.r.t. the (activated) output. Accumulates
    // parameter gradients; optionally emits dX (n x input_dim).
    void backward(const MlpTape& tape, const float* dY, float* dX = nullptr);

    void zero_grad();

    std::span<float> weights(int layer) { return W_[layer]; }
    std::span<float> bias(int layer) { return b_[layer]; }
    std::span<float> weight_grad(int layer) { return dW_[layer]; }
    std::span<float> bias_grad(int layer) { return db_[layer]; }
    std::span<const float> weights(int layer) const { return W_[layer]; }

  private:
    MlpConfig cfg_;
    std::vector<std::vector<float>> W_, b_, dW_, db_;
};

// Named view of a trainable array and its gradient buffer.
struct ParamRef {
    std::string name;
    float* data = nullptr;
    float* grad = nullptr;
    std::size_t size = 0;
};

std::vector<ParamRef> mlp_params(Mlp& mlp, const std::string& prefix);

// Bias-corrected Adam over a fixed parameter layout.
class Adam {
  public:
    float beta1 = 0.9f, beta2 = 0.999f, eps = 1e-8f;

    Adam() = default;
    explicit Adam(std::size_t n) : m_(n, 0.0f), v_(n, 0.0f) {}

    void step(std::span<const ParamRef> refs, float lr);

    std::int64_t iteration() const { return t_; }
    std::vector<float>& moment1() { return m_; }
    std::vector<float>& moment2() { return v_; }
    void restore(std::vector<float> m, std::vector<float> v, std::int64_t t);

  private:
    std::vector<float> m_, v_;
    std::int64_t t_ = 0;
};

// Learning-rate schedules used across the pipeline.
// Tracking: halve every `interval` iterations.
inline float lr_halving(float base, std::int64_t it, std::int64_t interval) {
    float lr = base;
    for (std::int64_t k = interval; k <= it; k += interval) lr *= 0.5f;
    return lr;
}
// Training: smooth exponential decay to `factor` * base over `total` steps.
inline float lr_exp_decay(float base, std::int64_t it, std::int64_t total, float factor = 0.33f) {
    if (total <= 0) return base;
    double frac = double(it) / double(total);
    if (frac > 1.0) frac = 1.0;
    return static_cast<float>(base * std::pow(double(factor), frac));
}

}  // namespace vpa
