#include "vpa/nets.hpp"

#include <cmath>

#include "vpa/error.hpp"
#include "vpa/parallel.hpp"
#include "vpa/rng.hpp"

namespace vpa {

float apply_activation(Activation a, float z) {
    switch (a) {
        case Activation::None: return z;
        case Activation::Relu: return z > 0 ? z : 0.0f;
        case Activation::Softplus:
            // overflow-safe log(1+e^z)
            return z > 20.0f ? z : std::log1p(std::exp(z));
        case Activation::Sigmoid: return 1.0f / (1.0f + std::exp(-z));
    }
    return z;
}

float activation_grad(Activation a, float z) {
    switch (a) {
        case Activation::None: return 1.0f;
        case Activation::Relu: return z > 0 ? 1.0f : 0.0f;
        case Activation::Softplus: return 1.0f / (1.0f + std::exp(-z));
        case Activation::Sigmoid: {
            float s = 1.0f / (1.0f + std::exp(-z));
            return s * (1.0f - s);
        }
    }
    return 1.0f;
}

Mlp::Mlp(const MlpConfig& cfg) : cfg_(cfg) {
    require(cfg.dims.size() >= 2, "Mlp needs at least input and output dims");
    const int L = layer_count();
    W_.resize(L);
    b_.resize(L);
    dW_.resize(L);
    db_.resize(L);
    for (int l = 0; l < L; ++l) {
        W_[l].assign(std::size_t(cfg.dims[l + 1]) * cfg.dims[l], 0.0f);
        b_[l].assign(cfg.dims[l + 1], 0.0f);
        dW_[l].assign(W_[l].size(), 0.0f);
        db_[l].assign(b_[l].size(), 0.0f);
    }
}

void Mlp::init(std::uint64_t seed) {
    const int L = layer_count();
    for (int l = 0; l < L; ++l) {
        Pcg32 rng(seed, 0x2545F4914F6CDD1DULL + std::uint64_t(l));
        if (cfg_.zero_last && l == L - 1) {
            std::fill(W_[l].begin(), W_[l].end(), 0.0f);
            std::fill(b_[l].begin(), b_[l].end(), 0.0f);
            continue;
        }
        float bound = std::sqrt(6.0f / float(cfg_.dims[l]));
        for (float& w : W_[l]) w = rng.uniform(-bound, bound);
        std::fill(b_[l].begin(), b_[l].end(), 0.0f);
    }
    zero_grad();
}

void Mlp::zero_grad() {
    for (auto& g : dW_) std::fill(g.begin(), g.end(), 0.0f);
    for (auto& g : db_) std::fill(g.begin(), g.end(), 0.0f);
}

void Mlp::forward(const float* X, int n, float* Y, MlpTape* tape) const {
    const int L = layer_count();
    if (tape) {
        tape->n = n;
        tape->x.resize(L);
        tape->z.resize(L);
    }
    std::vector<float> cur(X, X + std::size_t(n) * cfg_.dims[0]);
    for (int l = 0; l < L; ++l) {
        const int in = cfg_.dims[l], out = cfg_.dims[l + 1];
        if (tape) tape->x[l] = cur;
        std::vector<float> z(std::size_t(n) * out);
        const float* Wl = W_[l].data();
        const float* bl = b_[l].data();
        const float* src = cur.data();
        float* dst = z.data();
        parallel_for(n, [&](std::int64_t i) {
            const float* xi = src + std::size_t(i) * in;
            float* zi = dst + std::size_t(i) * out;
            for (int o = 0; o < out; ++o) {
                const float* wrow = Wl + std::size_t(o) * in;
                float acc = bl[o];
                for (int k = 0; k < in; ++k) acc += wrow[k] * xi[k];
                zi[o] = acc;
            }
        });
        if (tape) tape->z[l] = z;
        Activation act = (l == L - 1) ? cfg_.output : cfg_.hidden;
        if (act != Activation::None)
            parallel_for(n, [&](std::int64_t i) {
                float* zi = dst + std::size_t(i) * out;
                for (int o = 0; o < out; ++o) zi[o] = apply_activation(act, zi[o]);
            });
        cur = std::move(z);
    }
    std::copy(cur.begin(), cur.end(), Y);
}

void Mlp::backward(const MlpTape& tape, const float* dY, float* dX) {
    const int L = layer_count();
    const int n = tape.n;
    require(static_cast<int>(tape.x.size()) == L, "tape does not match this Mlp");

    std::vector<float> dcur(dY, dY + std::size_t(n) * cfg_.dims[L]);
    for (int l = L - 1; l >= 0; --l) {
        const int in = cfg_.dims[l], out = cfg_.dims[l + 1];
        require(tape.z[l].size() == std::size_t(n) * out, "tape layer ", l, " shape mismatch");
        Activation act = (l == L - 1) ? cfg_.output : cfg_.hidden;
        // dZ = dY ⊙ act'(z)
        std::vector<float> dz(std::size_t(n) * out);
        {
            const float* zl = tape.z[l].data();
            const float* up = dcur.data();
            float* dst = dz.data();
            parallel_for(n, [&](std::int64_t i) {
                for (int o = 0; o < out; ++o) {
                    std::size_t idx = std::size_t(i) * out + o;
                    dst[idx] = act == Activation::None ? up[idx]
                                                       : up[idx] * activation_grad(act, zl[idx]);
                }
            });
        }
        // Parameter gradients: one thread owns one output row, samples in
        // fixed order, so accumulation is deterministic.
        {
            const float* xl = tape.x[l].data();
            const float* dzp = dz.data();
            float* dWl = dW_[l].data();
            float* dbl = db_[l].data();
            parallel_for(out, [&](std::int64_t o) {
                float* wrow = dWl + std::size_t(o) * in;
                double bacc = 0;
                for (int i = 0; i < n; ++i) {
                    float c = dzp[std::size_t(i) * out + o];
                    if (c == 0.0f) continue;
                    const float* xi = xl + std::size_t(i) * in;
                    for (int k = 0; k < in; ++k) wrow[k] += c * xi[k];
                    bacc += c;
                }
                dbl[o] += static_cast<float>(bacc);
            });
        }
        // Input gradients
        if (l > 0 || dX) {
            std::vector<float> dxbuf(std::size_t(n) * in, 0.0f);
            const float* Wl = W_[l].data();
            const float* dzp = dz.data();
            float* dst = dxbuf.data();
            parallel_for(n, [&](std::int64_t i) {
                const float* dzi = dzp + std::size_t(i) * out;
                float* dxi = dst + std::size_t(i) * in;
                for (int o = 0; o < out; ++o) {
                    float c = dzi[o];
                    if (c == 0.0f) continue;
                    const float* wrow = Wl + std::size_t(o) * in;
                    for (int k = 0; k < in; ++k) dxi[k] += c * wrow[k];
                }
            });
            if (l == 0 && dX) std::copy(dxbuf.begin(), dxbuf.end(), dX);
            dcur = std::move(dxbuf);
        }
    }
}

std::vector<ParamRef> mlp_params(Mlp& mlp, const std::string& prefix) {
    std::vector<ParamRef> refs;
    for (int l = 0; l < mlp.layer_count(); ++l) {
        refs.push_back({prefix + ".w" + std::to_string(l), mlp.weights(l).data(),
                        mlp.weight_grad(l).data(), mlp.weights(l).size()});
        refs.push_back({prefix + ".b" + std::to_string(l), mlp.bias(l).data(),
                        mlp.bias_grad(l).data(), mlp.bias(l).size()});
    }
    return refs;
}

void Adam::step(std::span<const ParamRef> refs, float lr) {
    std::size_t total = 0;
    for (const auto& r : refs) total += r.size;
    require(total == m_.size(), "Adam state size ", m_.size(), " != parameter count ", total);
    ++t_;
    const float bc1 = 1.0f - static_cast<float>(std::pow(double(beta1), double(t_)));
    const float bc2 = 1.0f - static_cast<float>(std::pow(double(beta2), double(t_)));
    std::size_t base = 0;
    for (const auto& r : refs) {
        float* m = m_.data() + base;
        float* v = v_.data() + base;
        const float b1 = beta1, b2 = beta2, e = eps;
        parallel_for(static_cast<std::int64_t>(r.size), [&](std::int64_t i) {
            float g = r.grad[i];
            m[i] = b1 * m[i] + (1 - b1) * g;
            v[i] = b2 * v[i] + (1 - b2) * g * g;
            float mhat = m[i] / bc1;
            float vhat = v[i] / bc2;
            r.data[i] -= lr * mhat / (std::sqrt(vhat) + e);
        });
        base += r.size;
    }
}

void Adam::restore(std::vector<float> m, std::vector<float> v, std::int64_t t) {
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

}  // namespace vpa
