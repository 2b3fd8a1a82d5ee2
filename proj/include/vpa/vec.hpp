#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace vpa {

template <typename T>
struct TVec3 {
    T x = 0, y = 0, z = 0;

    TVec3() = default;
    TVec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

    T& operator[](int i) { return (&x)[i]; }
    const T& operator[](int i) const { return (&x)[i]; }

    TVec3 operator+(const TVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    TVec3 operator-(const TVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    TVec3 operator*(T s) const { return {x * s, y * s, z * s}; }
    TVec3 operator/(T s) const { return {x / s, y / s, z / s}; }
    TVec3 operator-() const { return {-x, -y, -z}; }
    TVec3& operator+=(const TVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    TVec3& operator-=(const TVec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    TVec3& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }

    template <typename U>
    TVec3<U> cast() const { return {static_cast<U>(x), static_cast<U>(y), static_cast<U>(z)}; }
};

template <typename T>
inline TVec3<T> operator*(T s, const TVec3<T>& v) { return v * s; }

template <typename T>
inline T dot(const TVec3<T>& a, const TVec3<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

template <typename T>
inline TVec3<T> cross(const TVec3<T>& a, const TVec3<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T>
inline T norm2(const TVec3<T>& v) { return dot(v, v); }

template <typename T>
inline T norm(const TVec3<T>& v) { return std::sqrt(dot(v, v)); }

template <typename T>
inline TVec3<T> normalized(const TVec3<T>& v) {
    T n = norm(v);
    return n > T(0) ? v / n : v;
}

using Vec3f = TVec3<float>;
using Vec3d = TVec3<double>;

struct Vec2f {
    float x = 0, y = 0;
    Vec2f() = default;
    Vec2f(float x_, float y_) : x(x_), y(y_) {}
    Vec2f operator+(const Vec2f& o) const { return {x + o.x, y + o.y}; }
    Vec2f operator-(const Vec2f& o) const { return {x - o.x, y - o.y}; }
    Vec2f operator*(float s) const { return {x * s, y * s}; }
};

// Row-major 3x3.
template <typename T>
struct TMat3 {
    std::array<T, 9> m{};

    static TMat3 identity() {
        TMat3 r;
        r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return r;
    }
    static TMat3 zero() { return TMat3{}; }

    static TMat3 from_cols(const TVec3<T>& c0, const TVec3<T>& c1, const TVec3<T>& c2) {
        TMat3 r;
        r.m = {c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z};
        return r;
    }

    T& operator()(int r, int c) { return m[r * 3 + c]; }
    const T& operator()(int r, int c) const { return m[r * 3 + c]; }

    TVec3<T> col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
    TVec3<T> row(int r) const { return {m[r * 3], m[r * 3 + 1], m[r * 3 + 2]}; }

    TMat3 operator+(const TMat3& o) const {
        TMat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    TMat3 operator-(const TMat3& o) const {
        TMat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }
    TMat3 operator*(T s) const {
        TMat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
        return r;
    }
    TMat3 operator*(const TMat3& o) const {
        TMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    TVec3<T> operator*(const TVec3<T>& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    TMat3 transposed() const {
        TMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    T det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    TMat3 inverse() const {
        TMat3 r;
        T d = det();
        T id = T(1) / d;
        r.m[0] = (m[4] * m[8] - m[5] * m[7]) * id;
        r.m[1] = (m[2] * m[7] - m[1] * m[8]) * id;
        r.m[2] = (m[1] * m[5] - m[2] * m[4]) * id;
        r.m[3] = (m[5] * m[6] - m[3] * m[8]) * id;
        r.m[4] = (m[0] * m[8] - m[2] * m[6]) * id;
        r.m[5] = (m[2] * m[3] - m[0] * m[5]) * id;
        r.m[6] = (m[3] * m[7] - m[4] * m[6]) * id;
        r.m[7] = (m[1] * m[6] - m[0] * m[7]) * id;
        r.m[8] = (m[0] * m[4] - m[1] * m[3]) * id;
        return r;
    }

    template <typename U>
    TMat3<U> cast() const {
        TMat3<U> r;
        for (int i = 0; i < 9; ++i) r.m[i] = static_cast<U>(m[i]);
        return r;
    }
};

using Mat3f = TMat3<float>;
using Mat3d = TMat3<double>;

template <typename T>
inline TMat3<T> skew(const TVec3<T>& v) {
    TMat3<T> r;
    r.m = {0, -v.z, v.y, v.z, 0, -v.x, -v.y, v.x, 0};
    return r;
}

template <typename T>
inline TMat3<T> outer(const TVec3<T>& a, const TVec3<T>& b) {
    TMat3<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

// Rodrigues rotation from an axis-angle vector.
template <typename T>
TMat3<T> rodrigues(const TVec3<T>& w) {
    T a2 = norm2(w);
    T f1, f2;
    if (a2 < T(1e-8)) {
        f1 = T(1) - a2 / T(6);
        f2 = T(0.5) - a2 / T(24);
    } else {
        T a = std::sqrt(a2);
        f1 = std::sin(a) / a;
        f2 = (T(1) - std::cos(a)) / a2;
    }
    TMat3<T> K = skew(w);
    return TMat3<T>::identity() + K * f1 + (K * K) * f2;
}

// d rodrigues(w) / d w_i for i = 0..2, from differentiating the series
// R = I + f1 K + f2 K^2 with f1 = sin a / a, f2 = (1-cos a)/a^2.
template <typename T>
std::array<TMat3<T>, 3> rodrigues_jacobian(const TVec3<T>& w) {
    T a2 = norm2(w);
    T f1, f2, g1, g2;  // g = f' / a
    if (a2 < T(1e-8)) {
        f1 = T(1) - a2 / T(6);
        f2 = T(0.5) - a2 / T(24);
        g1 = T(-1.0 / 3.0) + a2 / T(30);
        g2 = T(-1.0 / 12.0) + a2 / T(180);
    } else {
        T a = std::sqrt(a2);
        T s = std::sin(a), c = std::cos(a);
        f1 = s / a;
        f2 = (T(1) - c) / a2;
        g1 = (a * c - s) / (a2 * a);
        g2 = (a * s - T(2) * (T(1) - c)) / (a2 * a2);
    }
    TMat3<T> K = skew(w);
    TMat3<T> K2 = K * K;
    std::array<TMat3<T>, 3> out;
    for (int i = 0; i < 3; ++i) {
        TVec3<T> e;
        e[i] = T(1);
        TMat3<T> Ei = skew(e);
        out[i] = K * (g1 * w[i]) + Ei * f1 + K2 * (g2 * w[i]) + (Ei * K + K * Ei) * f2;
    }
    return out;
}

// Rigid transform x -> R x + t.
template <typename T>
struct TRigid {
    TMat3<T> R = TMat3<T>::identity();
    TVec3<T> t;

    TVec3<T> apply(const TVec3<T>& p) const { return R * p + t; }
    TRigid operator*(const TRigid& o) const { return {R * o.R, R * o.t + t}; }
    TRigid inverse() const {
        TMat3<T> Rt = R.transposed();
        return {Rt, -(Rt * t)};
    }
};

using Rigidf = TRigid<float>;
using Rigidd = TRigid<double>;

}  // namespace vpa
