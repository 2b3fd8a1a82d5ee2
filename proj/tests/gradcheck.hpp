#pragma once

// Central finite-difference helpers shared by the gradient test suites and
// the acceptance gradient suite.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace vpa::test {

// Central difference of a scalar functional w.r.t. one float slot.
template <typename F>
double fd_slot(F&& eval, float* slot, float h) {
    float orig = *slot;
    *slot = orig + h;
    double ep = eval();
    *slot = orig - h;
    double em = eval();
    *slot = orig;
    return (ep - em) / (2.0 * double(h));
}

// ||a - b|| / max(||b||, floor) over paired samples.
inline double rel_vec_error(std::span<const double> analytic, std::span<const double> fd,
                            double floor = 1e-6) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        double d = analytic[i] - fd[i];
        num += d * d;
        den += fd[i] * fd[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), floor);
}

// Compare analytic gradients against central differences over a set of
// parameter slots; returns the vector-norm relative error.
template <typename F>
double gradcheck(F&& eval, std::span<float* const> slots, std::span<const float> analytic,
                 float h) {
    std::vector<double> fd(slots.size()), an(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        fd[i] = fd_slot(eval, slots[i], h);
        an[i] = analytic[i];
    }
    return rel_vec_error(an, fd);
}

}  // namespace vpa::test
