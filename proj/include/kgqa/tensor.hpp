#pragma once
// Dense row-major 2D tensor of doubles. Everything the policy network
// needs is a matrix or a row/column vector, so shapes are fixed at rank 2.
// 64-bit values keep the finite-difference gradient checks tight.

#include <cstddef>
#include <span>
#include <vector>

#include "kgqa/error.hpp"

namespace kgqa {

struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    static Tensor scalar(double x) {
        Tensor t(1, 1);
        t.v[0] = x;
        return t;
    }

    size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

    std::span<double> row(int r) { return {v.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
    std::span<const double> row(int r) const {
        return {v.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
    }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }
    void zero() { fill(0.0); }
};

// A named trainable tensor with a persistent gradient accumulator.
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;

    Param() = default;
    Param(std::string n, int r, int c) : name(std::move(n)), value(r, c), grad(r, c) {}

    void zero_grad() { grad.zero(); }
};

}  // namespace kgqa
