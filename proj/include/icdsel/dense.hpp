#pragma once

#include <cstddef>
#include <vector>

#include "icdsel/errors.hpp"

namespace icdsel {

// Dense row-major matrix of doubles. Plain aggregate; all heavy loops live in
// kernels.hpp.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double& operator()(int r, int c) {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double* row_ptr(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row_ptr(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }

    void require(int r, int c, const char* what) const {
        if (rows != r || cols != c)
            throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(r) + "x" +
                                    std::to_string(c) + ", got " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
};

}  // namespace icdsel
