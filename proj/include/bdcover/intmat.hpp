#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <initializer_list>
#include <vector>

#include "bdcover/errors.hpp"

namespace bdcover {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Dense matrix with arbitrary-precision integer entries.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Int(0)) {}
    IntMatrix(std::initializer_list<std::initializer_list<Int>> data) {
        rows_ = data.size();
        cols_ = rows_ ? data.begin()->size() : 0;
        entries_.reserve(rows_ * cols_);
        for (const auto& row : data) {
            if (row.size() != cols_) throw DimensionMismatch("ragged initializer");
            for (const auto& e : row) entries_.push_back(e);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product shapes");
        IntMatrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
            }
        return out;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shapes");
        IntMatrix out = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += o.entries_[i];
        return out;
    }

    IntMatrix transpose() const {
        IntMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    /// Apply to a column vector.
    std::vector<Int> apply(const std::vector<Int>& v) const {
        if (v.size() != cols_) throw DimensionMismatch("matrix-vector shapes");
        std::vector<Int> out(rows_, Int(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    /// Exact determinant (fraction-free Gaussian elimination / Bareiss).
    Int det() const;

    /// Rank over the rationals.
    std::size_t rank() const;

private:
    std::size_t rows_, cols_;
    std::vector<Int> entries_;
};

struct SmithResult {
    IntMatrix U;  ///< unimodular, rows x rows
    IntMatrix D;  ///< diagonal with d_i | d_{i+1}
    IntMatrix V;  ///< unimodular, cols x cols
};

/// Smith normal form: U*M*V = D with U,V unimodular, D diagonal with a
/// divisibility chain d_1 | d_2 | ... (nonnegative diagonal).
SmithResult smith_normal_form(const IntMatrix& M);

}  // namespace bdcover
