#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ckalg/errors.hpp"
#include "ckalg/scalar.hpp"

namespace ckalg {

/// Small row-major dense matrix over an engine scalar. Used for unitary blocks
/// and the exact block representation; numerics go through Eigen instead.
template <class K>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<K>::zero()) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<K>::one();
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    K& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const K& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = ScalarTraits<K>::conj((*this)(r, c));
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw UsageError("matrix shape mismatch in product");
        Matrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const K& x = a(r, k);
                if (ScalarTraits<K>::is_zero(x)) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) m(r, c) += x * b(k, c);
            }
        return m;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix shape mismatch in sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix shape mismatch in difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    /// Entry-wise comparison (within tolerance in float mode).
    bool approx_equal(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t i = 0; i < data_.size(); ++i)
            if (!ScalarTraits<K>::equal(data_[i], o.data_[i])) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!ScalarTraits<K>::is_zero(x)) return false;
        return true;
    }

    bool is_unitary() const {
        return is_square() && (adjoint() * *this).approx_equal(identity(rows_)) &&
               (*this * adjoint()).approx_equal(identity(rows_));
    }

    /// Gauss-Jordan inverse; throws UsageError when singular.
    Matrix inverse() const {
        if (!is_square()) throw UsageError("inverse of a non-square matrix");
        const std::size_t n = rows_;
        Matrix a = *this;
        Matrix inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (pivot < n && ScalarTraits<K>::is_zero(a(pivot, col))) ++pivot;
            if (pivot == n) throw UsageError("matrix is singular");
            if (pivot != col) {
                for (std::size_t c = 0; c < n; ++c) {
                    std::swap(a(pivot, c), a(col, c));
                    std::swap(inv(pivot, c), inv(col, c));
                }
            }
            K scale = ScalarTraits<K>::one() / a(col, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(col, c) *= scale;
                inv(col, c) *= scale;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col || ScalarTraits<K>::is_zero(a(r, col))) continue;
                K factor = a(r, col);
                for (std::size_t c = 0; c < n; ++c) {
                    a(r, c) -= factor * a(col, c);
                    inv(r, c) -= factor * inv(col, c);
                }
            }
        }
        return inv;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<K> data_;
};

}  // namespace ckalg
