#pragma once

// Dense exact linear algebra over Q or over a cyclotomic field. Matrices are
// small (dimension bounded by the line count), so plain Gaussian elimination
// with exact division is used throughout; ranks and kernels are exact.

#include <milnor/cyclotomic.hpp>
#include <milnor/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace milnor {

inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }
inline bool is_zero_elem(const Rat& r) { return r == 0; }
inline Rat invert_elem(const Rat& r) {
    if (r == 0) throw std::domain_error("division by zero");
    return Rat(1) / r;
}

inline CycloNum zero_like(const CycloNum& x) { return CycloNum::zero(x.order()); }
inline CycloNum one_like(const CycloNum& x) { return CycloNum::one(x.order()); }
inline bool is_zero_elem(const CycloNum& x) { return x.is_zero(); }
inline CycloNum invert_elem(const CycloNum& x) { return x.inverse(); }

template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0), zero_() {}

    Matrix(std::size_t rows, std::size_t cols, const T& zero)
        : rows_(rows), cols_(cols), zero_(zero), data_(rows * cols, zero) {}

    static Matrix identity(std::size_t n, const T& zero) {
        Matrix out(n, n, zero);
        T one = one_like(zero);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = one;
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const T& zero() const { return zero_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = out.data_[i] + b.data_[i];
        return out;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = out.data_[i] - b.data_[i];
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
        Matrix out(a.rows_, b.cols_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (is_zero_elem(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (is_zero_elem(b(k, j))) continue;
                    out(i, j) = out(i, j) + aik * b(k, j);
                }
            }
        }
        return out;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
        std::vector<T> out(rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!is_zero_elem((*this)(i, j))) out[i] = out[i] + (*this)(i, j) * v[j];
        return out;
    }

    // Row-echelon rank; operates on a copy.
    std::size_t rank() const {
        Matrix work = *this;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t pivot = rank;
            while (pivot < rows_ && is_zero_elem(work(pivot, col))) ++pivot;
            if (pivot == rows_) continue;
            work.swap_rows(pivot, rank);
            T inv = invert_elem(work(rank, col));
            for (std::size_t r = rank + 1; r < rows_; ++r) {
                if (is_zero_elem(work(r, col))) continue;
                T factor = work(r, col) * inv;
                for (std::size_t c = col; c < cols_; ++c)
                    work(r, c) = work(r, c) - factor * work(rank, c);
            }
            ++rank;
        }
        return rank;
    }

    std::size_t kernel_dim() const { return cols_ - rank(); }

    // Basis of the right kernel, returned as the columns of a cols x k matrix.
    Matrix kernel_basis() const {
        Matrix work = *this;
        std::vector<std::size_t> pivot_cols;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t pivot = rank;
            while (pivot < rows_ && is_zero_elem(work(pivot, col))) ++pivot;
            if (pivot == rows_) continue;
            work.swap_rows(pivot, rank);
            T piv_inv = invert_elem(work(rank, col));
            for (std::size_t c = col; c < cols_; ++c) work(rank, c) = work(rank, c) * piv_inv;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == rank || is_zero_elem(work(r, col))) continue;
                T factor = work(r, col);
                for (std::size_t c = col; c < cols_; ++c)
                    work(r, c) = work(r, c) - factor * work(rank, c);
            }
            pivot_cols.push_back(col);
            ++rank;
        }
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t c : pivot_cols) is_pivot[c] = true;
        Matrix basis(cols_, cols_ - rank, zero_);
        std::size_t out_col = 0;
        T one = one_like(zero_);
        for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
            if (is_pivot[free_col]) continue;
            basis(free_col, out_col) = one;
            for (std::size_t i = 0; i < pivot_cols.size(); ++i)
                basis(pivot_cols[i], out_col) = zero_ - work(i, free_col);
            ++out_col;
        }
        return basis;
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("only square matrices invert");
        std::size_t n = rows_;
        Matrix work = *this;
        Matrix inv = identity(n, zero_);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (pivot < n && is_zero_elem(work(pivot, col))) ++pivot;
            if (pivot == n) throw std::domain_error("matrix is singular");
            work.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            T piv_inv = invert_elem(work(col, col));
            for (std::size_t c = 0; c < n; ++c) {
                work(col, c) = work(col, c) * piv_inv;
                inv(col, c) = inv(col, c) * piv_inv;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col || is_zero_elem(work(r, col))) continue;
                T factor = work(r, col);
                for (std::size_t c = 0; c < n; ++c) {
                    work(r, c) = work(r, c) - factor * work(col, c);
                    inv(r, c) = inv(r, c) - factor * inv(col, c);
                }
            }
        }
        return inv;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap(data_[a * cols_ + c], data_[b * cols_ + c]);
    }

private:
    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_, cols_;
    T zero_;
    std::vector<T> data_;
};

// Rank of the matrix formed by stacking the given matrices vertically.
template <class T>
std::size_t stacked_rank(const std::vector<Matrix<T>>& blocks) {
    if (blocks.empty()) return 0;
    std::size_t cols = blocks.front().cols();
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) throw std::invalid_argument("stacked blocks must share a width");
        rows += b.rows();
    }
    Matrix<T> stack(rows, cols, blocks.front().zero());
    std::size_t at = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < cols; ++c) stack(at + r, c) = b(r, c);
        at += b.rows();
    }
    return stack.rank();
}

// Exact 3x3 determinant, used for collinearity tests in the plane.
template <class T>
T det3(const T& a, const T& b, const T& c,
       const T& d, const T& e, const T& f,
       const T& g, const T& h, const T& i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

}  // namespace milnor
