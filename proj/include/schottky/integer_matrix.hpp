#pragma once

#include "schottky/binary_matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace schottky {

using BigInt = boost::multiprecision::cpp_int;

class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    template <class Int>
    static IntegerMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        IntegerMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c)
                throw Error(ErrorCode::InvalidTransitionMatrix, "ragged rows", "row " + std::to_string(i));
            for (std::size_t j = 0; j < c; ++j) m(i, j) = BigInt(rows[i][j]);
        }
        return m;
    }

    static IntegerMatrix from_binary(const BinaryMatrix& b) {
        IntegerMatrix m(b.size(), b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = b(i, j) ? 1 : 0;
        return m;
    }

    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntegerMatrix transposed() const {
        IntegerMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
        IntegerMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b) {
        IntegerMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row[target] += factor * row[source]
    void add_row(std::size_t target, std::size_t source, const BigInt& factor) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(target, j) += factor * (*this)(source, j);
    }
    void add_col(std::size_t target, std::size_t source, const BigInt& factor) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, target) += factor * (*this)(i, source);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
    }

    bool is_diagonal() const {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (i != j && (*this)(i, j) != 0) return false;
        return true;
    }

    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

/// Determinant by fraction-free (Bareiss) elimination.
inline BigInt determinant(IntegerMatrix m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw Error(ErrorCode::InvalidParameter, "determinant of non-square matrix");
    if (n == 0) return 1;
    BigInt sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// Rank over the rationals by fraction-free elimination.
inline std::size_t rational_rank(IntegerMatrix m) {
    std::size_t rank = 0;
    BigInt prev = 1;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t p = rank;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(rank, p);
        for (std::size_t i = rank + 1; i < m.rows(); ++i) {
            for (std::size_t j = col + 1; j < m.cols(); ++j)
                m(i, j) = (m(i, j) * m(rank, col) - m(i, col) * m(rank, j)) / prev;
            m(i, col) = 0;
        }
        prev = m(rank, col);
        ++rank;
    }
    return rank;
}

struct SmithDecomposition {
    std::vector<BigInt> invariant_factors; ///< length min(rows, cols); zeros last
    IntegerMatrix left;                    ///< U, rows x rows, unimodular
    IntegerMatrix right;                   ///< V, cols x cols, unimodular
    IntegerMatrix diagonal;                ///< U * M * V
};

namespace detail {

inline bool find_min_pivot(const IntegerMatrix& a, std::size_t t, std::size_t& pr, std::size_t& pc) {
    bool found = false;
    BigInt best;
    for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
            if (a(i, j) == 0) continue;
            BigInt v = abs(a(i, j));
            if (!found || v < best) {
                best = v;
                pr = i;
                pc = j;
                found = true;
            }
        }
    return found;
}

} // namespace detail

/// Smith normal form with unimodular transforms, U * M * V = diag(d_1, ..., d_k),
/// d_1 | d_2 | ... and zeros last. Pivots are chosen by smallest absolute value
/// to keep intermediate entries small.
inline SmithDecomposition smith_normal_form(const IntegerMatrix& m) {
    IntegerMatrix a = m;
    IntegerMatrix u = IntegerMatrix::identity(m.rows());
    IntegerMatrix v = IntegerMatrix::identity(m.cols());
    const std::size_t k = std::min(m.rows(), m.cols());

    for (std::size_t t = 0; t < k; ++t) {
        std::size_t pr = t, pc = t;
        if (!detail::find_min_pivot(a, t, pr, pc)) break;
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < a.rows(); ++i) {
                if (a(i, t) == 0) continue;
                BigInt q = a(i, t) / a(t, t);
                a.add_row(i, t, -q);
                u.add_row(i, t, -q);
                if (a(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < a.cols(); ++j) {
                if (a(t, j) == 0) continue;
                BigInt q = a(t, j) / a(t, t);
                a.add_col(j, t, -q);
                v.add_col(j, t, -q);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) {
                // move the smallest remainder in row/column t into the pivot
                std::size_t br = t, bc = t;
                BigInt best = abs(a(t, t));
                for (std::size_t i = t + 1; i < a.rows(); ++i)
                    if (a(i, t) != 0 && abs(a(i, t)) < best) { best = abs(a(i, t)); br = i; bc = t; }
                for (std::size_t j = t + 1; j < a.cols(); ++j)
                    if (a(t, j) != 0 && abs(a(t, j)) < best) { best = abs(a(t, j)); br = t; bc = j; }
                a.swap_rows(t, br);
                u.swap_rows(t, br);
                a.swap_cols(t, bc);
                v.swap_cols(t, bc);
                continue;
            }
            // divisibility: fold any offending row into row t and repeat
            bool divides = true;
            for (std::size_t i = t + 1; i < a.rows() && divides; ++i)
                for (std::size_t j = t + 1; j < a.cols(); ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        a.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (a(t, t) < 0) {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition out;
    out.invariant_factors.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.invariant_factors.push_back(a(i, i));
    out.left = std::move(u);
    out.right = std::move(v);
    out.diagonal = std::move(a);
    return out;
}

} // namespace schottky
