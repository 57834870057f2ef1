#pragma once

#include "schottky/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace schottky {

/// Square 0/1 matrix stored row-major. Transition matrices of subshifts and
/// directed edge matrices of graphs are both carried by this type.
class BinaryMatrix {
public:
    BinaryMatrix() = default;

    explicit BinaryMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

    BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows) {
        std::vector<std::vector<int>> v;
        for (const auto& r : rows) v.emplace_back(r);
        *this = from_rows(v);
    }

    /// Throws InvalidTransitionMatrix unless `rows` is square with 0/1 entries.
    template <class Int>
    static BinaryMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
        BinaryMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw Error(ErrorCode::InvalidTransitionMatrix, "matrix is not square",
                            "row " + std::to_string(i));
            for (std::size_t j = 0; j < rows.size(); ++j) {
                const auto& v = rows[i][j];
                if (!(v == Int(0) || v == Int(1)))
                    throw Error(ErrorCode::InvalidTransitionMatrix, "entry is not 0 or 1",
                                "(" + std::to_string(i) + "," + std::to_string(j) + ")");
                m.set(i, j, v == Int(1));
            }
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    bool operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { data_[i * n_ + j] = v ? 1 : 0; }

    std::size_t row_sum(std::size_t i) const {
        std::size_t s = 0;
        for (std::size_t j = 0; j < n_; ++j) s += data_[i * n_ + j];
        return s;
    }
    std::size_t col_sum(std::size_t j) const {
        std::size_t s = 0;
        for (std::size_t i = 0; i < n_; ++i) s += data_[i * n_ + j];
        return s;
    }

    BinaryMatrix transposed() const {
        BinaryMatrix t(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t.set(j, i, (*this)(i, j));
        return t;
    }

    /// Simultaneous relabeling: result(perm[i], perm[j]) = (*this)(i, j).
    BinaryMatrix permuted(const std::vector<std::size_t>& perm) const {
        BinaryMatrix p(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) p.set(perm[i], perm[j], (*this)(i, j));
        return p;
    }

    std::vector<std::vector<int>> rows() const {
        std::vector<std::vector<int>> r(n_, std::vector<int>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r[i][j] = (*this)(i, j) ? 1 : 0;
        return r;
    }

    bool is_permutation_matrix() const {
        for (std::size_t i = 0; i < n_; ++i)
            if (row_sum(i) != 1 || col_sum(i) != 1) return false;
        return n_ > 0;
    }

    friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> data_;
};

} // namespace schottky
