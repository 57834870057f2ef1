#pragma once

#include "schottky/binary_matrix.hpp"
#include "schottky/integer_matrix.hpp"

#include <string>
#include <vector>

namespace schottky {

/// Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m with t_1 | t_2 | ... and every t_i >= 2.
struct AbelianGroupDescriptor {
    std::size_t rank = 0;
    std::vector<BigInt> torsion;

    bool is_trivial() const { return rank == 0 && torsion.empty(); }

    /// "0", "Z^2", "Z/3", "Z/2 ⊕ Z/6 ⊕ Z^1".
    std::string to_string() const {
        if (is_trivial()) return "0";
        std::string s;
        for (const auto& t : torsion) {
            if (!s.empty()) s += " ⊕ ";
            s += "Z/" + t.str();
        }
        if (rank > 0) {
            if (!s.empty()) s += " ⊕ ";
            s += "Z^" + std::to_string(rank);
        }
        return s;
    }

    friend bool operator==(const AbelianGroupDescriptor&, const AbelianGroupDescriptor&) = default;
};

/// Cokernel of a square integer matrix read off its invariant factors.
inline AbelianGroupDescriptor cokernel(const IntegerMatrix& m) {
    const auto snf = smith_normal_form(m);
    AbelianGroupDescriptor g;
    g.rank = m.rows() - snf.invariant_factors.size();
    for (const auto& d : snf.invariant_factors) {
        if (d == 0)
            ++g.rank;
        else if (d > 1)
            g.torsion.push_back(d);
    }
    return g;
}

struct KGroups {
    AbelianGroupDescriptor k0;
    AbelianGroupDescriptor k1; ///< always torsion-free

    friend bool operator==(const KGroups&, const KGroups&) = default;
};

/// K_0 = Z^n / (1 - A^t) Z^n and K_1 = ker(1 - A^t) of the Cuntz-Krieger algebra.
inline KGroups ck_k_theory(const BinaryMatrix& a) {
    const std::size_t n = a.size();
    const IntegerMatrix m = IntegerMatrix::identity(n) - IntegerMatrix::from_binary(a.transposed());
    const auto snf = smith_normal_form(m);
    KGroups out;
    for (const auto& d : snf.invariant_factors) {
        if (d == 0)
            ++out.k0.rank;
        else if (d > 1)
            out.k0.torsion.push_back(d);
    }
    out.k1.rank = out.k0.rank;
    return out;
}

inline KGroups ck_k_theory(const IntegerMatrix& a) {
    if (a.rows() != a.cols())
        throw Error(ErrorCode::InvalidTransitionMatrix, "matrix is not square");
    std::vector<std::vector<BigInt>> rows(a.rows(), std::vector<BigInt>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j);
    return ck_k_theory(BinaryMatrix::from_rows(rows));
}

/// Strong connectivity of the directed graph of A (paths of length >= 1).
inline bool irreducibility_check(const BinaryMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return false;
    std::vector<std::vector<char>> reach(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) reach[i][j] = a(i, j);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    return true;
}

enum class StableIsoVerdict { StablyIsomorphic, Inconclusive };

inline std::string to_string(StableIsoVerdict v) {
    return v == StableIsoVerdict::StablyIsomorphic ? "StablyIsomorphic" : "Inconclusive";
}

/// One-sided: equal K_0 of two simple Cuntz-Krieger algebras (irreducible,
/// not a permutation matrix) is sufficient for stable isomorphism. Anything
/// else is reported as Inconclusive, never as non-isomorphic.
inline StableIsoVerdict stable_iso_verdict(const BinaryMatrix& a, const BinaryMatrix& b) {
    const auto ka = ck_k_theory(a);
    const auto kb = ck_k_theory(b);
    const auto simple = [](const BinaryMatrix& m) {
        return irreducibility_check(m) && !m.is_permutation_matrix();
    };
    if (simple(a) && simple(b) && ka.k0 == kb.k0) return StableIsoVerdict::StablyIsomorphic;
    return StableIsoVerdict::Inconclusive;
}

} // namespace schottky
