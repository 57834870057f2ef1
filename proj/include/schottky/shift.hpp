#pragma once

#include "schottky/binary_matrix.hpp"
#include "schottky/graphs.hpp"
#include "schottky/integer_matrix.hpp"
#include "schottky/ktheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace schottky {

using Word = std::vector<int>;

inline constexpr std::size_t kDefaultEnumerationBudget = 1'000'000;

/// Subshift of finite type: transition matrix, letter names, and an optional
/// fixed-point-free involution pairing each letter with its inverse.
class SFTData {
public:
    SFTData() = default;

    explicit SFTData(BinaryMatrix a, std::vector<std::string> labels = {},
                     std::optional<std::vector<int>> involution = std::nullopt)
        : a_(std::move(a)), labels_(std::move(labels)), involution_(std::move(involution)) {
        if (a_.empty()) throw Error(ErrorCode::InvalidTransitionMatrix, "empty transition matrix");
        if (labels_.empty())
            for (std::size_t i = 0; i < a_.size(); ++i) labels_.push_back(std::to_string(i));
        if (labels_.size() != a_.size())
            throw Error(ErrorCode::InvalidTransitionMatrix, "label count differs from matrix size");
        if (involution_) validate_involution();
    }

    /// Free-group shift on g generators, letter i+g inverse to letter i.
    static SFTData schottky(int g) {
        auto em = cayley_schottky_matrix(g);
        std::vector<std::string> labels;
        std::vector<int> inv;
        for (int i = 0; i < 2 * g; ++i) {
            labels.push_back(i < g ? "g" + std::to_string(i + 1) : "g" + std::to_string(i - g + 1) + "'");
            inv.push_back((i + g) % (2 * g));
        }
        return SFTData(std::move(em.matrix), std::move(labels), std::move(inv));
    }

    /// Non-backtracking walks on a graph; the involution is edge reversal.
    static SFTData from_edge_matrix(const EdgeMatrix& em) {
        std::vector<std::string> labels;
        std::vector<int> inv(em.labels.size());
        for (std::size_t i = 0; i < em.labels.size(); ++i) {
            labels.push_back(em.labels[i].label());
            const auto rev = em.labels[i].reversal();
            for (std::size_t j = 0; j < em.labels.size(); ++j)
                if (em.labels[j].edge_id == rev.edge_id && em.labels[j].backward == rev.backward)
                    inv[i] = static_cast<int>(j);
        }
        return SFTData(em.matrix, std::move(labels), std::move(inv));
    }

    const BinaryMatrix& matrix() const noexcept { return a_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::optional<std::vector<int>>& involution() const noexcept { return involution_; }
    std::size_t alphabet_size() const noexcept { return a_.size(); }

    bool admissible(const Word& w) const {
        for (int x : w)
            if (x < 0 || static_cast<std::size_t>(x) >= a_.size()) return false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (!a_(w[i], w[i + 1])) return false;
        return !w.empty();
    }

private:
    void validate_involution() const {
        const auto& inv = *involution_;
        if (inv.size() != a_.size() || a_.size() % 2 != 0)
            throw Error(ErrorCode::InvalidTransitionMatrix, "involution incompatible with alphabet size");
        for (std::size_t i = 0; i < inv.size(); ++i) {
            if (inv[i] < 0 || static_cast<std::size_t>(inv[i]) >= inv.size() ||
                inv[i] == static_cast<int>(i) || inv[inv[i]] != static_cast<int>(i))
                throw Error(ErrorCode::InvalidTransitionMatrix, "not a fixed-point-free involution",
                            std::to_string(i));
        }
    }

    BinaryMatrix a_;
    std::vector<std::string> labels_;
    std::optional<std::vector<int>> involution_;
};

/// Number of admissible words of each length 1..max_length, by exact matrix powers.
inline std::vector<BigInt> admissible_word_counts(const SFTData& s, std::size_t max_length) {
    const std::size_t n = s.alphabet_size();
    std::vector<BigInt> v(n, BigInt(1)), counts;
    for (std::size_t len = 1; len <= max_length; ++len) {
        counts.push_back(std::accumulate(v.begin(), v.end(), BigInt(0)));
        std::vector<BigInt> next(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (s.matrix()(i, j)) next[i] += v[j];
        v = std::move(next);
    }
    return counts;
}

/// All admissible words of length n in lexicographic order.
inline std::vector<Word> enumerate_words(const SFTData& s, std::size_t n,
                                         std::size_t budget = kDefaultEnumerationBudget) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "word length must be at least 1");
    const BigInt total = admissible_word_counts(s, n).back();
    if (total > budget)
        throw Error(ErrorCode::EnumerationBudgetExceeded,
                    "word count " + total.str() + " exceeds budget " + std::to_string(budget),
                    "length " + std::to_string(n));
    std::vector<Word> words;
    for (std::size_t i = 0; i < s.alphabet_size(); ++i) words.push_back({static_cast<int>(i)});
    for (std::size_t len = 1; len < n; ++len) {
        std::vector<Word> next;
        next.reserve(words.size() * 2);
        for (const auto& w : words)
            for (std::size_t j = 0; j < s.alphabet_size(); ++j)
                if (s.matrix()(w.back(), j)) {
                    next.push_back(w);
                    next.back().push_back(static_cast<int>(j));
                }
        words = std::move(next);
    }
    return words;
}

/// dim V_n for n = 0..N (V_n: functions of the first n+1 coordinates) and the
/// new-level dimensions dim Ê_n = dim V_n - dim V_{n-1}.
struct FiltrationDims {
    std::vector<BigInt> levels;
    std::vector<BigInt> increments;
};

inline FiltrationDims filtration_dims(const SFTData& s, std::size_t max_level) {
    FiltrationDims out;
    out.levels = admissible_word_counts(s, max_level + 1);
    for (std::size_t n = 0; n < out.levels.size(); ++n)
        out.increments.push_back(n == 0 ? out.levels[0] : out.levels[n] - out.levels[n - 1]);
    return out;
}

struct PerronData {
    double lambda_max = 0.0;
    std::vector<double> left;  ///< sums to 1
    std::vector<double> right; ///< sums to 1
    double delta_h = 0.0;      ///< log lambda_max
    double residual = 0.0;
};

namespace detail {

/// Shifted power iteration on A + I (primitive whenever A is irreducible).
inline std::vector<double> perron_vector(const BinaryMatrix& a, bool transpose, double& lambda,
                                         double& residual) {
    const std::size_t n = a.size();
    auto entry = [&](std::size_t i, std::size_t j) { return transpose ? a(j, i) : a(i, j); };
    auto apply = [&](const std::vector<double>& v) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (entry(i, j)) out[i] += v[j];
        return out;
    };
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    for (int iter = 0; iter < 200000; ++iter) {
        auto av = apply(v);
        std::vector<double> next(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += next[i] = av[i] + v[i];
        for (auto& x : next) x /= sum;
        v = std::move(next);
        if (iter % 8 != 7) continue;
        av = apply(v);
        double num = 0.0, den = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += av[i];
            den += v[i];
            vmax = std::max(vmax, std::abs(v[i]));
        }
        lambda = num / den;
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(av[i] - lambda * v[i]));
        residual = r / vmax;
        if (residual < 1e-13) return v;
    }
    if (residual < 1e-12) return v;
    throw Error(ErrorCode::ConvergenceFailure, "power iteration did not reach residual 1e-12");
}

} // namespace detail

inline PerronData perron_data(const SFTData& s) {
    if (!irreducibility_check(s.matrix()))
        throw Error(ErrorCode::RequiresIrreducible, "transition matrix is reducible");
    PerronData p;
    double lr = 0.0, rl = 0.0;
    p.right = detail::perron_vector(s.matrix(), false, p.lambda_max, p.residual);
    p.left = detail::perron_vector(s.matrix(), true, lr, rl);
    p.residual = std::max(p.residual, rl);
    p.delta_h = std::log(p.lambda_max);
    return p;
}

/// Parry (maximal-entropy Markov) measure on cylinders:
/// mu(w) = l(w_0) r(w_last) lambda^{-(|w|-1)} / sum_i l(i) r(i).
class ParryMeasure {
public:
    explicit ParryMeasure(const SFTData& s) : s_(s), perron_(perron_data(s)) {
        for (std::size_t i = 0; i < s.alphabet_size(); ++i) norm_ += perron_.left[i] * perron_.right[i];
    }

    const PerronData& perron() const noexcept { return perron_; }
    const SFTData& shift() const noexcept { return s_; }

    double operator()(const Word& w) const {
        if (!s_.admissible(w)) {
            std::string witness;
            for (int x : w) witness += std::to_string(x) + " ";
            throw Error(ErrorCode::NotAdmissible, "word is not admissible", witness);
        }
        return perron_.left[w.front()] * perron_.right[w.back()] *
               std::pow(perron_.lambda_max, -static_cast<double>(w.size() - 1)) / norm_;
    }

private:
    SFTData s_;
    PerronData perron_;
    double norm_ = 0.0;
};

inline double parry_cylinder_measure(const SFTData& s, const Word& w) { return ParryMeasure(s)(w); }

namespace detail {

inline std::map<Word, std::size_t> index_words(const std::vector<Word>& words) {
    std::map<Word, std::size_t> idx;
    for (std::size_t i = 0; i < words.size(); ++i) idx.emplace(words[i], i);
    return idx;
}

} // namespace detail

/// Matrix of the coboundary f -> f - f∘T from V_{n-1} into V_n in the
/// cylinder-indicator bases (rows: words of length n+1, columns: length n).
inline IntegerMatrix coboundary_matrix(const SFTData& s, std::size_t n,
                                       std::size_t budget = kDefaultEnumerationBudget) {
    const auto rows = enumerate_words(s, n + 1, budget);
    const auto cols = enumerate_words(s, n, budget);
    const auto col_index = detail::index_words(cols);
    IntegerMatrix m(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Word head(rows[r].begin(), rows[r].end() - 1);
        const Word tail(rows[r].begin() + 1, rows[r].end());
        m(r, col_index.at(head)) += 1;
        m(r, col_index.at(tail)) -= 1;
    }
    return m;
}

/// dim(V_n / δV_{n-1}) for n = 0..N; entry 0 is dim V_0.
inline std::vector<BigInt> cohomology_filtration_dims(const SFTData& s, std::size_t max_level,
                                                      std::size_t budget = kDefaultEnumerationBudget) {
    const auto dims = filtration_dims(s, max_level);
    std::vector<BigInt> out{dims.levels[0]};
    for (std::size_t n = 1; n <= max_level; ++n)
        out.push_back(dims.levels[n] - BigInt(rational_rank(coboundary_matrix(s, n, budget))));
    return out;
}

inline constexpr std::size_t kDefaultAutomorphismCap = 10;

/// Letter permutations sigma with A(sigma i, sigma j) = A(i, j); when an
/// involution is present only those commuting with it.
inline std::vector<std::vector<int>> alphabet_automorphisms(const SFTData& s,
                                                            bool respect_involution = true,
                                                            std::size_t cap = kDefaultAutomorphismCap) {
    const std::size_t n = s.alphabet_size();
    if (n > cap)
        throw Error(ErrorCode::EnumerationBudgetExceeded,
                    "alphabet of size " + std::to_string(n) + " exceeds brute-force cap",
                    std::to_string(cap));
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<int>> out;
    const auto& a = s.matrix();
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (a(sigma[i], sigma[j]) != a(i, j)) { ok = false; break; }
        if (ok && respect_involution && s.involution()) {
            const auto& inv = *s.involution();
            for (std::size_t i = 0; i < n && ok; ++i)
                if (sigma[inv[i]] != inv[sigma[i]]) ok = false;
        }
        if (ok) out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

} // namespace schottky
