#pragma once

#include "schottky/shift.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace schottky {

inline constexpr std::size_t kDefaultTruncationLevel = 6;
inline constexpr int kDefaultFourierCutoff = 200;

// ---------------------------------------------------------------------------
// Grading operators D = sum_n lambda_n Π̂_n
// ---------------------------------------------------------------------------

/// How the spectrum continues past the stored levels. `Finite` means there is
/// nothing beyond them. `LinearGeometric` is the cylinder grading of an SFT:
/// lambda_n = n and dim Ê_n <= constant * rate^n. `Power` is an AF schedule
/// lambda_n = (dim A_n)^exponent with dim A_n >= n.
struct TailModel {
    enum class Kind { Finite, LinearGeometric, Power };
    Kind kind = Kind::Finite;
    double constant = 0.0;
    double rate = 1.0;
    double exponent = 0.0;
};

struct GradingOperator {
    std::vector<double> multiplicities; ///< dim Ê_n, n = 0..N
    std::vector<double> eigenvalues;    ///< lambda_n
    TailModel tail;

    std::size_t levels() const noexcept { return eigenvalues.size(); }
};

/// D = sum_n n Π̂_n on the cylinder filtration of an irreducible SFT.
inline GradingOperator grading_from_sft(const SFTData& s, std::size_t max_level) {
    const auto dims = filtration_dims(s, max_level);
    const auto perron = perron_data(s);
    GradingOperator d;
    for (std::size_t n = 0; n <= max_level; ++n) {
        d.multiplicities.push_back(dims.increments[n].convert_to<double>());
        d.eigenvalues.push_back(static_cast<double>(n));
    }
    // 1^T A^n 1 <= lambda^n (sum r) / (min r) for the right Perron vector r
    const double rmin = *std::min_element(perron.right.begin(), perron.right.end());
    double rsum = 0.0;
    for (double r : perron.right) rsum += r;
    d.tail = {TailModel::Kind::LinearGeometric, rsum / rmin, perron.lambda_max, 0.0};
    return d;
}

inline GradingOperator finite_grading(std::vector<double> multiplicities, std::vector<double> eigenvalues) {
    if (multiplicities.size() != eigenvalues.size())
        throw Error(ErrorCode::InvalidParameter, "multiplicity and eigenvalue counts differ");
    return {std::move(multiplicities), std::move(eigenvalues), {}};
}

struct ThetaResult {
    double t = 0.0;
    double partial = 0.0;
    double tail_bound = 0.0;
    bool converged = false; ///< tail_bound < 1e-12
};

/// Tr(e^{-tD^2}) truncated at the stored levels, with a bound on the omitted tail.
inline ThetaResult theta_trace(const GradingOperator& d, double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "t must be positive", std::to_string(t));
    ThetaResult out;
    out.t = t;
    for (std::size_t n = 0; n < d.levels(); ++n) {
        const double lam = d.eigenvalues[n];
        out.partial += d.multiplicities[n] * std::exp(-t * lam * lam);
    }
    switch (d.tail.kind) {
    case TailModel::Kind::Finite:
        out.tail_bound = 0.0;
        break;
    case TailModel::Kind::LinearGeometric: {
        // majorant b_n = C rho^n e^{-t n^2}; ratio b_{n+1}/b_n = rho e^{-t(2n+1)} decreases
        const double log_c = std::log(d.tail.constant);
        const double log_rho = std::log(d.tail.rate);
        auto log_b = [&](double n) { return log_c + n * log_rho - t * n * n; };
        double n = static_cast<double>(d.levels());
        double tail = 0.0;
        for (int guard = 0; guard < 100000; ++guard, n += 1.0) {
            const double ratio = std::exp(log_rho - t * (2.0 * n + 1.0));
            if (ratio < 0.5) {
                tail += std::exp(log_b(n)) / (1.0 - ratio);
                break;
            }
            tail += std::exp(log_b(n));
        }
        out.tail_bound = tail;
        break;
    }
    case TailModel::Kind::Power: {
        // dim Ê_n <= dim A_n <= lambda_n^{1/q} and lambda_n >= n^q
        const double q = d.tail.exponent;
        double n = static_cast<double>(d.levels());
        double tail = 0.0;
        for (int guard = 0; guard < 100000; ++guard, n += 1.0) {
            const double lam = std::pow(n, q);
            const double term = n * std::exp(-t * lam * lam);
            tail += term;
            if (term < 1e-300 || (guard > 4 && term < 1e-18 * tail)) break;
        }
        out.tail_bound = tail;
        break;
    }
    }
    out.converged = out.tail_bound < 1e-12;
    return out;
}

enum class SummabilityDiagnosis { Convergent, Divergent, Undetermined };

inline std::string to_string(SummabilityDiagnosis d) {
    switch (d) {
    case SummabilityDiagnosis::Convergent: return "Convergent";
    case SummabilityDiagnosis::Divergent: return "Divergent";
    case SummabilityDiagnosis::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

struct ZetaResult {
    double s = 0.0;
    double partial = 0.0;
    SummabilityDiagnosis diagnosis = SummabilityDiagnosis::Undetermined;
    double tail_bound = std::numeric_limits<double>::infinity();
    double asymptotic_ratio = 0.0; ///< limit of successive term ratios, when known
};

/// Partial sum of Tr (1 + D^2)^{-s/2} and whether the full series converges.
inline ZetaResult zeta_partial(const GradingOperator& d, double s) {
    ZetaResult out;
    out.s = s;
    for (std::size_t n = 0; n < d.levels(); ++n) {
        const double lam = d.eigenvalues[n];
        out.partial += d.multiplicities[n] * std::exp(-0.5 * s * std::log1p(lam * lam));
    }
    const double big_n = static_cast<double>(d.levels());
    switch (d.tail.kind) {
    case TailModel::Kind::Finite:
        out.diagnosis = SummabilityDiagnosis::Convergent;
        out.tail_bound = 0.0;
        break;
    case TailModel::Kind::LinearGeometric:
        // term ratio rho_n ((1+n^2)/(1+(n+1)^2))^{s/2} -> rho: geometric growth beats any power
        out.asymptotic_ratio = d.tail.rate;
        if (d.tail.rate > 1.0 + 1e-12) {
            out.diagnosis = SummabilityDiagnosis::Divergent;
        } else if (s > 1.0) {
            out.diagnosis = SummabilityDiagnosis::Convergent;
            out.tail_bound = d.tail.constant * std::pow(std::max(big_n - 1.0, 1.0), 1.0 - s) / (s - 1.0);
        } else {
            out.diagnosis = SummabilityDiagnosis::Divergent;
        }
        break;
    case TailModel::Kind::Power: {
        // term <= (dim A_n)^{1 - q s} <= n^{1 - q s}
        const double a = d.tail.exponent * s - 1.0;
        if (a > 1.0) {
            out.diagnosis = SummabilityDiagnosis::Convergent;
            out.tail_bound = std::pow(std::max(big_n, 1.0), 1.0 - a) / (a - 1.0);
        }
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite truncation of the cylinder representation
// ---------------------------------------------------------------------------

struct CkResiduals {
    double range_sum = 0.0;  ///< ‖sum_j S_j S_j^* - 1‖ on V_{N-1}
    double source_max = 0.0; ///< max_i ‖S_i^* S_i - sum_j A_ij S_j S_j^*‖ on V_{N-1}
};

struct CommutatorNorm {
    int letter = 0;
    double norm = 0.0;
    int stabilization_level = 1; ///< k_i
};

/// The representation of O_A on V_N ⊂ L^2(Parry measure), in the orthonormal
/// basis of normalized level-N cylinder indicators. S_i is the partial isometry
/// with range the cylinder [i] and source sum_j A_ij P_j; it raises the level
/// by one, so every identity involving S_i, S_i^* and D is exact on V_{N-1}.
class SpectralTruncation {
public:
    using Sparse = Eigen::SparseMatrix<double>;

    static SpectralTruncation build(const SFTData& s, std::size_t level,
                                    std::optional<std::vector<int>> twist = std::nullopt,
                                    std::optional<std::vector<double>> schedule = std::nullopt,
                                    std::size_t budget = kDefaultEnumerationBudget) {
        if (level < 2)
            throw Error(ErrorCode::TruncationTooSmall, "truncation level must be at least 2",
                        std::to_string(level));
        SpectralTruncation t(s);
        t.level_ = level;
        t.measure_.emplace(s);
        const auto& perron = t.measure_->perron();
        const std::size_t alphabet = s.alphabet_size();

        if (twist) {
            if (twist->size() != alphabet)
                throw Error(ErrorCode::InvalidParameter, "twist is not a permutation of the alphabet");
            std::vector<int> sorted = *twist;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < alphabet; ++i)
                if (sorted[i] != static_cast<int>(i))
                    throw Error(ErrorCode::InvalidParameter, "twist is not a permutation of the alphabet");
            for (std::size_t i = 0; i < alphabet; ++i)
                for (std::size_t j = 0; j < alphabet; ++j)
                    if (s.matrix()((*twist)[i], (*twist)[j]) != s.matrix()(i, j))
                        throw Error(ErrorCode::InvalidParameter, "twist does not preserve the transition matrix");
            t.twist_ = *twist;
        } else {
            t.twist_.resize(alphabet);
            std::iota(t.twist_.begin(), t.twist_.end(), 0);
        }

        if (schedule) {
            if (schedule->size() != level + 1)
                throw Error(ErrorCode::InvalidParameter, "schedule must have one eigenvalue per level");
            t.schedule_ = *schedule;
        } else {
            for (std::size_t n = 0; n <= level; ++n) t.schedule_.push_back(static_cast<double>(n));
        }

        std::vector<std::vector<Word>> words;
        std::vector<std::vector<double>> mu;
        std::vector<std::map<Word, int>> index;
        for (std::size_t n = 0; n <= level; ++n) {
            words.push_back(enumerate_words(s, n + 1, budget));
            mu.emplace_back();
            index.emplace_back();
            for (std::size_t k = 0; k < words[n].size(); ++k) {
                mu[n].push_back((*t.measure_)(words[n][k]));
                index[n].emplace(words[n][k], static_cast<int>(k));
            }
            t.dims_.push_back(words[n].size());
        }
        const auto& top = words[level];
        const auto& mu_top = mu[level];
        const int dim = static_cast<int>(top.size());

        for (std::size_t n = 0; n <= level; ++n) {
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve(top.size());
            for (int r = 0; r < dim; ++r) {
                const Word prefix(top[r].begin(), top[r].begin() + static_cast<long>(n) + 1);
                const int c = index[n].at(prefix);
                trip.emplace_back(r, c, std::sqrt(mu_top[r] / mu[n][c]));
            }
            Sparse b(dim, static_cast<int>(words[n].size()));
            b.setFromTriplets(trip.begin(), trip.end());
            t.bases_.push_back(std::move(b));
        }

        // weight^2(i, a) = lambda l(a) / l(i) makes S_i isometric on its source
        for (std::size_t i = 0; i < alphabet; ++i) {
            std::vector<Eigen::Triplet<double>> trip;
            for (int c = 0; c < dim; ++c) {
                const Word& w = top[c];
                if (!s.matrix()(i, w.front())) continue;
                Word x{static_cast<int>(i)};
                x.insert(x.end(), w.begin(), w.end() - 1);
                const int r = index[level].at(x);
                const double weight = std::sqrt(perron.lambda_max * perron.left[w.front()] / perron.left[i]);
                trip.emplace_back(r, c, std::sqrt(mu_top[c] / mu_top[r]) / weight);
            }
            Sparse op(dim, dim);
            op.setFromTriplets(trip.begin(), trip.end());
            t.isometries_.push_back(std::move(op));

            bool depends_on_second = false;
            double first = -1.0;
            for (std::size_t a = 0; a < alphabet; ++a) {
                const double m = s.matrix()(i, a)
                                     ? std::sqrt(perron.lambda_max * perron.left[a] / perron.left[i])
                                     : 0.0;
                if (first < 0.0) first = m;
                if (std::abs(m - first) > 1e-14 * std::max(1.0, first)) depends_on_second = true;
            }
            // the multiplier also carries χ_i(x_0), which is non-constant once there are two letters
            const int level_of_multiplier = (depends_on_second || alphabet > 1) ? 1 : 0;
            t.stabilization_.push_back(std::max(1, level_of_multiplier));
        }
        return t;
    }

    std::size_t level() const noexcept { return level_; }
    std::size_t dimension() const noexcept { return dims_.back(); }
    const std::vector<std::size_t>& level_dimensions() const noexcept { return dims_; }
    const std::vector<double>& schedule() const noexcept { return schedule_; }
    const std::vector<int>& twist() const noexcept { return twist_; }
    const SFTData& shift() const noexcept { return shift_; }
    double delta_h() const { return measure_->perron().delta_h; }

    /// Isometric embedding of V_n into V_N (orthonormal columns).
    const Sparse& basis(std::size_t n) const { return bases_.at(n); }
    const Sparse& isometry(std::size_t i) const { return isometries_.at(i); }
    Sparse adjoint(std::size_t i) const { return Sparse(isometries_.at(i).transpose()); }
    /// Ŝ_i = U_σ S_i U_σ^* = S_{σ(i)}: the copy acted on through the automorphism.
    const Sparse& twisted_isometry(std::size_t i) const { return isometries_.at(twist_.at(i)); }

    /// D Y = lambda_N Y + sum_{n<N} (lambda_n - lambda_{n+1}) Π_n Y for Y in V_N.
    Eigen::MatrixXd apply_grading(const Eigen::MatrixXd& y) const {
        Eigen::MatrixXd out = schedule_[level_] * y;
        for (std::size_t n = 0; n < level_; ++n) {
            const double c = schedule_[n] - schedule_[n + 1];
            if (c == 0.0) continue;
            const Eigen::MatrixXd coeff = bases_[n].transpose() * y;
            out += c * (bases_[n] * coeff);
        }
        return out;
    }

    Eigen::VectorXd apply_grading(const Eigen::VectorXd& y) const {
        Eigen::VectorXd out = schedule_[level_] * y;
        for (std::size_t n = 0; n < level_; ++n) {
            const double c = schedule_[n] - schedule_[n + 1];
            if (c == 0.0) continue;
            const Eigen::VectorXd coeff = bases_[n].transpose() * y;
            out += c * (bases_[n] * coeff);
        }
        return out;
    }

    CkResiduals ck_residuals() const {
        const Sparse& b = bases_[level_ - 1];
        const auto n = static_cast<int>(dimension());
        Sparse id(n, n);
        id.setIdentity();
        std::vector<Sparse> ranges;
        Sparse total(n, n);
        for (const auto& s : isometries_) {
            ranges.push_back(Sparse(s * Sparse(s.transpose())));
            total += ranges.back();
        }
        CkResiduals out;
        out.range_sum = Sparse(b.transpose() * (total - id) * b).norm();
        for (std::size_t i = 0; i < isometries_.size(); ++i) {
            Sparse rel = Sparse(isometries_[i].transpose()) * isometries_[i];
            for (std::size_t j = 0; j < isometries_.size(); ++j)
                if (shift_.matrix()(i, j)) rel -= ranges[j];
            out.source_max = std::max(out.source_max, Sparse(b.transpose() * rel * b).norm());
        }
        return out;
    }

    /// [D, S] restricted to V_{N-1}, as a dense dim V_N x dim V_{N-1} matrix.
    Eigen::MatrixXd commutator_matrix(std::size_t i, bool twisted = false) const {
        const Sparse& s = twisted ? twisted_isometry(i) : isometries_.at(i);
        const Eigen::MatrixXd x = Eigen::MatrixXd(bases_[level_ - 1]);
        return apply_grading(Eigen::MatrixXd(s * x)) - s * apply_grading(x);
    }

    /// ‖[D, S_i]‖ on V_{N-1}: top eigenvalue of C^T C by Lanczos with full
    /// reorthogonalization, applied matrix-free through the sparse factors.
    CommutatorNorm commutator_norm(std::size_t i, bool twisted = false) const {
        const Sparse& s = twisted ? twisted_isometry(i) : isometries_.at(i);
        const Sparse& b = bases_[level_ - 1];
        const auto gram = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
            const Eigen::VectorXd x = b * v;
            const Eigen::VectorXd sx = s * x;
            const Eigen::VectorXd c = apply_grading(sx) - s * apply_grading(x);
            const Eigen::VectorXd st = s.transpose() * c;
            return b.transpose() * (Eigen::VectorXd(s.transpose() * apply_grading(c)) - apply_grading(st));
        };
        const double top = detail_top_eigenvalue(gram, static_cast<Eigen::Index>(b.cols()));
        return {static_cast<int>(i), std::sqrt(std::max(top, 0.0)), stabilization_.at(i)};
    }

private:
    template <class Apply>
    static double detail_top_eigenvalue(const Apply& apply, Eigen::Index dim) {
        if (dim == 0) return 0.0;
        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        Eigen::VectorXd q(dim);
        for (Eigen::Index k = 0; k < dim; ++k) q[k] = unif(rng);
        q.normalize();
        std::vector<Eigen::VectorXd> basis{q};
        std::vector<double> alpha, beta;
        double top = 0.0;
        for (Eigen::Index step = 0; step < dim; ++step) {
            Eigen::VectorXd w = apply(basis.back());
            alpha.push_back(basis.back().dot(w));
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& v : basis) w -= v.dot(w) * v;
            const double bnorm = w.norm();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            const auto m = static_cast<Eigen::Index>(alpha.size());
            tri.computeFromTridiagonal(Eigen::Map<Eigen::VectorXd>(alpha.data(), m),
                                       Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1), Eigen::ComputeEigenvectors);
            top = tri.eigenvalues()[m - 1];
            const double residual = bnorm * std::abs(tri.eigenvectors()(m - 1, m - 1));
            const double scale = std::max(std::abs(top), std::abs(tri.eigenvalues()[0]));
            if (bnorm <= 1e-13 * std::max(scale, 1e-300) || residual <= 1e-15 * scale || scale == 0.0) break;
            beta.push_back(bnorm);
            basis.push_back(w / bnorm);
        }
        return top;
    }

    explicit SpectralTruncation(const SFTData& s) : shift_(s) {}

    SFTData shift_;
    std::optional<ParryMeasure> measure_;
    std::size_t level_ = 0;
    std::vector<std::size_t> dims_;
    std::vector<double> schedule_;
    std::vector<int> twist_;
    std::vector<Sparse> bases_;
    std::vector<Sparse> isometries_;
    std::vector<int> stabilization_;
};

inline SpectralTruncation build_truncation(const SFTData& s, std::size_t level,
                                           std::optional<std::vector<int>> twist = std::nullopt) {
    return SpectralTruncation::build(s, level, std::move(twist));
}

inline CommutatorNorm commutator_norm(const SpectralTruncation& t, std::size_t letter) {
    return t.commutator_norm(letter);
}

// ---------------------------------------------------------------------------
// Finitely summable AF triples
// ---------------------------------------------------------------------------

enum class Parity { Odd, Even };

/// dim A_1 < dim A_2 < ... with eigenvalue schedule |lambda_n| = (dim A_n)^q.
/// The odd triple uses the real schedule; the even one doubles the space and
/// uses lambda_n = i^n (dim A_n)^q in the off-diagonal block.
struct AFTriple {
    std::vector<double> dims;
    double p = 1.0;
    double q = 3.0;
    Parity parity = Parity::Odd;

    void validate() const {
        if (!(p > 0.0)) throw Error(ErrorCode::InvalidParameter, "p must be positive");
        if (!(q > 2.0 / p))
            throw Error(ErrorCode::SummabilityViolation, "q must exceed 2/p",
                        "q=" + std::to_string(q) + " p=" + std::to_string(p));
        for (std::size_t n = 0; n < dims.size(); ++n) {
            if (dims[n] < static_cast<double>(n + 1))
                throw Error(ErrorCode::InvalidParameter, "dim A_n must be at least n", std::to_string(n + 1));
            if (n > 0 && !(dims[n] > dims[n - 1]))
                throw Error(ErrorCode::InvalidParameter, "dims must be strictly increasing", std::to_string(n + 1));
        }
    }

    double magnitude(std::size_t n) const { return std::pow(dims.at(n), q); }

    std::complex<double> eigenvalue(std::size_t n) const {
        const double m = magnitude(n);
        if (parity == Parity::Odd) return {m, 0.0};
        static constexpr std::complex<double> kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return m * kPhase[(n + 1) % 4];
    }
};

inline GradingOperator af_grading(const AFTriple& a) {
    a.validate();
    GradingOperator d;
    const double copies = a.parity == Parity::Even ? 2.0 : 1.0;
    for (std::size_t n = 0; n < a.dims.size(); ++n) {
        d.multiplicities.push_back(copies * (a.dims[n] - (n ? a.dims[n - 1] : 0.0)));
        d.eigenvalues.push_back(a.magnitude(n));
    }
    d.tail = {TailModel::Kind::Power, 0.0, 1.0, a.q};
    return d;
}

struct AFSummabilityReport {
    double p = 0.0;
    double q = 0.0;
    Parity parity = Parity::Odd;
    std::vector<double> terms;
    std::vector<double> partials;
    std::vector<double> majorants;
    bool bounded = true; ///< partials[n] <= majorants[n] at every level
};

/// Partial sums of Tr (1 + D^2)^{-p/2} against the majorant sum_n n^{1-pq}.
inline AFSummabilityReport af_summability_report(const AFTriple& a) {
    a.validate();
    AFSummabilityReport out;
    out.p = a.p;
    out.q = a.q;
    out.parity = a.parity;
    const double copies = a.parity == Parity::Even ? 2.0 : 1.0;
    double partial = 0.0, majorant = 0.0;
    for (std::size_t n = 0; n < a.dims.size(); ++n) {
        const double log_mag = a.q * std::log(a.dims[n]);
        // (1 + |lambda|^2)^{-p/2} computed without overflow
        const double log_weight = -0.5 * a.p * (2.0 * log_mag + std::log1p(std::exp(-2.0 * log_mag)));
        const double mult = a.dims[n] - (n ? a.dims[n - 1] : 0.0);
        const double term = copies * mult * std::exp(log_weight);
        out.terms.push_back(term);
        partial += term;
        majorant += copies * std::pow(static_cast<double>(n + 1), 1.0 - a.p * a.q);
        out.partials.push_back(partial);
        out.majorants.push_back(majorant);
        if (partial > majorant) out.bounded = false;
    }
    return out;
}

struct AFCoreLevel {
    std::vector<BigInt> blocks; ///< c_i(n)
    BigInt total;               ///< sum_i c_i(n)^2
};

/// Matrix-block sizes of F_{A,n} = span{S_mu P_i S_nu^* : |mu| = |nu| = n}.
inline std::vector<AFCoreLevel> af_core_dims(const SFTData& s, std::size_t max_level) {
    if (!irreducibility_check(s.matrix()))
        throw Error(ErrorCode::RequiresIrreducible, "transition matrix is reducible");
    const std::size_t k = s.alphabet_size();
    std::vector<AFCoreLevel> out;
    std::vector<BigInt> ending(k, BigInt(1)); // words of length n ending in j
    for (std::size_t n = 0; n <= max_level; ++n) {
        AFCoreLevel lvl;
        for (std::size_t i = 0; i < k; ++i) {
            BigInt c = 0;
            if (n == 0) {
                c = 1;
            } else {
                for (std::size_t j = 0; j < k; ++j)
                    if (s.matrix()(j, i)) c += ending[j];
            }
            lvl.total += c * c;
            lvl.blocks.push_back(std::move(c));
        }
        out.push_back(std::move(lvl));
        if (n > 0) {
            std::vector<BigInt> next(k);
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t i = 0; i < k; ++i)
                    if (s.matrix()(i, j)) next[j] += ending[i];
            ending = std::move(next);
        }
    }
    return out;
}

inline std::vector<double> af_core_totals(const SFTData& s, std::size_t max_level) {
    std::vector<double> out;
    for (const auto& lvl : af_core_dims(s, max_level)) out.push_back(lvl.total.convert_to<double>());
    return out;
}

// ---------------------------------------------------------------------------
// Crossed product by Z
// ---------------------------------------------------------------------------

struct SpectralValue {
    double value = 0.0;
    long multiplicity = 0;

    friend bool operator==(const SpectralValue&, const SpectralValue&) = default;
};

/// Base triple eigenvalues (with multiplicities) and a Fourier cutoff M.
/// D_0 = D ⊗ 1 + i ⊗ ∂ acts on mode (lambda, k) by lambda - ik; the even
/// operator [[0, D_0^*], [D_0, 0]] has eigenvalues ±|lambda - ik|.
struct CrossedProductTriple {
    std::vector<SpectralValue> base;
    int cutoff = kDefaultFourierCutoff;
};

inline std::vector<SpectralValue> merge_spectrum(std::vector<SpectralValue> values) {
    std::sort(values.begin(), values.end(),
              [](const SpectralValue& a, const SpectralValue& b) { return a.value < b.value; });
    std::vector<SpectralValue> out;
    for (const auto& v : values) {
        if (!out.empty() && out.back().value == v.value)
            out.back().multiplicity += v.multiplicity;
        else
            out.push_back(v);
    }
    return out;
}

inline std::vector<SpectralValue> crossed_product_spectrum(const CrossedProductTriple& c) {
    if (c.cutoff < 0) throw Error(ErrorCode::InvalidParameter, "cutoff must be nonnegative");
    std::vector<SpectralValue> values;
    values.reserve(c.base.size() * (2 * static_cast<std::size_t>(c.cutoff) + 1) * 2);
    for (const auto& b : c.base)
        for (int k = -c.cutoff; k <= c.cutoff; ++k) {
            const double kk = static_cast<double>(k);
            const double v = std::sqrt(b.value * b.value + kk * kk);
            values.push_back({v, b.multiplicity});
            values.push_back({-v, b.multiplicity});
        }
    // ±0 compare equal and merge into a single zero entry
    for (auto& v : values)
        if (v.value == 0.0) v.value = 0.0;
    return merge_spectrum(std::move(values));
}

struct ExponentFit {
    double slope = 0.0;
    double window_low = 0.0;
    double window_high = 0.0;
    std::size_t points = 0;
};

/// Least-squares slope of log N(Λ) against log Λ, N(Λ) = #{|eigenvalue| <= Λ},
/// over the distinct positive |eigenvalues| between the first and third quartile.
inline ExponentFit summability_exponent_fit(const std::vector<SpectralValue>& spectrum) {
    std::map<double, long> abs_counts;
    for (const auto& v : spectrum) {
        const double a = std::abs(v.value);
        if (a > 0.0) abs_counts[a] += v.multiplicity;
    }
    if (abs_counts.size() < 50)
        throw Error(ErrorCode::InsufficientSpectrum, "need at least 50 distinct nonzero values",
                    std::to_string(abs_counts.size()));
    long zero_count = 0;
    for (const auto& v : spectrum)
        if (v.value == 0.0) zero_count += v.multiplicity;

    std::vector<double> lambda;
    std::vector<double> counting;
    long running = zero_count;
    for (const auto& [a, m] : abs_counts) {
        running += m;
        lambda.push_back(a);
        counting.push_back(static_cast<double>(running));
    }
    const std::size_t n = lambda.size();
    const std::size_t lo = n / 4, hi = (3 * n) / 4;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        const double x = std::log(lambda[i]);
        const double y = std::log(counting[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ExponentFit fit;
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.window_low = lambda[lo];
    fit.window_high = lambda[hi];
    fit.points = hi - lo + 1;
    return fit;
}

inline std::vector<SpectralValue> to_spectrum(const std::vector<double>& values) {
    std::vector<SpectralValue> out;
    for (double v : values) out.push_back({v, 1});
    return merge_spectrum(std::move(out));
}

// ---------------------------------------------------------------------------
// Degree-0 JLO component
// ---------------------------------------------------------------------------

/// Even operator [[0, D_0^*], [D_0, 0]] on H_+ ⊕ H_- with grading diag(1, -1);
/// D_0 maps H_+ (columns) to H_- (rows).
struct EvenBlockOperator {
    Eigen::MatrixXcd d0;
};

/// sTr e^{-scale D^2} = Tr_{H+} e^{-scale D_0^* D_0} - Tr_{H-} e^{-scale D_0 D_0^*}.
inline double jlo_phi0(const EvenBlockOperator& op, double scale) {
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidParameter, "scale must be positive");
    auto heat_trace = [&](const Eigen::MatrixXcd& m) {
        if (m.rows() == 0) return 0.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
            sum += std::exp(-scale * std::max(eig.eigenvalues()[i], 0.0));
        return sum;
    };
    const Eigen::MatrixXcd plus = op.d0.adjoint() * op.d0;
    const Eigen::MatrixXcd minus = op.d0 * op.d0.adjoint();
    return heat_trace(plus) - heat_trace(minus);
}

inline double jlo_phi0(const CrossedProductTriple& c, double scale) {
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidParameter, "scale must be positive");
    // mode (lambda, k): D_0^* D_0 and D_0 D_0^* both act by |lambda - ik|^2
    double plus = 0.0, minus = 0.0;
    for (const auto& b : c.base)
        for (int k = -c.cutoff; k <= c.cutoff; ++k) {
            const std::complex<double> mode(b.value, -static_cast<double>(k));
            const double m = static_cast<double>(b.multiplicity);
            plus += m * std::exp(-scale * std::norm(mode));
            minus += m * std::exp(-scale * std::norm(std::conj(mode)));
        }
    return plus - minus;
}

inline double jlo_phi0(const SpectralTruncation&, double) {
    throw Error(ErrorCode::RequiresEvenTriple,
                "the cylinder truncation carries the odd triple; no grading is available");
}

} // namespace schottky
