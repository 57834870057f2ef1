#include "schottky/graphs.hpp"
#include "schottky/triples.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace schottky;

namespace {

SFTData theta_shift() { return SFTData::from_edge_matrix(directed_edge_matrix(theta_graph())); }

/// Direct evaluation of sum_n dim Ê_n e^{-t n^2} with n large enough for double precision.
double theta_reference(int g, double t) {
    double sum = 2.0 * g;
    const double growth = 2.0 * g - 1.0;
    double dim = 2.0 * g;
    for (int n = 1; n < 80; ++n) {
        const double next = dim * growth;
        sum += (next - dim) * std::exp(-t * n * n);
        dim = next;
    }
    return sum;
}

} // namespace

TEST(Truncation, RejectsSmallLevel) {
    try {
        SpectralTruncation::build(SFTData::schottky(2), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TruncationTooSmall);
    }
}

TEST(Truncation, BasesAreIsometries) {
    const auto t = SpectralTruncation::build(theta_shift(), 4);
    for (std::size_t n = 0; n <= 4; ++n) {
        const Eigen::MatrixXd b = Eigen::MatrixXd(t.basis(n));
        const Eigen::MatrixXd gram = b.transpose() * b;
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm(), 1e-13) << n;
    }
}

TEST(Truncation, CuntzKriegerRelations) {
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto r = SpectralTruncation::build(SFTData::schottky(2), n).ck_residuals();
        EXPECT_LT(r.range_sum, 1e-9) << n;
        EXPECT_LT(r.source_max, 1e-9) << n;
    }
    const auto r = SpectralTruncation::build(SFTData(BinaryMatrix{{1, 1}, {1, 0}}), 6).ck_residuals();
    EXPECT_LT(r.range_sum, 1e-9);
    EXPECT_LT(r.source_max, 1e-9);
}

TEST(Truncation, IsometriesOnSourceProjections) {
    // S_i^* S_i restricted to V_{N-1} is a projection
    const auto t = SpectralTruncation::build(theta_shift(), 4);
    const Eigen::MatrixXd b = Eigen::MatrixXd(t.basis(3));
    for (std::size_t i = 0; i < 6; ++i) {
        const Eigen::MatrixXd s = Eigen::MatrixXd(t.isometry(i));
        const Eigen::MatrixXd p = b.transpose() * s.transpose() * s * b;
        EXPECT_LT((p * p - p).norm(), 1e-12);
    }
}

TEST(Commutator, LanczosMatchesDenseSvd) {
    for (const auto& s : {SFTData::schottky(2), theta_shift(), SFTData(BinaryMatrix{{1, 1}, {1, 0}})}) {
        const auto t = SpectralTruncation::build(s, 4);
        for (std::size_t i = 0; i < s.alphabet_size(); ++i)
            EXPECT_NEAR(t.commutator_norm(i).norm, oracle::dense_commutator_norm(t, i), 1e-12);
    }
}

TEST(Commutator, StableInTruncationLevel) {
    for (const auto& s : {SFTData::schottky(2), theta_shift()}) {
        for (std::size_t i = 0; i < s.alphabet_size(); ++i) {
            const auto small = SpectralTruncation::build(s, 3).commutator_norm(i);
            const auto large = SpectralTruncation::build(s, 6).commutator_norm(i);
            ASSERT_GE(3, small.stabilization_level + 2);
            EXPECT_NEAR(small.norm, large.norm, 1e-12);
        }
    }
}

TEST(Commutator, ZeroForConstantGrading) {
    const auto t = SpectralTruncation::build(SFTData::schottky(2), 3, std::nullopt, std::vector<double>(4, 0.0));
    EXPECT_NEAR(t.commutator_norm(0).norm, 0.0, 1e-14);
}

TEST(Commutator, TwistedByAutomorphism) {
    const auto s = SFTData::schottky(2);
    const auto autos = alphabet_automorphisms(s, false);
    for (const auto& sigma : autos) {
        const auto a = SpectralTruncation::build(s, 3, sigma);
        const auto b = SpectralTruncation::build(s, 5, sigma);
        for (std::size_t i = 0; i < 4; ++i)
            EXPECT_NEAR(a.commutator_norm(i, true).norm, b.commutator_norm(i, true).norm, 1e-12);
    }
    EXPECT_THROW(SpectralTruncation::build(s, 3, std::vector<int>{0, 2, 1, 3}), Error);
}

TEST(Commutator, OddTripleHasNoJloPhi0) {
    const auto t = SpectralTruncation::build(SFTData::schottky(2), 2);
    try {
        jlo_phi0(t, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RequiresEvenTriple);
    }
}

TEST(Theta, Genus2Values) {
    const auto d = grading_from_sft(SFTData::schottky(2), 32);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto r = theta_trace(d, t);
        EXPECT_TRUE(r.converged) << t;
        EXPECT_NEAR(r.partial, theta_reference(2, t), 1e-10);
    }
    EXPECT_NEAR(theta_trace(d, 1.0).partial, 7.391520685, 1e-8);
    EXPECT_NEAR(theta_trace(d, 0.5).partial, 12.975044, 1e-5);
    EXPECT_NEAR(theta_trace(d, 2.0).partial, 5.090734, 1e-5);
}

TEST(Theta, TailBoundDominatesOmittedTerms) {
    const auto s = SFTData::schottky(2);
    const auto full = theta_trace(grading_from_sft(s, 40), 0.3).partial;
    for (std::size_t n : {4, 6, 8, 12}) {
        const auto r = theta_trace(grading_from_sft(s, n), 0.3);
        EXPECT_LE(full - r.partial, r.tail_bound * (1 + 1e-12)) << n;
    }
}

TEST(Theta, InvalidParameterAndFinite) {
    const auto d = grading_from_sft(SFTData::schottky(2), 4);
    EXPECT_THROW(theta_trace(d, 0.0), Error);
    EXPECT_THROW(theta_trace(d, -1.0), Error);
    const auto f = finite_grading({3.0}, {2.0});
    EXPECT_DOUBLE_EQ(theta_trace(f, 1.0).partial, 3.0 * std::exp(-4.0));
    EXPECT_EQ(theta_trace(f, 1.0).tail_bound, 0.0);
}

TEST(Zeta, Genus2Divergent) {
    const auto d = grading_from_sft(SFTData::schottky(2), 8);
    for (double s = 0.5; s <= 20.0; s += 0.5) EXPECT_EQ(zeta_partial(d, s).diagnosis, SummabilityDiagnosis::Divergent);
    EXPECT_NEAR(zeta_partial(d, 3.0).asymptotic_ratio, 3.0, 1e-12);
}

TEST(Zeta, FiniteAndPowerSchedules) {
    const auto f = finite_grading({2.0}, {1.0});
    const auto z = zeta_partial(f, 7.0);
    EXPECT_EQ(z.diagnosis, SummabilityDiagnosis::Convergent);
    EXPECT_DOUBLE_EQ(z.partial, 2.0 * std::pow(2.0, -3.5));
    AFTriple a{{4, 12, 36, 108}, 1.0, 3.0, Parity::Odd};
    EXPECT_EQ(zeta_partial(af_grading(a), 1.0).diagnosis, SummabilityDiagnosis::Convergent);
}

TEST(AF, CoreDimsGenus2) {
    const auto core = af_core_dims(SFTData::schottky(2), 3);
    EXPECT_EQ(core[0].total, 4);
    EXPECT_EQ(core[1].blocks, (std::vector<BigInt>{3, 3, 3, 3}));
    EXPECT_EQ(core[1].total, 36);
    EXPECT_EQ(core[2].total, 4 * 81);
    // brute force: c_i(n) = #{admissible mu of length n, A(last(mu), i) = 1}
    const auto a = cayley_schottky_matrix(2).matrix;
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t i = 0; i < 4; ++i) {
            std::size_t c = 0;
            for (const auto& w : oracle::admissible_words(a, n)) c += a(w.back(), i);
            EXPECT_EQ(core[n].blocks[i], c);
        }
}

TEST(AF, SummabilityChainHolds) {
    AFTriple a;
    a.dims = af_core_totals(SFTData::schottky(2), 10);
    a.dims.erase(a.dims.begin());
    a.p = 1.0;
    a.q = 3.0;
    const auto rep = af_summability_report(a);
    EXPECT_TRUE(rep.bounded);
    for (std::size_t n = 0; n < a.dims.size(); ++n) EXPECT_LE(rep.partials[n], rep.majorants[n]);
    a.parity = Parity::Even;
    const auto even = af_summability_report(a);
    EXPECT_TRUE(even.bounded);
    EXPECT_NEAR(even.partials.back(), 2.0 * rep.partials.back(), 1e-15);
    EXPECT_EQ(std::abs(a.eigenvalue(0)), a.magnitude(0));
    EXPECT_NEAR(a.eigenvalue(0).real(), 0.0, 1e-9);
}

TEST(AF, Violations) {
    AFTriple a{{1, 2, 3}, 1.0, 2.0, Parity::Odd};
    try {
        af_summability_report(a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SummabilityViolation);
    }
    EXPECT_THROW(af_summability_report(AFTriple{{1, 1, 3}, 1.0, 3.0, Parity::Odd}), Error);
    EXPECT_THROW(af_summability_report(AFTriple{{1, 2, 2}, 1.0, 3.0, Parity::Odd}), Error);
}

TEST(Crossed, SmallSpectra) {
    const auto zero = crossed_product_spectrum({{{0.0, 1}}, 1});
    ASSERT_EQ(zero.size(), 3u);
    EXPECT_EQ(zero[0], (SpectralValue{-1.0, 2}));
    EXPECT_EQ(zero[1], (SpectralValue{0.0, 2}));
    EXPECT_EQ(zero[2], (SpectralValue{1.0, 2}));
    const auto sp = crossed_product_spectrum({{{1.0, 1}, {2.0, 1}}, 2});
    long total = 0;
    for (const auto& v : sp) {
        total += v.multiplicity;
        if (std::abs(v.value - std::sqrt(5.0)) < 1e-12) EXPECT_EQ(v.multiplicity, 4);
    }
    EXPECT_EQ(total, 2 * 2 * 5);
}

TEST(Crossed, SpectrumIsSymmetric) {
    const auto sp = crossed_product_spectrum({to_spectrum({0.5, 1.0, 3.0, 3.0}), 7});
    for (std::size_t i = 0; i < sp.size(); ++i) {
        EXPECT_EQ(sp[i].value, -sp[sp.size() - 1 - i].value);
        EXPECT_EQ(sp[i].multiplicity, sp[sp.size() - 1 - i].multiplicity);
    }
}

TEST(Crossed, ExponentShift) {
    std::vector<double> base;
    for (int j = 1; j <= 200; ++j) base.push_back(j);
    const auto b = summability_exponent_fit(to_spectrum(base));
    const auto c = summability_exponent_fit(crossed_product_spectrum({to_spectrum(base), 200}));
    EXPECT_NEAR(b.slope, 1.0, 0.05);
    EXPECT_NEAR(c.slope, 2.0, 0.15);
    EXPECT_NEAR(c.slope - b.slope, 1.0, 0.15);
}

TEST(Crossed, SquareBaseShift) {
    std::vector<double> base;
    for (int j = 1; j <= 40; ++j) base.push_back(static_cast<double>(j) * j);
    const auto c = summability_exponent_fit(crossed_product_spectrum({to_spectrum(base), 1600}));
    EXPECT_NEAR(c.slope, 1.5, 0.15);
}

TEST(Crossed, InsufficientSpectrum) {
    try {
        summability_exponent_fit(to_spectrum({1, 2, 3}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientSpectrum);
    }
}

TEST(Jlo, SupertraceIsIndex) {
    // D_0: C^3 -> C^1 of rank 1, so the heat supertrace is dim ker D_0 - dim ker D_0^* = 2
    EvenBlockOperator op;
    op.d0 = Eigen::MatrixXcd::Zero(1, 3);
    op.d0(0, 1) = std::complex<double>(2.0, 1.0);
    for (double s : {0.1, 1.0, 10.0}) EXPECT_NEAR(jlo_phi0(op, s), 2.0, 1e-12);
    EXPECT_THROW(jlo_phi0(op, 0.0), Error);
    EXPECT_NEAR(jlo_phi0(CrossedProductTriple{to_spectrum({1.0, 2.0}), 10}, 0.5), 0.0, 1e-12);
}
