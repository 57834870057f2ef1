#include "schottky/buildings.hpp"
#include "schottky/cli.hpp"
#include "schottky/io.hpp"
#include "schottky/ktheory.hpp"
#include "schottky/shift.hpp"
#include "schottky/triples.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace schottky;

namespace {

constexpr int kCases = 200;

std::mt19937 rng_for(const char* suite) { return std::mt19937(std::hash<std::string>{}(suite) & 0xffffffffu); }

IntegerMatrix random_integer_matrix(std::mt19937& rng) {
    std::uniform_int_distribution<int> dim(1, 5), entry(-4, 4);
    IntegerMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    return m;
}

} // namespace

TEST(Properties, SmithNormalForm) {
    auto rng = rng_for("snf");
    for (int c = 0; c < kCases; ++c) {
        const auto m = random_integer_matrix(rng);
        const auto snf = smith_normal_form(m);
        EXPECT_EQ(snf.left * m * snf.right, snf.diagonal);
        EXPECT_TRUE(snf.diagonal.is_diagonal());
        const auto& d = snf.invariant_factors;
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            if (d[i + 1] != 0) {
                EXPECT_EQ(d[i + 1] % d[i], 0);
            }
        EXPECT_EQ(rational_rank(m), oracle::rank_mod_prime(m));
        const auto left = oracle::laplace_determinant([&] {
            std::vector<std::vector<long long>> r(snf.left.rows(), std::vector<long long>(snf.left.cols()));
            for (std::size_t i = 0; i < r.size(); ++i)
                for (std::size_t j = 0; j < r.size(); ++j) r[i][j] = static_cast<long long>(snf.left(i, j));
            return r;
        }());
        EXPECT_EQ(abs(left), 1);
    }
}

TEST(Properties, KTheoryAgainstDeterminantAndRank) {
    auto rng = rng_for("ktheory");
    std::uniform_int_distribution<int> dim(2, 6);
    for (int c = 0; c < kCases; ++c) {
        const auto a = oracle::random_irreducible(dim(rng), rng);
        const std::size_t n = a.size();
        const auto k = ck_k_theory(a);
        const IntegerMatrix m = IntegerMatrix::identity(n) - IntegerMatrix::from_binary(a.transposed());
        EXPECT_EQ(k.k0.rank, n - oracle::rank_mod_prime(m));
        EXPECT_EQ(k.k1.rank, k.k0.rank);
        std::vector<std::vector<long long>> rows(n, std::vector<long long>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = static_cast<long long>(m(i, j));
        const BigInt det = abs(oracle::laplace_determinant(rows));
        if (det != 0) {
            BigInt order = 1;
            for (const auto& t : k.k0.torsion) order *= t;
            EXPECT_EQ(order, det);
        }
        // invariant under relabelling letters
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto kp = ck_k_theory(a.permuted(perm));
        EXPECT_EQ(kp.k0.rank, k.k0.rank);
        EXPECT_EQ(kp.k0.torsion, k.k0.torsion);
        EXPECT_TRUE(irreducibility_check(a));
    }
}

TEST(Properties, FiltrationTelescopes) {
    auto rng = rng_for("telescope");
    std::uniform_int_distribution<int> dim(2, 5), level(1, 4);
    for (int c = 0; c < kCases; ++c) {
        const SFTData s(oracle::random_irreducible(dim(rng), rng));
        const std::size_t n = level(rng);
        const auto f = filtration_dims(s, n);
        BigInt sum = 0;
        for (const auto& d : f.increments) sum += d;
        EXPECT_EQ(sum, f.levels[n]);
        EXPECT_EQ(f.levels[n], oracle::admissible_words(s.matrix(), n + 1).size());
    }
}

TEST(Properties, ParryMeasureIsAdditive) {
    auto rng = rng_for("measure");
    std::uniform_int_distribution<int> dim(2, 5), level(1, 3);
    for (int c = 0; c < kCases; ++c) {
        const SFTData s(oracle::random_irreducible(dim(rng), rng));
        const ParryMeasure mu(s);
        const auto words = oracle::admissible_words(s.matrix(), level(rng));
        double total = 0.0;
        for (const auto& w : words) {
            const double m = mu(w);
            total += m;
            double children = 0.0;
            for (std::size_t j = 0; j < s.alphabet_size(); ++j)
                if (s.matrix()(w.back(), j)) {
                    Word x(w.begin(), w.end());
                    x.push_back(static_cast<int>(j));
                    children += mu(x);
                }
            EXPECT_NEAR(children, m, 1e-12);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Properties, TruncationRelations) {
    auto rng = rng_for("truncation");
    std::uniform_int_distribution<int> dim(2, 4), level(2, 4);
    for (int c = 0; c < kCases; ++c) {
        const SFTData s(oracle::random_irreducible(dim(rng), rng));
        const auto t = SpectralTruncation::build(s, level(rng));
        const auto r = t.ck_residuals();
        EXPECT_LT(r.range_sum, 1e-9);
        EXPECT_LT(r.source_max, 1e-9);
        const std::size_t i = std::uniform_int_distribution<std::size_t>(0, s.alphabet_size() - 1)(rng);
        EXPECT_NEAR(t.commutator_norm(i).norm, oracle::dense_commutator_norm(t, i), 1e-10);
    }
}

TEST(Properties, CrossedSpectrumSymmetry) {
    auto rng = rng_for("crossed");
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::uniform_int_distribution<int> size(1, 8), cutoff(0, 12);
    for (int c = 0; c < kCases; ++c) {
        std::vector<double> base(size(rng));
        for (auto& b : base) b = std::round(value(rng) * 4) / 4;
        CrossedProductTriple t{to_spectrum(base), cutoff(rng)};
        const auto sp = crossed_product_spectrum(t);
        long total = 0;
        for (std::size_t i = 0; i < sp.size(); ++i) {
            EXPECT_EQ(sp[i].value, -sp[sp.size() - 1 - i].value);
            EXPECT_EQ(sp[i].multiplicity, sp[sp.size() - 1 - i].multiplicity);
            if (i) {
                EXPECT_LT(sp[i - 1].value, sp[i].value);
            }
            total += sp[i].multiplicity;
        }
        EXPECT_EQ(total, 2L * (2 * t.cutoff + 1) * static_cast<long>(base.size()));
    }
}

TEST(Properties, TauRoots) {
    auto rng = rng_for("tau");
    std::uniform_int_distribution<int> sides(5, 10);
    std::uniform_int_distribution<long> weight(2, 9);
    for (int c = 0; c < kCases; ++c) {
        std::vector<long> q(sides(rng));
        for (auto& w : q) w = weight(rng);
        const auto s = solve_tau(q);
        EXPECT_GT(s.x, 0.0);
        EXPECT_LT(s.residual, 1e-12);
        EXPECT_NEAR(tau_lhs(q, s.x), 2.0, 1e-12);
        std::rotate(q.begin(), q.begin() + 1, q.end());
        EXPECT_NEAR(solve_tau(q).x, s.x, 1e-10);
    }
}

TEST(Properties, InclusionExclusionOnProductTables) {
    auto rng = rng_for("inclex");
    std::uniform_int_distribution<int> genus(2, 3), corner(0, 4);
    for (int c = 0; c < kCases; ++c) {
        const int g = genus(rng), l = corner(rng), k = corner(rng);
        const auto t = product_filtration_table(g, l, k);
        EXPECT_TRUE(inclusion_exclusion_check(l, k, t));
    }
}

TEST(Properties, JsonRoundTrips) {
    auto rng = rng_for("json");
    std::uniform_int_distribution<int> dim(1, 7), q(1, 2);
    for (int c = 0; c < kCases; ++c) {
        const auto a = oracle::random_irreducible(dim(rng), rng);
        EXPECT_EQ(io::matrix_from_json(io::Json::parse(io::matrix_to_json(a).dump())), a);
        auto p = family_presentation(q(rng));
        if (c % 2) p = four_fold_cover(p);
        const auto words = p.cyclic_words();
        const auto& drop = words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
        for (std::size_t r = 0; r < 4; ++r) p.erase_tuple(rotate_tuple(drop, r));
        EXPECT_EQ(io::presentation_from_json(io::Json::parse(io::presentation_to_json(p).dump())), p);
    }
}

TEST(Properties, CliRenderRoundTrip) {
    auto rng = rng_for("cli");
    std::uniform_int_distribution<int> pick(0, 4), small(2, 8);
    std::uniform_real_distribution<double> real(0.01, 5.0);
    for (int c = 0; c < kCases; ++c) {
        std::vector<std::string> args;
        switch (pick(rng)) {
        case 0:
            args = {"spectra", "--genus", std::to_string(small(rng)), "--levels", std::to_string(small(rng)), "--t",
                    cli::detail::exact(real(rng)) + "," + cli::detail::exact(real(rng))};
            break;
        case 1:
            args = {"af", "--genus", std::to_string(small(rng)), "--p", cli::detail::exact(real(rng)), "--q",
                    cli::detail::exact(real(rng))};
            if (c % 3 == 0) args.push_back("--even");
            break;
        case 2:
            args = {"crossed", "--base-range", std::to_string(small(rng) * 10), "--base-power",
                    cli::detail::exact(real(rng)), "--cutoff", std::to_string(small(rng) * 25)};
            break;
        case 3:
            args = {"tau", "--weights", std::to_string(small(rng)) + "," + std::to_string(small(rng)) + ",2,2,2"};
            break;
        default:
            args = {"building", c % 2 ? "links" : "bm", "--q", std::to_string(small(rng)), "--format", "csv"};
            if (c % 4 < 2) args.push_back("--cover");
            break;
        }
        const auto plan = cli::parse_invocation(args);
        EXPECT_EQ(cli::parse_invocation(cli::render(plan)), plan);
    }
}
