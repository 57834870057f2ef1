#include "schottky/graphs.hpp"
#include "schottky/io.hpp"
#include "schottky/ktheory.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace schottky;

namespace {

BinaryMatrix fixture(const std::string& name) {
    return io::matrix_from_json(io::read_json_file(std::string(SCHOTTKY_SOURCE_DIR) + "/data/matrices/" + name + ".json"));
}

const AbelianGroupDescriptor kZ2{2, {}};

} // namespace

TEST(CkKTheory, Genus2CatalogIsZ2) {
    for (const char* name : {"a1", "a2", "a3"}) {
        const auto k = ck_k_theory(fixture(name));
        EXPECT_EQ(k.k0, kZ2) << name;
        EXPECT_EQ(k.k1, kZ2) << name;
    }
    for (const auto& g : genus2_catalog()) EXPECT_EQ(ck_k_theory(directed_edge_matrix(g).matrix).k0, kZ2);
}

TEST(CkKTheory, SchottkyRankG) {
    // 1 - A^t for the free group on g generators has cokernel Z^g ⊕ Z/(g-1)
    for (int g = 2; g <= 5; ++g) {
        const auto k = ck_k_theory(cayley_schottky_matrix(g).matrix);
        EXPECT_EQ(k.k0.rank, static_cast<std::size_t>(g)) << g;
        if (g > 2) {
            ASSERT_EQ(k.k0.torsion.size(), 1u);
            EXPECT_EQ(k.k0.torsion[0], g - 1);
        } else {
            EXPECT_TRUE(k.k0.torsion.empty());
        }
    }
}

TEST(CkKTheory, FullShiftOnTwoLetters) {
    // O_2: 1 - A^t = [[0,-1],[-1,0]] is unimodular
    const auto k = ck_k_theory(BinaryMatrix{{1, 1}, {1, 1}});
    EXPECT_TRUE(k.k0.is_trivial());
    EXPECT_EQ(k.k0.to_string(), "0");
    EXPECT_EQ(k.k1.rank, 0u);
}

TEST(CkKTheory, FullShiftOnThreeLetters) {
    const auto k = ck_k_theory(BinaryMatrix{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
    EXPECT_EQ(k.k0.rank, 0u);
    ASSERT_EQ(k.k0.torsion.size(), 1u);
    EXPECT_EQ(k.k0.torsion[0], 2);
    EXPECT_EQ(k.k0.to_string(), "Z/2");
}

TEST(CkKTheory, RejectsNonBinary) {
    try {
        ck_k_theory(IntegerMatrix::from_rows(std::vector<std::vector<int>>{{1, 2}, {0, 1}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidTransitionMatrix);
    }
    EXPECT_THROW(BinaryMatrix::from_rows(std::vector<std::vector<int>>{{1, 0}}), Error);
}

TEST(SmithNormalForm, KnownExample) {
    const auto m = IntegerMatrix::from_rows(std::vector<std::vector<int>>{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    const auto snf = smith_normal_form(m);
    EXPECT_EQ(snf.invariant_factors, (std::vector<BigInt>{2, 6, 12}));
    EXPECT_EQ(snf.left * m * snf.right, snf.diagonal);
    EXPECT_EQ(abs(determinant(snf.left)), 1);
    EXPECT_EQ(abs(determinant(snf.right)), 1);
}

TEST(SmithNormalForm, DeterminantMatchesLaplace) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-6, 6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 5;
        std::vector<std::vector<long long>> rows(n, std::vector<long long>(n));
        for (auto& r : rows)
            for (auto& x : r) x = entry(rng);
        const auto m = IntegerMatrix::from_rows(rows);
        const BigInt det = determinant(m);
        EXPECT_EQ(det, oracle::laplace_determinant(rows));
        BigInt prod = 1;
        for (const auto& d : smith_normal_form(m).invariant_factors) prod *= d;
        EXPECT_EQ(abs(det), prod);
    }
}

TEST(SmithNormalForm, RectangularAndZero) {
    const auto snf = smith_normal_form(IntegerMatrix::from_rows(std::vector<std::vector<int>>{{0, 0, 0}, {0, 0, 0}}));
    EXPECT_EQ(snf.invariant_factors, (std::vector<BigInt>{0, 0}));
    const auto g = cokernel(IntegerMatrix::from_rows(std::vector<std::vector<int>>{{2, 0}, {0, 0}}));
    EXPECT_EQ(g.rank, 1u);
    EXPECT_EQ(g.to_string(), "Z/2 ⊕ Z^1");
}

TEST(Irreducibility, Basics) {
    EXPECT_TRUE(irreducibility_check(fixture("a2")));
    EXPECT_FALSE(irreducibility_check(BinaryMatrix{{1, 1}, {0, 1}}));
    EXPECT_FALSE(irreducibility_check(BinaryMatrix(0)));
    EXPECT_TRUE(irreducibility_check(BinaryMatrix{{0, 1}, {1, 0}}));
}

TEST(StableIso, Genus2AndKato) {
    EXPECT_EQ(stable_iso_verdict(fixture("a1"), fixture("a2")), StableIsoVerdict::StablyIsomorphic);
    EXPECT_EQ(stable_iso_verdict(fixture("a1"), fixture("a3")), StableIsoVerdict::StablyIsomorphic);
    for (int r = 1; r <= 5; ++r)
        for (int s = r + 1; s <= 5; ++s)
            EXPECT_EQ(stable_iso_verdict(directed_edge_matrix(kato_graph(r)).matrix,
                                         directed_edge_matrix(kato_graph(s)).matrix),
                      StableIsoVerdict::StablyIsomorphic);
}

TEST(StableIso, NeverClaimsNonIsomorphic) {
    // different K0 or a permutation matrix only yields Inconclusive
    EXPECT_EQ(stable_iso_verdict(fixture("a1"), BinaryMatrix{{1, 1}, {1, 1}}), StableIsoVerdict::Inconclusive);
    EXPECT_EQ(stable_iso_verdict(BinaryMatrix{{0, 1}, {1, 0}}, BinaryMatrix{{0, 1}, {1, 0}}),
              StableIsoVerdict::Inconclusive);
    EXPECT_EQ(to_string(StableIsoVerdict::Inconclusive), "Inconclusive");
}

TEST(CmszConstants, RecordedAsDocumentation) {
    const auto j = io::read_json_file(std::string(SCHOTTKY_SOURCE_DIR) + "/data/cmsz_k_groups.json");
    EXPECT_EQ(j["groups"][0]["k0"]["torsion"], io::Json::array({3}));
    EXPECT_EQ(j["groups"][1]["k0"]["torsion"], io::Json::array({2, 2, 3}));
}
