// One PASS/FAIL line per acceptance criterion, with wall time against its budget.

#include "schottky/buildings.hpp"
#include "schottky/io.hpp"
#include "schottky/ktheory.hpp"
#include "schottky/shift.hpp"
#include "schottky/triples.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace schottky;

namespace {

constexpr double kCkTolerance = 1e-9;
constexpr double kStabilityTolerance = 1e-12;
constexpr double kTailTolerance = 1e-12;
constexpr double kThetaAtOne = 7.3914;
constexpr double kThetaWindow = 1e-3;
constexpr double kSlopeTarget = 2.0;
constexpr double kSlopeWindow = 0.15;
constexpr double kTauResidual = 1e-12;
constexpr double kTauClosedForm = 1e-10;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> check;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

BinaryMatrix fixture(const char* name) {
    return io::matrix_from_json(io::read_json_file(std::string(SCHOTTKY_SOURCE_DIR) + "/data/matrices/" + name));
}

SFTData theta_shift() { return SFTData::from_edge_matrix(directed_edge_matrix(theta_graph())); }

Outcome k_theory_catalog() {
    Outcome o;
    for (const char* f : {"a1.json", "a2.json", "a3.json"}) {
        const auto k = ck_k_theory(fixture(f));
        const bool ok = k.k0.rank == 2 && k.k0.torsion.empty() && k.k1.rank == 2;
        o.pass &= ok;
        o.detail += std::string(f) + ": K0=" + k.k0.to_string() + " K1=" + k.k1.to_string() + "; ";
    }
    return o;
}

Outcome stable_iso() {
    Outcome o;
    const auto a1 = fixture("a1.json");
    for (const char* f : {"a2.json", "a3.json"})
        if (stable_iso_verdict(a1, fixture(f)) != StableIsoVerdict::StablyIsomorphic) {
            o.pass = false;
            o.detail += std::string("a1 vs ") + f + " inconclusive; ";
        }
    for (int r = 1; r <= 5; ++r)
        for (int s = r + 1; s <= 5; ++s)
            if (stable_iso_verdict(directed_edge_matrix(kato_graph(r)).matrix,
                                   directed_edge_matrix(kato_graph(s)).matrix) != StableIsoVerdict::StablyIsomorphic) {
                o.pass = false;
                o.detail += "kato " + std::to_string(r) + " vs " + std::to_string(s) + " inconclusive; ";
            }
    if (o.pass) o.detail = "2 catalog pairs and 10 Kato pairs stably isomorphic";
    return o;
}

Outcome ck_relations() {
    Outcome o;
    double worst = 0.0;
    for (std::size_t n = 4; n <= 6; ++n) {
        const auto r = SpectralTruncation::build(SFTData::schottky(2), n).ck_residuals();
        worst = std::max({worst, r.range_sum, r.source_max});
    }
    o.pass = worst < kCkTolerance;
    o.detail = "max residual " + fmt(worst);
    return o;
}

Outcome commutator_stability() {
    Outcome o;
    double worst = 0.0;
    for (const auto& s : {SFTData::schottky(2), theta_shift()})
        for (std::size_t n = 3; n <= 4; ++n) {
            const auto a = SpectralTruncation::build(s, n);
            const auto b = SpectralTruncation::build(s, n + 3);
            for (std::size_t i = 0; i < s.alphabet_size(); ++i) {
                const auto ca = a.commutator_norm(i);
                if (n < ca.stabilization_level + 2) continue;
                worst = std::max(worst, std::abs(ca.norm - b.commutator_norm(i).norm));
            }
        }
    o.pass = worst < kStabilityTolerance;
    o.detail = "max |N vs N+3| " + fmt(worst);
    return o;
}

Outcome theta_summability() {
    Outcome o;
    const auto d = grading_from_sft(SFTData::schottky(2), 32);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto r = theta_trace(d, t);
        o.pass &= r.converged && r.tail_bound < kTailTolerance;
        o.detail += "t=" + fmt(t) + ": " + fmt(r.partial) + " (tail " + fmt(r.tail_bound) + "); ";
        if (t == 1.0) o.pass &= std::abs(r.partial - kThetaAtOne) <= kThetaWindow;
    }
    return o;
}

Outcome zeta_divergence() {
    Outcome o;
    const auto d = grading_from_sft(SFTData::schottky(2), 8);
    int checked = 0;
    for (int k = 1; k <= 400; ++k) {
        const double s = 0.05 * k;
        ++checked;
        if (zeta_partial(d, s).diagnosis != SummabilityDiagnosis::Divergent) {
            o.pass = false;
            o.detail = "s=" + fmt(s) + " not divergent";
            return o;
        }
    }
    o.detail = std::to_string(checked) + " values of s in (0, 20] divergent";
    return o;
}

Outcome af_summability() {
    Outcome o;
    AFTriple a;
    a.dims = af_core_totals(SFTData::schottky(2), 10);
    a.dims.erase(a.dims.begin());
    a.p = 1.0;
    a.q = 3.0;
    const auto rep = af_summability_report(a);
    for (std::size_t n = 0; n < rep.partials.size(); ++n) o.pass &= rep.partials[n] <= rep.majorants[n];
    o.detail = "partial " + fmt(rep.partials.back()) + " <= majorant " + fmt(rep.majorants.back()) + " over " +
               std::to_string(rep.partials.size()) + " levels";
    return o;
}

Outcome crossed_shift() {
    std::vector<double> base;
    for (int j = 1; j <= 200; ++j) base.push_back(j);
    const auto fit = summability_exponent_fit(crossed_product_spectrum({to_spectrum(base), 200}));
    return {std::abs(fit.slope - kSlopeTarget) <= kSlopeWindow, "slope " + fmt(fit.slope)};
}

Outcome product_dims() {
    Outcome o;
    const auto f2 = product_grading_dims(2, 2);
    o.pass = f2 == std::vector<BigInt>{12, 48, 144};
    std::ostringstream os;
    for (int g : {2, 3}) {
        const auto formula = product_grading_dims(g, 4);
        // independent count: pair up listed words, then inclusion-exclusion along l + k = m
        const auto a = cayley_schottky_matrix(g).matrix;
        std::vector<std::vector<BigInt>> v(5, std::vector<BigInt>(5));
        for (std::size_t l = 0; l <= 4; ++l)
            for (std::size_t k = 0; k <= 4; ++k) v[l][k] = oracle::product_pairs(a, l, k);
        const auto d = inclusion_exclusion_pieces(v);
        for (int m = 0; m <= 4; ++m) {
            BigInt counted = 0;
            for (int l = 0; l <= m; ++l) counted += d[l][m - l];
            if (counted != formula[m]) {
                o.pass = false;
                os << "g=" << g << " m=" << m << ": formula " << formula[m] << " vs counted " << counted << "; ";
            }
        }
    }
    o.detail = o.pass ? "formula and enumeration agree" : os.str();
    return o;
}

Outcome buildings() {
    Outcome o;
    for (int q = 1; q <= 4; ++q) {
        const auto p = family_presentation(q);
        const auto c = four_fold_cover(p);
        const auto bm = bm_group_data(c);
        const int v = 2 * (4 * q - 1);
        const bool ok = validate_presentation(p, complete_links(p)).passed() && stable_pairs_check(c).holds &&
                        bm.valences == std::make_pair(v, v) &&
                        links_match(polyhedron_from_presentation(p), complete_links(p)) &&
                        links_match(polyhedron_from_presentation(c), complete_links(c));
        o.pass &= ok;
        o.detail += "q=" + std::to_string(q) + (ok ? " ok" : " FAILED") + " (valence " +
                    std::to_string(bm.valences.first) + "); ";
    }
    return o;
}

Outcome exponent_equation() {
    Outcome o;
    double worst_res = 0.0, worst_gap = 0.0;
    for (int r = 5; r <= 12; ++r)
        for (long q = 2; q <= 4; ++q) {
            const auto s = solve_tau(std::vector<long>(r, q));
            worst_res = std::max(worst_res, s.residual);
            worst_gap = std::max(worst_gap, std::abs(s.x - tau_closed_form(r, q)));
        }
    bool degenerate = false;
    try {
        solve_tau({2, 2, 2, 2});
    } catch (const Error& e) {
        degenerate = e.code() == ErrorCode::DegenerateEuclidean;
    }
    o.pass = worst_res < kTauResidual && worst_gap < kTauClosedForm && degenerate;
    o.detail = "max residual " + fmt(worst_res) + ", max closed-form gap " + fmt(worst_gap) +
               (degenerate ? ", r=4 degenerate" : ", r=4 not rejected");
    return o;
}

Outcome cohomology_ranks() {
    Outcome o;
    const auto s = SFTData::schottky(2);
    const auto h = cohomology_filtration_dims(s, 4);
    o.pass = h[1] == 9;
    for (std::size_t n = 1; n <= 4; ++n)
        o.pass &= h[n] == filtration_dims(s, n).levels[n] - BigInt(oracle::rank_mod_prime(coboundary_matrix(s, n)));
    o.detail = "h1 dims:";
    for (const auto& x : h) o.detail += " " + x.str();
    return o;
}

Outcome property_suites() {
    const std::string cmd = std::string(SCHOTTKY_PROPERTIES_PATH) + " --gtest_brief=1 > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return {status == 0, status == 0 ? "10 suites x 200 cases" : "property binary exit " + std::to_string(status)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "K-theory of the genus-2 catalog", 1, k_theory_catalog},
        {2, "stable isomorphism verdicts", 1, stable_iso},
        {3, "Cuntz-Krieger residuals", 5, ck_relations},
        {4, "commutator stabilization", 5, commutator_stability},
        {5, "theta summability", 1, theta_summability},
        {6, "zeta divergence", 1, zeta_divergence},
        {7, "AF summability", 1, af_summability},
        {8, "crossed-product degree shift", 10, crossed_shift},
        {9, "product-of-trees dimensions", 10, product_dims},
        {10, "buildings family, cover, BM", 5, buildings},
        {11, "exponent equation", 1, exponent_equation},
        {12, "cohomology ranks", 5, cohomology_ranks},
        {13, "property suites", 60, property_suites},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const Error& e) {
            o = {false, std::string(to_string(e.code())) + ": " + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail += " [over budget]";
        }
        failures += !o.pass;
        std::printf("%s %2d  %-32s %9.3f s / %4.0f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.budget_seconds, o.detail.c_str());
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
