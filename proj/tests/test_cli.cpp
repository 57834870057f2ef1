#include "schottky/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace schottky;
using namespace schottky::cli;

namespace {

const std::string kSource = SCHOTTKY_SOURCE_DIR;

std::string data(const std::string& rel) { return kSource + "/data/" + rel; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    Outcome o;
    o.status = cli::run(args, o.out, o.err);
    return o;
}

ErrorCode usage_code(const std::vector<std::string>& args, std::string* witness = nullptr) {
    try {
        parse_invocation(args);
    } catch (const Error& e) {
        if (witness) *witness = e.witness();
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::UsageError;
}

} // namespace

TEST(Parse, Examples) {
    const auto k = parse_invocation({"ktheory", "--matrix", data("matrices/a1.json")});
    EXPECT_EQ(k.subcommand, "ktheory");
    EXPECT_EQ(k.matrix, data("matrices/a1.json"));

    const auto t = parse_invocation({"tau", "--weights", "2,2,2,2,2"});
    EXPECT_EQ(t.weights, (std::vector<long>{2, 2, 2, 2, 2}));

    const auto s = parse_invocation({"spectra", "--genus", "2", "--levels", "6", "--t", "1.0"});
    EXPECT_EQ(s.genus, 2);
    EXPECT_EQ(s.levels, 6);
    EXPECT_EQ(s.t, std::vector<double>{1.0});

    const auto b = parse_invocation({"building", "family", "--q", "1", "--cover", "--bm"});
    EXPECT_EQ(b.verb, "family");
    EXPECT_EQ(b.family_q, 1);
    EXPECT_TRUE(b.cover && b.bm);
}

TEST(Parse, UsageErrorsNameTheFlag) {
    std::string w;
    EXPECT_EQ(usage_code({"tau", "--weights", "2,2,2,2", "--bogus"}, &w), ErrorCode::UsageError);
    EXPECT_EQ(w, "--bogus");
    EXPECT_EQ(usage_code({"spectra", "--genus", "40"}, &w), ErrorCode::UsageError);
    EXPECT_EQ(w, "--genus");
    EXPECT_EQ(usage_code({"spectra", "--genus", "2", "--levels", "1"}, &w), ErrorCode::UsageError);
    EXPECT_EQ(w, "--levels");
    EXPECT_EQ(usage_code({"spectra", "--genus", "2", "--t", "-1"}, &w), ErrorCode::UsageError);
    EXPECT_EQ(w, "--t");
    EXPECT_EQ(usage_code({"ktheory", "--genus", "2", "--matrix", data("matrices/a1.json")}), ErrorCode::UsageError);
    EXPECT_EQ(usage_code({"building", "family"}), ErrorCode::UsageError);
    EXPECT_EQ(usage_code({"af", "--genus", "2", "--p", "1"}), ErrorCode::UsageError);
    EXPECT_EQ(usage_code({"ktheory", "--matrix", "/nonexistent/a.json"}, &w), ErrorCode::IoError);
    EXPECT_EQ(w, "/nonexistent/a.json");
}

TEST(Parse, RenderRoundTrip) {
    const std::vector<std::vector<std::string>> cases{
        {"ktheory", "--matrix", data("matrices/a1.json"), "--compare", data("matrices/a2.json")},
        {"spectra", "--genus", "2", "--levels", "5", "--t", "0.5,1,2", "--s", "3"},
        {"af", "--graph", data("graphs/theta.json"), "--p", "1", "--q", "3.5", "--even", "--format", "csv"},
        {"crossed", "--base-range", "40", "--base-power", "2", "--cutoff", "1600"},
        {"crossed", "--base", "0.1,0.3", "--format", "text"},
        {"cohomology", "--genus", "3", "--levels", "2"},
        {"building", "links", "--q", "2", "--cover", "--output", "/tmp/x.json"},
        {"tau", "--weights", "2,3,4,5,6"},
        {"catalog", "--kato", "3"},
    };
    for (const auto& c : cases) {
        const auto plan = parse_invocation(c);
        EXPECT_EQ(parse_invocation(render(plan)), plan) << c[0];
    }
}

TEST(Golden, PaperAnchoredReports) {
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
        {{"ktheory", "--matrix", data("matrices/a1.json")}, "ktheory_a1.json"},
        {{"tau", "--weights", "2,2,2,2,2"}, "tau_22222.json"},
        {{"building", "family", "--q", "1", "--cover", "--bm"}, "building_family_q1_cover_bm.json"},
    };
    for (const auto& [args, file] : cases) {
        const auto first = invoke(args);
        const auto second = invoke(args);
        ASSERT_EQ(first.status, 0) << first.err;
        EXPECT_EQ(first.out, second.out);
        EXPECT_EQ(first.out, slurp(kSource + "/tests/golden/" + file)) << file;
    }
    const auto j = Json::parse(invoke({"building", "family", "--q", "1", "--cover", "--bm"}).out);
    EXPECT_EQ(j["bm"]["valences"], Json::array({6, 6}));
}

TEST(Report, KTheoryCatalogMatrices) {
    for (const char* f : {"a1.json", "a2.json", "a3.json"}) {
        const auto j = Json::parse(invoke({"ktheory", "--matrix", data(std::string("matrices/") + f)}).out);
        EXPECT_EQ(j["k0"]["rank"], 2);
        EXPECT_EQ(j["k1"]["rank"], 2);
    }
    const auto cmp = Json::parse(
        invoke({"ktheory", "--matrix", data("matrices/a1.json"), "--compare", data("matrices/a2.json")}).out);
    EXPECT_EQ(cmp["verdict"], "StablyIsomorphic");
}

TEST(Report, CsvAndText) {
    const auto csv = invoke({"spectra", "--genus", "2", "--levels", "3", "--t", "0.5,1,2", "--format", "csv"});
    ASSERT_EQ(csv.status, 0);
    EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "t,partial,tail_bound");
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 4);

    const auto text = invoke({"ktheory", "--genus", "2", "--format", "text"});
    EXPECT_NE(text.out.find("Z^2"), std::string::npos);
    const auto torsion = invoke({"ktheory", "--genus", "3", "--format", "text"});
    EXPECT_NE(torsion.out.find("Z/2 ⊕ Z^3"), std::string::npos) << torsion.out;

    const auto cohom = Json::parse(invoke({"cohomology", "--genus", "2", "--levels", "1"}).out);
    EXPECT_EQ(cohom["levels"][1]["dim_h1"], 9);
}

TEST(Report, FloatsUseTwelveDigits) {
    const auto j = Json::parse(invoke({"spectra", "--genus", "2", "--levels", "3", "--t", "1"}).out);
    EXPECT_DOUBLE_EQ(j["theta"][0]["partial"].get<double>(), 7.39152068519);
    EXPECT_EQ(j["dims"][0], 4);
}

TEST(Report, ErrorJsonAndExitStatus) {
    auto o = invoke({"tau", "--weights", "2,2,2,2"});
    EXPECT_EQ(o.status, 1);
    EXPECT_TRUE(o.out.empty());
    const auto j = Json::parse(o.err);
    EXPECT_EQ(j["code"], "DegenerateEuclidean");
    EXPECT_TRUE(j.contains("witness"));

    o = invoke({"tau", "--bogus"});
    EXPECT_EQ(o.status, 2);
    EXPECT_EQ(Json::parse(o.err)["code"], "UsageError");

    o = invoke({"crossed", "--base", "1,2,3", "--cutoff", "1"});
    EXPECT_EQ(o.status, 1);
    EXPECT_EQ(Json::parse(o.err)["code"], "InsufficientSpectrum");
}

TEST(Report, OutputFile) {
    const auto path = (std::filesystem::temp_directory_path() / "schottky_tau.json").string();
    const auto o = invoke({"tau", "--weights", "2,2,2,2,2", "--output", path});
    ASSERT_EQ(o.status, 0);
    EXPECT_TRUE(o.out.empty());
    EXPECT_EQ(slurp(path), slurp(kSource + "/tests/golden/tau_22222.json"));
    std::filesystem::remove(path);
}

TEST(Budget, EnvironmentOverride) {
    ::setenv(kBudgetVariable, "10", 1);
    auto o = invoke({"cohomology", "--genus", "2", "--levels", "3"});
    EXPECT_EQ(o.status, 1);
    EXPECT_EQ(Json::parse(o.err)["code"], "EnumerationBudgetExceeded");
    ::setenv(kBudgetVariable, "junk", 1);
    o = invoke({"cohomology", "--genus", "2", "--levels", "1"});
    EXPECT_EQ(o.status, 2);
    ::unsetenv(kBudgetVariable);
    EXPECT_EQ(invoke({"cohomology", "--genus", "2", "--levels", "3"}).status, 0);
}

TEST(Binary, SubprocessMatchesLibrary) {
    const std::string cmd = std::string(SCHOTTKY_CLI_PATH) + " tau --weights 2,2,2,2,2";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::string out;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    EXPECT_EQ(::pclose(pipe), 0);
    EXPECT_EQ(out, invoke({"tau", "--weights", "2,2,2,2,2"}).out);
}
