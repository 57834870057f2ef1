#pragma once

#include "schottky/buildings.hpp"
#include "schottky/io.hpp"
#include "schottky/ktheory.hpp"
#include "schottky/shift.hpp"
#include "schottky/triples.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace schottky::cli {

using io::Json;

inline constexpr const char* kBudgetVariable = "SCHOTTKY_ENUMERATION_BUDGET";
inline constexpr std::size_t kThetaLevels = 32;

/// Thrown by parse_invocation for --help; carries the rendered usage text.
struct HelpRequested {
    std::string text;
};

struct RunPlan {
    std::string subcommand;
    std::string verb; ///< building only

    std::optional<std::string> matrix;
    std::optional<std::string> graph;
    std::optional<std::string> compare;
    std::optional<std::string> presentation;
    std::optional<std::string> graphs;

    std::optional<int> genus;
    std::optional<int> levels;
    std::vector<double> t;
    std::optional<double> s;
    std::optional<double> p;
    std::optional<double> q;
    bool even = false;

    std::vector<double> base;
    std::optional<int> base_range;
    std::optional<double> base_power;
    std::optional<int> cutoff;

    std::optional<int> family_q;
    bool cover = false;
    bool bm = false;
    bool links = false;

    std::vector<long> weights;
    std::optional<int> kato;

    std::string format = "json";
    std::optional<std::string> output;

    friend bool operator==(const RunPlan&, const RunPlan&) = default;
};

namespace detail {

inline void require_readable(const std::optional<std::string>& path) {
    if (!path) return;
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read file", *path);
}

inline void require(bool ok, const std::string& message, const std::string& flag) {
    if (!ok) throw Error(ErrorCode::UsageError, message, flag);
}

inline std::string exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        if constexpr (std::is_floating_point_v<T>)
            s += exact(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

} // namespace detail

/// Parses arguments (without the program name) into a plan. Usage problems
/// throw UsageError naming the flag; unreadable inputs throw IoError.
inline RunPlan parse_invocation(const std::vector<std::string>& args) {
    RunPlan plan;
    CLI::App app{"schottky"};
    app.require_subcommand(1, 1);
    app.add_option("--format", plan.format)->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output", plan.output);

    auto source_options = [&](CLI::App* sub) {
        sub->add_option("--matrix", plan.matrix);
        sub->add_option("--graph", plan.graph);
        sub->add_option("--genus", plan.genus);
    };

    auto* ktheory = app.add_subcommand("ktheory");
    source_options(ktheory);
    ktheory->add_option("--compare", plan.compare);

    auto* spectra = app.add_subcommand("spectra");
    source_options(spectra);
    spectra->add_option("--levels", plan.levels);
    spectra->add_option("--t", plan.t)->delimiter(',');
    spectra->add_option("--s", plan.s);

    auto* af = app.add_subcommand("af");
    source_options(af);
    af->add_option("--p", plan.p);
    af->add_option("--q", plan.q);
    af->add_option("--levels", plan.levels);
    af->add_flag("--even", plan.even);

    auto* crossed = app.add_subcommand("crossed");
    crossed->add_option("--base", plan.base)->delimiter(',');
    crossed->add_option("--base-range", plan.base_range);
    crossed->add_option("--base-power", plan.base_power);
    crossed->add_option("--cutoff", plan.cutoff);

    auto* cohomology = app.add_subcommand("cohomology");
    source_options(cohomology);
    cohomology->add_option("--levels", plan.levels);

    auto* building = app.add_subcommand("building");
    building->add_option("verb", plan.verb)->required()->check(
        CLI::IsMember({"validate", "family", "cover", "bm", "links"}));
    building->add_option("--presentation", plan.presentation);
    building->add_option("--graphs", plan.graphs);
    building->add_option("--q", plan.family_q);
    building->add_flag("--cover", plan.cover);
    building->add_flag("--bm", plan.bm);
    building->add_flag("--links", plan.links);

    auto* tau = app.add_subcommand("tau");
    tau->add_option("--weights", plan.weights)->delimiter(',')->required();

    auto* catalog = app.add_subcommand("catalog");
    catalog->add_option("--kato", plan.kato);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        std::string witness;
        for (const auto& a : args)
            if (a.rfind("--", 0) == 0 && std::string(e.what()).find(a) != std::string::npos) witness = a;
        throw Error(ErrorCode::UsageError, e.what(), witness);
    }
    plan.subcommand = app.get_subcommands().front()->get_name();

    const auto& sc = plan.subcommand;
    if (sc == "ktheory" || sc == "spectra" || sc == "af" || sc == "cohomology") {
        const int sources = plan.matrix.has_value() + plan.graph.has_value() + plan.genus.has_value();
        detail::require(sources == 1, "exactly one of --matrix, --graph, --genus is required", "--matrix");
    }
    if (plan.genus) detail::require(*plan.genus >= 1 && *plan.genus <= 16, "genus must be in [1, 16]", "--genus");
    if (plan.levels) detail::require(*plan.levels >= 0 && *plan.levels <= 24, "levels must be in [0, 24]", "--levels");
    if (sc == "spectra" && plan.levels) detail::require(*plan.levels >= 2, "spectra needs --levels >= 2", "--levels");
    for (double t : plan.t) detail::require(t > 0.0, "t must be positive", "--t");
    if (sc == "af") {
        detail::require(plan.p.has_value() && plan.q.has_value(), "af needs --p and --q", "--p");
        detail::require(*plan.p > 0.0, "p must be positive", "--p");
    }
    if (sc == "crossed") {
        detail::require(plan.base.empty() != !plan.base_range.has_value(),
                        "give either --base or --base-range", "--base");
        if (plan.base_range) detail::require(*plan.base_range >= 1, "base range must be positive", "--base-range");
        if (plan.base_power) detail::require(plan.base_range.has_value(), "--base-power needs --base-range", "--base-power");
        if (plan.cutoff) detail::require(*plan.cutoff >= 0 && *plan.cutoff <= 100000, "cutoff out of range", "--cutoff");
    }
    if (sc == "building") {
        detail::require(plan.presentation.has_value() != plan.family_q.has_value(),
                        "give either --presentation or --q", "--presentation");
        if (plan.family_q) detail::require(*plan.family_q >= 1 && *plan.family_q <= 16, "q must be in [1, 16]", "--q");
    }
    if (sc == "tau") detail::require(!plan.weights.empty(), "weights required", "--weights");
    if (plan.kato) detail::require(*plan.kato >= 0 && *plan.kato <= 10, "kato must be in [0, 10]", "--kato");

    detail::require_readable(plan.matrix);
    detail::require_readable(plan.graph);
    detail::require_readable(plan.compare);
    detail::require_readable(plan.presentation);
    detail::require_readable(plan.graphs);
    return plan;
}

/// Argument vector that parses back to the same plan.
inline std::vector<std::string> render(const RunPlan& plan) {
    std::vector<std::string> out{plan.subcommand};
    if (!plan.verb.empty()) out.push_back(plan.verb);
    auto opt = [&](const char* flag, const auto& value) {
        if (value) {
            out.emplace_back(flag);
            if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>)
                out.push_back(*value);
            else if constexpr (std::is_floating_point_v<std::decay_t<decltype(*value)>>)
                out.push_back(detail::exact(*value));
            else
                out.push_back(std::to_string(*value));
        }
    };
    auto list = [&](const char* flag, const auto& values) {
        if (!values.empty()) {
            out.emplace_back(flag);
            out.push_back(detail::join(values));
        }
    };
    auto flag = [&](const char* name, bool on) {
        if (on) out.emplace_back(name);
    };
    opt("--matrix", plan.matrix);
    opt("--graph", plan.graph);
    opt("--genus", plan.genus);
    opt("--compare", plan.compare);
    opt("--levels", plan.levels);
    list("--t", plan.t);
    opt("--s", plan.s);
    opt("--p", plan.p);
    opt("--q", plan.q);
    flag("--even", plan.even);
    list("--base", plan.base);
    opt("--base-range", plan.base_range);
    opt("--base-power", plan.base_power);
    opt("--cutoff", plan.cutoff);
    opt("--presentation", plan.presentation);
    opt("--graphs", plan.graphs);
    opt("--q", plan.family_q);
    flag("--cover", plan.cover);
    flag("--bm", plan.bm);
    flag("--links", plan.links);
    list("--weights", plan.weights);
    opt("--kato", plan.kato);
    if (plan.format != "json") {
        out.emplace_back("--format");
        out.push_back(plan.format);
    }
    opt("--output", plan.output);
    return out;
}

struct Report {
    Json json;
    io::Table table;                  ///< csv flattening
    std::optional<io::Table> text;    ///< text table when it differs from the csv one
};

inline std::size_t enumeration_budget() {
    const char* env = std::getenv(kBudgetVariable);
    if (!env || !*env) return kDefaultEnumerationBudget;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw Error(ErrorCode::UsageError, "invalid enumeration budget", env);
    return static_cast<std::size_t>(v);
}

namespace detail {

inline SFTData load_shift(const RunPlan& plan) {
    if (plan.genus) return SFTData::schottky(*plan.genus);
    if (plan.graph) return SFTData::from_edge_matrix(directed_edge_matrix(io::graph_from_json(io::read_json_file(*plan.graph))));
    return SFTData(io::matrix_from_json(io::read_json_file(*plan.matrix)));
}

inline BinaryMatrix load_matrix(const RunPlan& plan) {
    if (plan.genus) return cayley_schottky_matrix(*plan.genus).matrix;
    if (plan.graph) return directed_edge_matrix(io::graph_from_json(io::read_json_file(*plan.graph))).matrix;
    return io::matrix_from_json(io::read_json_file(*plan.matrix));
}

inline std::string str(const BigInt& x) { return x.str(); }

inline std::string torsion_list(const AbelianGroupDescriptor& g) {
    std::string s;
    for (std::size_t i = 0; i < g.torsion.size(); ++i) s += (i ? " " : "") + g.torsion[i].str();
    return s;
}

inline Report run_ktheory(const RunPlan& plan) {
    const auto a = load_matrix(plan);
    const auto k = ck_k_theory(a);
    Report r;
    r.json = io::k_groups_to_json(k);
    r.table = {{"group", "rank", "torsion"},
               {{"K0", std::to_string(k.k0.rank), torsion_list(k.k0)}, {"K1", std::to_string(k.k1.rank), ""}}};
    r.text = io::Table{{"group", "value"}, {{"K0", k.k0.to_string()}, {"K1", k.k1.to_string()}}};
    if (plan.compare) {
        const auto b = io::matrix_from_json(io::read_json_file(*plan.compare));
        const auto kb = ck_k_theory(b);
        r.json["compare"] = io::k_groups_to_json(kb);
        r.json["verdict"] = to_string(stable_iso_verdict(a, b));
        r.table.rows.push_back({"K0'", std::to_string(kb.k0.rank), torsion_list(kb.k0)});
        r.table.rows.push_back({"K1'", std::to_string(kb.k1.rank), ""});
        r.text->rows.push_back({"K0'", kb.k0.to_string()});
        r.text->rows.push_back({"K1'", kb.k1.to_string()});
        r.text->rows.push_back({"verdict", r.json["verdict"].get<std::string>()});
    }
    return r;
}

inline Report run_spectra(const RunPlan& plan, std::size_t budget) {
    const auto s = load_shift(plan);
    const std::size_t n = static_cast<std::size_t>(plan.levels.value_or(static_cast<int>(kDefaultTruncationLevel)));
    const std::vector<double> ts = plan.t.empty() ? std::vector<double>{1.0} : plan.t;
    Report r;
    const auto dims = filtration_dims(s, n);
    Json dj = Json::array();
    for (const auto& d : dims.increments) dj.push_back(io::number(d));
    r.json["levels"] = n;
    r.json["dims"] = dj;
    r.json["delta_h"] = io::number(perron_data(s).delta_h);

    const auto grading = grading_from_sft(s, std::max(n, kThetaLevels));
    Json theta = Json::array();
    r.table.header = {"t", "partial", "tail_bound"};
    for (double t : ts) {
        const auto th = theta_trace(grading, t);
        theta.push_back({{"t", io::number(t)},
                         {"partial", io::number(th.partial)},
                         {"tail_bound", io::number(th.tail_bound)},
                         {"converged", th.converged}});
        r.table.rows.push_back({io::format_number(t), io::format_number(th.partial), io::format_number(th.tail_bound)});
    }
    r.json["theta"] = theta;
    if (plan.s) {
        const auto z = zeta_partial(grading_from_sft(s, n), *plan.s);
        r.json["zeta"] = {{"s", io::number(*plan.s)},
                          {"partial", io::number(z.partial)},
                          {"diagnosis", to_string(z.diagnosis)},
                          {"asymptotic_ratio", io::number(z.asymptotic_ratio)}};
    }
    const auto trunc = SpectralTruncation::build(s, n, std::nullopt, std::nullopt, budget);
    const auto ck = trunc.ck_residuals();
    r.json["ck_residuals"] = {{"range_sum", io::number(ck.range_sum)}, {"source_max", io::number(ck.source_max)}};
    Json comm = Json::array();
    for (std::size_t i = 0; i < s.alphabet_size(); ++i) {
        const auto c = trunc.commutator_norm(i);
        comm.push_back({{"letter", s.labels()[i]}, {"norm", io::number(c.norm)}, {"k", c.stabilization_level}});
    }
    r.json["commutators"] = comm;
    return r;
}

inline Report run_af(const RunPlan& plan) {
    const auto s = load_shift(plan);
    const std::size_t n = static_cast<std::size_t>(plan.levels.value_or(static_cast<int>(kDefaultTruncationLevel)));
    AFTriple a;
    a.p = *plan.p;
    a.q = *plan.q;
    a.parity = plan.even ? Parity::Even : Parity::Odd;
    const auto totals = af_core_totals(s, n);
    a.dims.assign(totals.begin() + 1, totals.end());
    const auto rep = af_summability_report(a);
    Report r;
    r.json = {{"p", io::number(a.p)}, {"q", io::number(a.q)}, {"parity", plan.even ? "even" : "odd"}};
    Json levels = Json::array();
    r.table.header = {"level", "dim", "partial", "majorant"};
    for (std::size_t i = 0; i < a.dims.size(); ++i) {
        levels.push_back({{"level", i + 1},
                          {"dim", io::number(a.dims[i])},
                          {"partial", io::number(rep.partials[i])},
                          {"majorant", io::number(rep.majorants[i])}});
        r.table.rows.push_back({std::to_string(i + 1), io::format_number(a.dims[i]),
                                io::format_number(rep.partials[i]), io::format_number(rep.majorants[i])});
    }
    r.json["levels"] = levels;
    r.json["bounded"] = rep.bounded;
    return r;
}

inline Json fit_json(const ExponentFit& f) {
    return {{"slope", io::number(f.slope)},
            {"window_lo", io::number(f.window_low)},
            {"window_hi", io::number(f.window_high)},
            {"points", f.points}};
}

inline Report run_crossed(const RunPlan& plan) {
    std::vector<double> base = plan.base;
    if (plan.base_range) {
        const double e = plan.base_power.value_or(1.0);
        for (int j = 1; j <= *plan.base_range; ++j) base.push_back(std::pow(static_cast<double>(j), e));
    }
    CrossedProductTriple c;
    c.base = to_spectrum(base);
    c.cutoff = plan.cutoff.value_or(kDefaultFourierCutoff);
    const auto spectrum = crossed_product_spectrum(c);
    const auto crossed = summability_exponent_fit(spectrum);
    Report r;
    r.json["cutoff"] = c.cutoff;
    r.json["base_size"] = base.size();
    r.json["distinct_values"] = spectrum.size();
    r.table.header = {"slope", "window_lo", "window_hi"};
    auto row = [](const ExponentFit& f) {
        return std::vector<std::string>{io::format_number(f.slope), io::format_number(f.window_low),
                                        io::format_number(f.window_high)};
    };
    std::size_t distinct_base = 0;
    for (const auto& v : c.base) distinct_base += v.value != 0.0;
    if (distinct_base >= 50) {
        const auto bf = summability_exponent_fit(c.base);
        r.json["base_fit"] = fit_json(bf);
        r.json["crossed_fit"] = fit_json(crossed);
        r.json["shift"] = io::number(crossed.slope - bf.slope);
        r.table.rows.push_back(row(bf));
    } else {
        r.json["base_fit"] = nullptr;
        r.json["crossed_fit"] = fit_json(crossed);
    }
    r.table.rows.push_back(row(crossed));
    return r;
}

inline Report run_cohomology(const RunPlan& plan, std::size_t budget) {
    const auto s = load_shift(plan);
    const std::size_t n = static_cast<std::size_t>(plan.levels.value_or(4));
    const auto dims = filtration_dims(s, n);
    const auto h = cohomology_filtration_dims(s, n, budget);
    Report r;
    Json levels = Json::array();
    r.table.header = {"level", "dim_v", "dim_h1"};
    for (std::size_t i = 0; i <= n; ++i) {
        levels.push_back({{"level", i}, {"dim_v", io::number(dims.levels[i])}, {"dim_h1", io::number(h[i])}});
        r.table.rows.push_back({std::to_string(i), str(dims.levels[i]), str(h[i])});
    }
    r.json["levels"] = levels;
    return r;
}

inline Json polyhedron_json(const Polyhedron& x) {
    Json links = Json::array();
    for (const auto& l : x.links) {
        Json lj = io::bipartite_graph_to_json(l);
        lj["complete_bipartite"] = l.is_complete_bipartite();
        links.push_back(std::move(lj));
    }
    return {{"vertices", x.vertex_count()}, {"edges", x.edge_count()}, {"faces", x.face_count()}, {"links", links}};
}

inline Report run_building(const RunPlan& plan) {
    PolygonalPresentation p = plan.family_q ? family_presentation(*plan.family_q)
                                            : io::presentation_from_json(io::read_json_file(*plan.presentation));
    if (plan.cover || plan.verb == "cover") p = four_fold_cover(p);
    Report r;
    r.json["verb"] = plan.verb;
    r.json["words"] = p.cyclic_words().size();
    if (plan.verb == "validate") {
        const auto graphs = plan.graphs ? io::bipartite_graphs_from_json(io::read_json_file(*plan.graphs)) : complete_links(p);
        const auto report = validate_presentation(p, graphs);
        Json conds = Json::array();
        r.table.header = {"condition", "passed", "witness"};
        for (const auto& c : report.conditions) {
            conds.push_back({{"condition", c.condition}, {"passed", c.passed}, {"witness", c.witness}});
            r.table.rows.push_back({std::to_string(c.condition), c.passed ? "true" : "false", c.witness});
        }
        r.json["passed"] = report.passed();
        r.json["conditions"] = conds;
    }
    if (plan.verb == "family" || plan.verb == "cover") {
        r.json["presentation"] = io::presentation_to_json(p);
        r.table.header = {"word"};
        for (const auto& w : p.cyclic_words()) {
            std::string s;
            for (const auto& n : p.names(w)) s += (s.empty() ? "" : " ") + n;
            r.table.rows.push_back({s});
        }
    }
    if (plan.verb == "links" || plan.links) {
        const auto x = polyhedron_from_presentation(p);
        r.json["polyhedron"] = polyhedron_json(x);
        r.json["links_complete_bipartite"] = links_match(x, complete_links(p));
        if (plan.verb == "links") {
            r.table.header = {"vertex", "blacks", "whites", "edges", "complete"};
            for (std::size_t v = 0; v < x.links.size(); ++v) {
                const auto& l = x.links[v];
                r.table.rows.push_back({std::to_string(v), std::to_string(l.blacks.size()), std::to_string(l.whites.size()),
                                        std::to_string(l.edges.size()), l.is_complete_bipartite() ? "true" : "false"});
            }
        }
    }
    if (plan.verb == "bm" || plan.bm) {
        const auto stable = stable_pairs_check(p);
        r.json["stable_pairs"] = {{"holds", stable.holds}, {"witness", stable.witness}};
        const auto bm = bm_group_data(p);
        r.json["bm"] = io::bm_to_json(bm);
        if (plan.verb == "bm") {
            r.table.header = {"horizontal", "vertical"};
            for (const auto& rel : bm.relations) r.table.rows.push_back({rel.a, rel.b});
        }
    }
    return r;
}

inline Report run_tau(const RunPlan& plan) {
    const auto sol = solve_tau(plan.weights);
    Report r;
    r.json = {{"weights", plan.weights}, {"x", io::number(sol.x)}, {"residual", io::number(sol.residual)}};
    r.table = {{"x", "residual"}, {{io::format_number(sol.x), io::format_number(sol.residual)}}};
    return r;
}

inline Report run_catalog(const RunPlan& plan) {
    std::vector<FiniteGraph> graphs = genus2_catalog();
    for (int k = 1; k <= plan.kato.value_or(0); ++k) graphs.push_back(kato_graph(k));
    Report r;
    Json entries = Json::array();
    std::vector<BinaryMatrix> matrices;
    r.table.header = {"name", "vertices", "edges", "betti", "k0", "k1"};
    for (const auto& g : graphs) {
        const auto em = directed_edge_matrix(g);
        const auto k = ck_k_theory(em.matrix);
        matrices.push_back(em.matrix);
        Json e = {{"name", g.name()},
                  {"vertices", g.vertices().size()},
                  {"edges", g.edges().size()},
                  {"betti", g.betti_number()}};
        e.update(io::k_groups_to_json(k));
        entries.push_back(std::move(e));
        r.table.rows.push_back({g.name(), std::to_string(g.vertices().size()), std::to_string(g.edges().size()),
                                std::to_string(g.betti_number()), k.k0.to_string(), k.k1.to_string()});
    }
    Json verdicts = Json::array();
    for (std::size_t i = 0; i < graphs.size(); ++i)
        for (std::size_t j = i + 1; j < graphs.size(); ++j)
            verdicts.push_back({{"a", graphs[i].name()},
                                {"b", graphs[j].name()},
                                {"verdict", to_string(stable_iso_verdict(matrices[i], matrices[j]))}});
    r.json["graphs"] = entries;
    r.json["verdicts"] = verdicts;
    return r;
}

} // namespace detail

inline Report execute(const RunPlan& plan) {
    const std::size_t budget = enumeration_budget();
    const auto& sc = plan.subcommand;
    if (sc == "ktheory") return detail::run_ktheory(plan);
    if (sc == "spectra") return detail::run_spectra(plan, budget);
    if (sc == "af") return detail::run_af(plan);
    if (sc == "crossed") return detail::run_crossed(plan);
    if (sc == "cohomology") return detail::run_cohomology(plan, budget);
    if (sc == "building") return detail::run_building(plan);
    if (sc == "tau") return detail::run_tau(plan);
    if (sc == "catalog") return detail::run_catalog(plan);
    throw Error(ErrorCode::UsageError, "unknown subcommand", sc);
}

inline std::string emit(const Report& r, const std::string& format) {
    if (format == "json") return r.json.dump(2) + "\n";
    if (format == "csv") {
        if (r.table.header.empty()) throw Error(ErrorCode::UnsupportedFormat, "no csv flattening for this report", format);
        return io::to_csv(r.table);
    }
    if (format == "text") {
        const io::Table& t = r.text ? *r.text : r.table;
        if (t.header.empty()) return r.json.dump(2) + "\n";
        return io::to_text(t);
    }
    throw Error(ErrorCode::UnsupportedFormat, "unknown format", format);
}

inline Json error_json(const Error& e) {
    return {{"code", std::string(to_string(e.code()))}, {"message", e.message()}, {"witness", e.witness()}};
}

/// Full invocation: returns the exit status and writes output or error JSON.
inline int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
    try {
        const RunPlan plan = parse_invocation(args);
        const std::string bytes = emit(execute(plan), plan.format);
        if (plan.output)
            io::write_text_file(*plan.output, bytes);
        else
            out = bytes;
        return 0;
    } catch (const HelpRequested& h) {
        out = h.text;
        return 0;
    } catch (const Error& e) {
        err = error_json(e).dump() + "\n";
        return e.code() == ErrorCode::UsageError ? 2 : 1;
    }
}

} // namespace schottky::cli
