#pragma once

#include "schottky/buildings.hpp"
#include "schottky/graphs.hpp"
#include "schottky/ktheory.hpp"

#include <json.hpp>

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace schottky::io {

using Json = nlohmann::ordered_json;

/// Round to 12 significant digits so reports are stable under last-bit noise.
inline double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return round12(x);
}

inline Json number(const BigInt& x) {
    // integers beyond 64 bits are emitted as decimal strings
    if (x >= 0 && x <= BigInt(std::numeric_limits<std::int64_t>::max())) return x.convert_to<std::int64_t>();
    if (x < 0 && x >= BigInt(std::numeric_limits<std::int64_t>::min())) return x.convert_to<std::int64_t>();
    return x.str();
}

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read file", path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("malformed JSON: ") + e.what(), path);
    }
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write file", path);
    out << content;
}

// --- matrices --------------------------------------------------------------

/// Accepts either a bare array of rows or {"matrix": [...]}.
inline BinaryMatrix matrix_from_json(const Json& j) {
    const Json& rows = j.is_object() ? j.at("matrix") : j;
    if (!rows.is_array()) throw Error(ErrorCode::InvalidTransitionMatrix, "matrix must be an array of rows");
    std::vector<std::vector<long long>> v;
    for (const auto& r : rows) {
        if (!r.is_array()) throw Error(ErrorCode::InvalidTransitionMatrix, "matrix row is not an array");
        std::vector<long long> row;
        for (const auto& x : r) {
            if (!x.is_number_integer()) throw Error(ErrorCode::InvalidTransitionMatrix, "entry is not an integer");
            row.push_back(x.get<long long>());
        }
        v.push_back(std::move(row));
    }
    return BinaryMatrix::from_rows(v);
}

inline Json matrix_to_json(const BinaryMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.size(); ++j) r.push_back(m(i, j) ? 1 : 0);
        rows.push_back(std::move(r));
    }
    return Json{{"matrix", rows}};
}

// --- graphs ----------------------------------------------------------------

/// {"name": ..., "vertices": [0, 1], "edges": [[id, src, dst], ...]}; edges may
/// also be objects {"id", "src", "dst"}.
inline FiniteGraph graph_from_json(const Json& j) {
    try {
        std::vector<int> vertices = j.at("vertices").get<std::vector<int>>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (e.is_array()) {
                if (e.size() != 3) throw Error(ErrorCode::InvalidGraph, "edge must be [id, src, dst]");
                edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
            } else {
                edges.push_back({e.at("id").get<int>(), e.at("src").get<int>(), e.at("dst").get<int>()});
            }
        }
        return FiniteGraph(std::move(vertices), std::move(edges), j.value("name", std::string{}));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidGraph, std::string("malformed graph: ") + e.what());
    }
}

inline Json graph_to_json(const FiniteGraph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back({e.id, e.src, e.dst});
    return Json{{"name", g.name()}, {"vertices", g.vertices()}, {"edges", edges}};
}

// --- K-groups --------------------------------------------------------------

inline Json group_to_json(const AbelianGroupDescriptor& g, bool with_torsion = true) {
    Json out{{"rank", g.rank}};
    if (with_torsion) {
        Json t = Json::array();
        for (const auto& x : g.torsion) t.push_back(number(x));
        out["torsion"] = t;
    }
    return out;
}

inline Json k_groups_to_json(const KGroups& k) {
    return Json{{"k0", group_to_json(k.k0)}, {"k1", group_to_json(k.k1, false)}};
}

// --- presentations ---------------------------------------------------------

/// {"k": 4, "alphabet": [{"name", "graph", "family"}], "lambda": [[letter, white]],
///  "white_graphs": {white: graph}, "words": [[letters...]]}. A white vertex
/// without an entry in "white_graphs" sits in the graph of its lambda-preimage.
inline PolygonalPresentation presentation_from_json(const Json& j) {
    try {
        const std::size_t k = j.value("k", std::size_t{4});
        std::vector<Letter> letters;
        for (const auto& a : j.at("alphabet")) {
            if (a.is_string())
                letters.push_back({a.get<std::string>(), 0, 0});
            else
                letters.push_back({a.at("name").get<std::string>(), a.value("graph", 0), a.value("family", 0)});
        }
        std::map<std::string, int> index;
        for (std::size_t i = 0; i < letters.size(); ++i) index[letters[i].name] = static_cast<int>(i);
        std::vector<std::string> white_of(letters.size());
        for (const auto& pair : j.at("lambda")) {
            const auto letter = pair.at(0).get<std::string>();
            const auto it = index.find(letter);
            if (it == index.end()) throw Error(ErrorCode::PresentationInvalid, "lambda names an unknown letter", letter);
            if (!white_of[it->second].empty())
                throw Error(ErrorCode::PresentationInvalid, "lambda assigns a letter twice", letter);
            white_of[it->second] = pair.at(1).get<std::string>();
        }
        std::map<std::string, int> white_graphs;
        if (j.contains("white_graphs"))
            for (const auto& [name, g] : j.at("white_graphs").items()) white_graphs[name] = g.get<int>();
        std::vector<WhiteVertex> whites;
        std::vector<int> lambda;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (white_of[i].empty())
                throw Error(ErrorCode::PresentationInvalid, "lambda misses a letter", letters[i].name);
            const auto g = white_graphs.find(white_of[i]);
            whites.push_back({white_of[i], g == white_graphs.end() ? letters[i].graph : g->second});
            lambda.push_back(static_cast<int>(i));
        }
        PolygonalPresentation p(k, std::move(letters), std::move(whites), std::move(lambda));
        for (const auto& w : j.at("words")) p.insert_cyclic_word(w.get<std::vector<std::string>>());
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::PresentationInvalid, std::string("malformed presentation: ") + e.what());
    }
}

inline Json presentation_to_json(const PolygonalPresentation& p) {
    Json alphabet = Json::array(), lambda = Json::array(), words = Json::array();
    Json white_graphs = Json::object();
    for (std::size_t i = 0; i < p.letters().size(); ++i) {
        const auto& l = p.letters()[i];
        alphabet.push_back({{"name", l.name}, {"graph", l.graph}, {"family", l.family}});
        const auto& w = p.whites()[p.lambda()[i]];
        lambda.push_back({l.name, w.name});
        if (w.graph != l.graph) white_graphs[w.name] = w.graph;
    }
    for (const auto& w : p.cyclic_words()) words.push_back(p.names(w));
    Json out{{"k", p.k()}, {"alphabet", alphabet}, {"lambda", lambda}};
    if (!white_graphs.empty()) out["white_graphs"] = white_graphs;
    out["words"] = words;
    return out;
}

/// [{"blacks": [...], "whites": [...], "edges": [[black, white], ...]}] by name.
inline std::vector<BipartiteGraph> bipartite_graphs_from_json(const Json& j) {
    std::vector<BipartiteGraph> out;
    try {
        for (const auto& g : j) {
            BipartiteGraph b;
            b.blacks = g.at("blacks").get<std::vector<std::string>>();
            b.whites = g.at("whites").get<std::vector<std::string>>();
            for (const auto& e : g.at("edges")) {
                const auto bn = e.at(0).get<std::string>(), wn = e.at(1).get<std::string>();
                const auto bi = std::find(b.blacks.begin(), b.blacks.end(), bn);
                const auto wi = std::find(b.whites.begin(), b.whites.end(), wn);
                if (bi == b.blacks.end() || wi == b.whites.end())
                    throw Error(ErrorCode::InvalidGraph, "edge endpoint is not a vertex", bn + "-" + wn);
                b.edges.emplace_back(static_cast<int>(bi - b.blacks.begin()), static_cast<int>(wi - b.whites.begin()));
            }
            std::sort(b.edges.begin(), b.edges.end());
            out.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidGraph, std::string("malformed bipartite graph: ") + e.what());
    }
    return out;
}

inline Json bipartite_graph_to_json(const BipartiteGraph& g) {
    Json edges = Json::array();
    for (auto [b, w] : g.edges) edges.push_back({g.blacks[b], g.whites[w]});
    return Json{{"blacks", g.blacks}, {"whites", g.whites}, {"edges", edges}};
}

/// {"name", "generators": [...], "relations": [["a1", "b1", "a1^-1", "b1^-1"], ...]}
inline GroupPresentation group_presentation_from_json(const Json& j) {
    GroupPresentation g;
    g.name = j.value("name", std::string{});
    g.generators = j.at("generators").get<std::vector<std::string>>();
    for (const auto& r : j.at("relations")) {
        std::vector<std::pair<std::string, int>> rel;
        for (const auto& sym : r) {
            auto s = sym.get<std::string>();
            int e = 1;
            if (s.size() > 3 && s.compare(s.size() - 3, 3, "^-1") == 0) {
                s.resize(s.size() - 3);
                e = -1;
            }
            rel.emplace_back(s, e);
        }
        g.relators.push_back(std::move(rel));
    }
    return g;
}

inline Json bm_to_json(const BMGroupData& bm) {
    Json relations = Json::array();
    for (const auto& r : bm.relations) relations.push_back(r.word());
    return Json{{"horizontal", bm.horizontal},
                {"vertical", bm.vertical},
                {"collapsed", bm.collapsed},
                {"relations", relations},
                {"valences", {bm.valences.first, bm.valences.second}}};
}

// --- tables ----------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_csv(const Table& t) {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out.str();
}

/// Display width counting UTF-8 code points.
inline std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

inline std::string to_text(const Table& t) {
    std::vector<std::size_t> width(t.header.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], display_width(r[i]));
    };
    measure(t.header);
    for (const auto& r : t.rows) measure(r);
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) s += "  ";
            s += r[i];
            if (i + 1 < r.size()) s.append(width[i] - display_width(r[i]), ' ');
        }
        out << s << '\n';
    };
    line(t.header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    line(rule);
    for (const auto& r : t.rows) line(r);
    return out.str();
}

} // namespace schottky::io
