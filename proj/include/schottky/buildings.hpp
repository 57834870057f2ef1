#pragma once

#include "schottky/graphs.hpp"
#include "schottky/ktheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace schottky {

// ---------------------------------------------------------------------------
// Polygonal presentations
// ---------------------------------------------------------------------------

struct Letter {
    std::string name;
    int graph = 0;  ///< index of the link graph holding this black vertex
    int family = 0; ///< superscript; 0 when the presentation has no families

    friend bool operator==(const Letter&, const Letter&) = default;
};

struct WhiteVertex {
    std::string name;
    int graph = 0;

    friend bool operator==(const WhiteVertex&, const WhiteVertex&) = default;
};

using Tuple = std::vector<int>;

inline Tuple rotate_tuple(const Tuple& t, std::size_t by) {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[(i + by) % t.size()];
    return out;
}

/// Alphabet P, white labels L, the basic bijection lambda: P -> L and a set of
/// k-tuples over P. Tuples are stored individually; insert_cyclic_word adds
/// every rotation.
class PolygonalPresentation {
public:
    PolygonalPresentation() = default;

    PolygonalPresentation(std::size_t k, std::vector<Letter> letters, std::vector<WhiteVertex> whites,
                          std::vector<int> lambda)
        : k_(k), letters_(std::move(letters)), whites_(std::move(whites)), lambda_(std::move(lambda)) {
        if (k_ < 3) throw Error(ErrorCode::PresentationInvalid, "polygons need at least 3 sides");
        if (lambda_.size() != letters_.size() || whites_.size() != letters_.size())
            throw Error(ErrorCode::PresentationInvalid, "lambda must be a bijection P -> L");
        std::vector<int> seen(whites_.size(), 0);
        for (int w : lambda_) {
            if (w < 0 || static_cast<std::size_t>(w) >= whites_.size() || seen[w]++)
                throw Error(ErrorCode::PresentationInvalid, "lambda must be a bijection P -> L");
        }
        std::set<std::string> names;
        for (const auto& l : letters_)
            if (!names.insert(l.name).second)
                throw Error(ErrorCode::PresentationInvalid, "duplicate letter", l.name);
        std::set<std::string> wnames;
        for (const auto& w : whites_)
            if (!wnames.insert(w.name).second)
                throw Error(ErrorCode::PresentationInvalid, "duplicate white vertex", w.name);
    }

    std::size_t k() const noexcept { return k_; }
    const std::vector<Letter>& letters() const noexcept { return letters_; }
    const std::vector<WhiteVertex>& whites() const noexcept { return whites_; }
    const std::vector<int>& lambda() const noexcept { return lambda_; }
    const std::set<Tuple>& tuples() const noexcept { return tuples_; }
    std::size_t size() const noexcept { return tuples_.size(); }
    bool empty() const noexcept { return tuples_.empty(); }

    int letter_index(const std::string& name) const {
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (letters_[i].name == name) return static_cast<int>(i);
        throw Error(ErrorCode::PresentationInvalid, "unknown letter", name);
    }

    void insert_tuple(Tuple t) {
        check(t);
        tuples_.insert(std::move(t));
    }

    void insert_cyclic_word(const Tuple& t) {
        check(t);
        for (std::size_t r = 0; r < k_; ++r) tuples_.insert(rotate_tuple(t, r));
    }

    void insert_cyclic_word(const std::vector<std::string>& names) {
        Tuple t;
        for (const auto& n : names) t.push_back(letter_index(n));
        insert_cyclic_word(t);
    }

    void erase_tuple(const Tuple& t) { tuples_.erase(t); }

    static Tuple canonical(const Tuple& t) {
        Tuple best = t;
        for (std::size_t r = 1; r < t.size(); ++r) best = std::min(best, rotate_tuple(t, r));
        return best;
    }

    /// One representative (lexicographically least rotation) per cyclic orbit.
    std::vector<Tuple> cyclic_words() const {
        std::set<Tuple> out;
        for (const auto& t : tuples_) out.insert(canonical(t));
        return {out.begin(), out.end()};
    }

    std::vector<std::string> names(const Tuple& t) const {
        std::vector<std::string> out;
        for (int x : t) out.push_back(letters_[x].name);
        return out;
    }

    std::string render(const Tuple& t) const {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + letters_[t[i]].name;
        return s + ")";
    }

    /// Number of distinct link graphs (vertices of the polyhedron).
    std::size_t graph_count() const {
        std::set<int> g;
        for (const auto& l : letters_) g.insert(l.graph);
        for (const auto& w : whites_) g.insert(w.graph);
        return g.size();
    }

    friend bool operator==(const PolygonalPresentation&, const PolygonalPresentation&) = default;

private:
    void check(const Tuple& t) const {
        if (t.size() != k_)
            throw Error(ErrorCode::PresentationInvalid, "tuple has the wrong length",
                        std::to_string(t.size()));
        for (int x : t)
            if (x < 0 || static_cast<std::size_t>(x) >= letters_.size())
                throw Error(ErrorCode::PresentationInvalid, "tuple uses a letter outside P");
    }

    std::size_t k_ = 4;
    std::vector<Letter> letters_;
    std::vector<WhiteVertex> whites_;
    std::vector<int> lambda_;
    std::set<Tuple> tuples_;
};

// ---------------------------------------------------------------------------
// Bipartite graphs and links
// ---------------------------------------------------------------------------

/// Black and white vertex names with an edge multiset of (black, white) index pairs.
struct BipartiteGraph {
    std::vector<std::string> blacks;
    std::vector<std::string> whites;
    std::vector<std::pair<int, int>> edges; ///< sorted

    std::size_t vertex_count() const { return blacks.size() + whites.size(); }

    bool incident(const std::string& black, const std::string& white) const {
        const auto b = std::find(blacks.begin(), blacks.end(), black);
        const auto w = std::find(whites.begin(), whites.end(), white);
        if (b == blacks.end() || w == whites.end()) return false;
        const std::pair<int, int> e{static_cast<int>(b - blacks.begin()), static_cast<int>(w - whites.begin())};
        return std::binary_search(edges.begin(), edges.end(), e);
    }

    bool is_complete_bipartite() const {
        std::set<std::pair<int, int>> distinct(edges.begin(), edges.end());
        return distinct.size() == edges.size() && edges.size() == blacks.size() * whites.size();
    }
};

using LinkGraph = BipartiteGraph;

inline BipartiteGraph complete_bipartite_graph(std::vector<std::string> blacks, std::vector<std::string> whites) {
    BipartiteGraph g{std::move(blacks), std::move(whites), {}};
    for (int b = 0; b < static_cast<int>(g.blacks.size()); ++b)
        for (int w = 0; w < static_cast<int>(g.whites.size()); ++w) g.edges.emplace_back(b, w);
    return g;
}

/// Colour-preserving isomorphism by backtracking with degree pruning.
inline bool bipartite_isomorphic(const BipartiteGraph& a, const BipartiteGraph& b) {
    if (a.blacks.size() != b.blacks.size() || a.whites.size() != b.whites.size() ||
        a.edges.size() != b.edges.size())
        return false;
    const std::size_t nb = a.blacks.size(), nw = a.whites.size();
    auto multiplicities = [&](const BipartiteGraph& g) {
        std::vector<std::vector<int>> m(nb, std::vector<int>(nw, 0));
        for (auto [x, y] : g.edges) ++m[x][y];
        return m;
    };
    const auto ma = multiplicities(a), mb = multiplicities(b);
    auto degrees = [&](const std::vector<std::vector<int>>& m, bool black) {
        std::vector<int> d(black ? nb : nw, 0);
        for (std::size_t x = 0; x < nb; ++x)
            for (std::size_t y = 0; y < nw; ++y) (black ? d[x] : d[y]) += m[x][y];
        return d;
    };
    const auto dba = degrees(ma, true), dbb = degrees(mb, true);
    const auto dwa = degrees(ma, false), dwb = degrees(mb, false);
    {
        auto s1 = dba, s2 = dbb, s3 = dwa, s4 = dwb;
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        std::sort(s3.begin(), s3.end());
        std::sort(s4.begin(), s4.end());
        if (s1 != s2 || s3 != s4) return false;
    }
    // assign blacks first, then whites; check edges against already placed vertices
    std::vector<int> fb(nb, -1), fw(nw, -1);
    std::vector<char> usedb(nb, 0), usedw(nw, 0);
    const std::size_t total = nb + nw;
    std::function<bool(std::size_t)> place = [&](std::size_t step) -> bool {
        if (step == total) return true;
        if (step < nb) {
            const std::size_t x = step;
            for (std::size_t c = 0; c < nb; ++c) {
                if (usedb[c] || dbb[c] != dba[x]) continue;
                fb[x] = static_cast<int>(c);
                usedb[c] = 1;
                if (place(step + 1)) return true;
                usedb[c] = 0;
            }
            fb[x] = -1;
            return false;
        }
        const std::size_t y = step - nb;
        for (std::size_t c = 0; c < nw; ++c) {
            if (usedw[c] || dwb[c] != dwa[y]) continue;
            bool ok = true;
            for (std::size_t x = 0; x < nb && ok; ++x) ok = ma[x][y] == mb[fb[x]][c];
            if (!ok) continue;
            fw[y] = static_cast<int>(c);
            usedw[c] = 1;
            if (place(step + 1)) return true;
            usedw[c] = 0;
        }
        fw[y] = -1;
        return false;
    };
    return place(0);
}

// ---------------------------------------------------------------------------
// Validation against prescribed links
// ---------------------------------------------------------------------------

struct ConditionResult {
    int condition = 0;
    bool passed = true;
    std::string witness;
};

struct ValidationReport {
    std::array<ConditionResult, 3> conditions{{{1, true, {}}, {2, true, {}}, {3, true, {}}}};

    bool passed() const {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
    }
};

namespace detail {

/// For each (x1, x2): the set of x3 that continue it.
inline std::map<std::pair<int, int>, std::set<int>> continuations(const PolygonalPresentation& p) {
    std::map<std::pair<int, int>, std::set<int>> out;
    for (const auto& t : p.tuples()) out[{t[0], t[1]}].insert(t[2]);
    return out;
}

} // namespace detail

/// Three checks against the link graphs in `graphs`: the tuple set is closed
/// under rotation, (x1, x2) occurs exactly when x2 is incident to lambda(x1),
/// and each pair has one continuation. The first failure per check is reported.
inline ValidationReport validate_presentation(const PolygonalPresentation& p,
                                              const std::vector<BipartiteGraph>& graphs) {
    ValidationReport report;
    for (const auto& t : p.tuples()) {
        const Tuple next = rotate_tuple(t, 1);
        if (!p.tuples().count(next)) {
            report.conditions[0] = {1, false, p.render(t) + " present but " + p.render(next) + " missing"};
            break;
        }
    }
    const auto cont = detail::continuations(p);
    const auto& letters = p.letters();
    for (std::size_t x1 = 0; x1 < letters.size() && report.conditions[1].passed; ++x1) {
        const std::string& white = p.whites()[p.lambda()[x1]].name;
        for (std::size_t x2 = 0; x2 < letters.size(); ++x2) {
            const bool present = cont.count({static_cast<int>(x1), static_cast<int>(x2)}) > 0;
            const bool incident = std::any_of(graphs.begin(), graphs.end(), [&](const BipartiteGraph& g) {
                return g.incident(letters[x2].name, white);
            });
            if (present != incident) {
                report.conditions[1] = {2, false,
                                        "(" + letters[x1].name + "," + letters[x2].name + ") " +
                                            (present ? "occurs but " : "missing although ") + letters[x2].name +
                                            (present ? " is not incident to " : " is incident to ") + white};
                break;
            }
        }
    }
    for (const auto& [pair, thirds] : cont) {
        if (thirds.size() > 1) {
            std::string w = "(" + letters[pair.first].name + "," + letters[pair.second].name + ") continues with";
            for (int x : thirds) w += " " + letters[x].name;
            report.conditions[2] = {3, false, w};
            break;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Polyhedron assembly
// ---------------------------------------------------------------------------

struct Polyhedron {
    std::size_t k = 0;
    std::vector<std::vector<std::string>> faces; ///< boundary words, one per cyclic orbit
    std::vector<std::string> edges;              ///< one oriented edge per letter
    std::vector<LinkGraph> links;                ///< one per vertex

    std::size_t vertex_count() const { return links.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t face_count() const { return faces.size(); }
};

/// Glues one k-gon per cyclic word along equally labelled sides. A corner
/// between consecutive sides x_i, x_{i+1} joins the white end lambda(x_i) of
/// x_i to the black start x_{i+1}; vertices are the connected components of
/// these corner incidences and each component is that vertex's link.
inline Polyhedron polyhedron_from_presentation(const PolygonalPresentation& p) {
    Polyhedron x;
    x.k = p.k();
    if (p.empty()) return x;
    for (const auto& t : p.tuples())
        if (!p.tuples().count(rotate_tuple(t, 1)))
            throw Error(ErrorCode::PresentationInvalid, "tuple set is not closed under rotation", p.render(t));
    for (const auto& [pair, thirds] : detail::continuations(p))
        if (thirds.size() > 1)
            throw Error(ErrorCode::PresentationInvalid, "a pair has two continuations",
                        p.letters()[pair.first].name + "," + p.letters()[pair.second].name);

    const std::size_t nl = p.letters().size();
    // union-find over blacks [0, nl) and whites [nl, 2nl)
    std::vector<std::size_t> parent(2 * nl);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    std::vector<std::pair<int, int>> corners; // (black letter, white index)
    const auto words = p.cyclic_words();
    for (const auto& w : words) {
        x.faces.push_back(p.names(w));
        for (std::size_t i = 0; i < w.size(); ++i) {
            const int black = w[(i + 1) % w.size()];
            const int white = p.lambda()[w[i]];
            if (p.letters()[black].graph != p.whites()[white].graph)
                throw Error(ErrorCode::PresentationInvalid, "corner joins two different link graphs", p.render(w));
            corners.emplace_back(black, white);
            parent[find(black)] = find(nl + white);
        }
    }
    std::set<int> used;
    for (const auto& w : words)
        for (int l : w) used.insert(l);
    for (int l : used) x.edges.push_back(p.letters()[l].name);

    // vertices touched by some corner, ordered by smallest member
    std::map<std::size_t, std::size_t> component;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t v = 0; v < 2 * nl; ++v) {
        bool touched = false;
        for (auto [b, wh] : corners)
            if (static_cast<std::size_t>(b) == v || nl + wh == v) { touched = true; break; }
        if (!touched) continue;
        const auto root = find(v);
        if (!component.count(root)) {
            component[root] = members.size();
            members.emplace_back();
        }
        members[component[root]].push_back(v);
    }
    for (const auto& comp : members) {
        LinkGraph g;
        std::map<std::size_t, int> bi, wi;
        for (auto v : comp) {
            if (v < nl) {
                bi[v] = static_cast<int>(g.blacks.size());
                g.blacks.push_back(p.letters()[v].name);
            } else {
                wi[v - nl] = static_cast<int>(g.whites.size());
                g.whites.push_back(p.whites()[v - nl].name);
            }
        }
        for (auto [b, wh] : corners)
            if (bi.count(b)) g.edges.emplace_back(bi[b], wi.at(wh));
        std::sort(g.edges.begin(), g.edges.end());
        x.links.push_back(std::move(g));
    }
    return x;
}

inline const std::vector<LinkGraph>& vertex_links(const Polyhedron& x) { return x.links; }

/// True when every link is isomorphic to the corresponding expected graph.
inline bool links_match(const Polyhedron& x, const std::vector<BipartiteGraph>& expected) {
    if (expected.size() != x.links.size()) return false;
    std::vector<char> used(expected.size(), 0);
    for (const auto& link : x.links) {
        bool found = false;
        for (std::size_t j = 0; j < expected.size() && !found; ++j)
            if (!used[j] && bipartite_isomorphic(link, expected[j])) used[j] = found = true;
        if (!found) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// The family over K_{4q,4q}, covers, and BM reduction
// ---------------------------------------------------------------------------

inline PolygonalPresentation family_presentation(int q) {
    if (q < 1) throw Error(ErrorCode::InvalidParameter, "q must be positive", std::to_string(q));
    const int n = 4 * q;
    std::vector<Letter> letters;
    std::vector<WhiteVertex> whites;
    std::vector<int> lambda;
    for (int l = 1; l <= n; ++l) {
        letters.push_back({"x" + std::to_string(l), 0, 0});
        whites.push_back({"y" + std::to_string(l), 0});
        lambda.push_back(l - 1);
    }
    PolygonalPresentation p(4, std::move(letters), std::move(whites), std::move(lambda));
    auto x = [](int l) { return l - 1; };
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            p.insert_cyclic_word(Tuple{x(1 + 4 * i), x(2 + 4 * j), x(4 + 4 * i), x(3 + 4 * j)});
            p.insert_cyclic_word(Tuple{x(1 + 4 * i), x(1 + 4 * j), x(4 + 4 * i), x(4 + 4 * j)});
            p.insert_cyclic_word(Tuple{x(1 + 4 * i), x(3 + 4 * j), x(4 + 4 * i), x(2 + 4 * j)});
            p.insert_cyclic_word(Tuple{x(2 + 4 * i), x(2 + 4 * j), x(3 + 4 * i), x(3 + 4 * j)});
        }
    return p;
}

/// The complete bipartite links a presentation is meant to realize: for each
/// graph index, all of its letters against all of its white vertices.
inline std::vector<BipartiteGraph> complete_links(const PolygonalPresentation& p) {
    std::map<int, std::pair<std::vector<std::string>, std::vector<std::string>>> by_graph;
    for (const auto& l : p.letters()) by_graph[l.graph].first.push_back(l.name);
    for (const auto& w : p.whites()) by_graph[w.graph].second.push_back(w.name);
    std::vector<BipartiteGraph> out;
    for (auto& [g, sides] : by_graph) out.push_back(complete_bipartite_graph(sides.first, sides.second));
    return out;
}

/// Each word (a, b, c, d) becomes (a^1,b^2,c^3,d^4), (a^4,b^1,c^2,d^3),
/// (a^3,b^4,c^1,d^2), (a^2,b^3,c^4,d^1). Letter x^s starts at vertex
/// 4 g(x) + s - 1 and its white end y^s sits at vertex 4 g(y) + (s mod 4).
inline PolygonalPresentation four_fold_cover(const PolygonalPresentation& p) {
    if (p.k() != 4) throw Error(ErrorCode::RequiresSquares, "cover needs square faces", std::to_string(p.k()));
    const std::size_t n = p.letters().size();
    std::vector<Letter> letters;
    std::vector<WhiteVertex> whites;
    std::vector<int> lambda;
    auto cover_index = [n](int x, int s) { return static_cast<int>((s - 1) * n) + x; };
    for (int s = 1; s <= 4; ++s)
        for (std::size_t x = 0; x < n; ++x) {
            const auto& l = p.letters()[x];
            letters.push_back({l.name + "^" + std::to_string(s), 4 * l.graph + (s - 1), s});
            const auto& w = p.whites()[x];
            whites.push_back({w.name + "^" + std::to_string(s), 4 * w.graph + (s % 4)});
            lambda.push_back(cover_index(p.lambda()[x], s));
        }
    PolygonalPresentation c(4, std::move(letters), std::move(whites), std::move(lambda));
    static constexpr int kShift[4][4] = {{1, 2, 3, 4}, {4, 1, 2, 3}, {3, 4, 1, 2}, {2, 3, 4, 1}};
    for (const auto& w : p.cyclic_words())
        for (const auto& row : kShift) {
            Tuple t;
            for (std::size_t i = 0; i < 4; ++i) t.push_back(cover_index(w[i], row[i]));
            c.insert_cyclic_word(t);
        }
    return c;
}

struct StablePairsResult {
    bool holds = true;
    std::string witness;
};

namespace detail {

/// Rotation starting at the family-1 letter, or empty if the families do not
/// read 1,2,3,4 cyclically.
inline Tuple normalized_square(const PolygonalPresentation& p, const Tuple& t) {
    for (std::size_t r = 0; r < 4; ++r) {
        const Tuple u = rotate_tuple(t, r);
        bool ok = true;
        for (std::size_t i = 0; i < 4 && ok; ++i) ok = p.letters()[u[i]].family == static_cast<int>(i) + 1;
        if (ok) return u;
    }
    return {};
}

} // namespace detail

/// Every word reads (x^1, y^1, x^2, y^2) and each letter always faces the
/// same opposite letter: x^1_m only ever sits across from x^2_m, and dually
/// for the y letters. Families 1..4 stand for x^1, y^1, x^2, y^2.
inline StablePairsResult stable_pairs_check(const PolygonalPresentation& p) {
    if (p.k() != 4) throw Error(ErrorCode::RequiresSquares, "stable pairs need square faces", std::to_string(p.k()));
    std::map<int, int> opposite;
    for (const auto& w : p.cyclic_words()) {
        const Tuple u = detail::normalized_square(p, w);
        if (u.empty()) return {false, p.render(w) + " does not alternate the four letter families"};
        for (std::size_t i = 0; i < 4; ++i) {
            const int a = u[i], b = u[(i + 2) % 4];
            const auto [it, fresh] = opposite.emplace(a, b);
            if (!fresh && it->second != b)
                return {false, p.render(w) + " puts " + p.letters()[a].name + " opposite " + p.letters()[b].name +
                                   " instead of " + p.letters()[it->second].name};
        }
    }
    return {};
}

struct BMRelation {
    std::string a;
    std::string b;

    /// a b a^-1 b^-1
    std::array<std::string, 4> word() const { return {a, b, a + "^-1", b + "^-1"}; }
};

struct BMGroupData {
    std::vector<std::string> horizontal;
    std::vector<std::string> vertical;
    std::vector<BMRelation> relations;
    std::vector<std::string> collapsed; ///< the word whose letters are set to 1
    std::pair<int, int> valences{0, 0};
};

/// Collapses the first normalized word (by letter names); the remaining
/// family-1 and family-2 letters generate, one relation per surviving square.
inline BMGroupData bm_group_data(const PolygonalPresentation& p) {
    const auto stable = stable_pairs_check(p);
    if (!stable.holds) throw Error(ErrorCode::NotBMReducible, "stable pairs condition fails", stable.witness);
    std::vector<std::vector<std::string>> words;
    for (const auto& w : p.cyclic_words()) words.push_back(p.names(detail::normalized_square(p, w)));
    std::sort(words.begin(), words.end());
    BMGroupData out;
    if (words.empty()) return out;
    out.collapsed = words.front();
    std::set<std::string> h, v;
    for (const auto& l : p.letters()) {
        if (l.family == 1 && l.name != out.collapsed[0]) h.insert(l.name);
        if (l.family == 2 && l.name != out.collapsed[1]) v.insert(l.name);
    }
    out.horizontal.assign(h.begin(), h.end());
    out.vertical.assign(v.begin(), v.end());
    for (const auto& w : words)
        if (h.count(w[0]) && v.count(w[1])) out.relations.push_back({w[0], w[1]});
    out.valences = {2 * static_cast<int>(h.size()), 2 * static_cast<int>(v.size())};
    return out;
}

// ---------------------------------------------------------------------------
// Finitely presented groups (fixtures)
// ---------------------------------------------------------------------------

struct GroupPresentation {
    std::string name;
    std::vector<std::string> generators;
    std::vector<std::vector<std::pair<std::string, int>>> relators; ///< (generator, ±1)
};

/// Abelianization Z^n / (exponent-sum rows).
inline AbelianGroupDescriptor abelianization(const GroupPresentation& g) {
    const std::size_t n = g.generators.size();
    const std::size_t r = g.relators.size();
    IntegerMatrix m(n, std::max<std::size_t>(r, 1));
    for (std::size_t j = 0; j < r; ++j)
        for (const auto& [gen, e] : g.relators[j]) {
            const auto it = std::find(g.generators.begin(), g.generators.end(), gen);
            if (it == g.generators.end()) throw Error(ErrorCode::PresentationInvalid, "unknown generator", gen);
            m(static_cast<std::size_t>(it - g.generators.begin()), j) += e;
        }
    return cokernel(m);
}

// ---------------------------------------------------------------------------
// Product of two Cayley trees: grading dimensions
// ---------------------------------------------------------------------------

/// The displayed closed form: 2g(2g-1) at m = 0, 4g(2g-1)(2g-2) at m = 1 and
/// (m+1) 2g (2g-1)^{m-1} (2g-2)^2 for m >= 2.
inline std::vector<BigInt> product_grading_dims(int g, int max_level) {
    if (g < 2) throw Error(ErrorCode::InvalidRank, "rank must be at least 2", std::to_string(g));
    if (max_level < 0) throw Error(ErrorCode::InvalidParameter, "level must be nonnegative");
    const BigInt a = 2 * g, b = 2 * g - 1, c = 2 * g - 2;
    std::vector<BigInt> out;
    for (int m = 0; m <= max_level; ++m) {
        if (m == 0)
            out.push_back(a * b);
        else if (m == 1)
            out.push_back(2 * a * b * c);
        else
            out.push_back(BigInt(m + 1) * a * boost::multiprecision::pow(b, m - 1) * c * c);
    }
    return out;
}

/// dim V_{l,k}: pairs of admissible horizontal (length l+1) and vertical
/// (length k+1) words whose first letters a, b satisfy A(a, b) = 1.
inline std::vector<std::vector<BigInt>> product_filtration_table(int g, int max_l, int max_k) {
    if (g < 2) throw Error(ErrorCode::InvalidRank, "rank must be at least 2", std::to_string(g));
    const auto a = cayley_schottky_matrix(g).matrix;
    const std::size_t n = a.size();
    const int top = std::max(max_l, max_k);
    // starts[l][x] = number of admissible words of length l+1 starting with x
    std::vector<std::vector<BigInt>> starts(top + 1, std::vector<BigInt>(n, BigInt(1)));
    for (int l = 1; l <= top; ++l)
        for (std::size_t x = 0; x < n; ++x) {
            BigInt s = 0;
            for (std::size_t y = 0; y < n; ++y)
                if (a(x, y)) s += starts[l - 1][y];
            starts[l][x] = s;
        }
    std::vector<std::vector<BigInt>> table(max_l + 1, std::vector<BigInt>(max_k + 1));
    for (int l = 0; l <= max_l; ++l)
        for (int k = 0; k <= max_k; ++k) {
            BigInt v = 0;
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    if (a(x, y)) v += starts[l][x] * starts[k][y];
            table[l][k] = v;
        }
    return table;
}

/// d̂_{l,k} = V_{l,k} - V_{l-1,k} - V_{l,k-1} + V_{l-1,k-1}, with V at -1 equal to 0.
inline std::vector<std::vector<BigInt>> inclusion_exclusion_pieces(const std::vector<std::vector<BigInt>>& v) {
    std::vector<std::vector<BigInt>> d(v.size());
    auto at = [&](int l, int k) -> BigInt { return (l < 0 || k < 0) ? BigInt(0) : v[l][k]; };
    for (std::size_t l = 0; l < v.size(); ++l)
        for (std::size_t k = 0; k < v[l].size(); ++k) {
            const int il = static_cast<int>(l), ik = static_cast<int>(k);
            d[l].push_back(at(il, ik) - at(il - 1, ik) - at(il, ik - 1) + at(il - 1, ik - 1));
        }
    return d;
}

/// dim E_m = sum_{l+k=m} d̂_{l,k} as counted from the filtration table.
inline std::vector<BigInt> product_counted_dims(int g, int max_level) {
    const auto d = inclusion_exclusion_pieces(product_filtration_table(g, max_level, max_level));
    std::vector<BigInt> out(max_level + 1);
    for (int l = 0; l <= max_level; ++l)
        for (int k = 0; l + k <= max_level; ++k) out[l + k] += d[l][k];
    return out;
}

/// The rectangle sum of the pieces reproduces dim V_{L,K}, and every piece is a
/// nonnegative dimension.
inline bool inclusion_exclusion_check(int big_l, int big_k, const std::vector<std::vector<BigInt>>& table) {
    if (big_l < 0 || big_k < 0 || static_cast<std::size_t>(big_l) >= table.size())
        throw Error(ErrorCode::InvalidTable, "table smaller than the requested corner");
    for (int l = 0; l <= big_l; ++l) {
        if (static_cast<std::size_t>(big_k) >= table[l].size())
            throw Error(ErrorCode::InvalidTable, "table smaller than the requested corner");
        for (int k = 0; k <= big_k; ++k) {
            if (table[l][k] < 0 || (l > 0 && table[l][k] < table[l - 1][k]) || (k > 0 && table[l][k] < table[l][k - 1]))
                throw Error(ErrorCode::InvalidTable, "table is not monotone",
                            "(" + std::to_string(l) + "," + std::to_string(k) + ")");
        }
    }
    std::vector<std::vector<BigInt>> corner(big_l + 1);
    for (int l = 0; l <= big_l; ++l) corner[l].assign(table[l].begin(), table[l].begin() + big_k + 1);
    const auto d = inclusion_exclusion_pieces(corner);
    BigInt sum = 0;
    for (const auto& row : d)
        for (const auto& x : row) {
            if (x < 0) return false;
            sum += x;
        }
    return sum == table[big_l][big_k];
}

// ---------------------------------------------------------------------------
// Exponent equation for Fuchsian buildings
// ---------------------------------------------------------------------------

struct TauSolution {
    double x = 0.0;
    double residual = 0.0;
};

namespace detail {

/// sum_i (q_i^x + q_{i+1}^x) / ((1 + q_i^x)(1 + q_{i+1}^x)) - 2 and its x-derivative.
/// With u = 1/(1+q^x) each summand is u + v - 2uv.
inline std::pair<double, double> tau_function(const std::vector<long>& q, double x) {
    const std::size_t r = q.size();
    std::vector<double> u(r), du(r);
    for (std::size_t i = 0; i < r; ++i) {
        const double lq = std::log(static_cast<double>(q[i]));
        u[i] = 1.0 / (1.0 + std::exp(x * lq));
        du[i] = -u[i] * (1.0 - u[i]) * lq;
    }
    double f = -2.0, df = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        const std::size_t j = (i + 1) % r;
        f += u[i] + u[j] - 2.0 * u[i] * u[j];
        df += du[i] * (1.0 - 2.0 * u[j]) + du[j] * (1.0 - 2.0 * u[i]);
    }
    return {f, df};
}

} // namespace detail

inline double tau_lhs(const std::vector<long>& q, double x) { return detail::tau_function(q, x).first + 2.0; }

inline TauSolution solve_tau(const std::vector<long>& q) {
    if (q.size() < 4) throw Error(ErrorCode::InvalidPolygon, "a polygon needs at least 4 sides", std::to_string(q.size()));
    for (long w : q)
        if (w < 2) throw Error(ErrorCode::InvalidParameter, "weights must be at least 2", std::to_string(w));
    // at x = 0 every summand is 1/2, so r = 4 puts the root at 0 whatever the weights
    if (q.size() == 4) throw Error(ErrorCode::DegenerateEuclidean, "r = 4 is the Euclidean case; the root is x = 0");
    double lo = 1e-9, hi = 64.0;
    double flo = detail::tau_function(q, lo).first;
    const double fhi = detail::tau_function(q, hi).first;
    if (!(flo > 0.0 && fhi < 0.0))
        throw Error(ErrorCode::BracketFailure, "no sign change on [1e-9, 64]");
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = detail::tau_function(q, mid).first;
        if (fm > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int step = 0; step < 5; ++step) {
        const auto [f, df] = detail::tau_function(q, x);
        if (df == 0.0) break;
        const double next = x - f / df;
        if (!(std::abs(detail::tau_function(q, next).first) < std::abs(f))) break;
        x = next;
    }
    return {x, std::abs(detail::tau_function(q, x).first)};
}

/// Symmetric case r q^x = (1 + q^x)^2: q^x = (r - 2 + sqrt(r^2 - 4r)) / 2.
inline double tau_closed_form(int r, long q) {
    const double y = (r - 2.0 + std::sqrt(static_cast<double>(r) * r - 4.0 * r)) / 2.0;
    return std::log(y) / std::log(static_cast<double>(q));
}

} // namespace schottky
