#include "hermc/corpus.hpp"

#include <algorithm>
#include <random>

#include "hermc/syntax.hpp"

namespace hermc {

namespace {

Structure digraph_from(int n, std::vector<std::pair<int, int>> edges) {
    return Structure::digraph(n, edges);
}

Structure gen_td(int n) {
    std::vector<Tuple> blue, red;
    for (int i = 1; i <= n; ++i) blue.push_back({i, i % n + 1});
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j) red.push_back({i, j});
    return Structure(Signature({{"E_b", 2}, {"E_r", 2}}), n, {{"E_b", blue}, {"E_r", red}});
}

Structure gen_henson(int n) {
    std::vector<std::pair<int, int>> edges;
    edges.emplace_back(1, n);
    for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i)
            if (j > i + 1 && !(j == n && i == 1)) edges.emplace_back(j, i);
    return digraph_from(n, std::move(edges));
}

Structure gen_q_obstruction(int n, bool reversed_bottom) {
    // v_i = i, u_i = n + i, l_j = 2n + (j-1) for j in 2..n-1,
    // r_j = (3n-2) + (j-1) for j in 2..n-1
    const int total = 4 * n - 4;
    auto v = [&](int i) { return i; };
    auto u = [&](int i) { return n + i; };
    auto l = [&](int j) { return 2 * n + (j - 1); };
    auto r = [&](int j) { return (3 * n - 2) + (j - 1); };

    std::vector<Tuple> lt, eq;
    for (int i = 1; i < n; ++i) lt.push_back({v(i), v(i + 1)});
    for (int i = 1; i < n; ++i) {
        if (reversed_bottom)
            lt.push_back({u(i + 1), u(i)});
        else
            lt.push_back({u(i), u(i + 1)});
    }
    auto eq_edge = [&](int a, int b) {
        eq.push_back({a, b});
        eq.push_back({b, a});
    };
    std::vector<int> left{v(1)};
    for (int j = n - 1; j >= 2; --j) left.push_back(l(j));
    left.push_back(u(n));
    std::vector<int> right{v(n)};
    for (int j = 2; j <= n - 1; ++j) right.push_back(r(j));
    right.push_back(u(1));
    for (size_t i = 0; i + 1 < left.size(); ++i) eq_edge(left[i], left[i + 1]);
    for (size_t i = 0; i + 1 < right.size(); ++i) eq_edge(right[i], right[i + 1]);

    return Structure(Signature({{"LT", 2}, {"EQ", 2}}), total, {{"LT", lt}, {"EQ", eq}});
}

}  // namespace

Structure gen_structure(std::string_view family, int n, const GenOptions& options) {
    auto need = [&](int min) {
        if (n < min)
            throw PreconditionError(std::string(family) + " requires n >= " + std::to_string(min));
    };
    if (family == "td") {
        need(2);
        return gen_td(n);
    }
    if (family == "henson") {
        need(5);
        return gen_henson(n);
    }
    if (family == "dcycle") {
        need(1);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i <= n; ++i) edges.emplace_back(i, i % n + 1);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return digraph_from(n, std::move(edges));
    }
    if (family == "dpath") {
        need(1);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
        return digraph_from(n, std::move(edges));
    }
    if (family == "symcycle") {
        need(3);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i <= n; ++i) {
            edges.emplace_back(i, i % n + 1);
            edges.emplace_back(i % n + 1, i);
        }
        return digraph_from(n, std::move(edges));
    }
    if (family == "revcycle") {
        need(3);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
        edges.emplace_back(1, n);  // the arc n -> 1, reversed
        return digraph_from(n, std::move(edges));
    }
    if (family == "q_obstruction_c") {
        need(2);
        return gen_q_obstruction(n, false);
    }
    if (family == "q_obstruction_d") {
        need(2);
        return gen_q_obstruction(n, true);
    }
    if (family == "complete") {
        need(1);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                if (i != j) edges.emplace_back(i, j);
        return digraph_from(n, std::move(edges));
    }
    if (family == "random_digraph") {
        need(1);
        if (!options.seed) throw PreconditionError("random_digraph requires an explicit seed");
        std::mt19937_64 rng(*options.seed);
        // raw 53-bit draws keep the stream independent of the standard
        // library's distribution implementations
        auto coin = [&] { return (rng() >> 11) * 0x1.0p-53 < options.edge_probability; };
        std::vector<std::pair<int, int>> edges;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v)
                if (u != v && coin()) edges.emplace_back(u, v);
        return digraph_from(n, std::move(edges));
    }
    throw PreconditionError("unknown structure family: " + std::string(family));
}

std::vector<std::string> structure_families() {
    return {"td",       "henson",          "dcycle",          "dpath",    "symcycle",
            "revcycle", "q_obstruction_c", "q_obstruction_d", "complete", "random_digraph"};
}

// ------------------------------------------------------------ formulas

namespace {

FormulaPtr cyc(const std::string& x, const std::string& y, const std::string& z) {
    return f_and({f_not(f_rel("E", {x, x})), f_not(f_rel("E", {y, y})), f_not(f_rel("E", {z, z})),
                  f_rel("E", {x, y}), f_rel("E", {y, z}), f_rel("E", {z, x})});
}

FormulaPtr var_in(const std::string& z, const std::vector<std::string>& set) {
    std::vector<FormulaPtr> cases;
    for (const auto& v : set) cases.push_back(f_eq(z, v));
    return f_or(std::move(cases));
}

// "z has exactly one out-neighbour other than excl (and other than z)"
FormulaPtr exactly_one_nbr(const std::string& z, const std::string& excl, bool outgoing,
                           const std::string& u, const std::string& w) {
    auto edge = [&](const std::string& a) {
        return outgoing ? f_rel("E", {z, a}) : f_rel("E", {a, z});
    };
    return f_exists(
        {u}, f_and({edge(u), f_neq(u, excl), f_neq(u, z),
                  f_forall({w}, f_implies(f_and({edge(w), f_neq(w, excl), f_neq(w, z)}), f_eq(w, u)))}));
}

// "z has exactly two out-neighbours other than excl, and no in-neighbours"
// (or the in/out mirror image)
FormulaPtr two_nbrs_none_reverse(const std::string& z, const std::string& excl, bool outgoing,
                                 const std::string& u1, const std::string& u2, const std::string& w) {
    auto edge = [&](const std::string& a) {
        return outgoing ? f_rel("E", {z, a}) : f_rel("E", {a, z});
    };
    auto reverse_edge = [&](const std::string& a) {
        return outgoing ? f_rel("E", {a, z}) : f_rel("E", {z, a});
    };
    return f_exists(
        {u1},
        f_exists(
            {u2},
            f_and({edge(u1), edge(u2), f_neq(u1, u2), f_neq(u1, excl), f_neq(u2, excl), f_neq(u1, z),
                   f_neq(u2, z),
                   f_forall({w}, f_and({f_not(reverse_edge(w)),
                                      f_implies(f_and({edge(w), f_neq(w, excl), f_neq(w, z)}),
                                                f_or({f_eq(w, u1), f_eq(w, u2)}))}))})));
}

CorpusFormula make_p3() {
    // loop, or edges (x,y) and (a,b) where y has exactly one out-neighbour
    // besides b, a exactly one in-neighbour besides x, and every other vertex
    // is a source with two out-neighbours besides b or a sink with two
    // in-neighbours besides x: the shape of a shortest oriented path of
    // algebraic length three
    FormulaPtr main = f_and(
        {f_rel("E", {"x", "y"}), f_rel("E", {"a", "b"}),
         exactly_one_nbr("y", "b", true, "u0", "w0"), exactly_one_nbr("a", "x", false, "u0", "w0"),
         f_forall({"z"}, f_or({var_in("z", {"x", "y", "a", "b"}),
                             two_nbrs_none_reverse("z", "b", true, "u1", "u2", "w1"),
                             two_nbrs_none_reverse("z", "x", false, "u1", "u2", "w1")}))});
    FormulaPtr body = f_or({f_rel("E", {"x", "x"}), std::move(main)});
    return {Signature::digraph(), f_exists({"x", "y", "a", "b"}, std::move(body))};
}

CorpusFormula make_henson_phi() {
    std::vector<FormulaPtr> lines;
    lines.push_back(f_and({cyc("x1", "x2", "x3"), cyc("y1", "y2", "y3")}));
    lines.push_back(f_or({var_in("z", {"x1", "x2", "y2", "y3"}), cyc("y3", "z", "x1")}));
    lines.push_back(f_and({f_or({var_in("z", {"y1", "y2"}), f_rel("E", {"y2", "z"})}),
                           f_or({var_in("z", {"x2", "x3"}), f_rel("E", {"z", "x2"})})}));
    lines.push_back(f_implies(
        f_and({cyc("a", "b", "c"), cyc("a", "b", "d"), cyc("a", "b", "e")}),
        f_or({f_eq("c", "d"), f_eq("c", "e"), f_eq("d", "e"), f_and({f_eq("x1", "a"), f_eq("y3", "b")})})));
    {
        std::vector<std::string> six{"a", "b", "c", "d", "e", "f"};
        std::vector<FormulaPtr> collisions;
        for (size_t i = 0; i < six.size(); ++i)
            for (size_t j = i + 1; j < six.size(); ++j) collisions.push_back(f_eq(six[i], six[j]));
        lines.push_back(
            f_implies(f_and({cyc("a", "b", "c"), cyc("a", "b", "d"), cyc("b", "c", "e"), cyc("c", "a", "f")}),
                      f_or(std::move(collisions))));
    }
    lines.push_back(f_implies(
        f_and({cyc("a", "b", "c"),
               f_not(f_and({var_in("x1", {"a", "b", "c"}), var_in("y3", {"a", "b", "c"})}))}),
        f_or({f_and({cyc("a", "b", "g1"), cyc("b", "c", "g2")}),
              f_and({cyc("b", "c", "g1"), cyc("c", "a", "g2")}),
              f_or({cyc("c", "a", "g1"), cyc("a", "b", "g2")})})));

    FormulaPtr body = f_exists(
        {"x1", "x2", "x3", "y1", "y2", "y3"},
        f_forall({"z", "a", "b", "c", "d", "e", "f"},
                 f_exists({"g1", "g2"}, f_and(std::move(lines)))));
    return {Signature::digraph(), std::move(body)};
}

CorpusFormula make_henson_psi5() {
    Structure t5 = gen_henson(5);
    std::vector<std::string> vs{"v1", "v2", "v3", "v4", "v5"};
    std::vector<FormulaPtr> body;
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) body.push_back(f_neq(vs[i], vs[j]));
    for (const Tuple& e : t5.tuples("E")) body.push_back(f_rel("E", {vs[e[0] - 1], vs[e[1] - 1]}));
    body.push_back(f_forall({"w"}, var_in("w", vs)));
    return {Signature::digraph(), f_exists(vs, f_and(std::move(body)))};
}

}  // namespace

CorpusFormula corpus_formula_ast(std::string_view name, std::optional<int> param) {
    Signature digraph = Signature::digraph();
    if (name == "sink")
        return {digraph, f_exists({"x"}, f_forall({"y"}, f_not(f_rel("E", {"x", "y"}))))};
    if (name == "forest")
        return {digraph,
                f_exists({"x"}, f_forall({"y", "z"},
                                       f_and({f_not(f_rel("E", {"x", "x"})),
                                              f_or({f_not(f_rel("E", {"x", "y"})),
                                                    f_not(f_rel("E", {"x", "z"})), f_eq("y", "z")})})))};
    if (name == "k_degenerate") {
        int k = param.value_or(1);
        if (k < 1) throw PreconditionError("k_degenerate requires k >= 1");
        std::vector<std::string> ys;
        for (int i = 1; i <= k + 1; ++i) ys.push_back("y" + std::to_string(i));
        std::vector<FormulaPtr> edges;
        for (const auto& y : ys) edges.push_back(f_rel("E", {"x", y}));
        std::vector<FormulaPtr> collisions;
        for (size_t i = 0; i < ys.size(); ++i)
            for (size_t j = i + 1; j < ys.size(); ++j) collisions.push_back(f_eq(ys[i], ys[j]));
        return {digraph,
                f_exists({"x"}, f_forall(ys, f_and({f_not(f_rel("E", {"x", "x"})),
                                                  f_implies(f_and(std::move(edges)),
                                                            f_or(std::move(collisions)))})))};
    }
    if (name == "chordal")
        return {digraph,
                f_exists({"x"}, f_forall({"y", "z"},
                                       f_and({f_not(f_rel("E", {"x", "x"})),
                                              f_implies(f_and({f_rel("E", {"x", "y"}),
                                                               f_rel("E", {"x", "z"}), f_neq("y", "z")}),
                                                        f_rel("E", {"y", "z"}))})))};
    if (name == "phi_T" || name == "phi_T_eae") {
        Signature sig({{"E_b", 2}, {"E_r", 2}});
        FormulaPtr matrix =
            f_and({f_not(f_rel("E_b", {"a", "a"})), f_not(f_rel("E_r", {"a", "a"})),
                   f_or({f_not(f_rel("E_b", {"x", "a"})),
                         f_and({f_neq("x", "y"), f_not(f_rel("E_r", {"x", "y"}))})})});
        if (name == "phi_T")
            return {sig, f_exists({"x", "y"}, f_forall({"a"}, std::move(matrix)))};
        return {sig, f_exists({"x"}, f_forall({"a"}, f_exists({"y"}, std::move(matrix))))};
    }
    if (name == "symedge" || name == "symedge_eae") {
        FormulaPtr matrix = f_or({f_not(f_rel("E", {"x", "a"})),
                                  f_and({f_rel("E", {"x", "y"}), f_rel("E", {"y", "x"})})});
        if (name == "symedge")
            return {digraph, f_exists({"x", "y"}, f_forall({"a"}, std::move(matrix)))};
        return {digraph, f_exists({"x"}, f_forall({"a"}, f_exists({"y"}, std::move(matrix))))};
    }
    if (name == "cover")
        // witness edge (x,y): every vertex keeps an out-neighbour, except that
        // the sink position y may instead be discharged by a second out-edge
        // of x; exactly the directed cycles and shortcut patterns satisfy it
        return {digraph,
                f_exists({"x", "y"},
                         f_forall({"z"}, f_exists({"a"}, f_and({f_rel("E", {"x", "y"}),
                                                            f_or({f_rel("E", {"z", "a"}),
                                                                  f_and({f_eq("z", "y"), f_neq("a", "y"),
                                                                         f_rel("E", {"x", "a"})})})}))))};
    if (name == "andor") {
        int k = param.value_or(2);
        if (k < 1) throw PreconditionError("andor requires k >= 1");
        Signature sig({{"R", k + 1}});
        std::vector<std::string> ys, args{"x"};
        for (int i = 1; i <= k; ++i) {
            ys.push_back("y" + std::to_string(i));
            args.push_back(ys.back());
        }
        return {sig, f_exists({"x"}, f_forall(ys, f_not(f_rel("R", args))))};
    }
    if (name == "neq_eq") {
        Signature sig({{"N", 2}, {"EQ", 2}});
        FormulaPtr f = parse_formula(
            "(forall x,y. exists z. (~N(x,y) | deg_EQ(x) != 1 | deg_EQ(y) != 1 | deg_EQ(z) != 2))"
            " & (forall v. ~N(v,v))",
            sig);
        return {sig, f};
    }
    if (name == "p3") return make_p3();
    if (name == "henson_phi") return make_henson_phi();
    if (name == "henson_psi5") return make_henson_psi5();
    throw PreconditionError("unknown corpus formula: " + std::string(name));
}

namespace {

// keep the display's variable names when the AST is already prenex
std::optional<PrenexSentence> try_direct_prenex(const CorpusFormula& cf) {
    std::vector<std::pair<Quant, std::string>> prefix;
    FormulaPtr cur = cf.formula;
    while (cur->kind == Formula::Kind::Quantified) {
        prefix.emplace_back(cur->quant, cur->qvar);
        cur = cur->kids[0];
    }
    if (!is_quantifier_free(cur)) return std::nullopt;
    return PrenexSentence(cf.sig, std::move(prefix), cur);
}

}  // namespace

PrenexSentence corpus_formula(std::string_view name, std::optional<int> param) {
    CorpusFormula cf = corpus_formula_ast(name, param);
    if (auto direct = try_direct_prenex(cf)) return *direct;
    return to_prenex(cf.formula, cf.sig);
}

std::vector<std::string> corpus_formula_names() {
    return {"sink",    "forest",      "k_degenerate", "chordal", "phi_T",
            "phi_T_eae", "symedge",   "symedge_eae",  "cover",   "andor",
            "neq_eq",  "p3",          "henson_phi",   "henson_psi5"};
}

// ------------------------------------------------------- Henson checks

namespace {

struct OrientedCycle {
    int a, b, c;  // a -> b -> c -> a
};

}  // namespace

HensonReport check_henson_properties(const Structure& t) {
    if (t.signature() != Signature::digraph())
        throw PreconditionError("tournament check requires the digraph signature E/2");
    const int n = t.size();
    const int e = t.relation_index("E");
    auto edge = [&](int u, int v) { return t.contains2(e, u, v); };
    for (int i = 1; i <= n; ++i) {
        if (edge(i, i)) throw PreconditionError("not a tournament: loop at " + std::to_string(i));
        for (int j = i + 1; j <= n; ++j)
            if (edge(i, j) == edge(j, i))
                throw PreconditionError("not a tournament: vertices " + std::to_string(i) + "," +
                                        std::to_string(j) + " need exactly one edge direction");
    }

    std::vector<OrientedCycle> cycles;  // canonical: least vertex first
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                if (edge(i, j) && edge(j, k) && edge(k, i)) cycles.push_back({i, j, k});
                if (edge(i, k) && edge(k, j) && edge(j, i)) cycles.push_back({i, k, j});
            }

    // how many directed 3-cycles each directed edge belongs to
    std::vector<int> tri_count(static_cast<size_t>(n + 1) * (n + 1), 0);
    auto count_of = [&](int u, int v) -> int& { return tri_count[static_cast<size_t>(u) * (n + 1) + v]; };
    for (const auto& c : cycles) {
        ++count_of(c.a, c.b);
        ++count_of(c.b, c.c);
        ++count_of(c.c, c.a);
    }

    HensonReport report;
    report.three_cycle_count = static_cast<int>(cycles.size());

    // items 4 and 6 mention the special edge (s1, t3); item 5 is global
    auto item4 = [&](int s1, int t3) {
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v)
                if (edge(u, v) && !(u == s1 && v == t3) && count_of(u, v) > 2) return false;
        return true;
    };
    auto busy_edges = [&](const OrientedCycle& c) {
        return (count_of(c.a, c.b) >= 2) + (count_of(c.b, c.c) >= 2) + (count_of(c.c, c.a) >= 2);
    };
    auto item5 = [&] {
        for (const auto& c : cycles)
            if (busy_edges(c) > 2) return false;
        return true;
    };
    auto has_edge_s1t3 = [&](const OrientedCycle& c, int s1, int t3) {
        return (c.a == s1 && c.b == t3) || (c.b == s1 && c.c == t3) || (c.c == s1 && c.a == t3);
    };
    auto item6 = [&](int s1, int t3) {
        for (const auto& c : cycles)
            if (!has_edge_s1t3(c, s1, t3) && busy_edges(c) != 2) return false;
        return true;
    };

    if (cycles.empty()) {
        report.items = {false, false, false, item4(0, 0), item5(), false};
        return report;
    }

    std::vector<std::array<int, 3>> rotations;
    for (const auto& c : cycles) {
        rotations.push_back({c.a, c.b, c.c});
        rotations.push_back({c.b, c.c, c.a});
        rotations.push_back({c.c, c.a, c.b});
    }

    const bool g5 = item5();
    int best_score = -1;
    for (const auto& s : rotations) {
        for (const auto& tt : rotations) {
            const int s1 = s[0], s2 = s[1], s3 = s[2];
            const int t1 = tt[0], t2 = tt[1], t3 = tt[2];
            std::array<bool, 6> items{};
            items[0] = true;  // both witness triples are directed 3-cycles
            items[1] = true;
            for (int z = 1; z <= n && items[1]; ++z) {
                if (z == s1 || z == s2 || z == t2 || z == t3) continue;
                if (!(edge(t3, z) && edge(z, s1) && edge(s1, t3))) items[1] = false;
            }
            items[2] = true;
            for (int z = 1; z <= n && items[2]; ++z) {
                if (z != t1 && z != t2 && !edge(t2, z)) items[2] = false;
                if (z != s2 && z != s3 && !edge(z, s2)) items[2] = false;
            }
            items[3] = item4(s1, t3);
            items[4] = g5;
            items[5] = item6(s1, t3);
            int score = 0;
            for (bool b : items) score += b;
            if (score > best_score) {
                best_score = score;
                report.items = items;
                report.witness = {s1, s2, s3, t1, t2, t3};
                if (score == 6) {
                    report.all_six = true;
                    return report;
                }
            }
        }
    }
    return report;
}

}  // namespace hermc
