#include <doctest.h>

#include <random>

#include "hermc/corpus.hpp"
#include "hermc/evaluator.hpp"
#include "hermc/syntax.hpp"
#include "support.hpp"

using namespace hermc;
using testsupport::for_each_digraph;
using testsupport::for_each_digraph_upto;
using testsupport::for_each_digraph_with_unary;

namespace {
const Signature kDigraph = Signature::digraph();
}

TEST_CASE("parsing the corpus sentences") {
    FormulaPtr sink = parse_formula("exists x. forall y. ~E(x,y)", kDigraph);
    CHECK(formula_equal(sink, corpus_formula_ast("sink").formula));

    FormulaPtr symedge =
        parse_formula("exists x,y. forall a. (~E(x,a) | (E(x,y) & E(y,x)))", kDigraph);
    CHECK(formula_equal(symedge, corpus_formula_ast("symedge").formula));

    FormulaPtr refl = parse_formula("forall x. x = x", kDigraph);
    CHECK(refl->kind == Formula::Kind::Quantified);
    CHECK(extract_prefix(to_prenex(refl, kDigraph)).str() == "A");
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_formula("exists x. E(x)", kDigraph), ParseError);
    CHECK_THROWS_AS(parse_formula("exists x. F(x,x)", kDigraph), ParseError);
    CHECK_THROWS_AS(parse_formula("exists x. E(x,", kDigraph), ParseError);
    try {
        parse_formula("exists x.\n  E(x)", kDigraph);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("printing is the inverse of parsing") {
    CHECK(print_formula(corpus_formula_ast("sink").formula) == "exists x. forall y. ~E(x,y)");

    for (const auto& name : corpus_formula_names()) {
        CorpusFormula cf = corpus_formula_ast(name);
        CAPTURE(name);
        std::string text = print_formula(cf.formula);
        FormulaPtr reparsed = parse_formula(text, cf.sig);
        CHECK(formula_equal(reparsed, cf.formula));
        // and again through the prenex rendering
        PrenexSentence p = corpus_formula(name);
        FormulaPtr reparsed2 = parse_formula(print_formula(p), p.signature());
        CHECK(formula_equal(reparsed2, p.as_formula()));
    }
}

TEST_CASE("structure files") {
    Structure c3 = parse_structure("signature E/2\ndomain 3\nE 1 2\nE 2 3\nE 3 1\n");
    CHECK(c3 == Structure::digraph(3, {{1, 2}, {2, 3}, {3, 1}}));

    Structure td2 = parse_structure(
        "# two-element blue/red gadget\n"
        "signature E_b/2, E_r/2\n"
        "domain 2\n"
        "E_b 1 2\nE_b 2 1\nE_r 1 2\nE_r 2 1\n");
    CHECK(td2 == gen_structure("td", 2));

    CHECK_THROWS_AS(parse_structure("signature E/2\ndomain 3\nE 1 4\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature E/2, E/2\ndomain 3\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature E/2\ndomain 3\nE 1\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("signature E/2\ndomain 3\nF 1 2\n"), ParseError);

    // round-trip
    Structure henson = gen_structure("henson", 7);
    CHECK(parse_structure(print_structure(henson)) == henson);
}

TEST_CASE("formula files") {
    FormulaFile ff = parse_formula_file("sig E/2\nexists x. forall y. ~E(x,y)\n");
    CHECK(ff.sig == kDigraph);
    CHECK(formula_equal(ff.formula, corpus_formula_ast("sink").formula));

    FormulaFile ff2 = parse_formula_file("exists x. E(x,x)", kDigraph);
    CHECK(ff2.sig == kDigraph);

    CHECK_THROWS(parse_formula_file("exists x. E(x,x)"));  // no signature anywhere
    CHECK_THROWS(parse_formula_file("sig E/2\nexists x. E(x,x)", Signature({{"E", 1}})));
}

TEST_CASE("prenex: prefix extraction on the corpus") {
    CHECK(extract_prefix(corpus_formula("sink")).str() == "EA");
    CHECK(extract_prefix(corpus_formula("symedge")).str() == "EEA");
    CHECK(extract_prefix(corpus_formula("phi_T")).str() == "EEA");
    CHECK(extract_prefix(corpus_formula("phi_T_eae")).str() == "EAE");
    CHECK(extract_prefix(corpus_formula("cover")).str() == "EEAE");
    CHECK(extract_prefix(corpus_formula("forest")).str() == "EAA");
    CHECK(extract_prefix(corpus_formula("andor", 2)).str() == "EAA");
    CHECK(extract_prefix(corpus_formula("henson_phi")).str() == "EEEEEEAAAAAAAEE");
}

TEST_CASE("prenex: golden rename and disjunction pull") {
    PrenexSentence p =
        to_prenex(parse_formula("(exists x. E(x,x)) | (exists y. E(y,y))", kDigraph), kDigraph);
    CHECK(print_formula(p) == "exists v1,v2. E(v1,v1) | E(v2,v2)");

    PrenexSentence sink = to_prenex(corpus_formula_ast("sink").formula, kDigraph);
    CHECK(extract_prefix(sink).str() == "EA");
    CHECK(print_formula(sink) == "exists v1. forall v2. ~E(v1,v2)");
}

static void check_prenex_equivalent(const CorpusFormula& cf, const Structure& s) {
    PrenexSentence p = to_prenex(cf.formula, cf.sig);
    CHECK(eval_fo(s, cf.formula) == eval_fo(s, p));
}

TEST_CASE("prenex preserves truth on small digraphs, exhaustively") {
    std::vector<std::string> names{"sink", "forest", "chordal", "symedge", "symedge_eae", "cover"};
    for (const auto& name : names) {
        CorpusFormula cf = corpus_formula_ast(name);
        for_each_digraph_upto(3, false, [&](const Structure& s) { check_prenex_equivalent(cf, s); });
    }
    // the or-of-exists example
    CorpusFormula loops{kDigraph, parse_formula("(exists x. E(x,x)) | (exists y. E(y,y))", kDigraph)};
    for_each_digraph_upto(3, false, [&](const Structure& s) { check_prenex_equivalent(loops, s); });
}

TEST_CASE("prenex preserves truth for the macro-heavy sentences") {
    // p3 and neq_eq prenex into long prefixes; exhaustive at 2 elements,
    // seeded samples at 3
    CorpusFormula p3 = corpus_formula_ast("p3");
    for_each_digraph_upto(2, false, [&](const Structure& s) { check_prenex_equivalent(p3, s); });
    std::mt19937_64 rng(20240901);
    for (int i = 0; i < 12; ++i)
        check_prenex_equivalent(p3, testsupport::random_digraph(rng, 3, 0.4));

    CorpusFormula neq = corpus_formula_ast("neq_eq");
    Signature nsig = neq.sig;
    auto random_neq_structure = [&](int n) {
        std::vector<Tuple> ntup, eqtup;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v) {
                if ((rng() >> 11) * 0x1.0p-53 < 0.35) ntup.push_back({u, v});
                if ((rng() >> 11) * 0x1.0p-53 < 0.35) eqtup.push_back({u, v});
            }
        return Structure(nsig, n, {{"N", ntup}, {"EQ", eqtup}});
    };
    for (int n = 1; n <= 3; ++n)
        for (int i = 0; i < 10; ++i) check_prenex_equivalent(neq, random_neq_structure(n));
}

TEST_CASE("neq_eq matches a hand-expanded rendering") {
    // the degree macros written out longhand, with the same neighbour
    // convention: w adjacent to x iff w != x and EQ holds in either direction
    const char* longhand =
        "(forall x,y. exists z. ("
        "  ~N(x,y)"
        "  | ~(exists u. (u != x & (EQ(x,u) | EQ(u,x)) &"
        "       forall w. ((EQ(x,w) | EQ(w,x)) & w != x -> w = u)))"
        "  | ~(exists u. (u != y & (EQ(y,u) | EQ(u,y)) &"
        "       forall w. ((EQ(y,w) | EQ(w,y)) & w != y -> w = u)))"
        "  | ~(exists u,v. (u != z & v != z & u != v & (EQ(z,u) | EQ(u,z)) & (EQ(z,v) | EQ(v,z)) &"
        "       forall w. ((EQ(z,w) | EQ(w,z)) & w != z -> (w = u | w = v))))"
        ")) & (forall v. ~N(v,v))";
    CorpusFormula neq = corpus_formula_ast("neq_eq");
    FormulaPtr hand = parse_formula(longhand, neq.sig);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<Tuple> ntup, eqtup;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v) {
                if ((rng() >> 11) * 0x1.0p-53 < 0.4) ntup.push_back({u, v});
                if ((rng() >> 11) * 0x1.0p-53 < 0.4) eqtup.push_back({u, v});
            }
        Structure s(neq.sig, n, {{"N", ntup}, {"EQ", eqtup}});
        CHECK(eval_fo(s, neq.formula) == eval_fo(s, hand));
    }
}

TEST_CASE("relativization: forms from the two displayed cases") {
    GuardFormula guard(f_rel("U", {"x"}), "x", Signature({{"U", 1}}));

    PrenexSentence sink_u = relativize(corpus_formula("sink"), guard);
    CHECK(extract_prefix(sink_u).str() == "EA");  // prefix preserved
    CHECK(print_formula(sink_u) == "exists x. forall y. U(y) -> U(x) & ~E(x,y)");

    PrenexSentence loop = to_prenex(parse_formula("exists x. E(x,x)", kDigraph), kDigraph);
    PrenexSentence loop_u = relativize(loop, guard);
    CHECK(extract_prefix(loop_u).str() == "AE");
    CHECK(print_formula(loop_u) == "forall v1. exists v2. ~U(v1) | U(v2) & E(v2,v2)");
}

TEST_CASE("relativization semantics: guarded truth iff truth on the guarded part") {
    GuardFormula guard(f_rel("U", {"x"}), "x", Signature({{"U", 1}}));
    std::vector<PrenexSentence> sentences{corpus_formula("sink"), corpus_formula("symedge"),
                                          corpus_formula("forest"),
                                          to_prenex(parse_formula("exists x,y. E(x,y) & E(y,x)", kDigraph),
                                                    kDigraph)};
    for (const auto& p : sentences) {
        PrenexSentence rel = relativize(p, guard);
        for (int n = 1; n <= 3; ++n) {
            for_each_digraph_with_unary(n, [&](const Structure& s) {
                std::vector<int> inside;
                for (const Tuple& t : s.tuples("U")) inside.push_back(t[0]);
                bool lhs = eval_fo(s, rel);
                bool rhs;
                if (inside.empty()) {
                    rhs = true;
                } else {
                    // evaluate on the induced substructure, dropping U
                    Structure sub = induced_substructure(s, inside);
                    std::map<std::string, std::vector<Tuple>> rels{{"E", sub.tuples("E")}};
                    Structure plain(kDigraph, sub.size(), rels);
                    rhs = eval_fo(plain, p);
                }
                CHECK(lhs == rhs);
            });
        }
    }
}

TEST_CASE("relativization requires exactly one free variable") {
    CHECK_THROWS_AS(GuardFormula(f_rel("U", {"x"}), "y", Signature({{"U", 1}})), PreconditionError);
    CHECK_THROWS_AS(GuardFormula(f_rel("E", {"x", "y"}), "x", Signature({{"E", 2}})),
                    PreconditionError);
    // prefix preservation claim: holds whenever an A occurs in the prefix
    GuardFormula guard(f_rel("U", {"x"}), "x", Signature({{"U", 1}}));
    for (const char* name : {"sink", "symedge", "forest", "cover", "phi_T_eae"}) {
        PrenexSentence p = corpus_formula(name);
        CHECK(extract_prefix(relativize(p, guard)).str() == extract_prefix(p).str());
    }
}

TEST_CASE("chi: satisfiable or unsatisfiable left disjunct") {
    Signature e0({{"E0", 2}});
    PrenexSentence phi = to_prenex(parse_formula("forall x. E0(x,x)", e0), e0);
    PrenexSentence chi = build_chi(phi, corpus_formula("sink"));
    CHECK(chi.signature().contains("U"));
    CHECK(chi.signature().contains("E"));
    CHECK(chi.signature().contains("E0"));

    // semantics on every {E0,E,U}-structure with <= 2 elements:
    // chi holds iff (U empty or A|_U falsifies phi) or (U full or A|_{~U} satisfies psi)
    PrenexSentence sink = corpus_formula("sink");
    for (int n = 1; n <= 2; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v) slots.emplace_back(u, v);
        for (std::uint64_t m0 = 0; m0 < (1ull << slots.size()); ++m0)
            for (std::uint64_t m1 = 0; m1 < (1ull << slots.size()); ++m1)
                for (std::uint64_t mu = 0; mu < (1ull << n); ++mu) {
                    std::vector<Tuple> e0t, et, ut;
                    for (size_t i = 0; i < slots.size(); ++i) {
                        if (m0 >> i & 1) e0t.push_back({slots[i].first, slots[i].second});
                        if (m1 >> i & 1) et.push_back({slots[i].first, slots[i].second});
                    }
                    std::vector<int> inside, outside;
                    for (int v = 1; v <= n; ++v)
                        if (mu >> (v - 1) & 1) {
                            ut.push_back({v});
                            inside.push_back(v);
                        } else {
                            outside.push_back(v);
                        }
                    Structure s(chi.signature(), n, {{"E0", e0t}, {"E", et}, {"U", ut}});
                    bool left, right;
                    if (inside.empty()) {
                        left = true;
                    } else {
                        Structure sub = induced_substructure(s, inside);
                        Structure plain(e0, sub.size(), {{"E0", sub.tuples("E0")}});
                        left = !eval_fo(plain, phi);
                    }
                    if (outside.empty()) {
                        right = true;
                    } else {
                        Structure sub = induced_substructure(s, outside);
                        Structure plain(kDigraph, sub.size(), {{"E", sub.tuples("E")}});
                        right = eval_fo(plain, sink);
                    }
                    CHECK(eval_fo(s, chi) == (left || right));
                }
    }
}

TEST_CASE("chi with an unsatisfiable phi is valid") {
    PrenexSentence phi =
        to_prenex(parse_formula("exists x. ~(x = x)", Signature({{"E0", 2}})), Signature({{"E0", 2}}));
    PrenexSentence chi = build_chi(phi, corpus_formula("sink"));
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        std::vector<Tuple> e0t, et, ut;
        for (int u = 1; u <= n; ++u) {
            if (rng() & 1) ut.push_back({u});
            for (int v = 1; v <= n; ++v) {
                if (rng() & 1) e0t.push_back({u, v});
                if (rng() & 1) et.push_back({u, v});
            }
        }
        Structure s(chi.signature(), n, {{"E0", e0t}, {"E", et}, {"U", ut}});
        CHECK(eval_fo(s, chi));
    }
}

TEST_CASE("chi rejects clashing signatures") {
    PrenexSentence phi = corpus_formula("sink");  // already over {E}
    CHECK_THROWS_AS(build_chi(phi, corpus_formula("sink")), PreconditionError);
}

TEST_CASE("degree macro expansion counts distinct neighbours") {
    Signature sig({{"EQ", 2}, {"N", 2}});
    FormulaPtr deg1 = parse_formula("forall x. deg_EQ(x) = 1", sig);
    // a two-element EQ edge: both endpoints have exactly one neighbour
    Structure pair(sig, 2, {{"EQ", {{1, 2}}}, {"N", {}}});
    CHECK(eval_fo(pair, deg1));
    // a loop contributes nothing
    Structure loop(sig, 2, {{"EQ", {{1, 1}, {1, 2}}}, {"N", {}}});
    CHECK(eval_fo(loop, deg1));
    Structure triangle(sig, 3, {{"EQ", {{1, 2}, {2, 3}, {3, 1}}}, {"N", {}}});
    FormulaPtr deg2 = parse_formula("forall x. deg_EQ(x) = 2", sig);
    CHECK(eval_fo(triangle, deg2));
    CHECK_FALSE(eval_fo(triangle, deg1));
    FormulaPtr deg0 = parse_formula("deg_EQ(x) = 0", sig);
    CHECK(eval_fo(Structure(sig, 1, {{"EQ", {{1, 1}}}, {"N", {}}}),
                  parse_formula("forall x. deg_EQ(x) = 0", sig)));
}
