#include <doctest.h>

#include "hermc/certificates.hpp"
#include "hermc/corpus.hpp"
#include "hermc/evaluator.hpp"
#include "hermc/hereditary.hpp"
#include "hermc/syntax.hpp"
#include "support.hpp"

using namespace hermc;
using testsupport::for_each_digraph_upto;

TEST_CASE("order certificates on the two-vertex path") {
    Structure p2 = Structure::digraph(2, {{1, 2}});
    PrenexSentence sink = corpus_formula("sink");

    OrderCert good{0, {{{}, {2, 1}}}};
    CHECK(verify_order_certificate(p2, sink, good));

    OrderCert bad{0, {{{}, {1, 2}}}};
    CHECK_FALSE(verify_order_certificate(p2, sink, bad));

    Structure one = Structure::digraph(1, {});
    OrderCert single{0, {{{}, {1}}}};
    CHECK(verify_order_certificate(one, sink, single));

    OrderCert mismatched{1, {{{1}, {1, 2}}, {{2}, {1, 2}}}};
    CHECK_THROWS_AS(verify_order_certificate(p2, sink, mismatched), PreconditionError);
    OrderCert not_perm{0, {{{}, {1, 1}}}};
    CHECK_THROWS_AS(verify_order_certificate(p2, sink, not_perm), PreconditionError);
}

TEST_CASE("counterexample verification") {
    Structure c3 = gen_structure("dcycle", 3);
    PrenexSentence sink = corpus_formula("sink");
    CHECK(verify_counterexample(c3, sink, {1, 2, 3}));
    CHECK_FALSE(verify_counterexample(c3, sink, {1, 2}));  // 2 is a sink there
    CHECK_THROWS_AS(verify_counterexample(c3, sink, {}), PreconditionError);
    CHECK_THROWS_AS(verify_counterexample(c3, sink, {4}), PreconditionError);
}

TEST_CASE("serialization round-trips") {
    PrenexSentence sink = corpus_formula("sink");

    // an order certificate produced by the certifying algorithm
    Structure p4 = gen_structure("dpath", 4);
    HerVerdict v = algorithm1(p4, sink);
    REQUIRE(v.hereditary);
    Certificate c = *v.certificate;
    Certificate back = parse_certificate(serialize_certificate(c));
    CHECK(back.domain_size == c.domain_size);
    CHECK(back.formula_hash == c.formula_hash);
    CHECK(back.order().params == c.order().params);
    CHECK(back.order().orders == c.order().orders);
    CHECK(verify_certificate(p4, sink, back));

    // a counterexample certificate from the brute-force path
    HerVerdict w = her_bruteforce(gen_structure("dcycle", 3), sink);
    Certificate cw = *w.certificate;
    Certificate backw = parse_certificate(serialize_certificate(cw));
    CHECK(backw.counterexample().subset == cw.counterexample().subset);
    CHECK(verify_certificate(gen_structure("dcycle", 3), sink, backw));

    // a two-parameter certificate survives as well
    PrenexSentence cover_neg = negate(corpus_formula("cover"));
    HerVerdict u = algorithm1(gen_structure("dpath", 3), cover_neg);
    REQUIRE(u.hereditary);  // a directed path is the cover relation of a chain
    Certificate backu = parse_certificate(serialize_certificate(*u.certificate));
    CHECK(backu.order().orders == u.certificate->order().orders);

    CHECK_THROWS_AS(parse_certificate("not json"), ParseError);
    CHECK_THROWS_AS(parse_certificate("{\"type\":\"order\"}"), ParseError);
}

TEST_CASE("certificates are bound to their sentence by hash") {
    Structure p2 = Structure::digraph(2, {{1, 2}});
    PrenexSentence sink = corpus_formula("sink");
    HerVerdict v = algorithm1(p2, sink);
    REQUIRE(v.hereditary);
    CHECK(verify_certificate(p2, sink, *v.certificate));
    CHECK_FALSE(verify_certificate(p2, corpus_formula("forest"), *v.certificate));
    Certificate resized = *v.certificate;
    resized.domain_size = 3;
    CHECK_FALSE(verify_certificate(p2, sink, resized));
}

TEST_CASE("a verified order certificate implies hereditary truth") {
    // over every loopless digraph with at most 3 vertices, try every
    // permutation as a parameterless order for the sink sentence
    PrenexSentence sink = corpus_formula("sink");
    for_each_digraph_upto(3, false, [&](const Structure& s) {
        std::vector<int> perm(static_cast<size_t>(s.size()));
        std::iota(perm.begin(), perm.end(), 1);
        bool hereditary = her_bruteforce(s, sink).hereditary;
        do {
            OrderCert cert{0, {{{}, perm}}};
            if (verify_order_certificate(s, sink, cert)) CHECK(hereditary);
        } while (std::next_permutation(perm.begin(), perm.end()));
    });
}

TEST_CASE("the guessed-order sentence agrees with direct verification") {
    // expand the structure with the L relation a certificate induces and
    // evaluate the sentence's universal part as a plain formula
    PrenexSentence sink = corpus_formula("sink");
    SnpSentence snp = build_snp(sink);
    for_each_digraph_upto(3, false, [&](const Structure& s) {
        const int n = s.size();
        HerVerdict v = algorithm1(s, sink);
        if (!v.hereditary) return;
        const OrderCert& oc = v.certificate->order();
        std::vector<Tuple> ltuples;
        for (const auto& [params, perm] : oc.orders) {
            std::vector<int> rank(static_cast<size_t>(n) + 1, 0);
            for (int i = 0; i < n; ++i) rank[perm[i]] = i;
            for (int b = 1; b <= n; ++b)
                for (int c = 1; c <= n; ++c)
                    if (rank[b] <= rank[c]) {
                        Tuple t = params;
                        t.push_back(b);
                        t.push_back(c);
                        ltuples.push_back(std::move(t));
                    }
        }
        std::map<std::string, std::vector<Tuple>> rels{{"E", s.tuples("E")},
                                                       {snp.guess_name, ltuples}};
        Structure expanded(snp.extended_sig, n, rels);
        FormulaPtr closed = snp.matrix;
        for (auto it = snp.prefix.rbegin(); it != snp.prefix.rend(); ++it)
            closed = f_quant(it->first, it->second, closed);
        CHECK(eval_fo(expanded, closed));
        CHECK(verify_order_certificate(s, sink, oc));
    });
}
