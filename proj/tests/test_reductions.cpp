#include <doctest.h>

#include <random>

#include "hermc/certificates.hpp"
#include "hermc/corpus.hpp"
#include "hermc/evaluator.hpp"
#include "hermc/hereditary.hpp"
#include "hermc/reductions.hpp"

using namespace hermc;

namespace {

// independent satisfiability oracle: a small DPLL with unit propagation
bool dpll(std::vector<std::vector<int>> clauses, std::vector<int> assignment /* 0 unknown */) {
    for (;;) {
        bool changed = false;
        for (auto it = clauses.begin(); it != clauses.end();) {
            bool satisfied = false;
            std::vector<int> open;
            for (int lit : *it) {
                int var = std::abs(lit);
                int val = assignment[var];
                if (val == 0)
                    open.push_back(lit);
                else if ((lit > 0) == (val > 0))
                    satisfied = true;
            }
            if (satisfied) {
                it = clauses.erase(it);
                continue;
            }
            if (open.empty()) return false;
            if (open.size() == 1) {
                assignment[std::abs(open[0])] = open[0] > 0 ? 1 : -1;
                it = clauses.erase(it);
                changed = true;
                continue;
            }
            ++it;
        }
        if (!changed) break;
    }
    if (clauses.empty()) return true;
    int branch = 0;  // first unassigned literal of the first clause
    for (int lit : clauses.front())
        if (assignment[std::abs(lit)] == 0) {
            branch = std::abs(lit);
            break;
        }
    if (branch == 0) return false;  // clause with all literals assigned false
    for (int val : {1, -1}) {
        auto next = assignment;
        next[branch] = val;
        if (dpll(clauses, next)) return true;
    }
    return false;
}

bool dpll_sat(const CnfInstance& c) {
    std::vector<std::vector<int>> clauses;
    for (const auto& cl : c.clauses) clauses.push_back({cl[0], cl[1], cl[2]});
    return dpll(std::move(clauses), std::vector<int>(static_cast<size_t>(c.num_vars) + 1, 0));
}

CnfInstance random_cnf(std::mt19937_64& rng, int vars, int clauses) {
    CnfInstance c;
    c.num_vars = vars;
    for (int i = 0; i < clauses; ++i) {
        std::array<int, 3> cl;
        for (int j = 0; j < 3; ++j) {
            int v = 1 + static_cast<int>(rng() % vars);
            cl[j] = (rng() & 1) ? v : -v;
        }
        c.clauses.push_back(cl);
    }
    return c;
}

const CnfInstance kUnsat1{1, {{{1, 1, 1}}, {{-1, -1, -1}}}};

}  // namespace

TEST_CASE("DIMACS parsing") {
    DimacsStats stats;
    CnfInstance c = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n", &stats);
    CHECK(c.num_vars == 1);
    CHECK(c.clauses == std::vector<std::array<int, 3>>{{{1, 1, 1}}, {{-1, -1, -1}}});
    CHECK(stats.padded_clauses == 2);

    CnfInstance c2 = parse_dimacs("c a comment\np cnf 3 2\n1 2 -3 0\n-1 2 3 0\n");
    CHECK(c2.clauses.size() == 2);
    CHECK(c2.clauses[0] == std::array<int, 3>{1, 2, -3});

    CHECK_THROWS_AS(parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p dnf 3 1\n1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 1 0\n"), ParseError);
}

TEST_CASE("SAT brute force") {
    CHECK_FALSE(sat_bruteforce(kUnsat1));
    CHECK(sat_bruteforce(CnfInstance{3, {{{1, 2, -3}}}}));
    CnfInstance big;
    big.num_vars = 25;
    big.clauses.push_back({1, 2, 3});
    CHECK_THROWS_AS(sat_bruteforce(big), ScaleError);
}

TEST_CASE("SAT brute force agrees with an independent DPLL") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        CnfInstance c = random_cnf(rng, 5, 20);
        CHECK(sat_bruteforce(c) == dpll_sat(c));
    }
}

TEST_CASE("blue/red reduction shape") {
    CnfInstance two{3, {{{1, 2, 3}}, {{1, 2, 3}}}};
    Structure a = reduce_to_forbtd(two);
    CHECK(a.size() == 6);
    CHECK(a.tuples("E_b").size() == 18);

    // loopless, and the red relation is symmetric
    for (const Tuple& t : a.tuples("E_b")) CHECK(t[0] != t[1]);
    for (const Tuple& t : a.tuples("E_r")) {
        CHECK(t[0] != t[1]);
        CHECK(a.contains("E_r", Tuple{t[1], t[0]}));
    }

    CHECK_THROWS_AS(reduce_to_forbtd(CnfInstance{1, {{{1, 1, 1}}}}), PreconditionError);
}

TEST_CASE("blue/red reduction correctness on the worked pair") {
    PrenexSentence phi_t = corpus_formula("phi_T");

    Structure unsat = reduce_to_forbtd(kUnsat1);
    CHECK(unsat.size() == 6);
    CHECK(her_bruteforce(unsat, phi_t).hereditary);

    CnfInstance sat{3, {{{1, 2, 3}}, {{1, 2, 3}}}};
    Structure yes = reduce_to_forbtd(sat);
    CHECK_FALSE(her_bruteforce(yes, phi_t).hereditary);
    // vertices a_1^1 and a_2^1 carry the same literal and form the two-element pattern
    CHECK(verify_counterexample(yes, phi_t, {1, 4}));
}

TEST_CASE("symmetric-cycle reduction shape and worked pair") {
    CnfInstance sat{3, {{{1, 2, 3}}}};
    Structure d = reduce_to_symcycle(sat);
    CHECK(d.size() == 3 * 1 + 2);
    CHECK_FALSE(every_cycle_has_symmetric_edge(d));

    Structure unsat = reduce_to_symcycle(kUnsat1);
    CHECK(unsat.size() == 8);
    CHECK(every_cycle_has_symmetric_edge(unsat));
}

TEST_CASE("both reductions track satisfiability on random instances") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        CnfInstance c = random_cnf(rng, 4, 2 + static_cast<int>(rng() % 3));
        bool sat = sat_bruteforce(c);
        CHECK(sat != her_bruteforce(reduce_to_forbtd(c), corpus_formula("phi_T")).hereditary);
        CHECK(sat != every_cycle_has_symmetric_edge(reduce_to_symcycle(c)));
    }
}
