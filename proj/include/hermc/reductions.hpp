#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "hermc/structure.hpp"

namespace hermc {

// A 3SAT instance: literals are signed 1-based variable indexes, every clause
// has exactly three (possibly repeated) literals.
struct CnfInstance {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;
};

struct DimacsStats {
    int padded_clauses = 0;  // clauses shorter than 3, padded by literal repetition
};

// DIMACS CNF with clauses of at most three literals; shorter clauses are
// padded by repeating a literal. Longer clauses are an error.
CnfInstance parse_dimacs(std::string_view text, DimacsStats* stats = nullptr);

// Exhaustive satisfiability oracle, at most 24 variables.
bool sat_bruteforce(const CnfInstance& c);

// Blue/red structure over {E_b/2, E_r/2} with one vertex per literal
// occurrence a_i^j (vertex (i-1)*3 + j): blue edges link consecutive clause
// layers cyclically, red edges join distinct vertices whose literals are
// compatible (lit(u) != ~lit(v)). The instance is satisfiable iff the output
// does not hereditarily satisfy the blue/red sentence phi_T. Requires at
// least two clauses, since the cyclic blue layer edges would otherwise be
// loops; duplicate a clause to lift a one-clause instance.
Structure reduce_to_forbtd(const CnfInstance& c);

// Digraph on 3m+2 vertices: literal vertices d_i^j = (i-1)*3 + j, then
// s = 3m+1 and t = 3m+2; forward edges s -> layer 1 -> ... -> layer m -> t -> s
// and symmetric edge pairs between vertices carrying complementary literals
// (lit(u) = ~lit(v)). The instance is satisfiable iff some directed cycle of
// the output induces no symmetric edge.
Structure reduce_to_symcycle(const CnfInstance& c);

}  // namespace hermc
