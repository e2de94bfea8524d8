#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hermc/formula.hpp"
#include "hermc/structure.hpp"

namespace hermc {

struct GenOptions {
    std::optional<std::uint64_t> seed;  // required by the random families
    double edge_probability = 0.5;
};

// Structure families:
//   td               blue Hamiltonian directed cycle + complete symmetric red
//                    graph over {E_b/2, E_r/2}, n >= 2
//   henson           tournament with edges (1,n), (i,i+1), and (j,i) for
//                    j > i+1, (j,i) != (n,1); n >= 5
//   dcycle           directed cycle (n = 1 is a loop)
//   dpath            directed path
//   symcycle         symmetric cycle, n >= 3
//   revcycle         directed cycle with exactly one arc reversed, n >= 3
//   q_obstruction_c  chain gadget over {LT/2, EQ/2} that is inconsistent as
//                    order constraints (see docs/formats.md), n >= 2
//   q_obstruction_d  its consistent twin with the bottom chain reversed
//   complete         symmetric clique
//   random_digraph   loopless G(n, p), requires a seed (mt19937_64)
Structure gen_structure(std::string_view family, int n, const GenOptions& options = {});
std::vector<std::string> structure_families();

struct CorpusFormula {
    Signature sig;
    FormulaPtr formula;
};

// The named sentence as a structured AST (pre-prenex form); corpus_formula
// yields its prenex rendering. Names: sink, forest, k_degenerate(k),
// chordal, phi_T, phi_T_eae, symedge, symedge_eae, cover, andor(k), neq_eq,
// p3, henson_phi, henson_psi5.
CorpusFormula corpus_formula_ast(std::string_view name, std::optional<int> param = std::nullopt);
PrenexSentence corpus_formula(std::string_view name, std::optional<int> param = std::nullopt);
std::vector<std::string> corpus_formula_names();

// The six structural properties behind the Henson axiomatization, evaluated
// over witness pairs of directed 3-cycles, plus the directed 3-cycle count.
// items holds the best witness's outcome; all_six says some single witness
// satisfies every item.
struct HensonReport {
    std::array<bool, 6> items{};
    int three_cycle_count = 0;
    bool all_six = false;
    std::optional<std::array<int, 6>> witness;  // s1, s2, s3, t1, t2, t3
};

HensonReport check_henson_properties(const Structure& tournament);

}  // namespace hermc
