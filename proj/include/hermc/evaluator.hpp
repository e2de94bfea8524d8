#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hermc/formula.hpp"
#include "hermc/structure.hpp"

namespace hermc {

// Tarskian truth with short-circuit quantifier search: exists stops at the
// first witness, forall at the first counterexample, in ascending domain
// order. Works on arbitrary formulas; quantifiers are evaluated where they
// sit in the AST.
bool eval_fo(const Structure& s, const FormulaPtr& f, const std::map<std::string, int>& assignment = {});
bool eval_fo(const Structure& s, const PrenexSentence& p);

// A sentence compiled against one structure for repeated evaluation on
// induced substructures, passed as sorted element subsets of the domain.
class SentenceEvaluator {
public:
    SentenceEvaluator(const Structure& s, FormulaPtr sentence);
    SentenceEvaluator(const Structure& s, const PrenexSentence& p);
    // free variables are read from the assignment; missing ones are an error
    SentenceEvaluator(const Structure& s, const FormulaPtr& f,
                      const std::map<std::string, int>& assignment);

    bool eval_full();
    bool eval_on(std::span<const int> subset);
    long eval_calls() const { return calls_; }

private:
    friend class MatrixEvaluator;
    struct Node {
        Formula::Kind kind;
        bool truth = false;
        int rel = -1;
        int arity = 0;
        std::vector<int> slots;
        std::vector<int> kids;
        Quant quant = Quant::Exists;
        int qslot = -1;
    };

    SentenceEvaluator(const Structure& s);  // shared setup
    int compile(const FormulaPtr& f, std::map<std::string, int>& slot_of);
    bool eval_node(int id, std::span<const int> domain);

    const Structure* s_;
    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<int> env_;
    std::vector<int> full_domain_;
    long calls_ = 0;
};

// A quantifier-free formula compiled with an explicit variable order; used by
// the certifying algorithm and the certificate verifier, where the quantifier
// loops live in the caller.
class MatrixEvaluator {
public:
    MatrixEvaluator(const Structure& s, const FormulaPtr& matrix, const std::vector<std::string>& vars);
    bool eval(std::span<const int> values);

private:
    SentenceEvaluator inner_;
    size_t nvars_;
};

// Relation-preserving map from a to b, if any; with injective_embedding the
// map must additionally be injective and reflect relations (strong
// substructure embedding). Backtracking in ascending element order, so the
// returned map is deterministic. result[i] is the image of element i+1.
std::optional<std::vector<int>> find_homomorphism(const Structure& a, const Structure& b,
                                                  bool injective_embedding = false);

// Brute-force oracle: true iff every directed cycle of the digraph contains
// vertices d_i, d_j (possibly equal) joined by edges in both directions.
// Searches simple cycles with symmetric-pair pruning; exponential worst case.
bool every_cycle_has_symmetric_edge(const Structure& digraph);

}  // namespace hermc
