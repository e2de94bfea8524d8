#pragma once

#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hermc/structure.hpp"

namespace hermc {

enum class Quant { Exists, Forall };

inline Quant dual(Quant q) { return q == Quant::Exists ? Quant::Forall : Quant::Exists; }

// A word over {E, A} (E = exists, A = forall).
struct QuantifierPrefix {
    std::vector<Quant> word;

    QuantifierPrefix() = default;
    explicit QuantifierPrefix(std::vector<Quant> w) : word(std::move(w)) {}

    static QuantifierPrefix parse(std::string_view text);  // "EEA", case-insensitive
    std::string str() const;

    size_t length() const { return word.size(); }

    bool is_forall_exists() const;         // matches A*E*
    bool is_forall_exists_forall() const;  // matches A*EA*
    bool has_subsequence(std::initializer_list<Quant> pattern) const;

    // (k, l) for a word A^k E^l, or (k, m) for A^k E A^m
    std::optional<std::pair<int, int>> forall_exists_shape() const;
    std::optional<std::pair<int, int>> forall_exists_forall_shape() const;

    bool operator==(const QuantifierPrefix& o) const { return word == o.word; }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable first-order formula AST. Equality atoms are logical identity on
// the domain, not signature relations.
class Formula {
public:
    enum class Kind { Truth, Rel, Eq, Not, And, Or, Implies, Quantified };

    Kind kind;
    bool truth = false;              // Truth
    std::string rel;                 // Rel
    std::vector<std::string> vars;   // Rel arguments; Eq uses vars[0], vars[1]
    std::vector<FormulaPtr> kids;    // Not: 1, And/Or: >= 2, Implies: 2, Quantified: 1
    Quant quant = Quant::Exists;     // Quantified
    std::string qvar;                // Quantified

    explicit Formula(Kind k) : kind(k) {}
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_rel(std::string name, std::vector<std::string> args);
FormulaPtr f_eq(std::string a, std::string b);
FormulaPtr f_neq(std::string a, std::string b);  // ~(a = b)
FormulaPtr f_not(FormulaPtr x);
FormulaPtr f_and(std::vector<FormulaPtr> kids);  // empty -> true, singleton -> the kid
FormulaPtr f_or(std::vector<FormulaPtr> kids);   // empty -> false, singleton -> the kid
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_quant(Quant q, std::string var, FormulaPtr body);
FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr body);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> all_vars(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);

// Capture-avoiding only for quantifier-free replacement targets; callers
// rename apart first when substituting under binders.
FormulaPtr substitute_var(const FormulaPtr& f, const std::string& from, const std::string& to);

// Checks relation atoms against the signature (unknown symbol, arity mismatch).
void check_signature(const FormulaPtr& f, const Signature& sig);

// A prenex sentence: quantifier prefix plus quantifier-free matrix, no free
// variables.
class PrenexSentence {
public:
    PrenexSentence(Signature sig, std::vector<std::pair<Quant, std::string>> prefix, FormulaPtr matrix);

    const Signature& signature() const { return sig_; }
    const std::vector<std::pair<Quant, std::string>>& prefix() const { return prefix_; }
    const FormulaPtr& matrix() const { return matrix_; }

    QuantifierPrefix quantifier_prefix() const;
    FormulaPtr as_formula() const;  // quantifiers re-attached

private:
    Signature sig_;
    std::vector<std::pair<Quant, std::string>> prefix_;
    FormulaPtr matrix_;
};

// ~p in prenex form: dual prefix, negated matrix.
PrenexSentence negate(const PrenexSentence& p);

}  // namespace hermc
