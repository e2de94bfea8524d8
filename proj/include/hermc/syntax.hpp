#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hermc/formula.hpp"
#include "hermc/structure.hpp"

namespace hermc {

// ASCII formula grammar with C-style precedence: ->  <  |  <  &  <  ~,
// quantifier bodies extend maximally to the right. Degree macros
// "deg_R(x) = k" / "deg_R(x) != k" expand to quantified first-order form
// during parsing (see docs/formats.md for the EBNF).
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

std::string print_formula(const FormulaPtr& f);
std::string print_formula(const PrenexSentence& p);

// Structure file format:
//   signature E_b/2, E_r/2
//   domain 3
//   E_b 1 2
// with '#' comments.
Structure parse_structure(std::string_view text);
std::string print_structure(const Structure& s, const std::vector<std::string>& header_comments = {});

// Formula file: optional "sig NAME/ARITY,..." header line, then one sentence.
// The signature may instead be supplied by the caller; a header line wins
// only when the caller gives none, a conflict between the two is an error.
struct FormulaFile {
    Signature sig;
    FormulaPtr formula;
};
FormulaFile parse_formula_file(std::string_view text, std::optional<Signature> sig = std::nullopt);
std::string print_formula_file(const Signature& sig, const FormulaPtr& f);

// Equivalent prenex form: implications eliminated, bound variables renamed
// apart to v1, v2, ... in prefix order, quantifiers pulled left-to-right.
PrenexSentence to_prenex(const FormulaPtr& f, const Signature& sig);
PrenexSentence to_prenex(const PrenexSentence& p);

QuantifierPrefix extract_prefix(const PrenexSentence& p);

// A formula with exactly one designated free variable.
class GuardFormula {
public:
    GuardFormula(FormulaPtr formula, std::string var, Signature sig);
    const FormulaPtr& formula() const { return formula_; }
    const std::string& var() const { return var_; }
    const Signature& signature() const { return sig_; }
    bool quantifier_free() const { return is_quantifier_free(formula_); }
    FormulaPtr applied_to(const std::string& v) const;  // guard with the free variable renamed to v

private:
    FormulaPtr formula_;
    std::string var_;
    Signature sig_;
};

// Relativization of a sentence to the elements satisfying the guard. The
// quantifier prefix is preserved whenever the input contains a universal
// quantifier and the guard is quantifier-free; an all-existential input
// produces the  forall y. ~guard(y) | exists ... (...)  form.
PrenexSentence relativize(const PrenexSentence& p, const GuardFormula& guard);

// chi = (~phi)_U | psi_{~U}, prenexed. U is a fresh unary symbol, and psi is
// a digraph sentence over {E}; neither U nor E may occur in phi's signature.
PrenexSentence build_chi(const PrenexSentence& phi, const PrenexSentence& psi);

// Prenexes a disjunction of two sentences over the same signature: heads that
// are both existential are merged into one variable, all other quantifiers are
// pulled left-first. Exposed because build_chi and tests want it directly.
PrenexSentence prenex_or(const PrenexSentence& a, const PrenexSentence& b);

}  // namespace hermc
