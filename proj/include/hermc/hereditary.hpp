#pragma once

#include <optional>
#include <string>

#include "hermc/certificates.hpp"
#include "hermc/formula.hpp"
#include "hermc/structure.hpp"

namespace hermc {

// The quantifier-prefix dichotomy. PTimeCollapse and PTimeAlg1 overlap on
// A*E and A*; classification prefers the collapse route. Prefixes outside
// both shapes (over a non-monadic signature) contain EEA or EAE as a
// subsequence and admit coNP-complete hereditary problems.
enum class TractabilityClass { PTimeCollapse, PTimeAlg1, PTimeMonadic, HardPrefix };

std::string to_string(TractabilityClass c);

TractabilityClass classify_prefix(const QuantifierPrefix& q, const Signature& sig);

enum class HerMethod { Collapse, Alg1, Monadic, Bruteforce };
std::string to_string(HerMethod m);

struct HerStats {
    long substructures_examined = 0;
    long orders_built = 0;
    long eval_calls = 0;
    bool exponential_fallback = false;
};

struct HerVerdict {
    bool hereditary = false;
    std::optional<Certificate> certificate;  // counterexample when not hereditary,
                                             // order expansion from the certifying algorithm
    HerMethod method = HerMethod::Bruteforce;
    HerStats stats;
};

struct HerOptions {
    int max_bruteforce = 22;  // HERMC_MAX_BRUTE overrides in the CLI
    bool force = false;
    int jobs = 1;
};

// Exponential oracle: walks all non-empty subsets in increasing size and
// lexicographic order, so a failing verdict carries the minimum-size,
// lexicographically least counterexample.
HerVerdict her_bruteforce(const Structure& s, const PrenexSentence& p, int jobs = 1);

// A^k E^l sentence rewritten to a universal sentence: each existential
// variable becomes a disjunction over the universal ones. A structure
// satisfies the rewrite iff it hereditarily satisfies the input. For k = 0
// the existential variables collapse onto a single fresh universal variable,
// which matches hereditary satisfaction restricted to one-element
// substructures.
PrenexSentence collapse_rewrite(const PrenexSentence& p);

// Hereditary check for A^k E^l sentences: evaluate on every substructure
// with at most max(k, 1) elements.
HerVerdict collapse_check(const Structure& s, const PrenexSentence& p);

// Hereditary check over a monadic signature: evaluate on every substructure
// with at most 2^|tau| elements.
HerVerdict monadic_check(const Structure& s, const PrenexSentence& p);

// The guessed-order sentence for an A^k E A^m input: an existential (k+2)-ary
// relation L whose binary slices are reflexive total orders, with the matrix
// guarded by "y lies below x_1..x_n in the slice at (x_1..x_k)". The order
// axioms use three extra universal variables so the matrix stays
// quantifier-free.
struct SnpSentence {
    std::string guess_name;  // "L"
    int guess_arity = 0;     // k + 2
    Signature extended_sig;
    std::vector<std::pair<Quant, std::string>> prefix;  // all universal
    FormulaPtr matrix;
};

SnpSentence build_snp(const PrenexSentence& p);
std::string print_snp(const SnpSentence& s);

// Certifying hereditary check for A^k E A^m sentences. Either returns a
// substructure falsifying the sentence, or builds, for every parameter
// tuple, the order of greedy witnesses (least-index witness first, ties to
// the remaining elements by index) whose induced L passes
// verify_order_certificate.
HerVerdict algorithm1(const Structure& s, const PrenexSentence& p);

// Dispatcher: monadic signatures to monadic_check, A*E* to collapse_check,
// A*EA* to algorithm1, everything else to the exponential fallback (capped
// by options unless forced).
HerVerdict her_check(const Structure& s, const PrenexSentence& p, const HerOptions& options = {});

}  // namespace hermc
