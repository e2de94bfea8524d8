#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hermc/formula.hpp"
#include "hermc/structure.hpp"

namespace hermc {

// A subset whose induced substructure falsifies the sentence.
struct CounterexampleCert {
    std::vector<int> subset;  // sorted
};

// Parameterized linear orders: one permutation of the domain (least element
// first) per k-tuple of parameters. b <=_params c iff b precedes c.
struct OrderCert {
    int params = 0;
    std::map<std::vector<int>, std::vector<int>> orders;
};

struct Certificate {
    int domain_size = 0;
    std::string formula_hash;
    std::variant<CounterexampleCert, OrderCert> cert;

    bool is_counterexample() const { return std::holds_alternative<CounterexampleCert>(cert); }
    const CounterexampleCert& counterexample() const { return std::get<CounterexampleCert>(cert); }
    const OrderCert& order() const { return std::get<OrderCert>(cert); }
};

// Stable 64-bit FNV-1a over the printed sentence and its signature; stored in
// certificate files so a certificate cannot verify against the wrong sentence.
std::string sentence_hash(const PrenexSentence& p);

std::string serialize_certificate(const Certificate& c);
Certificate parse_certificate(std::string_view json_text);

// Checks the first-order part of the guessed-order sentence: every slice is a
// reflexive total order and whenever b precedes all of a_1..a_k, x_1..x_m in
// the slice at (a_1..a_k), the matrix holds at (a_bar, b, x_bar).
bool verify_order_certificate(const Structure& s, const PrenexSentence& p, const OrderCert& c);

// True iff the induced substructure on the subset falsifies p.
bool verify_counterexample(const Structure& s, const PrenexSentence& p, const std::vector<int>& subset);

// Dispatch on certificate type; also checks domain size and formula hash.
bool verify_certificate(const Structure& s, const PrenexSentence& p, const Certificate& c);

}  // namespace hermc
