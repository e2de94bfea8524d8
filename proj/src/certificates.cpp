#include "hermc/certificates.hpp"

#include <algorithm>
#include <cstdint>

#include <json.hpp>

#include "hermc/evaluator.hpp"
#include "hermc/syntax.hpp"

namespace hermc {

std::string sentence_hash(const PrenexSentence& p) {
    std::string text = p.signature().str() + "\n" + print_formula(p);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string serialize_certificate(const Certificate& c) {
    nlohmann::json j;
    j["domain_size"] = c.domain_size;
    j["formula_hash"] = c.formula_hash;
    if (c.is_counterexample()) {
        j["type"] = "counterexample";
        j["subset"] = c.counterexample().subset;
    } else {
        const OrderCert& oc = c.order();
        j["type"] = "order";
        j["k"] = oc.params;
        nlohmann::json orders = nlohmann::json::array();
        for (const auto& [params, perm] : oc.orders)
            orders.push_back({{"params", params}, {"perm", perm}});
        j["orders"] = std::move(orders);
    }
    return j.dump(2) + "\n";
}

Certificate parse_certificate(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad certificate JSON: ") + e.what(), 1, 1);
    }
    try {
        Certificate c;
        c.domain_size = j.at("domain_size").get<int>();
        c.formula_hash = j.at("formula_hash").get<std::string>();
        std::string type = j.at("type").get<std::string>();
        if (type == "counterexample") {
            CounterexampleCert cc;
            cc.subset = j.at("subset").get<std::vector<int>>();
            std::sort(cc.subset.begin(), cc.subset.end());
            if (cc.subset.empty()) throw Error("counterexample certificate with empty subset");
            c.cert = std::move(cc);
        } else if (type == "order") {
            OrderCert oc;
            oc.params = j.at("k").get<int>();
            for (const auto& entry : j.at("orders")) {
                auto params = entry.at("params").get<std::vector<int>>();
                auto perm = entry.at("perm").get<std::vector<int>>();
                if (!oc.orders.emplace(std::move(params), std::move(perm)).second)
                    throw Error("duplicate parameter tuple in order certificate");
            }
            c.cert = std::move(oc);
        } else {
            throw Error("unknown certificate type: " + type);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad certificate fields: ") + e.what(), 1, 1);
    }
}

namespace {

// all k-tuples present, every order a permutation of 1..n
void validate_order_cert(const OrderCert& c, int n) {
    if (c.params < 0) throw PreconditionError("order certificate with negative parameter count");
    std::uint64_t expected = 1;
    for (int i = 0; i < c.params; ++i) {
        expected *= static_cast<std::uint64_t>(n);
        if (expected > (1u << 26)) throw ScaleError("order certificate too large to verify");
    }
    if (c.orders.size() != expected)
        throw PreconditionError("order certificate must list every parameter tuple exactly once");
    for (const auto& [params, perm] : c.orders) {
        if (static_cast<int>(params.size()) != c.params)
            throw PreconditionError("parameter tuple of wrong length in order certificate");
        for (int v : params)
            if (v < 1 || v > n) throw PreconditionError("parameter out of domain range");
        if (static_cast<int>(perm.size()) != n)
            throw PreconditionError("order is not a permutation of the domain");
        std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
        for (int v : perm) {
            if (v < 1 || v > n || seen[v])
                throw PreconditionError("order is not a permutation of the domain");
            seen[v] = true;
        }
    }
}

}  // namespace

bool verify_order_certificate(const Structure& s, const PrenexSentence& p, const OrderCert& c) {
    auto shape = p.quantifier_prefix().forall_exists_forall_shape();
    if (!shape) throw PreconditionError("order certificates apply to A^k E A^m sentences only");
    const auto [k, m] = *shape;
    if (k != c.params)
        throw PreconditionError("certificate parameter count does not match the sentence");
    const int n = s.size();
    validate_order_cert(c, n);

    std::vector<std::string> vars;
    for (const auto& [q, v] : p.prefix()) vars.push_back(v);
    MatrixEvaluator matrix(s, p.matrix(), vars);

    std::vector<int> rank(static_cast<size_t>(n) + 1, 0);
    std::vector<int> values(static_cast<size_t>(k) + 1 + static_cast<size_t>(m), 0);
    for (const auto& [params, perm] : c.orders) {
        for (int i = 0; i < n; ++i) rank[perm[i]] = i;
        std::copy(params.begin(), params.end(), values.begin());
        for (int b = 1; b <= n; ++b) {
            bool below_params = true;
            for (int a : params)
                if (rank[b] > rank[a]) {
                    below_params = false;
                    break;
                }
            if (!below_params) continue;
            values[k] = b;
            // enumerate the trailing universal tuple; guard requires b below each
            std::vector<int> tail(static_cast<size_t>(m), 1);
            while (true) {
                bool guarded = true;
                for (int x : tail)
                    if (rank[b] > rank[x]) {
                        guarded = false;
                        break;
                    }
                if (guarded) {
                    for (int j = 0; j < m; ++j) values[k + 1 + j] = tail[j];
                    if (!matrix.eval(values)) return false;
                }
                int i = m - 1;
                while (i >= 0 && tail[i] == n) tail[i--] = 1;
                if (i < 0) break;
                ++tail[i];
            }
        }
    }
    return true;
}

bool verify_counterexample(const Structure& s, const PrenexSentence& p, const std::vector<int>& subset) {
    return !eval_fo(induced_substructure(s, subset), p);
}

bool verify_certificate(const Structure& s, const PrenexSentence& p, const Certificate& c) {
    if (c.domain_size != s.size()) return false;
    if (c.formula_hash != sentence_hash(p)) return false;
    if (c.is_counterexample()) return verify_counterexample(s, p, c.counterexample().subset);
    return verify_order_certificate(s, p, c.order());
}

}  // namespace hermc
