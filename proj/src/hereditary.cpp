#include "hermc/hereditary.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <numeric>
#include <sstream>
#include <thread>

#include "hermc/evaluator.hpp"
#include "hermc/syntax.hpp"

namespace hermc {

std::string to_string(TractabilityClass c) {
    switch (c) {
        case TractabilityClass::PTimeCollapse: return "PTimeCollapse";
        case TractabilityClass::PTimeAlg1: return "PTimeAlg1";
        case TractabilityClass::PTimeMonadic: return "PTimeMonadic";
        case TractabilityClass::HardPrefix: return "HardPrefix";
    }
    return "?";
}

std::string to_string(HerMethod m) {
    switch (m) {
        case HerMethod::Collapse: return "collapse";
        case HerMethod::Alg1: return "alg1";
        case HerMethod::Monadic: return "monadic";
        case HerMethod::Bruteforce: return "bruteforce";
    }
    return "?";
}

TractabilityClass classify_prefix(const QuantifierPrefix& q, const Signature& sig) {
    if (sig.is_monadic()) return TractabilityClass::PTimeMonadic;
    if (q.is_forall_exists()) return TractabilityClass::PTimeCollapse;
    if (q.is_forall_exists_forall()) return TractabilityClass::PTimeAlg1;
    return TractabilityClass::HardPrefix;
}

namespace {

Certificate make_counterexample(const Structure& s, const PrenexSentence& p, std::vector<int> subset) {
    Certificate c;
    c.domain_size = s.size();
    c.formula_hash = sentence_hash(p);
    c.cert = CounterexampleCert{std::move(subset)};
    return c;
}

// shared subset scan for the brute-force, collapse and monadic checks
HerVerdict scan_subsets(const Structure& s, const PrenexSentence& p, std::optional<int> bound,
                        HerMethod method) {
    SentenceEvaluator ev(s, p);
    SubsetEnumerator en(s.size(), bound);
    HerVerdict v;
    v.method = method;
    while (auto subset = en.next()) {
        ++v.stats.substructures_examined;
        if (!ev.eval_on(*subset)) {
            v.hereditary = false;
            v.certificate = make_counterexample(s, p, *subset);
            v.stats.eval_calls = ev.eval_calls();
            return v;
        }
    }
    v.hereditary = true;
    v.stats.eval_calls = ev.eval_calls();
    return v;
}

HerVerdict scan_subsets_parallel(const Structure& s, const PrenexSentence& p, int jobs) {
    std::atomic<long> best_idx{LONG_MAX};
    std::vector<std::vector<int>> best_subset(static_cast<size_t>(jobs));
    std::vector<std::thread> threads;
    std::atomic<long> examined{0};
    for (int j = 0; j < jobs; ++j) {
        threads.emplace_back([&, j] {
            SentenceEvaluator ev(s, p);
            SubsetEnumerator en(s.size());
            long idx = 0;
            long local = 0;
            while (auto subset = en.next()) {
                if (idx > best_idx.load(std::memory_order_relaxed)) break;
                if (idx % jobs == j) {
                    ++local;
                    if (!ev.eval_on(*subset)) {
                        long cur = best_idx.load();
                        while (idx < cur && !best_idx.compare_exchange_weak(cur, idx)) {
                        }
                        if (idx <= best_idx.load()) best_subset[j] = *subset;
                        break;
                    }
                }
                ++idx;
            }
            examined += local;
        });
    }
    for (auto& t : threads) t.join();

    HerVerdict v;
    v.method = HerMethod::Bruteforce;
    long idx = best_idx.load();
    if (idx == LONG_MAX) {
        v.hereditary = true;
        v.stats.substructures_examined = examined.load();
        return v;
    }
    // the subset at the globally minimal index wins, independent of scheduling
    SubsetEnumerator en(s.size());
    long i = 0;
    std::vector<int> subset;
    while (auto next = en.next()) {
        if (i++ == idx) {
            subset = *next;
            break;
        }
    }
    v.hereditary = false;
    v.certificate = make_counterexample(s, p, subset);
    v.stats.substructures_examined = idx + 1;
    return v;
}

}  // namespace

HerVerdict her_bruteforce(const Structure& s, const PrenexSentence& p, int jobs) {
    if (jobs > 1 && s.size() > 12) return scan_subsets_parallel(s, p, jobs);
    return scan_subsets(s, p, std::nullopt, HerMethod::Bruteforce);
}

PrenexSentence collapse_rewrite(const PrenexSentence& p) {
    auto shape = p.quantifier_prefix().forall_exists_shape();
    if (!shape) throw PreconditionError("collapse rewrite applies to A*E* sentences only");
    const auto [k, l] = *shape;
    if (l == 0) return p;

    std::vector<std::pair<Quant, std::string>> prefix(p.prefix().begin(), p.prefix().begin() + k);
    FormulaPtr matrix = p.matrix();
    if (k >= 1) {
        for (int j = 0; j < l; ++j) {
            const std::string& y = p.prefix()[static_cast<size_t>(k) + j].second;
            std::vector<FormulaPtr> cases;
            for (int i = 0; i < k; ++i) cases.push_back(substitute_var(matrix, y, p.prefix()[i].second));
            matrix = f_or(std::move(cases));
        }
    } else {
        // no universal variables to collapse onto: route every existential
        // variable through one fresh universal variable, equivalent to
        // checking all one-element substructures
        std::set<std::string> used = all_vars(p.matrix());
        std::string u;
        for (int i = 1;; ++i) {
            u = "z" + std::to_string(i);
            if (!used.count(u)) break;
        }
        for (int j = 0; j < l; ++j) matrix = substitute_var(matrix, p.prefix()[j].second, u);
        prefix.emplace_back(Quant::Forall, u);
    }
    return PrenexSentence(p.signature(), std::move(prefix), std::move(matrix));
}

HerVerdict collapse_check(const Structure& s, const PrenexSentence& p) {
    auto shape = p.quantifier_prefix().forall_exists_shape();
    if (!shape) throw PreconditionError("collapse check applies to A*E* sentences only");
    return scan_subsets(s, p, std::max(shape->first, 1), HerMethod::Collapse);
}

HerVerdict monadic_check(const Structure& s, const PrenexSentence& p) {
    if (!p.signature().is_monadic())
        throw PreconditionError("monadic check requires a monadic signature");
    int syms = static_cast<int>(p.signature().symbols().size());
    int bound = syms >= 30 ? s.size() : std::min(s.size(), 1 << syms);
    return scan_subsets(s, p, bound, HerMethod::Monadic);
}

SnpSentence build_snp(const PrenexSentence& p) {
    auto shape = p.quantifier_prefix().forall_exists_forall_shape();
    if (!shape) throw PreconditionError("the guessed-order sentence applies to A^k E A^m only");
    const auto [k, m] = *shape;
    const int n = k + m;

    std::set<std::string> used;
    for (const auto& [q, v] : p.prefix()) used.insert(v);
    auto fresh = [&](std::string base) {
        std::string name = base;
        while (used.count(name)) name += "_";
        used.insert(name);
        return name;
    };

    SnpSentence out;
    out.guess_name = "L";
    while (p.signature().contains(out.guess_name)) out.guess_name += "_";
    out.guess_arity = k + 2;
    out.extended_sig = merge_signatures(p.signature(), Signature({{out.guess_name, out.guess_arity}}));

    std::vector<std::string> params;
    for (int i = 0; i < k; ++i) params.push_back(p.prefix()[i].second);
    const std::string& y = p.prefix()[k].second;
    std::string o1 = fresh("o1"), o2 = fresh("o2"), o3 = fresh("o3");

    auto L = [&](const std::string& a, const std::string& b) {
        std::vector<std::string> args = params;
        args.push_back(a);
        args.push_back(b);
        return f_rel(out.guess_name, std::move(args));
    };

    std::vector<FormulaPtr> clauses;
    clauses.push_back(L(o1, o1));                                                   // reflexive
    clauses.push_back(f_or({L(o1, o2), L(o2, o1)}));                                // total
    clauses.push_back(f_or({f_not(L(o1, o2)), f_not(L(o2, o1)), f_eq(o1, o2)}));    // antisymmetric
    clauses.push_back(f_or({f_not(L(o1, o2)), f_not(L(o2, o3)), L(o1, o3)}));       // transitive

    std::vector<FormulaPtr> guard;
    for (int i = 0; i < n; ++i) {
        const std::string& xi = p.prefix()[i < k ? i : i + 1].second;
        guard.push_back(L(y, xi));
    }
    clauses.push_back(f_implies(f_and(std::move(guard)), p.matrix()));
    out.matrix = f_and(std::move(clauses));

    out.prefix = p.prefix();
    for (auto& [q, v] : out.prefix) q = Quant::Forall;
    out.prefix.emplace_back(Quant::Forall, o1);
    out.prefix.emplace_back(Quant::Forall, o2);
    out.prefix.emplace_back(Quant::Forall, o3);
    return out;
}

std::string print_snp(const SnpSentence& s) {
    std::ostringstream out;
    out << "exists " << s.guess_name << "/" << s.guess_arity << ". forall ";
    for (size_t i = 0; i < s.prefix.size(); ++i) {
        if (i) out << ",";
        out << s.prefix[i].second;
    }
    out << ". " << print_formula(s.matrix);
    return out.str();
}

HerVerdict algorithm1(const Structure& s, const PrenexSentence& p) {
    auto shape = p.quantifier_prefix().forall_exists_forall_shape();
    if (!shape) throw PreconditionError("the certifying algorithm applies to A^k E A^m sentences only");
    const auto [k, m] = *shape;
    const int n = s.size();

    std::vector<std::string> vars;
    for (const auto& [q, v] : p.prefix()) vars.push_back(v);
    MatrixEvaluator matrix(s, p.matrix(), vars);
    HerVerdict verdict;
    verdict.method = HerMethod::Alg1;

    std::vector<int> values(static_cast<size_t>(k) + 1 + static_cast<size_t>(m), 0);
    // forall tail in rest^m . matrix(abar, y, tail)
    auto witness_ok = [&](const std::vector<int>& rest) {
        ++verdict.stats.eval_calls;
        if (m == 0) return matrix.eval(values);
        std::vector<size_t> tail(static_cast<size_t>(m), 0);
        while (true) {
            for (int j = 0; j < m; ++j) values[k + 1 + j] = rest[tail[j]];
            if (!matrix.eval(values)) return false;
            int j = m - 1;
            while (j >= 0 && tail[j] + 1 == rest.size()) tail[j--] = 0;
            if (j < 0) return true;
            ++tail[j];
        }
    };

    OrderCert cert;
    cert.params = k;
    std::vector<int> abar(static_cast<size_t>(k), 1);
    while (true) {
        for (int i = 0; i < k; ++i) values[i] = abar[i];

        std::vector<char> in_order(static_cast<size_t>(n) + 1, 0);
        std::vector<int> order;
        while (true) {
            std::vector<int> rest;
            for (int v = 1; v <= n; ++v)
                if (!in_order[v]) rest.push_back(v);

            int witness = 0;
            for (int y : rest) {
                values[k] = y;
                if (witness_ok(rest)) {
                    witness = y;
                    break;
                }
            }
            if (witness == 0) {
                // rest contains every coordinate of abar and falsifies the sentence
                verdict.hereditary = false;
                verdict.certificate = make_counterexample(s, p, rest);
                verdict.stats.substructures_examined++;
                return verdict;
            }
            order.push_back(witness);
            in_order[witness] = 1;
            verdict.stats.substructures_examined++;
            bool hits_param = false;
            for (int i = 0; i < k; ++i)
                if (abar[i] == witness) hits_param = true;
            if (hits_param || static_cast<int>(order.size()) == n) break;
        }
        for (int v = 1; v <= n; ++v)
            if (!in_order[v]) order.push_back(v);
        cert.orders.emplace(abar, std::move(order));
        verdict.stats.orders_built++;

        int i = k - 1;
        while (i >= 0 && abar[i] == n) abar[i--] = 1;
        if (i < 0) break;
        ++abar[i];
    }

    verdict.hereditary = true;
    Certificate c;
    c.domain_size = n;
    c.formula_hash = sentence_hash(p);
    c.cert = std::move(cert);
    verdict.certificate = std::move(c);
    return verdict;
}

HerVerdict her_check(const Structure& s, const PrenexSentence& p, const HerOptions& options) {
    switch (classify_prefix(p.quantifier_prefix(), p.signature())) {
        case TractabilityClass::PTimeMonadic:
            return monadic_check(s, p);
        case TractabilityClass::PTimeCollapse:
            return collapse_check(s, p);
        case TractabilityClass::PTimeAlg1:
            return algorithm1(s, p);
        case TractabilityClass::HardPrefix: {
            if (s.size() > options.max_bruteforce && !options.force)
                throw ScaleError("hard quantifier prefix: refusing brute force on " +
                                 std::to_string(s.size()) + " elements (cap " +
                                 std::to_string(options.max_bruteforce) + "); raise the cap to force");
            HerVerdict v = her_bruteforce(s, p, options.jobs);
            v.stats.exponential_fallback = true;
            return v;
        }
    }
    throw Error("internal: unreachable dispatcher case");
}

}  // namespace hermc
