#include "hermc/reductions.hpp"

#include <sstream>

namespace hermc {

CnfInstance parse_dimacs(std::string_view text, DimacsStats* stats) {
    std::istringstream in{std::string(text)};
    std::string line;
    CnfInstance cnf;
    int declared_clauses = -1;
    int padded = 0;
    std::vector<int> current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") continue;
        if (first == "%") break;  // common end marker
        if (first == "p") {
            if (declared_clauses >= 0) throw ParseError("duplicate DIMACS header", lineno, 1);
            std::string fmt;
            if (!(ls >> fmt) || fmt != "cnf") throw ParseError("malformed DIMACS header", lineno, 1);
            if (!(ls >> cnf.num_vars >> declared_clauses) || cnf.num_vars < 1 || declared_clauses < 1)
                throw ParseError("malformed DIMACS header", lineno, 1);
            continue;
        }
        if (declared_clauses < 0) throw ParseError("clause before DIMACS header", lineno, 1);
        ls.clear();
        ls.seekg(0);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.empty()) throw ParseError("empty clause", lineno, 1);
                if (current.size() < 3) ++padded;
                while (current.size() < 3) current.push_back(current.back());
                cnf.clauses.push_back({current[0], current[1], current[2]});
                current.clear();
            } else {
                int var = lit > 0 ? lit : -lit;
                if (var > cnf.num_vars)
                    throw ParseError("literal exceeds declared variable count", lineno, 1);
                if (current.size() >= 3) throw ParseError("clause longer than 3 literals", lineno, 1);
                current.push_back(lit);
            }
        }
        if (!ls.eof()) throw ParseError("malformed clause line", lineno, 1);
    }
    if (!current.empty()) throw ParseError("unterminated clause (missing 0)", lineno, 1);
    if (declared_clauses < 0) throw ParseError("missing DIMACS header", lineno, 1);
    if (static_cast<int>(cnf.clauses.size()) != declared_clauses)
        throw ParseError("clause count does not match the header", lineno, 1);
    if (stats) stats->padded_clauses = padded;
    return cnf;
}

bool sat_bruteforce(const CnfInstance& c) {
    if (c.num_vars > 24) throw ScaleError("SAT brute force supports at most 24 variables");
    if (c.clauses.empty()) throw PreconditionError("CNF instance needs at least one clause");
    const std::uint32_t top = 1u << c.num_vars;
    for (std::uint32_t assign = 0; assign < top; ++assign) {
        bool ok = true;
        for (const auto& cl : c.clauses) {
            bool sat = false;
            for (int lit : cl) {
                int var = lit > 0 ? lit : -lit;
                bool val = (assign >> (var - 1)) & 1;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

namespace {

bool complementary(int a, int b) { return a == -b; }

}  // namespace

Structure reduce_to_forbtd(const CnfInstance& c) {
    const int m = static_cast<int>(c.clauses.size());
    if (m < 2)
        throw PreconditionError("reduction needs at least 2 clauses (duplicate the clause to lift m=1)");
    const int n = 3 * m;
    auto lit = [&](int v) { return c.clauses[(v - 1) / 3][(v - 1) % 3]; };

    std::vector<Tuple> blue, red;
    for (int i = 0; i < m; ++i) {
        int next = (i + 1) % m;
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) blue.push_back({i * 3 + j, next * 3 + k});
    }
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v)
            if (u != v && !complementary(lit(u), lit(v))) red.push_back({u, v});

    return Structure(Signature({{"E_b", 2}, {"E_r", 2}}), n, {{"E_b", std::move(blue)}, {"E_r", std::move(red)}});
}

Structure reduce_to_symcycle(const CnfInstance& c) {
    const int m = static_cast<int>(c.clauses.size());
    if (m < 1) throw PreconditionError("reduction needs at least 1 clause");
    const int n = 3 * m + 2;
    const int s = 3 * m + 1, t = 3 * m + 2;
    auto lit = [&](int v) { return c.clauses[(v - 1) / 3][(v - 1) % 3]; };

    std::vector<Tuple> edges;
    for (int k = 1; k <= 3; ++k) edges.push_back({s, k});
    for (int i = 0; i + 1 < m; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) edges.push_back({i * 3 + j, (i + 1) * 3 + k});
    for (int j = 1; j <= 3; ++j) edges.push_back({(m - 1) * 3 + j, t});
    edges.push_back({t, s});
    for (int u = 1; u <= 3 * m; ++u)
        for (int v = 1; v <= 3 * m; ++v)
            if (u != v && complementary(lit(u), lit(v))) edges.push_back({u, v});

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(edges.size());
    for (const Tuple& e : edges) pairs.emplace_back(e[0], e[1]);
    return Structure::digraph(n, pairs);
}

}  // namespace hermc
