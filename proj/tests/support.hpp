#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "hermc/structure.hpp"

namespace testsupport {

using hermc::Structure;
using hermc::Tuple;

// every digraph on exactly n labeled vertices; loopless skips self-edges
inline void for_each_digraph(int n, bool loopless, const std::function<void(const Structure&)>& fn) {
    std::vector<std::pair<int, int>> slots;
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v)
            if (!(loopless && u == v)) slots.emplace_back(u, v);
    const std::uint64_t top = 1ull << slots.size();
    for (std::uint64_t mask = 0; mask < top; ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) edges.push_back(slots[i]);
        fn(Structure::digraph(n, edges));
    }
}

inline void for_each_digraph_upto(int n, bool loopless, const std::function<void(const Structure&)>& fn) {
    for (int k = 1; k <= n; ++k) for_each_digraph(k, loopless, fn);
}

// digraph expanded with a unary predicate U, over all 2^n interpretations
inline void for_each_digraph_with_unary(int n, const std::function<void(const Structure&)>& fn) {
    hermc::Signature sig({{"E", 2}, {"U", 1}});
    std::vector<std::pair<int, int>> slots;
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) slots.emplace_back(u, v);
    const std::uint64_t top = 1ull << slots.size();
    for (std::uint64_t mask = 0; mask < top; ++mask) {
        std::vector<Tuple> edges;
        for (size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) edges.push_back({slots[i].first, slots[i].second});
        for (std::uint64_t umask = 0; umask < (1ull << n); ++umask) {
            std::vector<Tuple> us;
            for (int v = 1; v <= n; ++v)
                if (umask >> (v - 1) & 1) us.push_back({v});
            fn(Structure(sig, n, {{"E", edges}, {"U", us}}));
        }
    }
}

inline Structure random_digraph(std::mt19937_64& rng, int n, double p, bool loopless = true) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) {
            if (loopless && u == v) continue;
            if ((rng() >> 11) * 0x1.0p-53 < p) edges.emplace_back(u, v);
        }
    return Structure::digraph(n, edges);
}

// brute-force isomorphism test for small structures
inline bool isomorphic(const Structure& a, const Structure& b) {
    if (a.signature() != b.signature() || a.size() != b.size()) return false;
    const int n = a.size();
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    do {
        bool ok = true;
        for (const auto& [name, ar] : a.signature().symbols()) {
            if (a.tuples(name).size() != b.tuples(name).size()) return false;
            for (const Tuple& t : a.tuples(name)) {
                Tuple im(t.size());
                for (size_t i = 0; i < t.size(); ++i) im[i] = perm[t[i] - 1];
                if (!b.contains(name, im)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace testsupport
