#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hermc/errors.hpp"

namespace hermc {

// A finite relational signature: relation names with positive arities.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<std::pair<std::string, int>> symbols);

    static Signature digraph();  // {E/2}

    // Parses "E_b/2,E_r/2" (spaces allowed around separators).
    static Signature parse(std::string_view text);

    std::string str() const;

    bool contains(std::string_view name) const;
    int arity(std::string_view name) const;  // throws on unknown name
    bool is_monadic() const;
    const std::vector<std::pair<std::string, int>>& symbols() const { return symbols_; }

    bool operator==(const Signature& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const Signature& other) const { return !(*this == other); }

private:
    std::vector<std::pair<std::string, int>> symbols_;  // sorted by name
};

// Union of two signatures; throws on arity conflicts.
Signature merge_signatures(const Signature& a, const Signature& b);

using Tuple = std::vector<int>;

// A finite relational structure with domain {1..n}. Immutable after construction.
//
// Tuple sets are kept sorted for canonical equality; membership queries go
// through per-relation bitset rows (arity <= 2) or packed-key hashing, so the
// evaluator can test atoms in O(1) inside quantifier loops.
class Structure {
public:
    Structure(Signature sig, int size, std::map<std::string, std::vector<Tuple>> relations);

    static Structure digraph(int n, const std::vector<std::pair<int, int>>& edges);

    const Signature& signature() const { return sig_; }
    int size() const { return size_; }

    const std::vector<Tuple>& tuples(std::string_view rel) const;
    bool contains(std::string_view rel, std::span<const int> tuple) const;

    // Dense indices for the evaluator; relations are numbered in signature order.
    int relation_count() const { return static_cast<int>(rels_.size()); }
    int relation_index(std::string_view rel) const;  // throws on unknown name
    const std::string& relation_name(int idx) const { return rels_[idx].name; }
    int relation_arity(int idx) const { return rels_[idx].arity; }
    bool contains(int rel_idx, std::span<const int> tuple) const;

    // Fast path for binary atoms.
    bool contains2(int rel_idx, int a, int b) const {
        const Rel& r = rels_[rel_idx];
        return (r.rows[static_cast<size_t>(a - 1) * r.row_words + static_cast<size_t>((b - 1) >> 6)] >>
                ((b - 1) & 63)) &
               1u;
    }
    bool contains1(int rel_idx, int a) const {
        const Rel& r = rels_[rel_idx];
        return (r.rows[static_cast<size_t>((a - 1) >> 6)] >> ((a - 1) & 63)) & 1u;
    }

    bool operator==(const Structure& other) const;
    bool operator!=(const Structure& other) const { return !(*this == other); }

private:
    struct Rel {
        std::string name;
        int arity = 0;
        std::vector<Tuple> tuples;        // sorted, unique
        std::vector<std::uint64_t> rows;  // arity 1: one row; arity 2: n rows
        size_t row_words = 0;
        std::vector<std::uint64_t> packed;  // arity >= 3, sorted keys (when packable)
        bool packable = false;
    };

    Signature sig_;
    int size_ = 0;
    std::vector<Rel> rels_;
};

// Restriction to a non-empty subset of the domain, renumbered 1..|subset|
// preserving element order.
Structure induced_substructure(const Structure& s, const std::vector<int>& subset);

// Disjoint union: b's elements are shifted by |a|.
Structure disjoint_union(const Structure& a, const Structure& b);

// Enumerates all non-empty subsets of {1..n} with size <= max_size (all, when
// unset), in increasing size and then lexicographic order.
class SubsetEnumerator {
public:
    explicit SubsetEnumerator(int n, std::optional<int> max_size = std::nullopt);
    std::optional<std::vector<int>> next();

private:
    int n_;
    int max_size_;
    int k_ = 1;
    std::vector<int> current_;
    bool fresh_size_ = true;
};

}  // namespace hermc
