#include "hermc/structure.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace hermc {

Signature::Signature(std::vector<std::pair<std::string, int>> symbols) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end());
    for (size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].first.empty()) throw PreconditionError("empty relation name in signature");
        if (symbols_[i].second < 1)
            throw PreconditionError("relation " + symbols_[i].first + " has arity < 1");
        if (i > 0 && symbols_[i].first == symbols_[i - 1].first)
            throw PreconditionError("duplicate relation name in signature: " + symbols_[i].first);
    }
}

Signature Signature::digraph() { return Signature({{"E", 2}}); }

Signature Signature::parse(std::string_view text) {
    std::vector<std::pair<std::string, int>> syms;
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    while (true) {
        skip_ws();
        if (pos >= text.size()) break;
        size_t start = pos;
        while (pos < text.size() && text[pos] != '/' && text[pos] != ',') ++pos;
        std::string name(text.substr(start, pos - start));
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
        if (pos >= text.size() || text[pos] != '/')
            throw PreconditionError("expected NAME/ARITY in signature: " + std::string(text));
        ++pos;
        skip_ws();
        size_t num_start = pos;
        while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == num_start) throw PreconditionError("missing arity in signature: " + std::string(text));
        int ar = std::stoi(std::string(text.substr(num_start, pos - num_start)));
        syms.emplace_back(std::move(name), ar);
        skip_ws();
        if (pos < text.size()) {
            if (text[pos] != ',') throw PreconditionError("expected ',' in signature: " + std::string(text));
            ++pos;
        }
    }
    if (syms.empty()) throw PreconditionError("empty signature");
    return Signature(std::move(syms));
}

std::string Signature::str() const {
    std::ostringstream out;
    for (size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out << ",";
        out << symbols_[i].first << "/" << symbols_[i].second;
    }
    return out.str();
}

bool Signature::contains(std::string_view name) const {
    for (const auto& [n, a] : symbols_)
        if (n == name) return true;
    return false;
}

int Signature::arity(std::string_view name) const {
    for (const auto& [n, a] : symbols_)
        if (n == name) return a;
    throw PreconditionError("unknown relation symbol: " + std::string(name));
}

bool Signature::is_monadic() const {
    for (const auto& [n, a] : symbols_)
        if (a != 1) return false;
    return !symbols_.empty();
}

Signature merge_signatures(const Signature& a, const Signature& b) {
    std::vector<std::pair<std::string, int>> syms = a.symbols();
    for (const auto& [n, ar] : b.symbols()) {
        if (a.contains(n)) {
            if (a.arity(n) != ar)
                throw PreconditionError("arity conflict for relation " + n + " while merging signatures");
        } else {
            syms.emplace_back(n, ar);
        }
    }
    return Signature(std::move(syms));
}

namespace {

std::uint64_t pack_tuple(std::span<const int> t, int bits) {
    std::uint64_t key = 0;
    for (int v : t) key = (key << bits) | static_cast<std::uint64_t>(v);
    return key;
}

}  // namespace

Structure::Structure(Signature sig, int size, std::map<std::string, std::vector<Tuple>> relations)
    : sig_(std::move(sig)), size_(size) {
    if (size_ < 1) throw PreconditionError("structures have non-empty domains (size >= 1)");
    for (const auto& [name, tuples] : relations)
        if (!sig_.contains(name))
            throw PreconditionError("relation " + name + " not declared in signature");

    const size_t words = static_cast<size_t>((size_ + 63) / 64);
    const int bits = std::bit_width(static_cast<unsigned>(size_));
    for (const auto& [name, ar] : sig_.symbols()) {
        Rel r;
        r.name = name;
        r.arity = ar;
        auto it = relations.find(name);
        if (it != relations.end()) r.tuples = it->second;
        for (const Tuple& t : r.tuples) {
            if (static_cast<int>(t.size()) != ar)
                throw PreconditionError("tuple of wrong arity for relation " + name);
            for (int v : t)
                if (v < 1 || v > size_)
                    throw PreconditionError("tuple entry out of domain range in relation " + name);
        }
        std::sort(r.tuples.begin(), r.tuples.end());
        r.tuples.erase(std::unique(r.tuples.begin(), r.tuples.end()), r.tuples.end());

        if (ar == 1) {
            r.row_words = words;
            r.rows.assign(words, 0);
            for (const Tuple& t : r.tuples) r.rows[(t[0] - 1) >> 6] |= 1ull << ((t[0] - 1) & 63);
        } else if (ar == 2) {
            r.row_words = words;
            r.rows.assign(words * static_cast<size_t>(size_), 0);
            for (const Tuple& t : r.tuples)
                r.rows[static_cast<size_t>(t[0] - 1) * words + static_cast<size_t>((t[1] - 1) >> 6)] |=
                    1ull << ((t[1] - 1) & 63);
        } else {
            r.packable = static_cast<size_t>(ar) * static_cast<size_t>(bits) <= 64;
            if (r.packable) {
                for (const Tuple& t : r.tuples) r.packed.push_back(pack_tuple(t, bits));
                std::sort(r.packed.begin(), r.packed.end());
            }
        }
        rels_.push_back(std::move(r));
    }
}

Structure Structure::digraph(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Tuple> tuples;
    tuples.reserve(edges.size());
    for (auto [a, b] : edges) tuples.push_back({a, b});
    return Structure(Signature::digraph(), n, {{"E", std::move(tuples)}});
}

const std::vector<Tuple>& Structure::tuples(std::string_view rel) const {
    return rels_[relation_index(rel)].tuples;
}

int Structure::relation_index(std::string_view rel) const {
    for (size_t i = 0; i < rels_.size(); ++i)
        if (rels_[i].name == rel) return static_cast<int>(i);
    throw PreconditionError("unknown relation symbol: " + std::string(rel));
}

bool Structure::contains(std::string_view rel, std::span<const int> tuple) const {
    return contains(relation_index(rel), tuple);
}

bool Structure::contains(int rel_idx, std::span<const int> tuple) const {
    const Rel& r = rels_[rel_idx];
    if (static_cast<int>(tuple.size()) != r.arity)
        throw PreconditionError("tuple of wrong arity for relation " + r.name);
    if (r.arity == 1) return contains1(rel_idx, tuple[0]);
    if (r.arity == 2) return contains2(rel_idx, tuple[0], tuple[1]);
    if (r.packable) {
        const int bits = std::bit_width(static_cast<unsigned>(size_));
        return std::binary_search(r.packed.begin(), r.packed.end(), pack_tuple(tuple, bits));
    }
    Tuple t(tuple.begin(), tuple.end());
    return std::binary_search(r.tuples.begin(), r.tuples.end(), t);
}

bool Structure::operator==(const Structure& other) const {
    if (sig_ != other.sig_ || size_ != other.size_) return false;
    for (size_t i = 0; i < rels_.size(); ++i)
        if (rels_[i].tuples != other.rels_[i].tuples) return false;
    return true;
}

Structure induced_substructure(const Structure& s, const std::vector<int>& subset) {
    std::vector<int> elems = subset;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty()) throw PreconditionError("induced substructure requires a non-empty subset");
    for (int v : elems)
        if (v < 1 || v > s.size()) throw PreconditionError("subset element out of domain range");

    std::vector<int> renum(static_cast<size_t>(s.size()) + 1, 0);
    for (size_t i = 0; i < elems.size(); ++i) renum[elems[i]] = static_cast<int>(i) + 1;

    std::map<std::string, std::vector<Tuple>> rels;
    for (const auto& [name, ar] : s.signature().symbols()) {
        std::vector<Tuple> kept;
        for (const Tuple& t : s.tuples(name)) {
            bool inside = true;
            for (int v : t)
                if (renum[v] == 0) {
                    inside = false;
                    break;
                }
            if (!inside) continue;
            Tuple mapped(t.size());
            for (size_t i = 0; i < t.size(); ++i) mapped[i] = renum[t[i]];
            kept.push_back(std::move(mapped));
        }
        rels.emplace(name, std::move(kept));
    }
    return Structure(s.signature(), static_cast<int>(elems.size()), std::move(rels));
}

Structure disjoint_union(const Structure& a, const Structure& b) {
    if (a.signature() != b.signature())
        throw PreconditionError("disjoint union requires identical signatures");
    const int shift = a.size();
    std::map<std::string, std::vector<Tuple>> rels;
    for (const auto& [name, ar] : a.signature().symbols()) {
        std::vector<Tuple> tuples = a.tuples(name);
        for (Tuple t : b.tuples(name)) {
            for (int& v : t) v += shift;
            tuples.push_back(std::move(t));
        }
        rels.emplace(name, std::move(tuples));
    }
    return Structure(a.signature(), a.size() + b.size(), std::move(rels));
}

SubsetEnumerator::SubsetEnumerator(int n, std::optional<int> max_size)
    : n_(n), max_size_(max_size ? std::min(*max_size, n) : n) {}

std::optional<std::vector<int>> SubsetEnumerator::next() {
    while (k_ <= max_size_) {
        if (fresh_size_) {
            current_.resize(k_);
            for (int i = 0; i < k_; ++i) current_[i] = i + 1;
            fresh_size_ = false;
            return current_;
        }
        // advance the k-combination
        int i = k_ - 1;
        while (i >= 0 && current_[i] == n_ - (k_ - 1 - i)) --i;
        if (i < 0) {
            ++k_;
            fresh_size_ = true;
            continue;
        }
        ++current_[i];
        for (int j = i + 1; j < k_; ++j) current_[j] = current_[j - 1] + 1;
        return current_;
    }
    return std::nullopt;
}

}  // namespace hermc
