#include "hermc/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace hermc {

SentenceEvaluator::SentenceEvaluator(const Structure& s) : s_(&s) {
    full_domain_.resize(static_cast<size_t>(s.size()));
    std::iota(full_domain_.begin(), full_domain_.end(), 1);
}

SentenceEvaluator::SentenceEvaluator(const Structure& s, FormulaPtr sentence)
    : SentenceEvaluator(s, sentence, {}) {}

SentenceEvaluator::SentenceEvaluator(const Structure& s, const FormulaPtr& f,
                                     const std::map<std::string, int>& assignment)
    : SentenceEvaluator(s) {
    check_signature(f, s.signature());
    std::map<std::string, int> slot_of;
    root_ = compile(f, slot_of);
    env_.assign(slot_of.size(), 0);
    for (const auto& v : free_vars(f)) {
        auto it = assignment.find(v);
        if (it == assignment.end()) throw PreconditionError("unassigned free variable: " + v);
        if (it->second < 1 || it->second > s.size())
            throw PreconditionError("assignment out of domain range for variable " + v);
        env_[slot_of.at(v)] = it->second;
    }
}

SentenceEvaluator::SentenceEvaluator(const Structure& s, const PrenexSentence& p)
    : SentenceEvaluator(s, p.as_formula()) {}

int SentenceEvaluator::compile(const FormulaPtr& f, std::map<std::string, int>& slot_of) {
    auto slot = [&](const std::string& v) {
        auto [it, fresh] = slot_of.emplace(v, static_cast<int>(slot_of.size()));
        return it->second;
    };
    Node n;
    n.kind = f->kind;
    switch (f->kind) {
        case Formula::Kind::Truth:
            n.truth = f->truth;
            break;
        case Formula::Kind::Rel:
            n.rel = s_->relation_index(f->rel);
            n.arity = s_->relation_arity(n.rel);
            for (const auto& v : f->vars) n.slots.push_back(slot(v));
            break;
        case Formula::Kind::Eq:
            n.slots = {slot(f->vars[0]), slot(f->vars[1])};
            break;
        case Formula::Kind::Quantified:
            n.quant = f->quant;
            n.qslot = slot(f->qvar);
            break;
        default:
            break;
    }
    for (const auto& k : f->kids) n.kids.push_back(compile(k, slot_of));
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

bool SentenceEvaluator::eval_node(int id, std::span<const int> domain) {
    const Node& n = nodes_[id];
    switch (n.kind) {
        case Formula::Kind::Truth:
            return n.truth;
        case Formula::Kind::Rel:
            if (n.arity == 1) return s_->contains1(n.rel, env_[n.slots[0]]);
            if (n.arity == 2) return s_->contains2(n.rel, env_[n.slots[0]], env_[n.slots[1]]);
            {
                int buf[16];
                std::vector<int> big;
                int* vals = buf;
                if (n.arity > 16) {
                    big.resize(static_cast<size_t>(n.arity));
                    vals = big.data();
                }
                for (int i = 0; i < n.arity; ++i) vals[i] = env_[n.slots[i]];
                return s_->contains(n.rel, std::span<const int>(vals, static_cast<size_t>(n.arity)));
            }
        case Formula::Kind::Eq:
            return env_[n.slots[0]] == env_[n.slots[1]];
        case Formula::Kind::Not:
            return !eval_node(n.kids[0], domain);
        case Formula::Kind::And:
            for (int k : n.kids)
                if (!eval_node(k, domain)) return false;
            return true;
        case Formula::Kind::Or:
            for (int k : n.kids)
                if (eval_node(k, domain)) return true;
            return false;
        case Formula::Kind::Implies:
            return !eval_node(n.kids[0], domain) || eval_node(n.kids[1], domain);
        case Formula::Kind::Quantified: {
            const int saved = env_[n.qslot];
            const bool want = n.quant == Quant::Exists;
            bool result = !want;
            for (int v : domain) {
                env_[n.qslot] = v;
                if (eval_node(n.kids[0], domain) == want) {
                    result = want;
                    break;
                }
            }
            env_[n.qslot] = saved;
            return result;
        }
    }
    return false;
}

bool SentenceEvaluator::eval_full()            { return eval_on(full_domain_); }

bool SentenceEvaluator::eval_on(std::span<const int> subset) {
    ++calls_;
    return eval_node(root_, subset);
}

MatrixEvaluator::MatrixEvaluator(const Structure& s, const FormulaPtr& matrix,
                                 const std::vector<std::string>& vars)
    : inner_(s), nvars_(vars.size()) {
    if (!is_quantifier_free(matrix))
        throw PreconditionError("MatrixEvaluator requires a quantifier-free formula");
    std::map<std::string, int> slot_of;
    for (size_t i = 0; i < vars.size(); ++i)
        if (!slot_of.emplace(vars[i], static_cast<int>(i)).second)
            throw PreconditionError("duplicate variable name: " + vars[i]);
    auto fv = free_vars(matrix);
    for (const auto& v : fv)
        if (!slot_of.count(v)) throw PreconditionError("matrix variable not listed: " + v);
    inner_.root_ = inner_.compile(matrix, slot_of);
    inner_.env_.assign(slot_of.size(), 0);
}

bool MatrixEvaluator::eval(std::span<const int> values) {
    if (values.size() != nvars_) throw PreconditionError("wrong number of values for matrix evaluation");
    std::copy(values.begin(), values.end(), inner_.env_.begin());
    return inner_.eval_node(inner_.root_, {});
}

bool eval_fo(const Structure& s, const FormulaPtr& f, const std::map<std::string, int>& assignment) {
    SentenceEvaluator ev(s, f, assignment);
    return ev.eval_full();
}

bool eval_fo(const Structure& s, const PrenexSentence& p) {
    SentenceEvaluator ev(s, p);
    return ev.eval_full();
}

std::optional<std::vector<int>> find_homomorphism(const Structure& a, const Structure& b,
                                                  bool injective_embedding) {
    if (a.signature() != b.signature())
        throw PreconditionError("homomorphism search requires identical signatures");

    const int na = a.size(), nb = b.size();
    std::vector<int> image(static_cast<size_t>(na), 0);  // 0 = unassigned
    std::vector<bool> used(static_cast<size_t>(nb) + 1, false);

    // tuples grouped by the largest element they mention, so each is checked
    // exactly when it becomes fully assigned
    struct Check {
        int rel;
        const Tuple* tuple;
    };
    std::vector<std::vector<Check>> by_max(static_cast<size_t>(na) + 1);
    for (const auto& [name, ar] : a.signature().symbols()) {
        int rel = b.relation_index(name);
        for (const Tuple& t : a.tuples(name)) {
            int mx = *std::max_element(t.begin(), t.end());
            by_max[mx].push_back({rel, &t});
        }
    }

    std::vector<int> buf;
    auto maps_ok = [&](int v) {
        for (const Check& c : by_max[v]) {
            buf.clear();
            for (int x : *c.tuple) buf.push_back(image[x - 1]);
            if (!b.contains(c.rel, buf)) return false;
        }
        if (injective_embedding) {
            // reflection: tuples over assigned elements mentioning v must be
            // in a exactly when their images are in b
            for (const auto& [name, ar] : a.signature().symbols()) {
                int rel_a = a.relation_index(name);
                int rel_b = b.relation_index(name);
                std::vector<int> t(static_cast<size_t>(ar), 0);
                std::vector<int> im(static_cast<size_t>(ar), 0);
                // enumerate tuples over {1..v} containing v
                std::vector<int> idx(static_cast<size_t>(ar), 1);
                while (true) {
                    bool has_v = false;
                    for (int x : idx)
                        if (x == v) has_v = true;
                    if (has_v) {
                        for (int i = 0; i < ar; ++i) {
                            t[i] = idx[i];
                            im[i] = image[idx[i] - 1];
                        }
                        if (a.contains(rel_a, t) != b.contains(rel_b, im)) return false;
                    }
                    int i = ar - 1;
                    while (i >= 0 && idx[i] == v) idx[i--] = 1;
                    if (i < 0) break;
                    ++idx[i];
                }
            }
        }
        return true;
    };

    auto search = [&](auto&& self, int v) -> bool {
        if (v > na) return true;
        for (int t = 1; t <= nb; ++t) {
            if (injective_embedding && used[t]) continue;
            image[v - 1] = t;
            used[t] = true;
            if (maps_ok(v) && self(self, v + 1)) return true;
            used[t] = false;
            image[v - 1] = 0;
        }
        return false;
    };

    if (!search(search, 1)) return std::nullopt;

    // self-check: the returned map preserves all relations
    for (const auto& [name, ar] : a.signature().symbols())
        for (const Tuple& t : a.tuples(name)) {
            Tuple im(t.size());
            for (size_t i = 0; i < t.size(); ++i) im[i] = image[t[i] - 1];
            if (!b.contains(name, im)) throw Error("internal: homomorphism self-check failed");
        }
    return image;
}

bool every_cycle_has_symmetric_edge(const Structure& d) {
    if (d.signature() != Signature::digraph())
        throw PreconditionError("symmetric-cycle oracle requires the digraph signature E/2");
    const int n = d.size();
    if (n > 64) throw ScaleError("symmetric-cycle oracle supports at most 64 vertices");
    const int e = d.relation_index("E");

    std::vector<std::uint64_t> out(static_cast<size_t>(n) + 1, 0), sym(static_cast<size_t>(n) + 1, 0);
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v)
            if (d.contains2(e, u, v)) {
                out[u] |= 1ull << (v - 1);
                if (d.contains2(e, v, u)) sym[u] |= 1ull << (v - 1);
            }

    // search simple cycles whose vertex set spans no symmetric pair; the
    // smallest cycle vertex anchors the search
    for (int start = 1; start <= n; ++start) {
        if (sym[start] >> (start - 1) & 1) continue;  // loop
        std::uint64_t start_bit = 1ull << (start - 1);
        auto dfs = [&](auto&& self, std::uint64_t path, int last) -> bool {
            std::uint64_t cand = out[last];
            if (cand & start_bit && path != start_bit) return true;  // closes a cycle of length >= 2
            cand &= ~((start_bit << 1) - 1);                         // only vertices above the anchor
            cand &= ~path;
            while (cand) {
                int w = std::countr_zero(cand) + 1;
                cand &= cand - 1;
                std::uint64_t wbit = 1ull << (w - 1);
                if (sym[w] & (path | wbit)) continue;
                if (self(self, path | wbit, w)) return true;
            }
            return false;
        };
        if (dfs(dfs, start_bit, start)) return false;
    }
    return true;
}

}  // namespace hermc
