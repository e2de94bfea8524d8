#include "hermc/formula.hpp"

#include <algorithm>
#include <cctype>

namespace hermc {

QuantifierPrefix QuantifierPrefix::parse(std::string_view text) {
    std::vector<Quant> w;
    for (char c : text) {
        char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (u == 'E')
            w.push_back(Quant::Exists);
        else if (u == 'A')
            w.push_back(Quant::Forall);
        else if (u == ' ')
            continue;
        else
            throw PreconditionError(std::string("bad quantifier prefix character: ") + c);
    }
    return QuantifierPrefix(std::move(w));
}

std::string QuantifierPrefix::str() const {
    std::string out;
    for (Quant q : word) out += (q == Quant::Exists ? 'E' : 'A');
    return out;
}

bool QuantifierPrefix::is_forall_exists() const {
    size_t i = 0;
    while (i < word.size() && word[i] == Quant::Forall) ++i;
    while (i < word.size() && word[i] == Quant::Exists) ++i;
    return i == word.size();
}

bool QuantifierPrefix::is_forall_exists_forall() const {
    size_t i = 0;
    while (i < word.size() && word[i] == Quant::Forall) ++i;
    if (i < word.size() && word[i] == Quant::Exists) ++i;
    while (i < word.size() && word[i] == Quant::Forall) ++i;
    return i == word.size();
}

bool QuantifierPrefix::has_subsequence(std::initializer_list<Quant> pattern) const {
    auto it = pattern.begin();
    for (Quant q : word) {
        if (it == pattern.end()) break;
        if (q == *it) ++it;
    }
    return it == pattern.end();
}

std::optional<std::pair<int, int>> QuantifierPrefix::forall_exists_shape() const {
    size_t i = 0;
    while (i < word.size() && word[i] == Quant::Forall) ++i;
    size_t k = i;
    while (i < word.size() && word[i] == Quant::Exists) ++i;
    if (i != word.size()) return std::nullopt;
    return std::make_pair(static_cast<int>(k), static_cast<int>(word.size() - k));
}

std::optional<std::pair<int, int>> QuantifierPrefix::forall_exists_forall_shape() const {
    size_t i = 0;
    while (i < word.size() && word[i] == Quant::Forall) ++i;
    size_t k = i;
    if (i >= word.size() || word[i] != Quant::Exists) return std::nullopt;
    ++i;
    while (i < word.size() && word[i] == Quant::Forall) ++i;
    if (i != word.size()) return std::nullopt;
    return std::make_pair(static_cast<int>(k), static_cast<int>(word.size() - k - 1));
}

namespace {
std::shared_ptr<Formula> make(Formula::Kind k) { return std::make_shared<Formula>(k); }
}  // namespace

FormulaPtr f_true() {
    auto f = make(Formula::Kind::Truth);
    f->truth = true;
    return f;
}

FormulaPtr f_false() {
    auto f = make(Formula::Kind::Truth);
    f->truth = false;
    return f;
}

FormulaPtr f_rel(std::string name, std::vector<std::string> args) {
    auto f = make(Formula::Kind::Rel);
    f->rel = std::move(name);
    f->vars = std::move(args);
    return f;
}

FormulaPtr f_eq(std::string a, std::string b) {
    auto f = make(Formula::Kind::Eq);
    f->vars = {std::move(a), std::move(b)};
    return f;
}

FormulaPtr f_neq(std::string a, std::string b) { return f_not(f_eq(std::move(a), std::move(b))); }

FormulaPtr f_not(FormulaPtr x) {
    auto f = make(Formula::Kind::Not);
    f->kids = {std::move(x)};
    return f;
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) {
    if (kids.empty()) return f_true();
    if (kids.size() == 1) return kids[0];
    auto f = make(Formula::Kind::And);
    f->kids = std::move(kids);
    return f;
}

FormulaPtr f_or(std::vector<FormulaPtr> kids) {
    if (kids.empty()) return f_false();
    if (kids.size() == 1) return kids[0];
    auto f = make(Formula::Kind::Or);
    f->kids = std::move(kids);
    return f;
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    auto f = make(Formula::Kind::Implies);
    f->kids = {std::move(a), std::move(b)};
    return f;
}

FormulaPtr f_quant(Quant q, std::string var, FormulaPtr body) {
    auto f = make(Formula::Kind::Quantified);
    f->quant = q;
    f->qvar = std::move(var);
    f->kids = {std::move(body)};
    return f;
}

FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr body) {
    FormulaPtr f = std::move(body);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = f_quant(Quant::Exists, *it, std::move(f));
    return f;
}

FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr body) {
    FormulaPtr f = std::move(body);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = f_quant(Quant::Forall, *it, std::move(f));
    return f;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::Truth:
            return a->truth == b->truth;
        case Formula::Kind::Rel:
            if (a->rel != b->rel) return false;
            return a->vars == b->vars;
        case Formula::Kind::Eq:
            return a->vars == b->vars;
        case Formula::Kind::Quantified:
            if (a->quant != b->quant || a->qvar != b->qvar) return false;
            break;
        default:
            break;
    }
    if (a->kids.size() != b->kids.size()) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!formula_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

namespace {

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f->kind) {
        case Formula::Kind::Truth:
            return;
        case Formula::Kind::Rel:
        case Formula::Kind::Eq:
            for (const auto& v : f->vars)
                if (!bound.count(v)) out.insert(v);
            return;
        case Formula::Kind::Quantified: {
            bool fresh = bound.insert(f->qvar).second;
            collect_free(f->kids[0], bound, out);
            if (fresh) bound.erase(f->qvar);
            return;
        }
        default:
            for (const auto& k : f->kids) collect_free(k, bound, out);
            return;
    }
}

void collect_all(const FormulaPtr& f, std::set<std::string>& out) {
    for (const auto& v : f->vars) out.insert(v);
    if (f->kind == Formula::Kind::Quantified) out.insert(f->qvar);
    for (const auto& k : f->kids) collect_all(k, out);
}

}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::string> all_vars(const FormulaPtr& f) {
    std::set<std::string> out;
    collect_all(f, out);
    return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Quantified) return false;
    for (const auto& k : f->kids)
        if (!is_quantifier_free(k)) return false;
    return true;
}

FormulaPtr substitute_var(const FormulaPtr& f, const std::string& from, const std::string& to) {
    switch (f->kind) {
        case Formula::Kind::Truth:
            return f;
        case Formula::Kind::Rel:
        case Formula::Kind::Eq: {
            bool hit = false;
            for (const auto& v : f->vars)
                if (v == from) hit = true;
            if (!hit) return f;
            auto g = std::make_shared<Formula>(*f);
            for (auto& v : g->vars)
                if (v == from) v = to;
            return g;
        }
        case Formula::Kind::Quantified: {
            if (f->qvar == from) return f;  // shadowed
            auto body = substitute_var(f->kids[0], from, to);
            if (body.get() == f->kids[0].get()) return f;
            return f_quant(f->quant, f->qvar, std::move(body));
        }
        default: {
            std::vector<FormulaPtr> kids;
            bool changed = false;
            kids.reserve(f->kids.size());
            for (const auto& k : f->kids) {
                kids.push_back(substitute_var(k, from, to));
                changed = changed || kids.back().get() != k.get();
            }
            if (!changed) return f;
            auto g = std::make_shared<Formula>(*f);
            g->kids = std::move(kids);
            return g;
        }
    }
}

void check_signature(const FormulaPtr& f, const Signature& sig) {
    if (f->kind == Formula::Kind::Rel) {
        if (!sig.contains(f->rel)) throw PreconditionError("unknown relation symbol: " + f->rel);
        if (sig.arity(f->rel) != static_cast<int>(f->vars.size()))
            throw PreconditionError("arity mismatch for relation " + f->rel + ": expected " +
                                    std::to_string(sig.arity(f->rel)) + ", got " +
                                    std::to_string(f->vars.size()));
    }
    for (const auto& k : f->kids) check_signature(k, sig);
}

PrenexSentence::PrenexSentence(Signature sig, std::vector<std::pair<Quant, std::string>> prefix,
                               FormulaPtr matrix)
    : sig_(std::move(sig)), prefix_(std::move(prefix)), matrix_(std::move(matrix)) {
    if (!is_quantifier_free(matrix_))
        throw PreconditionError("prenex matrix must be quantifier-free");
    check_signature(matrix_, sig_);
    std::set<std::string> seen;
    for (const auto& [q, v] : prefix_)
        if (!seen.insert(v).second)
            throw PreconditionError("duplicate variable in quantifier prefix: " + v);
    for (const auto& v : free_vars(matrix_))
        if (!seen.count(v)) throw PreconditionError("matrix variable not in prefix: " + v);
}

QuantifierPrefix PrenexSentence::quantifier_prefix() const {
    std::vector<Quant> w;
    w.reserve(prefix_.size());
    for (const auto& [q, v] : prefix_) w.push_back(q);
    return QuantifierPrefix(std::move(w));
}

FormulaPtr PrenexSentence::as_formula() const {
    FormulaPtr f = matrix_;
    for (auto it = prefix_.rbegin(); it != prefix_.rend(); ++it) f = f_quant(it->first, it->second, f);
    return f;
}

PrenexSentence negate(const PrenexSentence& p) {
    std::vector<std::pair<Quant, std::string>> prefix;
    prefix.reserve(p.prefix().size());
    for (const auto& [q, v] : p.prefix()) prefix.emplace_back(dual(q), v);
    return PrenexSentence(p.signature(), std::move(prefix), f_not(p.matrix()));
}

}  // namespace hermc
