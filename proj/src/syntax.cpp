#include "hermc/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace hermc {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Number, LParen, RParen, Comma, Dot, And, Or, Not, Arrow, Eq, Neq, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.col); }

private:
    void advance() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                ++col_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_ = {Tok::End, "", line_, col_};
            return;
        }
        char c = text_[pos_];
        auto single = [&](Tok k) {
            tok_ = {k, std::string(1, c), line_, col_};
            ++pos_;
            ++col_;
        };
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '\''))
                ++pos_;
            tok_ = {Tok::Ident, std::string(text_.substr(start, pos_ - start)), line_, col_};
            col_ += static_cast<int>(pos_ - start);
        } else if (isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            tok_ = {Tok::Number, std::string(text_.substr(start, pos_ - start)), line_, col_};
            col_ += static_cast<int>(pos_ - start);
        } else if (c == '(') {
            single(Tok::LParen);
        } else if (c == ')') {
            single(Tok::RParen);
        } else if (c == ',') {
            single(Tok::Comma);
        } else if (c == '.') {
            single(Tok::Dot);
        } else if (c == '&') {
            single(Tok::And);
        } else if (c == '|') {
            single(Tok::Or);
        } else if (c == '~') {
            single(Tok::Not);
        } else if (c == '=') {
            single(Tok::Eq);
        } else if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
            tok_ = {Tok::Neq, "!=", line_, col_};
            pos_ += 2;
            col_ += 2;
        } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            tok_ = {Tok::Arrow, "->", line_, col_};
            pos_ += 2;
            col_ += 2;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_{Tok::End, "", 1, 1};
};

// ------------------------------------------------------------- parser
//
// Degree macros are parsed into a placeholder atom and expanded after the
// whole formula is known, so the fresh witness names cannot collide with
// user variables.

constexpr const char* kDegPlaceholder = "$deg";

class Parser {
public:
    Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) {}

    FormulaPtr parse_sentence() {
        FormulaPtr f = parse_implies();
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after formula");
        return f;
    }

private:
    FormulaPtr parse_implies() {
        FormulaPtr lhs = parse_or();
        if (lex_.peek().kind == Tok::Arrow) {
            lex_.take();
            return f_implies(std::move(lhs), parse_implies());
        }
        return lhs;
    }

    FormulaPtr parse_or() {
        std::vector<FormulaPtr> kids{parse_and()};
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            kids.push_back(parse_and());
        }
        return f_or(std::move(kids));
    }

    FormulaPtr parse_and() {
        std::vector<FormulaPtr> kids{parse_unary()};
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            kids.push_back(parse_unary());
        }
        return f_and(std::move(kids));
    }

    FormulaPtr parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Not) {
            lex_.take();
            return f_not(parse_unary());
        }
        if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
            Quant q = t.text == "exists" ? Quant::Exists : Quant::Forall;
            lex_.take();
            std::vector<std::string> vars;
            vars.push_back(expect_ident("variable name"));
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                vars.push_back(expect_ident("variable name"));
            }
            expect(Tok::Dot, "'.'");
            FormulaPtr body = parse_implies();
            for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = f_quant(q, *it, std::move(body));
            return body;
        }
        return parse_atom();
    }

    FormulaPtr parse_atom() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::LParen) {
            lex_.take();
            FormulaPtr f = parse_implies();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.kind != Tok::Ident) lex_.fail("expected an atom");
        if (t.text == "true") {
            lex_.take();
            return f_true();
        }
        if (t.text == "false") {
            lex_.take();
            return f_false();
        }
        Token name = lex_.take();
        if (lex_.peek().kind == Tok::LParen) {
            // degree macro deg_R(x) =/!= k, unless deg_R itself is a declared symbol
            if (name.text.rfind("deg_", 0) == 0 && !sig_.contains(name.text)) {
                std::string rel = name.text.substr(4);
                if (!sig_.contains(rel))
                    throw ParseError("unknown relation symbol in degree macro: " + rel, name.line,
                                     name.col);
                if (sig_.arity(rel) != 2)
                    throw ParseError("degree macro requires a binary relation: " + rel, name.line,
                                     name.col);
                lex_.take();
                std::string var = expect_ident("variable name");
                expect(Tok::RParen, "')'");
                bool negated;
                if (lex_.peek().kind == Tok::Eq)
                    negated = false;
                else if (lex_.peek().kind == Tok::Neq)
                    negated = true;
                else
                    lex_.fail("expected '=' or '!=' after degree macro");
                lex_.take();
                if (lex_.peek().kind != Tok::Number) lex_.fail("expected a degree count");
                std::string count = lex_.take().text;
                return f_rel(kDegPlaceholder, {rel, var, count, negated ? "1" : "0"});
            }
            lex_.take();
            std::vector<std::string> args;
            args.push_back(expect_ident("variable name"));
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                args.push_back(expect_ident("variable name"));
            }
            expect(Tok::RParen, "')'");
            if (!sig_.contains(name.text))
                throw ParseError("unknown relation symbol: " + name.text, name.line, name.col);
            if (sig_.arity(name.text) != static_cast<int>(args.size()))
                throw ParseError("arity mismatch for relation " + name.text + ": expected " +
                                     std::to_string(sig_.arity(name.text)) + ", got " +
                                     std::to_string(args.size()),
                                 name.line, name.col);
            return f_rel(name.text, std::move(args));
        }
        if (lex_.peek().kind == Tok::Eq) {
            lex_.take();
            return f_eq(name.text, expect_ident("variable name"));
        }
        if (lex_.peek().kind == Tok::Neq) {
            lex_.take();
            return f_neq(name.text, expect_ident("variable name"));
        }
        throw ParseError("expected '(', '=' or '!=' after identifier " + name.text, name.line, name.col);
    }

    std::string expect_ident(const char* what) {
        if (lex_.peek().kind != Tok::Ident) lex_.fail(std::string("expected ") + what);
        return lex_.take().text;
    }

    void expect(Tok kind, const char* what) {
        if (lex_.peek().kind != kind) lex_.fail(std::string("expected ") + what);
        lex_.take();
    }

    Lexer lex_;
    const Signature& sig_;
};

// "x has exactly k R-neighbours, other than x itself and (here) none excluded"
FormulaPtr expand_degree(const std::string& rel, const std::string& x, int k,
                         std::vector<std::string>& pool, size_t& next) {
    auto fresh = [&]() -> std::string { return pool[next++]; };
    auto adjacent = [&](const std::string& w) {
        return f_and({f_not(f_eq(w, x)), f_or({f_rel(rel, {x, w}), f_rel(rel, {w, x})})});
    };
    auto not_adjacent = [&](const std::string& w) {
        return f_or({f_eq(w, x), f_and({f_not(f_rel(rel, {x, w})), f_not(f_rel(rel, {w, x}))})});
    };
    std::string closing = fresh();
    if (k == 0) return f_forall({closing}, not_adjacent(closing));
    std::vector<std::string> ws;
    for (int i = 0; i < k; ++i) ws.push_back(fresh());
    std::vector<FormulaPtr> body;
    for (const auto& w : ws) body.push_back(adjacent(w));
    for (size_t i = 0; i < ws.size(); ++i)
        for (size_t j = i + 1; j < ws.size(); ++j) body.push_back(f_not(f_eq(ws[i], ws[j])));
    std::vector<FormulaPtr> closing_cases{not_adjacent(closing)};
    for (const auto& w : ws) closing_cases.push_back(f_eq(closing, w));
    body.push_back(f_forall({closing}, f_or(std::move(closing_cases))));
    return f_exists(ws, f_and(std::move(body)));
}

FormulaPtr expand_macros(const FormulaPtr& f, std::vector<std::string>& pool, size_t& next) {
    if (f->kind == Formula::Kind::Rel && f->rel == kDegPlaceholder) {
        FormulaPtr g = expand_degree(f->vars[0], f->vars[1], std::stoi(f->vars[2]), pool, next);
        return f->vars[3] == "1" ? f_not(std::move(g)) : g;
    }
    if (f->kids.empty()) return f;
    std::vector<FormulaPtr> kids;
    bool changed = false;
    for (const auto& k : f->kids) {
        kids.push_back(expand_macros(k, pool, next));
        changed = changed || kids.back().get() != k.get();
    }
    if (!changed) return f;
    auto g = std::make_shared<Formula>(*f);
    g->kids = std::move(kids);
    return g;
}

int count_macro_vars(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Rel && f->rel == kDegPlaceholder)
        return std::stoi(f->vars[2]) + 1;
    int total = 0;
    for (const auto& k : f->kids) total += count_macro_vars(k);
    return total;
}

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
    FormulaPtr raw = Parser(text, sig).parse_sentence();
    int needed = count_macro_vars(raw);
    if (needed > 0) {
        std::set<std::string> used = all_vars(raw);
        std::vector<std::string> pool;
        for (int i = 1; static_cast<int>(pool.size()) < needed; ++i) {
            std::string name = "w" + std::to_string(i);
            if (!used.count(name)) pool.push_back(name);
        }
        size_t next = 0;
        raw = expand_macros(raw, pool, next);
    }
    check_signature(raw, sig);
    return raw;
}

// ------------------------------------------------------------- printer

namespace {

// precedence contexts: 0 top, 1 implies, 2 or, 3 and, 4 unary
int node_prec(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Implies:
            return 1;
        case Formula::Kind::Or:
            return 2;
        case Formula::Kind::And:
            return 3;
        case Formula::Kind::Not:
            return 4;
        case Formula::Kind::Quantified:
            return 0;
        default:
            return 10;
    }
}

void print_rec(const FormulaPtr& f, int ctx, std::string& out) {
    // ~(a = b) prints as the atom a != b
    if (f->kind == Formula::Kind::Not && f->kids[0]->kind == Formula::Kind::Eq) {
        out += f->kids[0]->vars[0];
        out += " != ";
        out += f->kids[0]->vars[1];
        return;
    }
    bool parens = node_prec(*f) < ctx;
    if (parens) out += "(";
    switch (f->kind) {
        case Formula::Kind::Truth:
            out += f->truth ? "true" : "false";
            break;
        case Formula::Kind::Rel:
            out += f->rel;
            out += "(";
            for (size_t i = 0; i < f->vars.size(); ++i) {
                if (i) out += ",";
                out += f->vars[i];
            }
            out += ")";
            break;
        case Formula::Kind::Eq:
            out += f->vars[0];
            out += " = ";
            out += f->vars[1];
            break;
        case Formula::Kind::Not:
            out += "~";
            print_rec(f->kids[0], 4, out);
            break;
        case Formula::Kind::And:
            for (size_t i = 0; i < f->kids.size(); ++i) {
                if (i) out += " & ";
                print_rec(f->kids[i], 4, out);
            }
            break;
        case Formula::Kind::Or:
            for (size_t i = 0; i < f->kids.size(); ++i) {
                if (i) out += " | ";
                print_rec(f->kids[i], 3, out);
            }
            break;
        case Formula::Kind::Implies:
            print_rec(f->kids[0], 2, out);
            out += " -> ";
            print_rec(f->kids[1], 1, out);
            break;
        case Formula::Kind::Quantified: {
            out += f->quant == Quant::Exists ? "exists " : "forall ";
            out += f->qvar;
            const Formula* cur = f.get();
            while (cur->kids[0]->kind == Formula::Kind::Quantified &&
                   cur->kids[0]->quant == f->quant) {
                cur = cur->kids[0].get();
                out += ",";
                out += cur->qvar;
            }
            out += ". ";
            print_rec(cur->kids[0], 0, out);
            break;
        }
    }
    if (parens) out += ")";
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    print_rec(f, 0, out);
    return out;
}

std::string print_formula(const PrenexSentence& p) { return print_formula(p.as_formula()); }

// ------------------------------------------------ structure file format

Structure parse_structure(std::string_view text) {
    std::optional<Signature> sig;
    std::optional<int> domain;
    std::map<std::string, std::vector<Tuple>> rels;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "signature") {
            if (sig) throw ParseError("duplicate signature line", lineno, 1);
            std::string rest;
            std::getline(ls, rest);
            try {
                sig = Signature::parse(rest);
            } catch (const Error& e) {
                throw ParseError(e.what(), lineno, 1);
            }
        } else if (head == "domain") {
            if (!sig) throw ParseError("domain line before signature line", lineno, 1);
            if (domain) throw ParseError("duplicate domain line", lineno, 1);
            int n;
            if (!(ls >> n) || n < 1) throw ParseError("domain must be a positive integer", lineno, 1);
            domain = n;
        } else {
            if (!sig || !domain) throw ParseError("tuple line before signature/domain", lineno, 1);
            if (!sig->contains(head)) throw ParseError("unknown relation symbol: " + head, lineno, 1);
            Tuple t;
            int v;
            while (ls >> v) {
                if (v < 1 || v > *domain)
                    throw ParseError("element out of domain range: " + std::to_string(v), lineno, 1);
                t.push_back(v);
            }
            if (!ls.eof()) throw ParseError("malformed tuple line", lineno, 1);
            if (static_cast<int>(t.size()) != sig->arity(head))
                throw ParseError("arity mismatch for relation " + head, lineno, 1);
            rels[head].push_back(std::move(t));
        }
    }
    if (!sig) throw ParseError("missing signature line", lineno, 1);
    if (!domain) throw ParseError("missing domain line", lineno, 1);
    return Structure(*sig, *domain, std::move(rels));
}

std::string print_structure(const Structure& s, const std::vector<std::string>& header_comments) {
    std::ostringstream out;
    for (const auto& c : header_comments) out << "# " << c << "\n";
    out << "signature " << s.signature().str() << "\n";
    out << "domain " << s.size() << "\n";
    for (const auto& [name, ar] : s.signature().symbols())
        for (const Tuple& t : s.tuples(name)) {
            out << name;
            for (int v : t) out << " " << v;
            out << "\n";
        }
    return out.str();
}

FormulaFile parse_formula_file(std::string_view text, std::optional<Signature> sig) {
    std::string body{text};
    // optional "sig NAME/ARITY,..." header on the first non-comment line
    size_t pos = 0;
    while (pos < body.size()) {
        size_t eol = body.find('\n', pos);
        if (eol == std::string::npos) eol = body.size();
        std::string line = body.substr(pos, eol - pos);
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            pos = eol + 1;
            continue;
        }
        if (line.compare(first, 4, "sig ") == 0) {
            Signature header = Signature::parse(line.substr(first + 4));
            if (sig && *sig != header)
                throw PreconditionError("signature given both on the command line and in the file, and they differ");
            sig = header;
            body = body.substr(eol == body.size() ? eol : eol + 1);
        }
        break;
    }
    if (!sig) throw PreconditionError("no signature: pass one or add a 'sig NAME/ARITY,...' header line");
    return FormulaFile{*sig, parse_formula(body, *sig)};
}

std::string print_formula_file(const Signature& sig, const FormulaPtr& f) {
    return "sig " + sig.str() + "\n" + print_formula(f) + "\n";
}

// -------------------------------------------------------------- prenex

namespace {

FormulaPtr elim_implies(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::Implies)
        return f_or({f_not(elim_implies(f->kids[0])), elim_implies(f->kids[1])});
    if (f->kids.empty()) return f;
    std::vector<FormulaPtr> kids;
    for (const auto& k : f->kids) kids.push_back(elim_implies(k));
    auto g = std::make_shared<Formula>(*f);
    g->kids = std::move(kids);
    return g;
}

// every bound variable gets a unique internal name "$k"
FormulaPtr uniquify(const FormulaPtr& f, std::map<std::string, std::vector<std::string>>& scopes,
                    int& counter) {
    switch (f->kind) {
        case Formula::Kind::Truth:
            return f;
        case Formula::Kind::Rel:
        case Formula::Kind::Eq: {
            auto g = std::make_shared<Formula>(*f);
            for (auto& v : g->vars) {
                auto it = scopes.find(v);
                if (it != scopes.end() && !it->second.empty()) v = it->second.back();
            }
            return g;
        }
        case Formula::Kind::Quantified: {
            std::string fresh = "$" + std::to_string(counter++);
            scopes[f->qvar].push_back(fresh);
            FormulaPtr body = uniquify(f->kids[0], scopes, counter);
            scopes[f->qvar].pop_back();
            return f_quant(f->quant, fresh, std::move(body));
        }
        default: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) kids.push_back(uniquify(k, scopes, counter));
            auto g = std::make_shared<Formula>(*f);
            g->kids = std::move(kids);
            return g;
        }
    }
}

struct Pulled {
    std::vector<std::pair<Quant, std::string>> prefix;
    FormulaPtr matrix;
};

Pulled pull_quantifiers(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::Truth:
        case Formula::Kind::Rel:
        case Formula::Kind::Eq:
            return {{}, f};
        case Formula::Kind::Not: {
            Pulled p = pull_quantifiers(f->kids[0]);
            for (auto& [q, v] : p.prefix) q = dual(q);
            return {std::move(p.prefix), f_not(std::move(p.matrix))};
        }
        case Formula::Kind::Quantified: {
            Pulled p = pull_quantifiers(f->kids[0]);
            p.prefix.insert(p.prefix.begin(), {f->quant, f->qvar});
            return p;
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            Pulled out;
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) {
                Pulled p = pull_quantifiers(k);
                out.prefix.insert(out.prefix.end(), p.prefix.begin(), p.prefix.end());
                kids.push_back(std::move(p.matrix));
            }
            out.matrix = f->kind == Formula::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
            return out;
        }
        case Formula::Kind::Implies:
            throw Error("internal: implication not eliminated before prenexing");
    }
    throw Error("internal: unknown formula kind");
}

// simultaneous rename over a quantifier-free formula
FormulaPtr rename_vars(const FormulaPtr& f, const std::map<std::string, std::string>& renames) {
    switch (f->kind) {
        case Formula::Kind::Truth:
            return f;
        case Formula::Kind::Rel:
        case Formula::Kind::Eq: {
            auto g = std::make_shared<Formula>(*f);
            for (auto& v : g->vars) {
                auto it = renames.find(v);
                if (it != renames.end()) v = it->second;
            }
            return g;
        }
        default: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) kids.push_back(rename_vars(k, renames));
            auto g = std::make_shared<Formula>(*f);
            g->kids = std::move(kids);
            return g;
        }
    }
}

}  // namespace

PrenexSentence to_prenex(const FormulaPtr& f, const Signature& sig) {
    if (!free_vars(f).empty()) {
        std::string names;
        for (const auto& v : free_vars(f)) names += (names.empty() ? "" : ", ") + v;
        throw PreconditionError("prenexing requires a sentence; free variables: " + names);
    }
    check_signature(f, sig);
    FormulaPtr noimp = elim_implies(f);
    std::map<std::string, std::vector<std::string>> scopes;
    int counter = 0;
    FormulaPtr uniq = uniquify(noimp, scopes, counter);
    Pulled p = pull_quantifiers(uniq);
    std::map<std::string, std::string> renames;
    std::vector<std::pair<Quant, std::string>> prefix;
    for (size_t i = 0; i < p.prefix.size(); ++i) {
        std::string name = "v" + std::to_string(i + 1);
        renames[p.prefix[i].second] = name;
        prefix.emplace_back(p.prefix[i].first, name);
    }
    return PrenexSentence(sig, std::move(prefix), rename_vars(p.matrix, renames));
}

PrenexSentence to_prenex(const PrenexSentence& p) { return to_prenex(p.as_formula(), p.signature()); }

QuantifierPrefix extract_prefix(const PrenexSentence& p) { return p.quantifier_prefix(); }

// ------------------------------------------------------- relativization

GuardFormula::GuardFormula(FormulaPtr formula, std::string var, Signature sig)
    : formula_(std::move(formula)), var_(std::move(var)), sig_(std::move(sig)) {
    check_signature(formula_, sig_);
    auto fv = free_vars(formula_);
    if (fv.size() != 1 || !fv.count(var_))
        throw PreconditionError("guard formula must have exactly one free variable, " + var_);
}

FormulaPtr GuardFormula::applied_to(const std::string& v) const {
    if (v == var_) return formula_;
    if (all_vars(formula_).count(v)) {
        // rename the guard's bound variables out of the way before substituting
        std::map<std::string, std::vector<std::string>> scopes;
        int counter = 0;
        return substitute_var(uniquify(formula_, scopes, counter), var_, v);
    }
    return substitute_var(formula_, var_, v);
}

PrenexSentence relativize(const PrenexSentence& p, const GuardFormula& guard) {
    Signature sig = merge_signatures(p.signature(), guard.signature());
    bool all_exists = true;
    for (const auto& [q, v] : p.prefix())
        if (q == Quant::Forall) all_exists = false;

    if (all_exists) {
        // forall y. ~guard(y) | exists x1..xn (guard(x1) & ... & matrix)
        std::vector<FormulaPtr> conj;
        std::vector<std::string> evars;
        for (const auto& [q, v] : p.prefix()) {
            conj.push_back(guard.applied_to(v));
            evars.push_back(v);
        }
        conj.push_back(p.matrix());
        FormulaPtr ast =
            f_forall({"$y"}, f_or({f_not(guard.applied_to("$y")), f_exists(evars, f_and(std::move(conj)))}));
        return to_prenex(ast, sig);
    }

    std::vector<FormulaPtr> uguards, eguards;
    for (const auto& [q, v] : p.prefix())
        (q == Quant::Forall ? uguards : eguards).push_back(guard.applied_to(v));
    std::vector<FormulaPtr> consequent = std::move(eguards);
    consequent.push_back(p.matrix());
    FormulaPtr matrix = f_implies(f_and(std::move(uguards)), f_and(std::move(consequent)));
    if (guard.quantifier_free()) return PrenexSentence(sig, p.prefix(), std::move(matrix));

    FormulaPtr ast = matrix;
    for (auto it = p.prefix().rbegin(); it != p.prefix().rend(); ++it)
        ast = f_quant(it->first, it->second, std::move(ast));
    return to_prenex(ast, sig);
}

PrenexSentence prenex_or(const PrenexSentence& a, const PrenexSentence& b) {
    Signature sig = merge_signatures(a.signature(), b.signature());
    const auto& pa = a.prefix();
    const auto& pb = b.prefix();
    std::map<std::string, std::string> ra, rb;
    std::vector<std::pair<Quant, std::string>> prefix;
    size_t i = 0, j = 0;
    auto fresh = [&] { return "v" + std::to_string(prefix.size() + 1); };
    while (i < pa.size() || j < pb.size()) {
        if (i < pa.size() && j < pb.size() && pa[i].first == Quant::Exists &&
            pb[j].first == Quant::Exists) {
            // exists distributes over |, so the two heads share one variable
            std::string v = fresh();
            ra[pa[i].second] = v;
            rb[pb[j].second] = v;
            prefix.emplace_back(Quant::Exists, v);
            ++i, ++j;
        } else if (i < pa.size()) {
            std::string v = fresh();
            ra[pa[i].second] = v;
            prefix.emplace_back(pa[i].first, v);
            ++i;
        } else {
            std::string v = fresh();
            rb[pb[j].second] = v;
            prefix.emplace_back(pb[j].first, v);
            ++j;
        }
    }
    FormulaPtr matrix = f_or({rename_vars(a.matrix(), ra), rename_vars(b.matrix(), rb)});
    return PrenexSentence(std::move(sig), std::move(prefix), std::move(matrix));
}

PrenexSentence build_chi(const PrenexSentence& phi, const PrenexSentence& psi) {
    if (psi.signature() != Signature::digraph())
        throw PreconditionError("build_chi expects psi over the digraph signature E/2");
    if (phi.signature().contains("U") || phi.signature().contains("E"))
        throw PreconditionError("build_chi: phi's signature clashes with U or E");
    Signature usig({{"U", 1}});
    GuardFormula guard_u(f_rel("U", {"x"}), "x", usig);
    GuardFormula guard_not_u(f_not(f_rel("U", {"x"})), "x", usig);
    PrenexSentence left = relativize(negate(phi), guard_u);
    PrenexSentence right = relativize(psi, guard_not_u);
    return prenex_or(left, right);
}

}  // namespace hermc
