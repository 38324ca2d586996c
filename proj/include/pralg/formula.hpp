#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pralg/algebra.hpp"

namespace pralg {

// ---------------------------------------------------------------------------
// Terms: boolean terms of the event sort.

enum class TermKind { Zero, One, Ident, Complement, Meet, Join };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    std::string name; // Ident only
    TermPtr lhs, rhs;
};

inline TermPtr t_zero() { return std::make_shared<Term>(Term{TermKind::Zero, "", nullptr, nullptr}); }
inline TermPtr t_one() { return std::make_shared<Term>(Term{TermKind::One, "", nullptr, nullptr}); }
inline TermPtr t_ident(std::string name) {
    return std::make_shared<Term>(Term{TermKind::Ident, std::move(name), nullptr, nullptr});
}
inline TermPtr t_not(TermPtr t) {
    return std::make_shared<Term>(Term{TermKind::Complement, "", std::move(t), nullptr});
}
inline TermPtr t_and(TermPtr a, TermPtr b) {
    return std::make_shared<Term>(Term{TermKind::Meet, "", std::move(a), std::move(b)});
}
inline TermPtr t_or(TermPtr a, TermPtr b) {
    return std::make_shared<Term>(Term{TermKind::Join, "", std::move(a), std::move(b)});
}
/// Symmetric difference as a derived term: (a & ~b) | (~a & b).
inline TermPtr t_symdiff(const TermPtr& a, const TermPtr& b) {
    return t_or(t_and(a, t_not(b)), t_and(t_not(a), b));
}

// ---------------------------------------------------------------------------
// Formulas: [0,1]-valued conditions.

enum class FormulaKind {
    Mu,         // mu(t1)
    Dist,       // d(t1, t2)
    Const,      // rational constant in [0,1]
    Half,       // f1 / 2
    TruncMinus, // f1 -. f2
    TruncPlus,  // f1 +. f2
    AbsDiff,    // |f1 - f2|
    Min,        // min(f1, f2)
    Max,        // max(f1, f2)
    Sup,        // sup var . f1
    Inf         // inf var . f1
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FormulaKind kind;
    Rational value;  // Const only
    std::string var; // Sup/Inf only
    TermPtr t1, t2;
    FormulaPtr f1, f2;
};

inline FormulaPtr f_mu(TermPtr t) {
    return std::make_shared<Formula>(
        Formula{FormulaKind::Mu, Rational(0), "", std::move(t), nullptr, nullptr, nullptr});
}
inline FormulaPtr f_dist(TermPtr a, TermPtr b) {
    return std::make_shared<Formula>(
        Formula{FormulaKind::Dist, Rational(0), "", std::move(a), std::move(b), nullptr, nullptr});
}
inline FormulaPtr f_const(Rational q) {
    if (q < 0 || q > 1) throw ValueOutOfRange("formula constant outside [0,1]");
    return std::make_shared<Formula>(
        Formula{FormulaKind::Const, std::move(q), "", nullptr, nullptr, nullptr, nullptr});
}
inline FormulaPtr make_binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(
        Formula{k, Rational(0), "", nullptr, nullptr, std::move(a), std::move(b)});
}
inline FormulaPtr f_half(FormulaPtr f) {
    return std::make_shared<Formula>(
        Formula{FormulaKind::Half, Rational(0), "", nullptr, nullptr, std::move(f), nullptr});
}
inline FormulaPtr f_tminus(FormulaPtr a, FormulaPtr b) {
    return make_binary(FormulaKind::TruncMinus, std::move(a), std::move(b));
}
inline FormulaPtr f_tplus(FormulaPtr a, FormulaPtr b) {
    return make_binary(FormulaKind::TruncPlus, std::move(a), std::move(b));
}
inline FormulaPtr f_absdiff(FormulaPtr a, FormulaPtr b) {
    return make_binary(FormulaKind::AbsDiff, std::move(a), std::move(b));
}
inline FormulaPtr f_min(FormulaPtr a, FormulaPtr b) {
    return make_binary(FormulaKind::Min, std::move(a), std::move(b));
}
inline FormulaPtr f_max(FormulaPtr a, FormulaPtr b) {
    return make_binary(FormulaKind::Max, std::move(a), std::move(b));
}
inline FormulaPtr f_quant(FormulaKind k, std::string var, FormulaPtr body) {
    return std::make_shared<Formula>(
        Formula{k, Rational(0), std::move(var), nullptr, nullptr, std::move(body), nullptr});
}
inline FormulaPtr f_sup(std::string var, FormulaPtr body) {
    return f_quant(FormulaKind::Sup, std::move(var), std::move(body));
}
inline FormulaPtr f_inf(std::string var, FormulaPtr body) {
    return f_quant(FormulaKind::Inf, std::move(var), std::move(body));
}

namespace detail {
inline void collect_term_idents(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == TermKind::Ident) out.insert(t->name);
    collect_term_idents(t->lhs, out);
    collect_term_idents(t->rhs, out);
}

inline void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                         std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
    case FormulaKind::Mu:
    case FormulaKind::Dist: {
        std::set<std::string> idents;
        collect_term_idents(f->t1, idents);
        collect_term_idents(f->t2, idents);
        for (const auto& name : idents)
            if (!bound.count(name)) out.insert(name);
        break;
    }
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
        bool fresh = bound.insert(f->var).second;
        collect_free(f->f1, bound, out);
        if (fresh) bound.erase(f->var);
        break;
    }
    default:
        collect_free(f->f1, bound, out);
        collect_free(f->f2, bound, out);
    }
}
} // namespace detail

/// Identifiers occurring outside any quantifier binding: free variables
/// and/or named events (the two are distinguished only at evaluation time).
inline std::set<std::string> free_identifiers(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    detail::collect_free(f, bound, out);
    return out;
}

inline bool is_quantifier_free(const FormulaPtr& f) {
    if (!f) return true;
    if (f->kind == FormulaKind::Sup || f->kind == FormulaKind::Inf) return false;
    return is_quantifier_free(f->f1) && is_quantifier_free(f->f2);
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

enum class Tok {
    End, LParen, RParen, Comma, Dot, Bar, Tilde, And, Or, Minus, TMinus, TPlus,
    Slash, Number, Ident
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string text) : text_(std::move(text)) { advance(); }

    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= text_.size()) {
            current_ = {Tok::End, "", start};
            return;
        }
        char c = text_[i_];
        auto two = [&](char a, char b) {
            return c == a && i_ + 1 < text_.size() && text_[i_ + 1] == b;
        };
        if (two('/', '\\')) { i_ += 2; current_ = {Tok::And, "/\\", start}; return; }
        if (two('\\', '/')) { i_ += 2; current_ = {Tok::Or, "\\/", start}; return; }
        if (two('-', '.')) { i_ += 2; current_ = {Tok::TMinus, "-.", start}; return; }
        if (two('+', '.')) { i_ += 2; current_ = {Tok::TPlus, "+.", start}; return; }
        switch (c) {
        case '(': ++i_; current_ = {Tok::LParen, "(", start}; return;
        case ')': ++i_; current_ = {Tok::RParen, ")", start}; return;
        case ',': ++i_; current_ = {Tok::Comma, ",", start}; return;
        case '.': ++i_; current_ = {Tok::Dot, ".", start}; return;
        case '|': ++i_; current_ = {Tok::Bar, "|", start}; return;
        case '~': ++i_; current_ = {Tok::Tilde, "~", start}; return;
        case '-': ++i_; current_ = {Tok::Minus, "-", start}; return;
        case '/': ++i_; current_ = {Tok::Slash, "/", start}; return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            current_ = {Tok::Number, text_.substr(i_, j - i_), start};
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            current_ = {Tok::Ident, text_.substr(i_, j - i_), start};
            i_ = j;
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }

    std::string text_;
    std::size_t i_ = 0;
    Token current_{Tok::End, "", 0};
};

class Parser {
public:
    explicit Parser(std::string text) : lex_(std::move(text)) {}

    FormulaPtr parse_formula_all() {
        FormulaPtr f = parse_formula();
        expect(Tok::End, "end of input");
        return f;
    }

    TermPtr parse_term_all() {
        TermPtr t = parse_term();
        expect(Tok::End, "end of input");
        return t;
    }

private:
    Token expect(Tok kind, const std::string& what) {
        if (lex_.peek().kind != kind)
            throw SyntaxError("expected " + what, lex_.peek().pos);
        return lex_.take();
    }

    FormulaPtr parse_formula() {
        if (lex_.peek().kind == Tok::Ident &&
            (lex_.peek().text == "sup" || lex_.peek().text == "inf")) {
            Token q = lex_.take();
            Token var = expect(Tok::Ident, "variable after '" + q.text + "'");
            if (is_keyword(var.text))
                throw SyntaxError("'" + var.text + "' is reserved", var.pos);
            expect(Tok::Dot, "'.' after quantified variable");
            FormulaPtr body = parse_formula();
            return f_quant(q.text == "sup" ? FormulaKind::Sup : FormulaKind::Inf, var.text,
                           body);
        }
        return parse_sum();
    }

    FormulaPtr parse_sum() {
        FormulaPtr lhs = parse_postfix();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::TMinus) {
                lex_.take();
                lhs = f_tminus(lhs, parse_postfix());
            } else if (k == Tok::TPlus) {
                lex_.take();
                lhs = f_tplus(lhs, parse_postfix());
            } else {
                return lhs;
            }
        }
    }

    FormulaPtr parse_postfix() {
        FormulaPtr f = parse_primary();
        while (lex_.peek().kind == Tok::Slash) {
            Token slash = lex_.take();
            Token n = expect(Tok::Number, "'2' after '/'");
            if (n.text != "2") throw SyntaxError("only halving '/2' is supported", slash.pos);
            f = f_half(f);
        }
        return f;
    }

    FormulaPtr parse_primary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::Number: {
            Token num = lex_.take();
            Rational value(Integer(num.text));
            if (lex_.peek().kind == Tok::Slash) {
                lex_.take();
                Token den = expect(Tok::Number, "denominator");
                Integer d(den.text);
                if (d == 0) throw SyntaxError("zero denominator", den.pos);
                value /= Rational(d);
            }
            if (value < 0 || value > 1)
                throw SyntaxError("constant " + rat_string(value) + " outside [0,1]", num.pos);
            return f_const(value);
        }
        case Tok::LParen: {
            lex_.take();
            FormulaPtr f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::Bar: {
            lex_.take();
            FormulaPtr a = parse_formula();
            expect(Tok::Minus, "'-' inside |...|");
            FormulaPtr b = parse_formula();
            expect(Tok::Bar, "closing '|'");
            return f_absdiff(a, b);
        }
        case Tok::Ident: {
            Token id = lex_.take();
            if (id.text == "mu") {
                expect(Tok::LParen, "'(' after mu");
                TermPtr term = parse_term();
                expect(Tok::RParen, "')'");
                return f_mu(term);
            }
            if (id.text == "d") {
                expect(Tok::LParen, "'(' after d");
                TermPtr a = parse_term();
                expect(Tok::Comma, "','");
                TermPtr b = parse_term();
                expect(Tok::RParen, "')'");
                return f_dist(a, b);
            }
            if (id.text == "min" || id.text == "max") {
                bool mins = id.text == "min";
                expect(Tok::LParen, "'(' after " + id.text);
                FormulaPtr acc = parse_formula();
                do {
                    expect(Tok::Comma, "','");
                    FormulaPtr next = parse_formula();
                    acc = mins ? f_min(acc, next) : f_max(acc, next);
                } while (lex_.peek().kind == Tok::Comma);
                expect(Tok::RParen, "')'");
                return acc;
            }
            throw SyntaxError("unexpected identifier '" + id.text + "' in formula position",
                              id.pos);
        }
        default:
            throw SyntaxError("expected a formula", t.pos);
        }
    }

    TermPtr parse_term() { return parse_join(); }

    TermPtr parse_join() {
        TermPtr lhs = parse_meet();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            lhs = t_or(lhs, parse_meet());
        }
        return lhs;
    }

    TermPtr parse_meet() {
        TermPtr lhs = parse_term_unary();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            lhs = t_and(lhs, parse_term_unary());
        }
        return lhs;
    }

    TermPtr parse_term_unary() {
        if (lex_.peek().kind == Tok::Tilde) {
            lex_.take();
            return t_not(parse_term_unary());
        }
        return parse_term_atom();
    }

    TermPtr parse_term_atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::Number: {
            Token num = lex_.take();
            if (num.text == "0") return t_zero();
            if (num.text == "1") return t_one();
            throw SyntaxError("only 0 and 1 are term constants", num.pos);
        }
        case Tok::LParen: {
            lex_.take();
            TermPtr inner = parse_term();
            expect(Tok::RParen, "')'");
            return inner;
        }
        case Tok::Ident: {
            Token id = lex_.take();
            if (is_keyword(id.text))
                throw SyntaxError("'" + id.text + "' is reserved", id.pos);
            return t_ident(id.text);
        }
        default:
            throw SyntaxError("expected a boolean term", t.pos);
        }
    }

    static bool is_keyword(const std::string& s) {
        return s == "mu" || s == "d" || s == "min" || s == "max" || s == "sup" || s == "inf";
    }

    Lexer lex_;
};

} // namespace detail

inline FormulaPtr parse_formula(const std::string& text) {
    return detail::Parser(text).parse_formula_all();
}

inline TermPtr parse_term(const std::string& text) {
    return detail::Parser(text).parse_term_all();
}

// ---------------------------------------------------------------------------
// Pretty printer.  parse(pretty_print(f)) reproduces f node for node.

namespace detail {

inline void print_term(const TermPtr& t, int parent_level, std::string& out) {
    // levels: join 1, meet 2, unary/atom 3
    switch (t->kind) {
    case TermKind::Zero: out += "0"; return;
    case TermKind::One: out += "1"; return;
    case TermKind::Ident: out += t->name; return;
    case TermKind::Complement:
        out += "~";
        print_term(t->lhs, 3, out);
        return;
    case TermKind::Meet: {
        bool paren = parent_level > 2;
        if (paren) out += "(";
        print_term(t->lhs, 2, out);
        out += " /\\ ";
        print_term(t->rhs, 3, out); // left-assoc: right child needs tighter binding
        if (paren) out += ")";
        return;
    }
    case TermKind::Join: {
        bool paren = parent_level > 1;
        if (paren) out += "(";
        print_term(t->lhs, 1, out);
        out += " \\/ ";
        print_term(t->rhs, 2, out);
        if (paren) out += ")";
        return;
    }
    }
}

inline void print_const(const Rational& q, std::string& out) {
    if (denominator(q) == 1) {
        out += numerator(q).str();
    } else {
        out += numerator(q).str();
        out += "/";
        out += denominator(q).str();
    }
}

// levels: quantifier 0, sum 1, postfix 2, primary 3
inline void print_formula(const FormulaPtr& f, int parent_level, std::string& out) {
    switch (f->kind) {
    case FormulaKind::Mu:
        out += "mu(";
        print_term(f->t1, 0, out);
        out += ")";
        return;
    case FormulaKind::Dist:
        out += "d(";
        print_term(f->t1, 0, out);
        out += ", ";
        print_term(f->t2, 0, out);
        out += ")";
        return;
    case FormulaKind::Const:
        print_const(f->value, out);
        return;
    case FormulaKind::Half: {
        bool paren = parent_level > 2;
        if (paren) out += "(";
        // a bare constant followed by /2 would re-lex as one rational literal
        if (f->f1->kind == FormulaKind::Const) {
            out += "(";
            print_formula(f->f1, 0, out);
            out += ")";
        } else {
            print_formula(f->f1, 3, out);
        }
        out += "/2";
        if (paren) out += ")";
        return;
    }
    case FormulaKind::TruncMinus:
    case FormulaKind::TruncPlus: {
        bool paren = parent_level > 1;
        if (paren) out += "(";
        print_formula(f->f1, 1, out);
        out += f->kind == FormulaKind::TruncMinus ? " -. " : " +. ";
        print_formula(f->f2, 2, out);
        if (paren) out += ")";
        return;
    }
    case FormulaKind::AbsDiff:
        out += "|";
        print_formula(f->f1, 1, out);
        out += " - ";
        print_formula(f->f2, 1, out);
        out += "|";
        return;
    case FormulaKind::Min:
    case FormulaKind::Max:
        out += f->kind == FormulaKind::Min ? "min(" : "max(";
        print_formula(f->f1, 0, out);
        out += ", ";
        print_formula(f->f2, 0, out);
        out += ")";
        return;
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
        bool paren = parent_level > 0;
        if (paren) out += "(";
        out += f->kind == FormulaKind::Sup ? "sup " : "inf ";
        out += f->var;
        out += " . ";
        print_formula(f->f1, 0, out);
        if (paren) out += ")";
        return;
    }
    }
}

} // namespace detail

inline std::string pretty_print(const FormulaPtr& f) {
    std::string out;
    detail::print_formula(f, 0, out);
    return out;
}

inline std::string pretty_print(const TermPtr& t) {
    std::string out;
    detail::print_term(t, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Mapping from variable names to events; all events from one algebra.
using Valuation = std::map<std::string, Event>;

struct EvalOptions {
    std::size_t atom_cap = 16; // sup/inf enumerate all 2^k events; refuse above
};

namespace detail {

struct EvalEnv {
    const FiniteProbabilityAlgebra& alg;
    Valuation binding;                // quantified variables + caller bindings
    const std::map<std::string, Event>* named; // named events from a structure file
    std::size_t atom_cap;
};

inline Event eval_term(const EvalEnv& env, const TermPtr& t) {
    switch (t->kind) {
    case TermKind::Zero: return env.alg.empty_event();
    case TermKind::One: return env.alg.full_event();
    case TermKind::Ident: {
        auto it = env.binding.find(t->name);
        if (it != env.binding.end()) return it->second;
        if (env.named) {
            auto jt = env.named->find(t->name);
            if (jt != env.named->end()) return jt->second;
        }
        throw UnboundVariable(t->name);
    }
    case TermKind::Complement: return complement_event(env.alg, eval_term(env, t->lhs));
    case TermKind::Meet: return meet(eval_term(env, t->lhs), eval_term(env, t->rhs));
    case TermKind::Join: return join(eval_term(env, t->lhs), eval_term(env, t->rhs));
    }
    throw Error("corrupt term");
}

inline Rational eval_formula(EvalEnv& env, const FormulaPtr& f) {
    switch (f->kind) {
    case FormulaKind::Mu: return env.alg.mu(eval_term(env, f->t1));
    case FormulaKind::Dist:
        return env.alg.dist(eval_term(env, f->t1), eval_term(env, f->t2));
    case FormulaKind::Const: return f->value;
    case FormulaKind::Half: return eval_formula(env, f->f1) / 2;
    case FormulaKind::TruncMinus:
        return trunc_minus(eval_formula(env, f->f1), eval_formula(env, f->f2));
    case FormulaKind::TruncPlus:
        return trunc_plus(eval_formula(env, f->f1), eval_formula(env, f->f2));
    case FormulaKind::AbsDiff:
        return rat_abs(eval_formula(env, f->f1) - eval_formula(env, f->f2));
    case FormulaKind::Min: {
        Rational a = eval_formula(env, f->f1), b = eval_formula(env, f->f2);
        return a < b ? a : b;
    }
    case FormulaKind::Max: {
        Rational a = eval_formula(env, f->f1), b = eval_formula(env, f->f2);
        return a > b ? a : b;
    }
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
        const std::size_t k = env.alg.size();
        if (k > env.atom_cap)
            throw AtomCapExceeded("quantifier over " + std::to_string(k) +
                                  " atoms exceeds cap " + std::to_string(env.atom_cap));
        const bool sup = f->kind == FormulaKind::Sup;
        std::optional<Rational> best;
        auto saved = env.binding.find(f->var) != env.binding.end()
                         ? std::optional<Event>(env.binding[f->var])
                         : std::nullopt;
        for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
            env.binding[f->var] = env.alg.event_from_mask(mask);
            Rational v = eval_formula(env, f->f1);
            if (!best || (sup ? v > *best : v < *best)) best = v;
        }
        if (saved)
            env.binding[f->var] = *saved;
        else
            env.binding.erase(f->var);
        return *best;
    }
    }
    throw Error("corrupt formula");
}

} // namespace detail

/// Exact evaluation.  Quantifiers range over all 2^k events of the algebra
/// itself; throws AtomCapExceeded when k exceeds the configured cap.
inline Rational evaluate(const FiniteProbabilityAlgebra& alg, const FormulaPtr& f,
                         const Valuation& valuation = {},
                         const std::map<std::string, Event>* named_events = nullptr,
                         const EvalOptions& opts = {}) {
    detail::EvalEnv env{alg, valuation, named_events, opts.atom_cap};
    return detail::eval_formula(env, f);
}

struct EvalWitness {
    Rational value;
    std::vector<std::pair<std::string, Event>> witnesses; // prefix quantifier chain
};

/// Evaluates and, for the leading quantifier prefix, reports an optimal
/// event per quantifier (first optimum in enumeration order).
inline EvalWitness evaluate_with_witnesses(const FiniteProbabilityAlgebra& alg, FormulaPtr f,
                                           Valuation valuation = {},
                                           const std::map<std::string, Event>* named = nullptr,
                                           const EvalOptions& opts = {}) {
    EvalWitness result;
    while (f->kind == FormulaKind::Sup || f->kind == FormulaKind::Inf) {
        const std::size_t k = alg.size();
        if (k > opts.atom_cap) throw AtomCapExceeded();
        const bool sup = f->kind == FormulaKind::Sup;
        std::optional<Rational> best;
        Event best_event = alg.empty_event();
        for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
            Valuation v = valuation;
            v[f->var] = alg.event_from_mask(mask);
            Rational value = evaluate(alg, f->f1, v, named, opts);
            if (!best || (sup ? value > *best : value < *best)) {
                best = value;
                best_event = v[f->var];
            }
        }
        result.witnesses.emplace_back(f->var, best_event);
        valuation[f->var] = best_event;
        f = f->f1;
    }
    result.value = evaluate(alg, f, valuation, named, opts);
    return result;
}

// ---------------------------------------------------------------------------
// Quantifier-free normal form: every atomic subformula becomes
// mu(x^s & c) with s a sign pattern over the given variables and c a ground
// term over named events; connectives reduce to constants, /2 and -. .

namespace detail {

/// Substitutes +1/-1 signs for the variables and constant-folds.
inline TermPtr ground_cell_term(const TermPtr& t, const std::vector<std::string>& vars,
                                std::uint64_t code) {
    switch (t->kind) {
    case TermKind::Zero:
    case TermKind::One:
        return t;
    case TermKind::Ident: {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == t->name)
                return ((code >> (vars.size() - 1 - i)) & 1) ? t_one() : t_zero();
        return t; // named event
    }
    case TermKind::Complement: {
        TermPtr inner = ground_cell_term(t->lhs, vars, code);
        if (inner->kind == TermKind::Zero) return t_one();
        if (inner->kind == TermKind::One) return t_zero();
        return t_not(inner);
    }
    case TermKind::Meet: {
        TermPtr a = ground_cell_term(t->lhs, vars, code);
        TermPtr b = ground_cell_term(t->rhs, vars, code);
        if (a->kind == TermKind::Zero || b->kind == TermKind::Zero) return t_zero();
        if (a->kind == TermKind::One) return b;
        if (b->kind == TermKind::One) return a;
        return t_and(a, b);
    }
    case TermKind::Join: {
        TermPtr a = ground_cell_term(t->lhs, vars, code);
        TermPtr b = ground_cell_term(t->rhs, vars, code);
        if (a->kind == TermKind::One || b->kind == TermKind::One) return t_one();
        if (a->kind == TermKind::Zero) return b;
        if (b->kind == TermKind::Zero) return a;
        return t_or(a, b);
    }
    }
    throw Error("corrupt term");
}

/// The boolean term x^s, a left-associated meet of literals.
inline TermPtr cell_term(const std::vector<std::string>& vars, std::uint64_t code) {
    TermPtr acc;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        bool plus = (code >> (vars.size() - 1 - i)) & 1;
        TermPtr lit = plus ? t_ident(vars[i]) : t_not(t_ident(vars[i]));
        acc = acc ? t_and(acc, lit) : lit;
    }
    return acc;
}

/// mu(t) as a truncated sum of cell atoms mu(x^s & c_s).
inline FormulaPtr expand_mu(const TermPtr& t, const std::vector<std::string>& vars) {
    std::vector<FormulaPtr> atoms;
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << vars.size()); ++code) {
        TermPtr ground = ground_cell_term(t, vars, code);
        if (ground->kind == TermKind::Zero) continue;
        TermPtr cell = cell_term(vars, code);
        atoms.push_back(f_mu(ground->kind == TermKind::One ? cell : t_and(cell, ground)));
    }
    if (atoms.empty()) return f_const(Rational(0));
    FormulaPtr acc = atoms[0];
    for (std::size_t i = 1; i < atoms.size(); ++i) acc = f_tplus(acc, atoms[i]);
    return acc;
}

inline FormulaPtr nf_transform(const FormulaPtr& f, const std::vector<std::string>& vars) {
    switch (f->kind) {
    case FormulaKind::Mu: return expand_mu(f->t1, vars);
    case FormulaKind::Dist: return expand_mu(t_symdiff(f->t1, f->t2), vars);
    case FormulaKind::Const: return f;
    case FormulaKind::Half: return f_half(nf_transform(f->f1, vars));
    case FormulaKind::TruncMinus:
        return f_tminus(nf_transform(f->f1, vars), nf_transform(f->f2, vars));
    case FormulaKind::TruncPlus:
        return f_tplus(nf_transform(f->f1, vars), nf_transform(f->f2, vars));
    case FormulaKind::AbsDiff: {
        FormulaPtr a = nf_transform(f->f1, vars), b = nf_transform(f->f2, vars);
        return f_tplus(f_tminus(a, b), f_tminus(b, a)); // |a-b| = (a-.b) +. (b-.a)
    }
    case FormulaKind::Min: {
        FormulaPtr a = nf_transform(f->f1, vars), b = nf_transform(f->f2, vars);
        return f_tminus(a, f_tminus(a, b)); // min = a -. (a -. b)
    }
    case FormulaKind::Max: {
        FormulaPtr a = nf_transform(f->f1, vars), b = nf_transform(f->f2, vars);
        return f_tplus(b, f_tminus(a, b)); // max = b +. (a -. b), never truncates
    }
    case FormulaKind::Sup:
    case FormulaKind::Inf:
        throw UnsupportedConnective("normal form requires a quantifier-free formula");
    }
    throw Error("corrupt formula");
}

/// Rewrites truncated plus through truncated minus: a +. b = 1 -. ((1 -. a) -. b).
inline FormulaPtr eliminate_tplus(const FormulaPtr& f) {
    switch (f->kind) {
    case FormulaKind::Mu:
    case FormulaKind::Dist:
    case FormulaKind::Const:
        return f;
    case FormulaKind::Half: return f_half(eliminate_tplus(f->f1));
    case FormulaKind::TruncMinus:
        return f_tminus(eliminate_tplus(f->f1), eliminate_tplus(f->f2));
    case FormulaKind::TruncPlus: {
        FormulaPtr a = eliminate_tplus(f->f1), b = eliminate_tplus(f->f2);
        FormulaPtr one = f_const(Rational(1));
        return f_tminus(one, f_tminus(f_tminus(one, a), b));
    }
    default:
        throw UnsupportedConnective("unexpected connective after normal-form transform");
    }
}

} // namespace detail

/// Pr-equivalent rewrite of a quantifier-free formula: atomic subformulas all
/// of the form mu(x^s & c), connectives only rational constants, /2 and -. .
inline FormulaPtr normal_form(const FormulaPtr& f, const std::vector<std::string>& vars) {
    if (vars.empty()) throw EmptyTuple("normal form needs at least one variable");
    if (vars.size() > 16) throw AtomCapExceeded("too many variables for cell expansion");
    return detail::eliminate_tplus(detail::nf_transform(f, vars));
}

// ---------------------------------------------------------------------------
// Built-in formula builders

/// chi(x) = inf y . |mu(x /\ y) - mu(x /\ ~y)|   (how balanced x can be split)
inline FormulaPtr chi_formula(const std::string& x = "x", const std::string& y = "y") {
    TermPtr vx = t_ident(x), vy = t_ident(y);
    return f_inf(y, f_absdiff(f_mu(t_and(vx, vy)), f_mu(t_and(vx, t_not(vy)))));
}

/// psi(x) = mu(x) -. chi(x)
inline FormulaPtr psi_formula(const std::string& x = "x", const std::string& y = "y") {
    return f_tminus(f_mu(t_ident(x)), chi_formula(x, y));
}

/// phi_1(x) = inf z . d(x, z) +. psi(z); phi_n by the inductive definition
/// phi_n(x) = inf w . phi_{n-1}(x /\ w) +. phi_1(x /\ ~w).
inline FormulaPtr phi_formula(std::size_t n, const std::string& x = "x") {
    if (n == 0) throw ValueOutOfRange("phi_n needs n >= 1");
    int fresh = 0;
    auto phi1_of = [&](const TermPtr& arg) {
        int id = ++fresh;
        std::string z = "z" + std::to_string(id);
        std::string y = "y" + std::to_string(id);
        FormulaPtr psi_z =
            f_tminus(f_mu(t_ident(z)),
                     f_inf(y, f_absdiff(f_mu(t_and(t_ident(z), t_ident(y))),
                                        f_mu(t_and(t_ident(z), t_not(t_ident(y)))))));
        return f_inf(z, f_tplus(f_dist(arg, t_ident(z)), psi_z));
    };
    // Build by expanding the recursion on the argument term.
    std::function<FormulaPtr(std::size_t, TermPtr)> build =
        [&](std::size_t m, TermPtr arg) -> FormulaPtr {
        if (m == 1) return phi1_of(arg);
        std::string w = "w" + std::to_string(++fresh);
        TermPtr tw = t_ident(w);
        return f_inf(w, f_tplus(build(m - 1, t_and(arg, tw)), phi1_of(t_and(arg, t_not(tw)))));
    };
    return build(n, t_ident(x));
}

/// theta(x) = sup y . inf z . |mu(x /\ y /\ z) - mu(x /\ y /\ ~z)|
inline FormulaPtr theta_formula(const std::string& x = "x", const std::string& y = "y",
                                const std::string& z = "z") {
    TermPtr xy = t_and(t_ident(x), t_ident(y));
    return f_sup(y, f_inf(z, f_absdiff(f_mu(t_and(xy, t_ident(z))),
                                       f_mu(t_and(xy, t_not(t_ident(z)))))));
}

} // namespace pralg
