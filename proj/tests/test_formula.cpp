#include <catch2/catch_amalgamated.hpp>

#include "pralg/atoms.hpp"
#include "pralg/formula.hpp"

using namespace pralg;

namespace {

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind || a->name != b->name) return false;
    return term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind || a->value != b->value || a->var != b->var) return false;
    return term_equal(a->t1, b->t1) && term_equal(a->t2, b->t2) &&
           formula_equal(a->f1, b->f1) && formula_equal(a->f2, b->f2);
}

FormulaPtr random_formula(Rng& rng, int depth, bool allow_quant) {
    std::vector<std::string> vars{"x", "y", "z"};
    auto term = [&](auto&& self, int d) -> TermPtr {
        if (d <= 0 || rng.below(3) == 0) {
            switch (rng.below(5)) {
            case 0: return t_zero();
            case 1: return t_one();
            default: return t_ident(vars[rng.below(vars.size())]);
            }
        }
        switch (rng.below(3)) {
        case 0: return t_not(self(self, d - 1));
        case 1: return t_and(self(self, d - 1), self(self, d - 1));
        default: return t_or(self(self, d - 1), self(self, d - 1));
        }
    };
    if (depth <= 0 || rng.below(4) == 0) {
        switch (rng.below(3)) {
        case 0: return f_const(Rational(rng.range(0, 4), 4));
        case 1: return f_dist(term(term, 2), term(term, 2));
        default: return f_mu(term(term, 2));
        }
    }
    switch (rng.below(allow_quant ? 8 : 6)) {
    case 0: return f_half(random_formula(rng, depth - 1, allow_quant));
    case 1:
        return f_tminus(random_formula(rng, depth - 1, allow_quant),
                        random_formula(rng, depth - 1, allow_quant));
    case 2:
        return f_tplus(random_formula(rng, depth - 1, allow_quant),
                       random_formula(rng, depth - 1, allow_quant));
    case 3:
        return f_absdiff(random_formula(rng, depth - 1, allow_quant),
                         random_formula(rng, depth - 1, allow_quant));
    case 4:
        return f_min(random_formula(rng, depth - 1, allow_quant),
                     random_formula(rng, depth - 1, allow_quant));
    case 5:
        return f_max(random_formula(rng, depth - 1, allow_quant),
                     random_formula(rng, depth - 1, allow_quant));
    case 6: return f_sup(vars[rng.below(3)], random_formula(rng, depth - 1, allow_quant));
    default: return f_inf(vars[rng.below(3)], random_formula(rng, depth - 1, allow_quant));
    }
}

} // namespace

TEST_CASE("parsing the grammar") {
    FormulaPtr f = parse_formula("mu(x /\\ y)");
    REQUIRE(f->kind == FormulaKind::Mu);
    REQUIRE(f->t1->kind == TermKind::Meet);
    CHECK(f->t1->lhs->name == "x");
    CHECK(f->t1->rhs->name == "y");

    // the balanced-split formula chi(x)
    FormulaPtr chi = parse_formula("inf y . |mu(x /\\ y) - mu(x /\\ ~y)|");
    CHECK(formula_equal(chi, chi_formula("x", "y")));

    try {
        parse_formula("mu(");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.pos == 3);
    }

    CHECK(parse_formula("1/2")->value == Rational(1, 2));
    CHECK(parse_formula("3/4")->value == Rational(3, 4));
    CHECK_THROWS_AS(parse_formula("5/4"), SyntaxError);
    // halving binds after a primary; 1/2/2 is the constant 1/2 halved
    CHECK(evaluate(uniform_algebra(1), parse_formula("1/2/2")) == Rational(1, 4));
    CHECK_THROWS_AS(parse_formula("mu(x) /3"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("sup mu . mu(x)"), SyntaxError);
}

TEST_CASE("pretty print then parse is the identity") {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f = random_formula(rng, 4, true);
        std::string text = pretty_print(f);
        INFO(text);
        CHECK(formula_equal(parse_formula(text), f));
    }
}

TEST_CASE("evaluating chi and mu") {
    auto coin = uniform_algebra(2);
    Valuation v{{"x", coin.full_event()}};
    EvalWitness w = evaluate_with_witnesses(coin, chi_formula(), v);
    CHECK(w.value == 0);
    REQUIRE(w.witnesses.size() == 1);
    CHECK(w.witnesses[0].second.count() == 1); // a single atom balances the coin

    auto point = uniform_algebra(1);
    CHECK(evaluate(point, chi_formula(), {{"x", point.full_event()}}) == 1);

    CHECK(evaluate(coin, parse_formula("mu(1)")) == 1);
    CHECK(evaluate(coin, parse_formula("mu(0)")) == 0);
}

TEST_CASE("evaluation errors") {
    auto coin = uniform_algebra(2);
    CHECK_THROWS_AS(evaluate(coin, parse_formula("mu(q)")), UnboundVariable);
    auto big = uniform_algebra(17);
    CHECK_THROWS_AS(evaluate(big, parse_formula("inf y . mu(y)")), AtomCapExceeded);
}

TEST_CASE("monotone quantifier bounds") {
    Rng rng(32);
    for (int i = 0; i < 40; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(5));
        FormulaPtr body = random_formula(rng, 3, false);
        Valuation v{{"x", random_event(rng, alg)},
                    {"y", random_event(rng, alg)},
                    {"z", random_event(rng, alg)}};
        Rational mid = evaluate(alg, body, v);
        CHECK(evaluate(alg, f_inf("x", body), v) <= mid);
        CHECK(mid <= evaluate(alg, f_sup("x", body), v));
    }
}

namespace {
void collect_atoms(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (!f) return;
    if (f->kind == FormulaKind::Mu || f->kind == FormulaKind::Dist) {
        out.push_back(f);
        return;
    }
    collect_atoms(f->f1, out);
    collect_atoms(f->f2, out);
}
} // namespace

TEST_CASE("normal form: cell expansion and restricted connectives") {
    auto alg = uniform_algebra(3);
    Valuation v{{"x1", alg.event({0, 1})}, {"x2", alg.event({1, 2})}};

    FormulaPtr join2 = parse_formula("mu(x1 \\/ x2)");
    FormulaPtr nf = normal_form(join2, {"x1", "x2"});
    std::vector<FormulaPtr> atoms;
    collect_atoms(nf, atoms);
    CHECK(atoms.size() == 3); // the three cells with a +1 coordinate
    for (const FormulaPtr& a : atoms) CHECK(a->kind == FormulaKind::Mu);
    CHECK(evaluate(alg, nf, v) == evaluate(alg, join2, v));

    FormulaPtr ident = normal_form(parse_formula("mu(x1)"), {"x1"});
    CHECK(pretty_print(ident) == "mu(x1)");

    FormulaPtr d12 = parse_formula("d(x1, x2)");
    FormulaPtr nfd = normal_form(d12, {"x1", "x2"});
    atoms.clear();
    collect_atoms(nfd, atoms);
    CHECK(atoms.size() == 2); // the two mixed cells
    CHECK(evaluate(alg, nfd, v) == evaluate(alg, d12, v));

    CHECK_THROWS_AS(normal_form(parse_formula("inf y . mu(y)"), {"x1"}),
                    UnsupportedConnective);
}

namespace {
bool restricted_connectives_only(const FormulaPtr& f) {
    if (!f) return true;
    switch (f->kind) {
    case FormulaKind::Mu:
    case FormulaKind::Const:
        return true;
    case FormulaKind::Half: return restricted_connectives_only(f->f1);
    case FormulaKind::TruncMinus:
        return restricted_connectives_only(f->f1) && restricted_connectives_only(f->f2);
    default: return false;
    }
}
} // namespace

TEST_CASE("normal form soundness on random formulas") {
    Rng rng(33);
    for (int i = 0; i < 200; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(6));
        FormulaPtr f = random_formula(rng, 4, false);
        Valuation v{{"x", random_event(rng, alg)},
                    {"y", random_event(rng, alg)},
                    {"z", random_event(rng, alg)}};
        FormulaPtr nf = normal_form(f, {"x", "y", "z"});
        CHECK(restricted_connectives_only(nf));
        CHECK(evaluate(alg, nf, v) == evaluate(alg, f, v));
    }
}

TEST_CASE("named events resolve through the event table") {
    auto alg = uniform_algebra(4);
    std::map<std::string, Event> named{{"A", alg.event({0, 1})}};
    CHECK(evaluate(alg, parse_formula("mu(A)"), {}, &named) == Rational(1, 2));
    FormulaPtr f = parse_formula("mu(x /\\ A)");
    Valuation v{{"x", alg.event({1, 2})}};
    FormulaPtr nf = normal_form(f, {"x"});
    CHECK(evaluate(alg, nf, v, &named) == evaluate(alg, f, v, &named));
}

TEST_CASE("built-in formulas match the closed forms") {
    Rng rng(34);
    for (int i = 0; i < 12; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(4));
        Event a = random_event(rng, alg);
        Valuation v{{"x", a}};
        CHECK(evaluate(alg, chi_formula(), v) == chi_closed(alg, a));
        CHECK(evaluate(alg, theta_formula(), v) == theta_closed(alg, a));
        CHECK(evaluate(alg, psi_formula(), v) ==
              trunc_minus(alg.mu(a), chi_closed(alg, a)));
        for (std::size_t n = 1; n <= 2; ++n)
            CHECK(evaluate(alg, phi_formula(n), v) == phi_n_closed(alg, a, n));
    }
    // one deeper phi on a tiny algebra
    auto tiny = random_algebra(99, 3);
    Event a = tiny.event({0, 1});
    CHECK(evaluate(tiny, phi_formula(3), {{"x", a}}) == phi_n_closed(tiny, a, 3));
}
