#pragma once

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pralg/atoms.hpp"
#include "pralg/entropy.hpp"
#include "pralg/formula.hpp"
#include "pralg/independence.hpp"
#include "pralg/oracles.hpp"
#include "pralg/rv.hpp"
#include "pralg/types.hpp"

// Property suites behind the `selftest` subcommand.  Each suite runs a
// seeded batch of randomized instances against an exact law; failures carry
// a minimized witness description.

namespace pralg::selftest {

struct SelfTestConfig {
    std::uint64_t seed = 20240801;
    int max_atoms = 10;
};

struct CriterionResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

namespace detail {

inline std::string describe_algebra(const FiniteProbabilityAlgebra& alg) {
    std::string s = "weights(";
    for (std::size_t i = 0; i < alg.size(); ++i) {
        if (i) s += ",";
        s += rat_string(alg.weight(i));
    }
    return s + ")";
}

/// Random quantifier-free formula over the given variables plus the named
/// event "c0".
inline TermPtr random_term(Rng& rng, int depth, const std::vector<std::string>& vars) {
    if (depth <= 0 || rng.below(3) == 0) {
        switch (rng.below(6)) {
        case 0: return t_zero();
        case 1: return t_one();
        case 2: return t_ident("c0");
        default: return t_ident(vars[rng.below(vars.size())]);
        }
    }
    switch (rng.below(3)) {
    case 0: return t_not(random_term(rng, depth - 1, vars));
    case 1:
        return t_and(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars));
    default:
        return t_or(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars));
    }
}

inline FormulaPtr random_qf_formula(Rng& rng, int depth, const std::vector<std::string>& vars) {
    if (depth <= 0 || rng.below(4) == 0) {
        switch (rng.below(4)) {
        case 0: return f_const(Rational(rng.range(0, 8), 8));
        case 1: return f_dist(random_term(rng, 2, vars), random_term(rng, 2, vars));
        default: return f_mu(random_term(rng, 2, vars));
        }
    }
    switch (rng.below(6)) {
    case 0: return f_half(random_qf_formula(rng, depth - 1, vars));
    case 1:
        return f_tminus(random_qf_formula(rng, depth - 1, vars),
                        random_qf_formula(rng, depth - 1, vars));
    case 2:
        return f_tplus(random_qf_formula(rng, depth - 1, vars),
                       random_qf_formula(rng, depth - 1, vars));
    case 3:
        return f_absdiff(random_qf_formula(rng, depth - 1, vars),
                         random_qf_formula(rng, depth - 1, vars));
    case 4:
        return f_min(random_qf_formula(rng, depth - 1, vars),
                     random_qf_formula(rng, depth - 1, vars));
    default:
        return f_max(random_qf_formula(rng, depth - 1, vars),
                     random_qf_formula(rng, depth - 1, vars));
    }
}

/// Small random algebra whose weights share one bounded denominator, for
/// the grain-search oracles.
inline FiniteProbabilityAlgebra small_denominator_algebra(Rng& rng, std::size_t atoms,
                                                          long long total) {
    total = composition_total(atoms, total);
    auto parts = random_composition(rng, atoms, total);
    std::vector<Rational> w;
    for (long long p : parts) w.emplace_back(p, total);
    return FiniteProbabilityAlgebra(std::move(w));
}

} // namespace detail

// --- criterion 1 -----------------------------------------------------------

inline CriterionResult axiom_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"axiom suite (200 random algebras)", true, ""};
    Rng rng(cfg.seed + 1);
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 1 + rng.below(static_cast<std::uint64_t>(cfg.max_atoms));
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), n);
        AxiomReport rep = verify_axioms(alg, rng.next());
        if (!rep.all_pass()) {
            r.pass = false;
            for (const AxiomCheck& c : rep.checks)
                if (!c.pass) {
                    r.detail = "instance " + std::to_string(i) + ": " + c.name + " (" +
                               c.witness + ") on " + detail::describe_algebra(alg);
                    break;
                }
            return r;
        }
    }
    r.detail = "200 algebras, every axiom check exact";
    return r;
}

// --- criterion 2 -----------------------------------------------------------

inline CriterionResult phi_oracle_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"phi_n closed form vs quantifier brute force (<= 8 atoms, n <= 4)", true,
                      ""};
    Rng rng(cfg.seed + 2);
    int algebras = 0;
    for (std::size_t k = 1; k <= 8; ++k) {
        std::vector<FiniteProbabilityAlgebra> algs;
        algs.push_back(uniform_algebra(k));
        for (int extra = 0; extra < 4; ++extra) algs.push_back(random_algebra(rng.next(), k));
        for (const auto& alg : algs) {
            ++algebras;
            PhiBruteForce tables(alg, 4);
            for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
                Event a = alg.event_from_mask(mask);
                Rational prev = alg.mu(a); // phi_0 = mu
                for (std::size_t n = 1; n <= 4; ++n) {
                    Rational closed = phi_n_closed(alg, a, n);
                    Rational brute = tables.phi(a, n);
                    if (closed != brute) {
                        r.pass = false;
                        r.detail = "phi_" + std::to_string(n) + " mismatch (closed " +
                                   rat_string(closed) + ", brute " + rat_string(brute) +
                                   ") on " + detail::describe_algebra(alg);
                        return r;
                    }
                    if (closed > prev) {
                        r.pass = false;
                        r.detail = "phi chain not decreasing at n=" + std::to_string(n);
                        return r;
                    }
                    if (at_n(alg, a, n) != trunc_minus(prev, closed)) {
                        r.pass = false;
                        r.detail = "at_n != phi_{n-1} -. phi_n at n=" + std::to_string(n);
                        return r;
                    }
                    if (n >= a.count() && closed != 0) {
                        r.pass = false;
                        r.detail = "phi_n nonzero past the atom count of a";
                        return r;
                    }
                    prev = closed;
                }
                if (tables.chi(a) != chi_closed(alg, a)) {
                    r.pass = false;
                    r.detail = "chi mismatch on " + detail::describe_algebra(alg);
                    return r;
                }
            }
        }
    }
    r.detail = std::to_string(algebras) + " algebras, every event, n <= 4, exact";
    return r;
}

// --- criterion 3 -----------------------------------------------------------

inline CriterionResult normal_form_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"normal-form soundness (1000 random formulas)", true, ""};
    Rng rng(cfg.seed + 3);
    for (int i = 0; i < 1000; ++i) {
        std::size_t atoms = 1 + rng.below(8);
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        std::size_t nvars = 1 + rng.below(3);
        std::vector<std::string> vars;
        for (std::size_t v = 0; v < nvars; ++v) vars.push_back("x" + std::to_string(v + 1));
        FormulaPtr f = detail::random_qf_formula(rng, 5, vars);
        Valuation val;
        for (const auto& v : vars) val.emplace(v, random_event(rng, alg));
        std::map<std::string, Event> named{{"c0", random_event(rng, alg)}};
        Rational direct = evaluate(alg, f, val, &named);
        FormulaPtr nf = normal_form(f, vars);
        Rational rewritten = evaluate(alg, nf, val, &named);
        if (direct != rewritten) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) + ": " + pretty_print(f) + " -> " +
                       rat_string(direct) + " but normal form gives " + rat_string(rewritten);
            return r;
        }
    }
    r.detail = "1000 formulas, exact agreement";
    return r;
}

// --- criterion 4 -----------------------------------------------------------

inline CriterionResult independence_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"independence characterizations agree (500 instances)", true, ""};
    Rng rng(cfg.seed + 4);
    for (int i = 0; i < 500; ++i) {
        std::size_t atoms = 2 + rng.below(7);
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        auto events = [&](std::size_t count) {
            std::vector<Event> out;
            for (std::size_t j = 0; j < count; ++j) out.push_back(random_event(rng, alg));
            return out;
        };
        std::vector<Event> S = events(1 + rng.below(2));
        std::vector<Event> T = events(1 + rng.below(2));
        std::vector<Event> W = events(rng.below(2));
        IndependenceReport rep = characterization_report(alg, S, T, W);
        if (!rep.all_agree()) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) + ": conditions diverge (" +
                       std::to_string(rep.product_identity) +
                       std::to_string(rep.cond_prob_drop) + std::to_string(rep.w_measurable) +
                       std::to_string(rep.l2_norms_equal) + ") on " +
                       detail::describe_algebra(alg);
            return r;
        }
        if (rep.independent() != independent(alg, S, T, W)) {
            r.pass = false;
            r.detail = "defect-zero test disagrees with independent()";
            return r;
        }
        if (independence_defect(alg, S, T, W) != independence_defect(alg, T, S, W)) {
            r.pass = false;
            r.detail = "defect not symmetric in S and T";
            return r;
        }
    }
    r.detail = "500 instances, all four conditions agree";
    return r;
}

// --- criterion 5 -----------------------------------------------------------

inline CriterionResult extension_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"extension lemma contract (500 instances)", true, ""};
    Rng rng(cfg.seed + 5);
    for (int i = 0; i < 500; ++i) {
        std::size_t atoms = 2 + rng.below(7);
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        std::size_t m = 1 + rng.below(4);
        std::vector<Event> A = random_partition(rng, alg, m);
        Subalgebra D = random_subalgebra(rng, alg, 4);
        Subalgebra C = random_coarsening(rng, alg, D);
        IndependentCopy copy = extend_with_independent_copy(alg, A, C, D);
        const auto& ext = copy.extension;

        Rational mass = ext.mu(ext.full_event());
        if (mass != 1) {
            r.pass = false;
            r.detail = "extension mass " + rat_string(mass);
            return r;
        }
        bool measures_ok = true;
        for (std::size_t x = 0; x < alg.size(); ++x)
            if (ext.mu(copy.atom_images[x]) != alg.weight(x)) measures_ok = false;
        if (!measures_ok) {
            r.pass = false;
            r.detail = "embedding does not preserve measure";
            return r;
        }
        Subalgebra C_img = copy.map_subalgebra(alg, C);
        bool cp_ok = true;
        for (std::size_t idx = 0; idx < m; ++idx) {
            StepFunction lhs = cond_prob(ext, copy.copies[idx], C_img);
            StepFunction rhs = cond_prob(ext, copy.map_event(alg, A[idx]), C_img);
            if (lhs != rhs) cp_ok = false;
        }
        if (!cp_ok) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) + ": P(E_i|C') != P(A_i'|C')";
            return r;
        }
        std::vector<Event> D_img, C_gen;
        for (std::size_t j = 0; j < D.block_count(); ++j)
            D_img.push_back(copy.map_event(alg, D.block_event(j)));
        for (std::size_t j = 0; j < C.block_count(); ++j)
            C_gen.push_back(copy.map_event(alg, C.block_event(j)));
        if (!independent(ext, copy.copies, D_img, C_gen)) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) + ": copies not independent from D'";
            return r;
        }
    }
    r.detail = "500 instances, exact";
    return r;
}

// --- criterion 6 -----------------------------------------------------------

inline CriterionResult distance_theorem_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"type-distance theorem: optimal realization vs oracle (<= 6 atoms)",
                      true, ""};
    Rng rng(cfg.seed + 6);
    for (int i = 0; i < 80; ++i) {
        std::size_t atoms = 3 + rng.below(4); // 3..6
        FiniteProbabilityAlgebra alg =
            detail::small_denominator_algebra(rng, atoms, 6 + rng.below(5));
        std::size_t n = 2 + rng.below(2); // 2..3
        std::vector<Event> a = random_partition(rng, alg, n);
        std::vector<Event> b = random_partition(rng, alg, n);
        Subalgebra C = random_subalgebra(rng, alg, 3);
        Rational closed = type_distance_partitions(alg, a, b, C);

        Realization opt = optimal_realization(alg, a, b, C);
        Subalgebra C_img = opt.base_image;
        Rational achieved = 0;
        bool per_coord_ok = true;
        for (std::size_t idx = 0; idx < n; ++idx) {
            Rational d = opt.extension.dist(opt.map_event(alg, a[idx]), opt.tuple[idx]);
            Rational want = l1_distance(alg, cond_prob(alg, a[idx], C),
                                        cond_prob(alg, b[idx], C));
            if (d != want) per_coord_ok = false;
            if (d > achieved) achieved = d;
        }
        if (!per_coord_ok || achieved != closed) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) +
                       ": optimal realization misses the bound on " +
                       detail::describe_algebra(alg);
            return r;
        }
        bool type_ok = true;
        for (std::size_t idx = 0; idx < n; ++idx) {
            StepFunction lhs = cond_prob(opt.extension, opt.tuple[idx], C_img);
            StepFunction rhs_src = cond_prob(alg, b[idx], C);
            if (lhs.values != rhs_src.values) type_ok = false;
        }
        if (!type_ok) {
            r.pass = false;
            r.detail = "b' does not realize tp(b/C)";
            return r;
        }
        long long split = 2 + static_cast<long long>(rng.below(2)); // 2..3
        Rational oracle = oracle::realization_distance_oracle(alg, a, b, C, split, true);
        if (oracle != closed) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) + ": oracle " + rat_string(oracle) +
                       " vs closed " + rat_string(closed) + " (split " +
                       std::to_string(split) + ") on " + detail::describe_algebra(alg);
            return r;
        }
    }
    r.detail = "80 instances: optimal realization attains the bound, oracle never beats it";
    return r;
}

// --- criterion 7 -----------------------------------------------------------

inline CriterionResult lipschitz_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"Lipschitz bracket contains the general-tuple oracle (<= 5 atoms)", true,
                      ""};
    Rng rng(cfg.seed + 7);
    for (int i = 0; i < 40; ++i) {
        std::size_t atoms = 3 + rng.below(3); // 3..5
        FiniteProbabilityAlgebra alg =
            detail::small_denominator_algebra(rng, atoms, 4 + rng.below(4));
        std::size_t n = 1 + rng.below(2); // 1..2
        std::vector<Event> a, b;
        for (std::size_t v = 0; v < n; ++v) {
            a.push_back(random_event(rng, alg));
            b.push_back(random_event(rng, alg));
        }
        Subalgebra C = random_subalgebra(rng, alg, 2);
        LipschitzBracket bracket = lipschitz_check(alg, a, b, C);
        Rational oracle = oracle::realization_distance_oracle(alg, a, b, C, 2, false);
        if (oracle < bracket.lower || oracle > bracket.upper) {
            r.pass = false;
            r.detail = "instance " + std::to_string(i) + ": oracle " + rat_string(oracle) +
                       " outside [" + rat_string(bracket.lower) + ", " +
                       rat_string(bracket.upper) + "] on " + detail::describe_algebra(alg);
            return r;
        }
        if (n == 1 && oracle != bracket.middle) {
            r.pass = false;
            r.detail = "n=1 bracket should collapse to the exact distance";
            return r;
        }
    }
    r.detail = "40 instances inside 2^{-n+1} d_n <= d_{2^n} <= n d_n";
    return r;
}

// --- criterion 8 -----------------------------------------------------------

inline CriterionResult sfb_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"SFB inequality (500 instances, eps in {1/2,1/4,1/8})", true, ""};
    Rng rng(cfg.seed + 8);
    const std::vector<Rational> epsilons{Rational(1, 2), Rational(1, 4), Rational(1, 8)};
    for (int i = 0; i < 500; ++i) {
        std::size_t atoms = 2 + rng.below(7);
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        std::size_t n = 1 + rng.below(3);
        std::vector<Event> a = random_partition(rng, alg, n);
        std::vector<Event> b = random_partition(rng, alg, n);
        Subalgebra C = random_subalgebra(rng, alg, 4);
        Rational d = type_distance_partitions(alg, a, b, C);
        Rational dcb = dCb(alg, a, b, C);
        Rational pow = Rational(1);
        for (std::size_t q = 1; q < n; ++q) pow /= 2; // 2^{-n+1}
        for (const Rational& eps : epsilons) {
            Rational lhs = pow * d;
            Rational rhs = (1 / eps + 1) * (1 / eps + 1) * dcb + 2 * eps;
            if (lhs > rhs) {
                r.pass = false;
                r.detail = "instance " + std::to_string(i) + ": eps " + rat_string(eps) +
                           ", lhs " + rat_string(lhs) + " > rhs " + rat_string(rhs);
                return r;
            }
        }
        bool desc_equal = type_of(alg, a, C) == type_of(alg, b, C);
        if ((dcb == 0) != desc_equal) {
            r.pass = false;
            r.detail = "dCb zero does not coincide with descriptor equality";
            return r;
        }
    }
    r.detail = "500 instances, exact rational comparison";
    return r;
}

// --- criterion 9 -----------------------------------------------------------

inline CriterionResult rv_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"RV sandwich, rho = L1, dyadic coherence (500 instances)", true, ""};
    Rng rng(cfg.seed + 9);
    for (int i = 0; i < 500; ++i) {
        std::size_t atoms = 1 + rng.below(8);
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        std::size_t n = 1 + rng.below(6);
        RVPartition E = RVPartition::of(alg, random_partition(rng, alg, n));
        RVPartition F = RVPartition::of(alg, random_partition(rng, alg, n));
        Rational rho = rho_n(alg, E, F);
        Rational dp = dP_rv(alg, E, F);
        if (!(dp / static_cast<long long>(n) <= rho && rho <= dp)) {
            r.pass = false;
            r.detail = "sandwich violated: rho " + rat_string(rho) + ", dP " + rat_string(dp);
            return r;
        }
        Rational l1 = l1_distance(alg, step_function_of(alg, E), step_function_of(alg, F));
        if (rho != l1) {
            r.pass = false;
            r.detail = "rho_n " + rat_string(rho) + " != L1 " + rat_string(l1);
            return r;
        }
        if ((rho == 0) != (E.parts == F.parts)) {
            r.pass = false;
            r.detail = "rho_n zero does not coincide with equal partitions";
            return r;
        }
        // dyadic approximation of a conditional probability
        Subalgebra C = random_subalgebra(rng, alg, 4);
        StepFunction f = cond_prob(alg, random_event(rng, alg), C);
        std::size_t depth = 1 + rng.below(3);
        RVPartition approx = dyadic_approx(alg, f, depth + 1);
        if (project_pi(alg, approx) != dyadic_approx(alg, f, depth)) {
            r.pass = false;
            r.detail = "dyadic approximations not pi-coherent";
            return r;
        }
        Rational err = l1_distance(alg, step_function_of(alg, approx), f);
        if (err > Rational(1, 1ll << (depth + 1))) {
            r.pass = false;
            r.detail = "dyadic error " + rat_string(err) + " above 2^-depth";
            return r;
        }
        // pi gap bound: f_E <= f_pi(E) <= f_E + 1/m
        if (E.n % 2 == 0) {
            RVPartition P = project_pi(alg, E);
            Rational gap =
                l1_distance(alg, step_function_of(alg, E), step_function_of(alg, P));
            if (gap > Rational(2, static_cast<long long>(E.n))) {
                r.pass = false;
                r.detail = "projection gap above 1/m";
                return r;
            }
        }
    }
    r.detail = "500 instances, exact";
    return r;
}

// --- criterion 10 ----------------------------------------------------------

inline CriterionResult entropy_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"entropy: chain rule, drop bound, forking gap (500 instances)", true,
                      ""};
    const double tol = 1e-12;
    {
        FiniteProbabilityAlgebra coin = uniform_algebra(2);
        double h = cond_entropy(coin, Subalgebra::discrete(coin), Subalgebra::trivial(coin));
        if (std::fabs(h - std::log(2.0)) > tol) {
            r.pass = false;
            r.detail = "fair-coin entropy " + std::to_string(h) + " != ln 2";
            return r;
        }
    }
    Rng rng(cfg.seed + 10);
    const std::vector<Rational> epsilons{Rational(1, 8), Rational(1, 4), Rational(1, 2)};
    for (int i = 0; i < 500; ++i) {
        std::size_t atoms = 2 + rng.below(7);
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        Subalgebra A = random_subalgebra(rng, alg, 4);
        Subalgebra C = random_subalgebra(rng, alg, 4);
        Subalgebra D = random_subalgebra(rng, alg, 4);
        Subalgebra E = random_coarsening(rng, alg, D);

        ChainRuleReport chain = chain_rule_check(alg, A, C, E);
        if (chain.diff > tol) {
            r.pass = false;
            r.detail = "chain rule off by " + std::to_string(chain.diff);
            return r;
        }
        EntropyDropReport drop = entropy_drop(alg, A, E, D);
        if (drop.rhs_bound < 0) {
            r.pass = false;
            r.detail = "Pythagoras bound negative";
            return r;
        }
        if (drop.gap < rat_double(drop.rhs_bound) - tol) {
            r.pass = false;
            r.detail = "entropy drop " + std::to_string(drop.gap) + " below exact bound " +
                       rat_string(drop.rhs_bound);
            return r;
        }
        std::vector<Event> A_atoms, D_atoms, E_gens;
        for (std::size_t j = 0; j < A.block_count(); ++j) A_atoms.push_back(A.block_event(j));
        for (std::size_t j = 0; j < D.block_count(); ++j) D_atoms.push_back(D.block_event(j));
        for (std::size_t j = 0; j < E.block_count(); ++j) E_gens.push_back(E.block_event(j));
        bool indep = independent(alg, A_atoms, D_atoms, E_gens);
        if (indep != (std::fabs(drop.gap) <= tol)) {
            r.pass = false;
            r.detail = "gap-zero test disagrees with independence (gap " +
                       std::to_string(drop.gap) + ")";
            return r;
        }
        if (indep != (drop.rhs_bound == 0)) {
            r.pass = false;
            r.detail = "exact bound zero iff independent violated";
            return r;
        }
        std::size_t m = 1 + rng.below(4);
        std::vector<Event> tuple = random_partition(rng, alg, m);
        for (const Rational& eps : epsilons) {
            EntropyForkingReport gapr = entropy_forking_gap(alg, tuple, E, D, eps, tol);
            if (!gapr.inequality_ok) {
                r.pass = false;
                r.detail = "instance " + std::to_string(i) + ": eps-fork at " +
                           rat_string(eps) + " but entropy gap " +
                           std::to_string(gapr.h_coarse - gapr.h_fine) + " <= eps^2/2";
                return r;
            }
        }
    }
    r.detail = "500 instances within 1e-12; ln 2 spot check exact to 1e-12";
    return r;
}

// --- criterion 11 ----------------------------------------------------------

inline CriterionResult chain_bound_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"epsilon-forking chains never exceed (1/eps)^2 (random search)", true,
                      ""};
    Rng rng(cfg.seed + 11);
    const std::vector<Rational> epsilons{Rational(1, 2), Rational(1, 3), Rational(1, 4)};
    for (int i = 0; i < 200; ++i) {
        std::size_t atoms = 2 + static_cast<std::size_t>(
                                    rng.below(static_cast<std::uint64_t>(cfg.max_atoms - 1)));
        FiniteProbabilityAlgebra alg = random_algebra(rng.next(), atoms);
        // maximal-length refinement chain: single block merges from the
        // discrete algebra down to the trivial one, then reversed
        std::vector<Subalgebra> chain{Subalgebra::trivial(alg)};
        std::vector<Subalgebra> down{Subalgebra::discrete(alg)};
        while (down.back().block_count() > 1 && down.size() < 10)
            down.push_back(merge_two_blocks(rng, alg, down.back()));
        for (auto it = down.rbegin(); it != down.rend(); ++it)
            if (*it != chain.back()) chain.push_back(*it);
        std::size_t m = 1 + rng.below(4);
        std::vector<Event> tuple = random_partition(rng, alg, m);
        for (const Rational& eps : epsilons) {
            ForkingChainReport rep = forking_chain_check(alg, tuple, chain, eps);
            if (!rep.ok) {
                r.pass = false;
                r.detail = "instance " + std::to_string(i) + ": " +
                           std::to_string(rep.fork_count) + " forks at eps " +
                           rat_string(eps) + " on " + detail::describe_algebra(alg);
                return r;
            }
        }
    }
    r.detail = "200 random chains (<= 10 steps), no violation";
    return r;
}

// --- criterion 12 ----------------------------------------------------------

inline CriterionResult classification_suite(const SelfTestConfig& cfg) {
    CriterionResult r{"elementary equivalence iff atom bijection (200 pairs)", true, ""};
    Rng rng(cfg.seed + 12);
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 1 + rng.below(8);
        FiniteProbabilityAlgebra a = random_algebra(rng.next(), n);
        FiniteProbabilityAlgebra b = [&] {
            if (rng.coin()) {
                // a permuted copy; must be equivalent
                std::vector<Rational> w = a.weights();
                for (std::size_t j = w.size(); j > 1; --j)
                    std::swap(w[j - 1], w[rng.below(j)]);
                return FiniteProbabilityAlgebra(std::move(w));
            }
            return random_algebra(rng.next(), 1 + rng.below(8));
        }();
        bool equivalent = elementarily_equivalent(a, b);
        auto iso = find_isomorphism(a, b);
        if (equivalent != iso.has_value()) {
            r.pass = false;
            r.detail = "pair " + std::to_string(i) + ": equivalence " +
                       std::to_string(equivalent) + " but bijection " +
                       std::to_string(iso.has_value());
            return r;
        }
        if (iso) {
            std::vector<bool> hit(b.size(), false);
            for (std::size_t x = 0; x < a.size(); ++x) {
                if (a.weight(x) != b.weight((*iso)[x]) || hit[(*iso)[x]]) {
                    r.pass = false;
                    r.detail = "returned map is not a weight-preserving bijection";
                    return r;
                }
                hit[(*iso)[x]] = true;
            }
        }
    }
    r.detail = "200 pairs, exact";
    return r;
}

// ---------------------------------------------------------------------------

inline std::vector<CriterionResult> run_all(const SelfTestConfig& cfg,
                                            std::ostream* progress = nullptr) {
    std::vector<CriterionResult> results;
    auto run = [&](CriterionResult (*suite)(const SelfTestConfig&)) {
        CriterionResult res = suite(cfg);
        if (progress)
            (*progress) << (res.pass ? "[PASS] " : "[FAIL] ") << res.name
                        << (res.detail.empty() ? "" : " — " + res.detail) << "\n";
        results.push_back(std::move(res));
    };
    run(axiom_suite);
    run(phi_oracle_suite);
    run(normal_form_suite);
    run(independence_suite);
    run(extension_suite);
    run(distance_theorem_suite);
    run(lipschitz_suite);
    run(sfb_suite);
    run(rv_suite);
    run(entropy_suite);
    run(chain_bound_suite);
    run(classification_suite);
    return results;
}

} // namespace pralg::selftest
