#pragma once

#include <cmath>
#include <vector>

#include "pralg/algebra.hpp"
#include "pralg/conditional.hpp"
#include "pralg/independence.hpp"
#include "pralg/types.hpp"

namespace pralg {

/// Conditional entropy H(A/C) = -sum_j mu(e_j) sum_i p_ij ln p_ij over
/// C-blocks e_j and A-atoms a_i, with p_ij = mu(a_i & e_j)/mu(e_j) and
/// 0 ln 0 := 0 by explicit branch.  Natural log, binary64.
inline double cond_entropy(const FiniteProbabilityAlgebra& alg, const Subalgebra& A,
                           const Subalgebra& C) {
    if (A.algebra_id() != alg.id() || C.algebra_id() != alg.id()) throw ForeignEvent();
    double h = 0.0;
    for (std::size_t j = 0; j < C.block_count(); ++j) {
        Event block = C.block_event(j);
        Rational mass = alg.mu(block);
        double weight = rat_double(mass);
        for (std::size_t i = 0; i < A.block_count(); ++i) {
            Rational p = alg.mu(meet(A.block_event(i), block)) / mass;
            if (p == 0) continue;
            double pd = rat_double(p);
            h -= weight * pd * std::log(pd);
        }
    }
    return h;
}

struct ChainRuleReport {
    double lhs = 0;  // H(A v C / E)
    double rhs = 0;  // H(A/E) + H(C/A v E)
    double diff = 0; // |lhs - rhs|
};

/// H(A v C / E) = H(A/E) + H(C/A v E).
inline ChainRuleReport chain_rule_check(const FiniteProbabilityAlgebra& alg,
                                        const Subalgebra& A, const Subalgebra& C,
                                        const Subalgebra& E) {
    ChainRuleReport r;
    r.lhs = cond_entropy(alg, join_subalgebras(alg, A, C), E);
    r.rhs = cond_entropy(alg, A, E) + cond_entropy(alg, C, join_subalgebras(alg, A, E));
    r.diff = std::fabs(r.lhs - r.rhs);
    return r;
}

struct EntropyDropReport {
    double gap = 0;     // H(A/E) - H(A/D), binary64
    Rational rhs_bound; // (1/2) sum_j (||P(a_j|D)||_2^2 - ||P(a_j|E)||_2^2), exact
    double h_coarse = 0;
    double h_fine = 0;
};

/// Quantitative entropy drop: the gap H(A/E) - H(A/D) dominates half the
/// summed squared-norm increase, which is zero exactly when A is
/// independent from D over E.
inline EntropyDropReport entropy_drop(const FiniteProbabilityAlgebra& alg, const Subalgebra& A,
                                      const Subalgebra& E, const Subalgebra& D) {
    if (!D.refines(E)) throw NotCoarsening("E must be a coarsening of D");
    EntropyDropReport r;
    r.h_coarse = cond_entropy(alg, A, E);
    r.h_fine = cond_entropy(alg, A, D);
    r.gap = r.h_coarse - r.h_fine;
    Rational total = 0;
    for (std::size_t j = 0; j < A.block_count(); ++j) {
        Event atom = A.block_event(j);
        total += l2_norm_sq(alg, cond_prob(alg, atom, D)) -
                 l2_norm_sq(alg, cond_prob(alg, atom, E));
    }
    r.rhs_bound = total / 2;
    return r;
}

struct EntropyForkingReport {
    bool forks = false;      // tp(a/D) epsilon-forks over E
    double h_coarse = 0;     // H(a# / E)
    double h_fine = 0;       // H(a# / D)
    Rational threshold;      // eps^2 / 2
    bool inequality_ok = true; // gap > threshold whenever forks
};

/// If tp(a/D) epsilon-forks over E then H(a#/E) > H(a#/D) + eps^2/2, where
/// a# is the subalgebra generated by the tuple.
inline EntropyForkingReport entropy_forking_gap(const FiniteProbabilityAlgebra& alg,
                                                const std::vector<Event>& a,
                                                const Subalgebra& E, const Subalgebra& D,
                                                const Rational& eps,
                                                double float_tolerance = 1e-12) {
    if (!D.refines(E)) throw NotCoarsening("E must be a coarsening of D");
    EntropyForkingReport r;
    r.threshold = eps * eps / 2;
    r.forks = epsilon_forks(alg, a, E, D, eps);
    Subalgebra sharp = Subalgebra::generated(alg, a);
    r.h_coarse = cond_entropy(alg, sharp, E);
    r.h_fine = cond_entropy(alg, sharp, D);
    if (r.forks)
        r.inequality_ok = (r.h_coarse - r.h_fine) > rat_double(r.threshold) - float_tolerance;
    return r;
}

} // namespace pralg
