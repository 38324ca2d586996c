#pragma once

#include <string>
#include <vector>

#include "pralg/algebra.hpp"
#include "pralg/conditional.hpp"

namespace pralg {

/// Conditional independence of S and T over W, checked through the
/// finite-parameter identity mu(A&B&C)mu(C) = mu(A&C)mu(B&C) for every atom
/// A of <S>, B of <T> and C of <W>.  With W empty this reduces to
/// mu(A&B) = mu(A)mu(B).
inline bool independent(const FiniteProbabilityAlgebra& alg, const std::vector<Event>& S,
                        const std::vector<Event>& T, const std::vector<Event>& W) {
    Subalgebra AS = Subalgebra::generated(alg, S);
    Subalgebra AT = Subalgebra::generated(alg, T);
    Subalgebra AW = Subalgebra::generated(alg, W);
    for (std::size_t i = 0; i < AS.block_count(); ++i)
        for (std::size_t j = 0; j < AT.block_count(); ++j)
            for (std::size_t l = 0; l < AW.block_count(); ++l) {
                Event a = AS.block_event(i), b = AT.block_event(j), c = AW.block_event(l);
                if (alg.mu(meet(meet(a, b), c)) * alg.mu(c) !=
                    alg.mu(meet(a, c)) * alg.mu(meet(b, c)))
                    return false;
            }
    return true;
}

/// Worst-case violation of the independence identity; zero iff independent.
inline Rational independence_defect(const FiniteProbabilityAlgebra& alg,
                                    const std::vector<Event>& S, const std::vector<Event>& T,
                                    const std::vector<Event>& W) {
    Subalgebra AS = Subalgebra::generated(alg, S);
    Subalgebra AT = Subalgebra::generated(alg, T);
    Subalgebra AW = Subalgebra::generated(alg, W);
    Rational worst = 0;
    for (std::size_t i = 0; i < AS.block_count(); ++i)
        for (std::size_t j = 0; j < AT.block_count(); ++j)
            for (std::size_t l = 0; l < AW.block_count(); ++l) {
                Event a = AS.block_event(i), b = AT.block_event(j), c = AW.block_event(l);
                Rational gap = rat_abs(alg.mu(meet(meet(a, b), c)) * alg.mu(c) -
                                       alg.mu(meet(a, c)) * alg.mu(meet(b, c)));
                if (gap > worst) worst = gap;
            }
    return worst;
}

/// The four equivalent characterizations of S independent from T over W:
///   (i)   the product identity holds (defect 0),
///   (ii)  P(A|<WT>) = P(A|<W>) for every atom A of <S>,
///   (iii) P(A|<WT>) is <W>-measurable (constant on W-blocks),
///   (iv)  the L2 norms of P(A|<WT>) and P(A|<W>) agree.
struct IndependenceReport {
    bool product_identity = false;
    bool cond_prob_drop = false;
    bool w_measurable = false;
    bool l2_norms_equal = false;
    Rational defect;

    bool all_agree() const {
        return product_identity == cond_prob_drop && cond_prob_drop == w_measurable &&
               w_measurable == l2_norms_equal;
    }
    bool independent() const { return product_identity; }
};

inline IndependenceReport characterization_report(const FiniteProbabilityAlgebra& alg,
                                                  const std::vector<Event>& S,
                                                  const std::vector<Event>& T,
                                                  const std::vector<Event>& W) {
    IndependenceReport rep;
    rep.defect = independence_defect(alg, S, T, W);
    rep.product_identity = rep.defect == 0;

    Subalgebra AS = Subalgebra::generated(alg, S);
    Subalgebra AW = Subalgebra::generated(alg, W);
    std::vector<Event> WT = W;
    WT.insert(WT.end(), T.begin(), T.end());
    Subalgebra AWT = Subalgebra::generated(alg, WT);

    bool drop = true, measurable = true, norms = true;
    for (std::size_t i = 0; i < AS.block_count(); ++i) {
        Event a = AS.block_event(i);
        StepFunction fine = cond_prob(alg, a, AWT);
        StepFunction coarse = cond_prob(alg, a, AW);
        if (l1_distance(alg, fine, coarse) != 0) drop = false;
        if (l2_norm_sq(alg, fine) != l2_norm_sq(alg, coarse)) norms = false;
        // constant on each W-block: all WT-blocks inside one W-block agree
        for (std::size_t wj = 0; wj < AW.block_count() && measurable; ++wj) {
            std::optional<Rational> seen;
            for (std::size_t fj = 0; fj < AWT.block_count(); ++fj) {
                if (!(AWT.blocks()[fj] & AW.blocks()[wj]).any()) continue;
                if (!seen)
                    seen = fine.values[fj];
                else if (*seen != fine.values[fj])
                    measurable = false;
            }
        }
    }
    rep.cond_prob_drop = drop;
    rep.w_measurable = measurable;
    rep.l2_norms_equal = norms;
    return rep;
}

/// Result of adjoining an independent copy: the extension embedding plus the
/// new events E_1..E_m.
struct IndependentCopy : AlgebraExtension {
    std::vector<Event> copies; // E_i, one per input coordinate
};

/// Extension Lemma, discretized: splits every atom x into pieces of weight
/// mu(x) * f_i(x), f_i = P(A_i|C), realizing events E_i with
/// P(E_i|C') = P(A_i'|C') and E independent from D' over C'.  Zero-weight
/// pieces are dropped.
inline IndependentCopy extend_with_independent_copy(const FiniteProbabilityAlgebra& alg,
                                                    const std::vector<Event>& A_atoms,
                                                    const Subalgebra& C, const Subalgebra& D) {
    if (A_atoms.empty()) throw EmptyTuple();
    if (!is_partition_of_one(alg, A_atoms)) throw NotAPartition();
    if (C.algebra_id() != alg.id() || D.algebra_id() != alg.id()) throw ForeignEvent();
    if (!D.refines(C)) throw NotCoarsening("C must be a coarsening of D");

    const std::size_t m = A_atoms.size();
    std::vector<StepFunction> f;
    f.reserve(m);
    for (const Event& a : A_atoms) f.push_back(cond_prob(alg, a, C));

    std::vector<Rational> new_weights;
    std::vector<std::string> new_labels;
    std::vector<std::vector<std::size_t>> pieces_of_atom(alg.size());
    std::vector<std::vector<std::size_t>> pieces_of_copy(m);
    for (std::size_t x = 0; x < alg.size(); ++x) {
        std::size_t block = C.block_of_atom(x);
        for (std::size_t i = 0; i < m; ++i) {
            Rational w = alg.weight(x) * f[i].values[block];
            if (w == 0) continue;
            std::size_t piece = new_weights.size();
            new_weights.push_back(w);
            new_labels.push_back(alg.label(x) + "." + std::to_string(i + 1));
            pieces_of_atom[x].push_back(piece);
            pieces_of_copy[i].push_back(piece);
        }
    }

    IndependentCopy out{
        {FiniteProbabilityAlgebra(std::move(new_weights), std::move(new_labels)), {}}, {}};
    for (std::size_t x = 0; x < alg.size(); ++x)
        out.atom_images.push_back(out.extension.event(pieces_of_atom[x]));
    for (std::size_t i = 0; i < m; ++i)
        out.copies.push_back(out.extension.event(pieces_of_copy[i]));
    return out;
}

} // namespace pralg
