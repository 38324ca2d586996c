#pragma once

#include <vector>

#include "pralg/algebra.hpp"

namespace pralg {

/// A rational-valued function constant on the blocks of a subalgebra.
/// Houses conditional probabilities P(a|C) and conditional expectations.
struct StepFunction {
    Subalgebra base;
    std::vector<Rational> values; // one per block, same order as base.blocks()

    bool operator==(const StepFunction& other) const {
        return base == other.base && values == other.values;
    }
    bool operator!=(const StepFunction& other) const { return !(*this == other); }
};

inline StepFunction constant_step(const FiniteProbabilityAlgebra& alg, const Subalgebra& base,
                                  const Rational& c) {
    (void)alg;
    return StepFunction{base, std::vector<Rational>(base.block_count(), c)};
}

/// P(a|C): value mu(a & E_j)/mu(E_j) on each block E_j.
inline StepFunction cond_prob(const FiniteProbabilityAlgebra& alg, const Event& a,
                              const Subalgebra& C) {
    alg.check_owner(a);
    if (C.algebra_id() != alg.id()) throw ForeignEvent();
    StepFunction f{C, {}};
    f.values.reserve(C.block_count());
    for (std::size_t j = 0; j < C.block_count(); ++j) {
        Event block = C.block_event(j);
        f.values.push_back(alg.mu(meet(a, block)) / alg.mu(block));
    }
    return f;
}

/// Integral of f over the event c (c need not be base-measurable).
inline Rational integrate(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                          const Event& c) {
    alg.check_owner(c);
    Rational total = 0;
    for (std::size_t j = 0; j < f.base.block_count(); ++j)
        total += f.values[j] * alg.mu(meet(f.base.block_event(j), c));
    return total;
}

inline Rational integrate_full(const FiniteProbabilityAlgebra& alg, const StepFunction& f) {
    return integrate(alg, f, alg.full_event());
}

/// E(f|D): on each D-block, the measure-weighted average of f over the
/// common-refinement cells inside that block.
inline StepFunction cond_expect(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                                const Subalgebra& D) {
    if (f.base.algebra_id() != alg.id() || D.algebra_id() != alg.id()) throw ForeignEvent();
    StepFunction g{D, {}};
    g.values.reserve(D.block_count());
    for (std::size_t j = 0; j < D.block_count(); ++j) {
        Event block = D.block_event(j);
        g.values.push_back(integrate(alg, f, block) / alg.mu(block));
    }
    return g;
}

namespace detail {
template <typename Fn>
void for_each_refinement_cell(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                              const StepFunction& g, Fn&& fn) {
    if (f.base.algebra_id() != alg.id() || g.base.algebra_id() != alg.id())
        throw ForeignEvent();
    for (std::size_t i = 0; i < f.base.block_count(); ++i)
        for (std::size_t j = 0; j < g.base.block_count(); ++j) {
            Bits cell = f.base.blocks()[i] & g.base.blocks()[j];
            if (cell.none()) continue;
            fn(alg.mu(Event{alg.id(), cell}), f.values[i], g.values[j]);
        }
}
} // namespace detail

/// L1 distance, computed on the common refinement; exact.
inline Rational l1_distance(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                            const StepFunction& g) {
    Rational total = 0;
    detail::for_each_refinement_cell(alg, f, g,
                                     [&](const Rational& m, const Rational& fv,
                                         const Rational& gv) { total += m * rat_abs(fv - gv); });
    return total;
}

/// Squared L2 distance on the common refinement; exact.
inline Rational l2_distance_sq(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                               const StepFunction& g) {
    Rational total = 0;
    detail::for_each_refinement_cell(alg, f, g,
                                     [&](const Rational& m, const Rational& fv,
                                         const Rational& gv) {
                                         Rational d = fv - gv;
                                         total += m * d * d;
                                     });
    return total;
}

/// Squared L2 norm: sum of block-measure times value^2.
inline Rational l2_norm_sq(const FiniteProbabilityAlgebra& alg, const StepFunction& f) {
    Rational total = 0;
    for (std::size_t j = 0; j < f.base.block_count(); ++j)
        total += alg.mu(f.base.block_event(j)) * f.values[j] * f.values[j];
    return total;
}

/// Level partition of a [0,1]-valued step function with k levels
/// I_j = [(j-1)/k, j/k) for j < k and I_k = [(k-1)/k, 1].  Returns the
/// subalgebra generated by the preimages f^{-1}(I_j).
inline Subalgebra level_partition(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                                  std::size_t k) {
    if (k == 0) throw ValueOutOfRange("level count must be positive");
    if (f.base.algebra_id() != alg.id()) throw ForeignEvent();
    std::vector<Bits> levels(k, Bits(alg.size()));
    for (std::size_t j = 0; j < f.base.block_count(); ++j) {
        const Rational& v = f.values[j];
        if (v < 0 || v > 1)
            throw ValueOutOfRange("step function value " + rat_string(v) + " outside [0,1]");
        Integer idx = rat_floor(v * static_cast<long long>(k)); // I_idx+1 unless at the top
        std::size_t level = static_cast<std::size_t>(idx.convert_to<long long>());
        if (level >= k) level = k - 1; // v == 1 lands in the closed last interval
        levels[level] |= f.base.blocks()[j];
    }
    std::vector<Bits> nonempty;
    for (Bits& b : levels)
        if (b.any()) nonempty.push_back(std::move(b));
    return Subalgebra::from_blocks(alg, std::move(nonempty));
}

} // namespace pralg
