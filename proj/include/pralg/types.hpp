#pragma once

#include <optional>
#include <vector>

#include "pralg/algebra.hpp"
#include "pralg/conditional.hpp"
#include "pralg/independence.hpp"

namespace pralg {

/// tp(a/C) for an n-tuple a, recorded as the family of conditional
/// probabilities g_s = P(a^s|C) of the 2^n cells, in lexicographic order of
/// the sign patterns s (-1 before +1, first coordinate most significant).
struct TypeDescriptor {
    std::size_t arity = 0;
    Subalgebra base;
    std::vector<StepFunction> g; // size 2^arity, each over base

    bool operator==(const TypeDescriptor& other) const {
        return arity == other.arity && base == other.base && g == other.g;
    }
    bool operator!=(const TypeDescriptor& other) const { return !(*this == other); }

    void validate() const {
        if (arity == 0 || g.size() != (std::size_t(1) << arity))
            throw InvalidDescriptor("cell family has wrong size");
        for (const StepFunction& s : g) {
            if (s.base != base) throw InvalidDescriptor("cell functions must share the base");
            for (const Rational& v : s.values)
                if (v < 0 || v > 1)
                    throw InvalidDescriptor("cell value " + rat_string(v) + " outside [0,1]");
        }
        for (std::size_t j = 0; j < base.block_count(); ++j) {
            Rational sum = 0;
            for (const StepFunction& s : g) sum += s.values[j];
            if (sum != 1)
                throw InvalidDescriptor("cell values on a block sum to " + rat_string(sum));
        }
    }
};

inline TypeDescriptor type_of(const FiniteProbabilityAlgebra& alg,
                              const std::vector<Event>& tuple, const Subalgebra& C) {
    TypeDescriptor d;
    d.arity = tuple.size();
    d.base = C;
    for (const Event& cell : associated_partition(alg, tuple))
        d.g.push_back(cond_prob(alg, cell, C));
    return d;
}

/// A partition type: the per-coordinate conditional probabilities, which
/// determine the type of a partition tuple.
struct PartitionTypeDescriptor {
    Subalgebra base;
    std::vector<StepFunction> coord; // one per partition coordinate
};

/// The image of a tuple descriptor under the tuple -> associated-partition
/// bijection: a descriptor for the 2^n-coordinate partition type.
inline PartitionTypeDescriptor pi_map(const TypeDescriptor& desc) {
    desc.validate();
    return PartitionTypeDescriptor{desc.base, desc.g};
}

inline Rational partition_type_distance(const FiniteProbabilityAlgebra& alg,
                                        const PartitionTypeDescriptor& p,
                                        const PartitionTypeDescriptor& q) {
    if (p.coord.size() != q.coord.size()) throw LengthMismatch();
    Rational best = 0;
    for (std::size_t i = 0; i < p.coord.size(); ++i) {
        Rational v = l1_distance(alg, p.coord[i], q.coord[i]);
        if (v > best) best = v;
    }
    return best;
}

/// Induced type-space distance for partitions of 1:
/// max_i || P(a_i|C) - P(b_i|C) ||_1.
inline Rational type_distance_partitions(const FiniteProbabilityAlgebra& alg,
                                         const std::vector<Event>& a,
                                         const std::vector<Event>& b, const Subalgebra& C) {
    if (a.size() != b.size()) throw LengthMismatch();
    if (!is_partition_of_one(alg, a) || !is_partition_of_one(alg, b)) throw NotAPartition();
    Rational best = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational v = l1_distance(alg, cond_prob(alg, a[i], C), cond_prob(alg, b[i], C));
        if (v > best) best = v;
    }
    return best;
}

/// A realization inside an extension algebra.
struct Realization : AlgebraExtension {
    std::vector<Event> tuple;
    Subalgebra base_image;
};

/// Realizes a type descriptor: inside every base block, atoms are split so a
/// tuple exists whose cells have exactly the prescribed conditional
/// probabilities.  type_of(extension, tuple, embedded base) == descriptor.
inline Realization realize_type(const FiniteProbabilityAlgebra& alg,
                                const TypeDescriptor& desc) {
    desc.validate();
    if (desc.base.algebra_id() != alg.id()) throw ForeignEvent();
    const std::size_t cells = desc.g.size();
    AtomSplitter splitter(alg);
    std::vector<std::vector<std::size_t>> cell_frags(cells);
    for (std::size_t j = 0; j < desc.base.block_count(); ++j) {
        Event block = desc.base.block_event(j);
        Rational mass = alg.mu(block);
        // allocate in descending lexicographic cell order, so the tuple
        // coordinates take the leading pieces of each split atom
        std::vector<Rational> targets;
        targets.reserve(cells);
        for (std::size_t s = cells; s-- > 0;) targets.push_back(desc.g[s].values[j] * mass);
        auto groups = splitter.allocate(splitter.initial_pool(block), targets);
        for (std::size_t s = 0; s < cells; ++s)
            cell_frags[s].insert(cell_frags[s].end(), groups[cells - 1 - s].begin(),
                                 groups[cells - 1 - s].end());
    }
    std::vector<std::size_t> frag_to_atom;
    AlgebraExtension ext = splitter.finalize(frag_to_atom);
    Realization out{{std::move(ext.extension), std::move(ext.atom_images)}, {}, {}};
    const std::size_t n = desc.arity;
    for (std::size_t i = 0; i < n; ++i) {
        Bits bits(out.extension.size());
        for (std::size_t s = 0; s < cells; ++s)
            if ((s >> (n - 1 - i)) & 1)
                for (std::size_t id : cell_frags[s]) bits.set(frag_to_atom[id]);
        out.tuple.push_back(Event{out.extension.id(), bits});
    }
    out.base_image = out.map_subalgebra(alg, desc.base);
    return out;
}

/// The optimal-realization construction: returns an extension and a tuple b'
/// realizing tp(b/C) with d(a_i', b'_i) = || P(a_i|C) - P(b_i|C) ||_1 for
/// every coordinate, working inside each C-block.
inline Realization optimal_realization(const FiniteProbabilityAlgebra& alg,
                                       const std::vector<Event>& a,
                                       const std::vector<Event>& b, const Subalgebra& C) {
    if (a.size() != b.size()) throw LengthMismatch();
    if (!is_partition_of_one(alg, a) || !is_partition_of_one(alg, b)) throw NotAPartition();
    if (C.algebra_id() != alg.id()) throw ForeignEvent();
    const std::size_t n = a.size();
    AtomSplitter splitter(alg);
    std::vector<std::vector<std::size_t>> assigned(n);
    for (std::size_t j = 0; j < C.block_count(); ++j) {
        Event block = C.block_event(j);
        std::vector<Rational> ma(n), mb(n);
        for (std::size_t i = 0; i < n; ++i) {
            ma[i] = alg.mu(meet(a[i], block));
            mb[i] = alg.mu(meet(b[i], block));
        }
        // Coordinates with surplus give mass away; the pool is redistributed
        // to the deficient ones, all inside this block.
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> frags = splitter.initial_pool(meet(a[i], block));
            if (ma[i] >= mb[i]) {
                auto groups = splitter.allocate(std::move(frags), {mb[i], ma[i] - mb[i]});
                assigned[i].insert(assigned[i].end(), groups[0].begin(), groups[0].end());
                pool.insert(pool.end(), groups[1].begin(), groups[1].end());
            } else {
                assigned[i].insert(assigned[i].end(), frags.begin(), frags.end());
            }
        }
        std::vector<Rational> deficits;
        std::vector<std::size_t> deficit_coord;
        for (std::size_t i = 0; i < n; ++i)
            if (ma[i] < mb[i]) {
                deficits.push_back(mb[i] - ma[i]);
                deficit_coord.push_back(i);
            }
        auto groups = splitter.allocate(std::move(pool), deficits);
        for (std::size_t k = 0; k < deficit_coord.size(); ++k)
            assigned[deficit_coord[k]].insert(assigned[deficit_coord[k]].end(),
                                              groups[k].begin(), groups[k].end());
    }
    std::vector<std::size_t> frag_to_atom;
    AlgebraExtension ext = splitter.finalize(frag_to_atom);
    Realization out{{std::move(ext.extension), std::move(ext.atom_images)}, {}, {}};
    for (std::size_t i = 0; i < n; ++i)
        out.tuple.push_back(AtomSplitter::event_of(out, frag_to_atom, assigned[i]));
    out.base_image = out.map_subalgebra(alg, C);
    return out;
}

/// d_P on tuples: half the summed metric over associated-partition cells.
inline Rational dP(const FiniteProbabilityAlgebra& alg, const std::vector<Event>& a,
                   const std::vector<Event>& b) {
    if (a.size() != b.size()) throw LengthMismatch();
    std::vector<Event> ca = associated_partition(alg, a);
    std::vector<Event> cb = associated_partition(alg, b);
    Rational total = 0;
    for (std::size_t s = 0; s < ca.size(); ++s) total += alg.dist(ca[s], cb[s]);
    return total / 2;
}

/// d_Cb on the types of a and b over a finite C: the worst discrepancy
/// |mu(a^s & c) - mu(b^s & c)| over cells s and elements c of <C>, the sup
/// realized by enumerating all unions of C-blocks.
inline Rational dCb(const FiniteProbabilityAlgebra& alg, const std::vector<Event>& a,
                    const std::vector<Event>& b, const Subalgebra& C) {
    if (a.size() != b.size()) throw LengthMismatch();
    if (C.algebra_id() != alg.id()) throw ForeignEvent();
    const std::size_t blocks = C.block_count();
    if (blocks > 20) throw AtomCapExceeded("dCb enumerates unions of C-blocks");
    std::vector<Event> ca = associated_partition(alg, a);
    std::vector<Event> cb = associated_partition(alg, b);
    Rational best = 0;
    for (std::size_t s = 0; s < ca.size(); ++s) {
        // per-block signed differences; a union's difference is their sum
        std::vector<Rational> delta(blocks);
        for (std::size_t j = 0; j < blocks; ++j) {
            Event block = C.block_event(j);
            delta[j] = alg.mu(meet(ca[s], block)) - alg.mu(meet(cb[s], block));
        }
        for (std::uint64_t u = 0; u < (1ull << blocks); ++u) {
            Rational sum = 0;
            for (std::size_t j = 0; j < blocks; ++j)
                if (u & (1ull << j)) sum += delta[j];
            Rational v = rat_abs(sum);
            if (v > best) best = v;
        }
    }
    return best;
}

/// Two-sided certificate for the unknown induced distance d_n between the
/// types of general n-tuples: middle is the exact distance of the associated
/// 2^n-partition types, and 2^{-n+1} d_n <= middle <= n d_n pins d_n into
/// [middle/n, 2^{n-1} middle].
struct LipschitzBracket {
    Rational lower;
    Rational middle;
    Rational upper;
};

inline LipschitzBracket lipschitz_check(const FiniteProbabilityAlgebra& alg,
                                        const std::vector<Event>& a,
                                        const std::vector<Event>& b, const Subalgebra& C) {
    if (a.size() != b.size()) throw LengthMismatch();
    const std::size_t n = a.size();
    std::vector<Event> ca = associated_partition(alg, a);
    std::vector<Event> cb = associated_partition(alg, b);
    Rational middle = 0;
    for (std::size_t s = 0; s < ca.size(); ++s) {
        Rational v = l1_distance(alg, cond_prob(alg, ca[s], C), cond_prob(alg, cb[s], C));
        if (v > middle) middle = v;
    }
    Rational pow2 = 1;
    for (std::size_t i = 1; i < n; ++i) pow2 *= 2;
    return LipschitzBracket{middle / static_cast<long long>(n), middle, middle * pow2};
}

/// The unique non-forking extension of tp(a/E) to C (E a coarsening of C),
/// realized by adjoining an independent copy: the returned tuple a'' lives
/// in the extension and satisfies P(a''_i | C') = P(a_i | E)'.
struct NonforkingExtension : AlgebraExtension {
    std::vector<Event> tuple; // a''
};

inline NonforkingExtension nonforking_extension(const FiniteProbabilityAlgebra& alg,
                                                const std::vector<Event>& a,
                                                const Subalgebra& E, const Subalgebra& C) {
    if (!C.refines(E)) throw NotCoarsening("E must be a coarsening of C");
    if (E == C) {
        // tp(a/E) is its own non-forking extension; realize by the identity
        if (!is_partition_of_one(alg, a)) throw NotAPartition();
        NonforkingExtension out{{FiniteProbabilityAlgebra(alg.weights(), alg.labels()), {}},
                                {}};
        for (std::size_t i = 0; i < alg.size(); ++i)
            out.atom_images.push_back(out.extension.atom_event(i));
        out.tuple = out.map_tuple(alg, a);
        return out;
    }
    IndependentCopy copy = extend_with_independent_copy(alg, a, E, C);
    return NonforkingExtension{{std::move(copy.extension), std::move(copy.atom_images)},
                               std::move(copy.copies)};
}

/// tp(a/C) epsilon-forks over E when its distance to the non-forking
/// extension of tp(a/E), measured over C in a common extension, exceeds eps.
inline bool epsilon_forks(const FiniteProbabilityAlgebra& alg, const std::vector<Event>& a,
                          const Subalgebra& E, const Subalgebra& C, const Rational& eps) {
    NonforkingExtension nf = nonforking_extension(alg, a, E, C);
    std::vector<Event> a_img = nf.map_tuple(alg, a);
    Subalgebra C_img = nf.map_subalgebra(alg, C);
    return type_distance_partitions(nf.extension, a_img, nf.tuple, C_img) > eps;
}

struct ForkingChainReport {
    bool ok = true;
    std::size_t fork_count = 0;
    Rational bound;
    std::optional<std::size_t> witness_step; // first step past the bound
};

/// Counts epsilon-forking steps along a chain of subalgebras increasing by
/// refinement, and checks the count against (1/eps)^2.
inline ForkingChainReport forking_chain_check(const FiniteProbabilityAlgebra& alg,
                                              const std::vector<Event>& a,
                                              const std::vector<Subalgebra>& chain,
                                              const Rational& eps) {
    if (eps <= 0) throw ValueOutOfRange("eps must be positive");
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (!chain[i + 1].refines(chain[i]) || chain[i + 1] == chain[i])
            throw NotCoarsening("chain must be strictly increasing by refinement");
    }
    ForkingChainReport rep;
    rep.bound = Rational(1) / (eps * eps);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (epsilon_forks(alg, a, chain[i], chain[i + 1], eps)) {
            ++rep.fork_count;
            if (Rational(static_cast<long long>(rep.fork_count)) > rep.bound && rep.ok) {
                rep.ok = false;
                rep.witness_step = i;
            }
        }
    }
    return rep;
}

} // namespace pralg
