#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pralg/algebra.hpp"
#include "pralg/types.hpp"

// Brute-force oracles for cross-checking the constructive algorithms.  These
// deliberately share no code with the implementations they check: distances
// are found by exhaustive search over grain-level realizations of a type in
// bounded refinements of the algebra.

namespace pralg::oracle {

namespace detail {

using IntVec = std::vector<long long>;

/// Keeps only componentwise-maximal vectors (the search objective decreases
/// in every tracked component, so dominated vectors never win).
inline void pareto_max_insert(std::vector<IntVec>& set, const IntVec& v) {
    for (const IntVec& u : set) {
        bool dominates = true;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (u[i] < v[i]) {
                dominates = false;
                break;
            }
        if (dominates) return;
    }
    set.erase(std::remove_if(set.begin(), set.end(),
                             [&](const IntVec& u) {
                                 for (std::size_t i = 0; i < v.size(); ++i)
                                     if (v[i] < u[i]) return false;
                                 return true;
                             }),
              set.end());
    set.push_back(v);
}

struct EnumBudget {
    long long remaining;
    void spend() {
        if (--remaining < 0)
            throw AtomCapExceeded("oracle enumeration budget exhausted");
    }
};

/// Enumerates all nonnegative integer matrices y with prescribed row sums
/// and column sums, tracking sum(y[t][s] * contrib[t][s]) componentwise.
/// Returns the Pareto-maximal tracked vectors.  States are deduplicated at
/// row boundaries on (remaining columns, tracked vector).
inline std::vector<IntVec> transport_tracked(const IntVec& rows, const IntVec& cols,
                                             const std::vector<std::vector<IntVec>>& contrib,
                                             std::size_t tracked_size, EnumBudget& budget) {
    using State = std::pair<IntVec, IntVec>; // remaining cols, tracked
    std::set<State> states;
    states.insert({cols, IntVec(tracked_size, 0)});
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::set<State> next;
        for (const State& st : states) {
            // compositions of rows[t] into cols.size() parts bounded by the
            // remaining column capacities
            IntVec parts(cols.size(), 0);
            std::function<void(std::size_t, long long)> rec = [&](std::size_t s,
                                                                  long long left) {
                budget.spend();
                if (s + 1 == cols.size()) {
                    if (left > st.first[s]) return;
                    parts[s] = left;
                    IntVec ncols = st.first;
                    IntVec ntracked = st.second;
                    for (std::size_t q = 0; q < cols.size(); ++q) {
                        ncols[q] -= parts[q];
                        for (std::size_t c = 0; c < tracked_size; ++c)
                            ntracked[c] += parts[q] * contrib[t][q][c];
                    }
                    next.insert({std::move(ncols), std::move(ntracked)});
                    return;
                }
                long long cap = std::min(left, st.first[s]);
                for (long long v = 0; v <= cap; ++v) {
                    parts[s] = v;
                    rec(s + 1, left - v);
                }
                parts[s] = 0;
            };
            rec(0, rows[t]);
        }
        states = std::move(next);
    }
    std::vector<IntVec> result;
    for (const State& st : states) pareto_max_insert(result, st.second);
    return result;
}

inline Integer weight_lcm(const FiniteProbabilityAlgebra& alg) {
    Integer L = 1;
    for (const Rational& w : alg.weights()) L = lcm(L, rat_den(w));
    return L;
}

} // namespace detail

/// Exhaustive minimum of max_i d(a_i, b*_i) over all realizations b* of
/// tp(b/C) in grain-level refinements of the algebra (grain 1/(L*r), L the
/// weight denominator lcm, r the split factor).  With as_partitions the
/// tuples are partitions of 1 and coordinates are matched directly;
/// otherwise the 2^n associated cells are searched.
inline Rational realization_distance_oracle(const FiniteProbabilityAlgebra& alg,
                                            const std::vector<Event>& a,
                                            const std::vector<Event>& b, const Subalgebra& C,
                                            long long split_factor, bool as_partitions,
                                            long long budget = 40'000'000) {
    if (a.size() != b.size()) throw LengthMismatch();
    const std::size_t n = a.size();
    Integer L = detail::weight_lcm(alg) * split_factor;
    if (L > 400) throw AtomCapExceeded("grain resolution too fine for the oracle");
    const long long grains = L.convert_to<long long>();
    auto grains_of = [&](const Event& e) {
        Rational g = alg.mu(e) * grains;
        return rat_num(g).convert_to<long long>(); // exact by construction
    };

    std::vector<Event> rows_events, cols_events;
    std::size_t tracked = n;
    std::vector<std::vector<detail::IntVec>> contrib;
    if (as_partitions) {
        if (!is_partition_of_one(alg, a) || !is_partition_of_one(alg, b))
            throw NotAPartition();
        rows_events = a;
        cols_events = b;
        contrib.assign(n, std::vector<detail::IntVec>(n, detail::IntVec(n, 0)));
        for (std::size_t i = 0; i < n; ++i) contrib[i][i][i] = 1;
    } else {
        rows_events = associated_partition(alg, a);
        cols_events = associated_partition(alg, b);
        const std::size_t cells = rows_events.size();
        contrib.assign(cells, std::vector<detail::IntVec>(cells, detail::IntVec(n, 0)));
        for (std::size_t t = 0; t < cells; ++t)
            for (std::size_t s = 0; s < cells; ++s)
                for (std::size_t i = 0; i < n; ++i)
                    if (((t >> (n - 1 - i)) & 1) && ((s >> (n - 1 - i)) & 1))
                        contrib[t][s][i] = 1;
    }

    detail::EnumBudget enum_budget{budget};
    std::vector<detail::IntVec> total{detail::IntVec(tracked, 0)};
    for (std::size_t j = 0; j < C.block_count(); ++j) {
        Event block = C.block_event(j);
        detail::IntVec row_m, col_m;
        for (const Event& e : rows_events) row_m.push_back(grains_of(meet(e, block)));
        for (const Event& e : cols_events) col_m.push_back(grains_of(meet(e, block)));
        auto block_vecs =
            detail::transport_tracked(row_m, col_m, contrib, tracked, enum_budget);
        std::vector<detail::IntVec> combined;
        for (const auto& u : total)
            for (const auto& v : block_vecs) {
                detail::IntVec w(tracked);
                for (std::size_t i = 0; i < tracked; ++i) w[i] = u[i] + v[i];
                detail::pareto_max_insert(combined, w);
            }
        total = std::move(combined);
    }

    // d(a_i, b*_i) = mu(a_i) + mu(b*_i) - 2 mu(a_i & b*_i); the middle term
    // is pinned by the type of b, the last is the tracked overlap.
    detail::IntVec A(n), B(n);
    for (std::size_t i = 0; i < n; ++i) {
        A[i] = grains_of(a[i]);
        B[i] = grains_of(b[i]);
    }
    std::optional<long long> best;
    for (const auto& v : total) {
        long long worst = 0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, A[i] + B[i] - 2 * v[i]);
        if (!best || worst < *best) best = worst;
    }
    if (!best) throw Error("oracle found no feasible realization");
    return Rational(*best, grains);
}

} // namespace pralg::oracle
