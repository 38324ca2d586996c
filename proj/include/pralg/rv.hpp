#pragma once

#include <vector>

#include "pralg/algebra.hpp"
#include "pralg/conditional.hpp"

namespace pralg {

/// An n-block partition of 1 viewed as the level-step random variable
/// f_E = sum_i (i/n) * indicator(E_i).  Coordinates are positional; empty
/// coordinates are allowed.
struct RVPartition {
    std::size_t n = 0;
    std::vector<Event> parts;

    static RVPartition of(const FiniteProbabilityAlgebra& alg, std::vector<Event> parts) {
        if (parts.empty()) throw EmptyTuple();
        if (!is_partition_of_one(alg, parts)) throw NotAPartition();
        return RVPartition{parts.size(), std::move(parts)};
    }

    bool operator==(const RVPartition& other) const {
        return n == other.n && parts == other.parts;
    }
    bool operator!=(const RVPartition& other) const { return !(*this == other); }
};

/// The step function f_E with value i/n on E_i.
inline StepFunction step_function_of(const FiniteProbabilityAlgebra& alg,
                                     const RVPartition& E) {
    std::vector<std::pair<Bits, Rational>> cells;
    for (std::size_t i = 0; i < E.n; ++i) {
        alg.check_owner(E.parts[i]);
        if (E.parts[i].members.any())
            cells.emplace_back(E.parts[i].members,
                               Rational(static_cast<long long>(i + 1),
                                        static_cast<long long>(E.n)));
    }
    std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
        return x.first.find_first() < y.first.find_first();
    });
    std::vector<Bits> blocks;
    std::vector<Rational> values;
    for (auto& [bits, v] : cells) {
        blocks.push_back(bits);
        values.push_back(v);
    }
    StepFunction f;
    f.base = Subalgebra::from_blocks(alg, std::move(blocks));
    f.values = std::move(values);
    return f;
}

/// rho_n(E,F) = (1/n) sum_{i != j} |i-j| mu(E_i & F_j); equals the L1
/// distance of the two step functions.
inline Rational rho_n(const FiniteProbabilityAlgebra& alg, const RVPartition& E,
                      const RVPartition& F) {
    if (E.n != F.n) throw LengthMismatch();
    Rational total = 0;
    for (std::size_t i = 0; i < E.n; ++i)
        for (std::size_t j = 0; j < F.n; ++j) {
            if (i == j) continue;
            long long gap = i > j ? static_cast<long long>(i - j)
                                  : static_cast<long long>(j - i);
            total += Rational(gap) * alg.mu(meet(E.parts[i], F.parts[j]));
        }
    return total / static_cast<long long>(E.n);
}

/// d_P(E,F) = (1/2) sum_i mu(E_i symdiff F_i).
inline Rational dP_rv(const FiniteProbabilityAlgebra& alg, const RVPartition& E,
                      const RVPartition& F) {
    if (E.n != F.n) throw LengthMismatch();
    Rational total = 0;
    for (std::size_t i = 0; i < E.n; ++i) total += alg.dist(E.parts[i], F.parts[i]);
    return total / 2;
}

/// pi(E_1,...,E_2m) = (E_1|E_2, ..., E_{2m-1}|E_{2m}).
inline RVPartition project_pi(const FiniteProbabilityAlgebra& alg, const RVPartition& E) {
    if (E.n % 2 != 0) throw OddLength();
    std::vector<Event> parts;
    parts.reserve(E.n / 2);
    for (std::size_t i = 0; i < E.n; i += 2) parts.push_back(join(E.parts[i], E.parts[i + 1]));
    (void)alg;
    return RVPartition{E.n / 2, std::move(parts)};
}

/// Dyadic approximation of a [0,1]-valued step function at the given depth:
/// E_j = f^{-1}(I_j) with I_1 = [0, 2^-depth] and I_j = ((j-1)2^-depth,
/// j 2^-depth].  Coherent under project_pi across depths; L1 error is at
/// most 2^-depth.
inline RVPartition dyadic_approx(const FiniteProbabilityAlgebra& alg, const StepFunction& f,
                                 std::size_t depth) {
    if (depth == 0 || depth > 30) throw ValueOutOfRange("depth must be in 1..30");
    const std::size_t n = std::size_t(1) << depth;
    std::vector<Bits> groups(n, Bits(alg.size()));
    for (std::size_t j = 0; j < f.base.block_count(); ++j) {
        const Rational& v = f.values[j];
        if (v < 0 || v > 1)
            throw ValueOutOfRange("step function value " + rat_string(v) + " outside [0,1]");
        Integer idx = rat_ceil(v * static_cast<long long>(n));
        if (idx == 0) idx = 1; // v == 0 belongs to the closed first interval
        groups[static_cast<std::size_t>(idx.convert_to<long long>()) - 1] |=
            f.base.blocks()[j];
    }
    std::vector<Event> parts;
    parts.reserve(n);
    for (Bits& b : groups) parts.push_back(Event{alg.id(), std::move(b)});
    return RVPartition{n, std::move(parts)};
}

} // namespace pralg
