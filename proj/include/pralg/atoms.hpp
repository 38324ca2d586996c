#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pralg/algebra.hpp"
#include "pralg/formula.hpp"

namespace pralg {

namespace detail {
inline std::uint64_t event_mask(const FiniteProbabilityAlgebra& alg, const Event& e) {
    alg.check_owner(e);
    if (alg.size() > 62) throw AtomCapExceeded("mask enumeration needs <= 62 atoms");
    std::uint64_t m = 0;
    for (std::size_t i = e.members.find_first(); i != Bits::npos; i = e.members.find_next(i))
        m |= 1ull << i;
    return m;
}

inline std::vector<Rational> weights_sorted_desc(const FiniteProbabilityAlgebra& alg,
                                                 const Event& a) {
    std::vector<Rational> w;
    for (std::size_t i = a.members.find_first(); i != Bits::npos; i = a.members.find_next(i))
        w.push_back(alg.weight(i));
    std::sort(w.begin(), w.end(), std::greater<Rational>());
    return w;
}
} // namespace detail

/// at_n(a): the n-th largest atom weight inside a (0 if fewer than n atoms).
inline Rational at_n(const FiniteProbabilityAlgebra& alg, const Event& a, std::size_t n) {
    if (n == 0) throw ValueOutOfRange("at_n needs n >= 1");
    auto w = detail::weights_sorted_desc(alg, a);
    return n <= w.size() ? w[n - 1] : Rational(0);
}

/// phi_n(a) = mu(a) minus the n largest atom weights inside a, floored at 0.
/// This is the distance from a to the set of unions of at most n atoms.
inline Rational phi_n_closed(const FiniteProbabilityAlgebra& alg, const Event& a,
                             std::size_t n) {
    if (n == 0) throw ValueOutOfRange("phi_n needs n >= 1");
    auto w = detail::weights_sorted_desc(alg, a);
    Rational rest = 0;
    for (std::size_t i = n; i < w.size(); ++i) rest += w[i];
    return rest;
}

/// chi(a): the best balanced split, min over events y of
/// |mu(a&y) - mu(a&~y)|.  The minimum is attained on subsets of a.
inline Rational chi_closed(const FiniteProbabilityAlgebra& alg, const Event& a,
                           std::size_t cap = 20) {
    alg.check_owner(a);
    if (a.count() > cap) throw AtomCapExceeded("chi enumerates 2^|a| subsets");
    std::vector<Rational> w;
    for (std::size_t i = a.members.find_first(); i != Bits::npos; i = a.members.find_next(i))
        w.push_back(alg.weight(i));
    Rational total = 0;
    for (const Rational& x : w) total += x;
    Rational best = total; // y = 0
    const std::uint64_t space = 1ull << w.size();
    for (std::uint64_t m = 1; m < space; ++m) {
        Rational part = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (m & (1ull << i)) part += w[i];
        Rational v = rat_abs(2 * part - total);
        if (v < best) best = v;
    }
    return best;
}

/// theta(a) = max over y of min over z of |mu(a&y&z) - mu(a&y&~z)|;
/// equivalently the largest chi value over sub-events of a.  Enumeration is
/// restricted to subsets of a (complexity within 4^|a|).
inline Rational theta_closed(const FiniteProbabilityAlgebra& alg, const Event& a,
                             std::size_t cap = 16) {
    alg.check_owner(a);
    if (a.count() > cap) throw AtomCapExceeded("theta enumerates subsets of subsets");
    std::vector<Rational> w;
    std::vector<std::size_t> idx;
    for (std::size_t i = a.members.find_first(); i != Bits::npos; i = a.members.find_next(i)) {
        w.push_back(alg.weight(i));
        idx.push_back(i);
    }
    const std::uint64_t space = 1ull << w.size();
    Rational best = 0;
    for (std::uint64_t u = 1; u < space; ++u) {
        // chi of the sub-event u: min over z subsets of u.  z = 0 and z = u
        // both give mu(u), covered by the initial value.
        Rational total = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (u & (1ull << i)) total += w[i];
        Rational chi_u = total;
        for (std::uint64_t z = (u - 1) & u; z != 0; z = (z - 1) & u) {
            Rational part = 0;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (z & (1ull << i)) part += w[i];
            Rational v = rat_abs(2 * part - total);
            if (v < chi_u) chi_u = v;
        }
        if (chi_u > best) best = chi_u;
    }
    return best;
}

/// Brute-force evaluation of the recursive formulas chi, psi, phi_1..phi_n
/// by enumerating all 2^k events at every quantifier, with the intermediate
/// predicates tabulated so the enumeration stays polynomial in 2^k.
/// Semantically identical to evaluating the formula-module ASTs.
class PhiBruteForce {
public:
    PhiBruteForce(const FiniteProbabilityAlgebra& alg, std::size_t n_max, std::size_t cap = 16)
        : alg_(alg) {
        const std::size_t k = alg.size();
        if (k > cap)
            throw AtomCapExceeded("phi brute force needs atom count <= " + std::to_string(cap));
        const std::uint64_t space = 1ull << k;
        mu_.resize(space);
        mu_[0] = 0;
        for (std::uint64_t m = 1; m < space; ++m) {
            std::uint64_t low = m & (m - 1);
            unsigned bit_index = 0;
            std::uint64_t bit = m ^ low;
            while ((1ull << bit_index) != bit) ++bit_index;
            mu_[m] = mu_[low] + alg.weight(bit_index);
        }
        // chi[x] = inf_y |mu(x&y) - mu(x&~y)|; the value only depends on x&y,
        // so enumerate subsets of x.
        std::vector<Rational> chi(space);
        for (std::uint64_t x = 0; x < space; ++x) {
            Rational best = mu_[x]; // y = 0
            for (std::uint64_t z = x; z != 0; z = (z - 1) & x) {
                Rational v = rat_abs(2 * mu_[z] - mu_[x]);
                if (v < best) best = v;
            }
            chi[x] = best;
        }
        // psi[z] = mu(z) -. chi(z)
        std::vector<Rational> psi(space);
        for (std::uint64_t z = 0; z < space; ++z) psi[z] = trunc_minus(mu_[z], chi[z]);
        // phi_1[x] = inf_z (d(x,z) +. psi(z))
        phi_.assign(n_max, std::vector<Rational>(space));
        for (std::uint64_t x = 0; x < space; ++x) {
            std::optional<Rational> best;
            for (std::uint64_t z = 0; z < space; ++z) {
                Rational v = trunc_plus(mu_[x ^ z], psi[z]);
                if (!best || v < *best) best = v;
            }
            phi_[0][x] = *best;
        }
        // phi_n[x] = inf_w (phi_{n-1}(x&w) +. phi_1(x&~w))
        for (std::size_t n = 1; n < n_max; ++n)
            for (std::uint64_t x = 0; x < space; ++x) {
                std::optional<Rational> best;
                for (std::uint64_t w = 0; w < space; ++w) {
                    Rational v = trunc_plus(phi_[n - 1][x & w], phi_[0][x & ~w & (space - 1)]);
                    if (!best || v < *best) best = v;
                }
                phi_[n][x] = *best;
            }
        chi_ = std::move(chi);
    }

    Rational phi(const Event& a, std::size_t n) const {
        if (n == 0 || n > phi_.size()) throw ValueOutOfRange("phi index out of range");
        return phi_[n - 1][detail::event_mask(alg_, a)];
    }
    Rational chi(const Event& a) const { return chi_[detail::event_mask(alg_, a)]; }

private:
    const FiniteProbabilityAlgebra& alg_;
    std::vector<Rational> mu_;
    std::vector<Rational> chi_;
    std::vector<std::vector<Rational>> phi_;
};

/// One-shot convenience wrapper; prefer PhiBruteForce when querying many
/// events of one algebra.
inline Rational phi_n_bruteforce(const FiniteProbabilityAlgebra& alg, const Event& a,
                                 std::size_t n, std::size_t cap = 16) {
    return PhiBruteForce(alg, n, cap).phi(a, n);
}

// ---------------------------------------------------------------------------
// The invariant Phi and the classification it induces.

/// Weakly decreasing list of atom measures; conceptually extended by zeros.
struct PhiInvariant {
    std::vector<Rational> sorted_weights;

    Rational entry(std::size_t n) const { // 1-based, zero-padded
        return n >= 1 && n <= sorted_weights.size() ? sorted_weights[n - 1] : Rational(0);
    }
    bool operator==(const PhiInvariant& other) const {
        std::size_t n = std::max(sorted_weights.size(), other.sorted_weights.size());
        for (std::size_t i = 1; i <= n; ++i)
            if (entry(i) != other.entry(i)) return false;
        return true;
    }
    bool operator!=(const PhiInvariant& other) const { return !(*this == other); }
};

inline PhiInvariant phi_invariant(const FiniteProbabilityAlgebra& alg) {
    PhiInvariant inv{alg.weights()};
    std::sort(inv.sorted_weights.begin(), inv.sorted_weights.end(), std::greater<Rational>());
    return inv;
}

/// Finite algebras are elementarily equivalent iff their invariants agree.
inline bool elementarily_equivalent(const FiniteProbabilityAlgebra& a,
                                    const FiniteProbabilityAlgebra& b) {
    return phi_invariant(a) == phi_invariant(b);
}

/// Weight-preserving atom bijection (as a map from atoms of a to atoms of b),
/// or nullopt when none exists.  Searches greedily within equal-weight
/// groups, which is complete for this matching problem.
inline std::optional<std::vector<std::size_t>>
find_isomorphism(const FiniteProbabilityAlgebra& a, const FiniteProbabilityAlgebra& b) {
    if (a.size() != b.size()) return std::nullopt;
    std::vector<std::size_t> ia(a.size()), ib(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ia[i] = i;
    for (std::size_t i = 0; i < b.size(); ++i) ib[i] = i;
    auto by_weight_a = [&](std::size_t x, std::size_t y) { return a.weight(x) < a.weight(y); };
    auto by_weight_b = [&](std::size_t x, std::size_t y) { return b.weight(x) < b.weight(y); };
    std::stable_sort(ia.begin(), ia.end(), by_weight_a);
    std::stable_sort(ib.begin(), ib.end(), by_weight_b);
    std::vector<std::size_t> map(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.weight(ia[i]) != b.weight(ib[i])) return std::nullopt;
        map[ia[i]] = ib[i];
    }
    return map;
}

} // namespace pralg
