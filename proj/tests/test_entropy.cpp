#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pralg/entropy.hpp"

using namespace pralg;

namespace {
constexpr double kTol = 1e-12;

// the 4-atom algebra with P(a1|C) = (3/4, 1/4) over the half/half split
FiniteProbabilityAlgebra skewed4() {
    return FiniteProbabilityAlgebra(
        {Rational(3, 8), Rational(1, 8), Rational(1, 8), Rational(3, 8)});
}
} // namespace

TEST_CASE("entropy spot values") {
    auto coin = uniform_algebra(2);
    double h = cond_entropy(coin, Subalgebra::discrete(coin), Subalgebra::trivial(coin));
    CHECK(std::fabs(h - 0.6931471805599453) < kTol);

    // C refines A: every conditional probability is 0 or 1
    auto alg = uniform_algebra(4);
    Subalgebra A = Subalgebra::generated(alg, {alg.event({0, 1})});
    CHECK(cond_entropy(alg, A, Subalgebra::discrete(alg)) == 0.0);

    auto sk = skewed4();
    Subalgebra a_split = Subalgebra::generated(sk, {sk.event({0, 2})});
    Subalgebra w_split = Subalgebra::generated(sk, {sk.event({0, 1})});
    CHECK(std::fabs(cond_entropy(sk, a_split, w_split) - 0.5623351446188083) < 1e-9);
}

TEST_CASE("chain rule") {
    auto alg = uniform_algebra(4);
    Subalgebra A = Subalgebra::generated(alg, {alg.event({0, 1})});
    Subalgebra E = Subalgebra::trivial(alg);
    ChainRuleReport same = chain_rule_check(alg, A, A, E);
    CHECK(same.diff < kTol);

    // independent splits on the product algebra: entropies add
    Subalgebra B = Subalgebra::generated(alg, {alg.event({0, 2})});
    ChainRuleReport prod = chain_rule_check(alg, A, B, E);
    CHECK(prod.diff < kTol);
    CHECK(std::fabs(cond_entropy(alg, join_subalgebras(alg, A, B), E) -
                    (cond_entropy(alg, A, E) + cond_entropy(alg, B, E))) < kTol);

    Rng rng(81);
    for (int i = 0; i < 60; ++i) {
        auto r = random_algebra(rng.next(), 2 + rng.below(7));
        ChainRuleReport rep =
            chain_rule_check(r, random_subalgebra(rng, r, 4), random_subalgebra(rng, r, 4),
                             random_subalgebra(rng, r, 4));
        CHECK(rep.diff < kTol);
    }
}

TEST_CASE("entropy drop against the exact Pythagoras bound") {
    auto sk = skewed4();
    Subalgebra A = Subalgebra::generated(sk, {sk.event({0, 2})});
    Subalgebra E = Subalgebra::trivial(sk);
    Subalgebra D = Subalgebra::generated(sk, {sk.event({0, 1})});
    EntropyDropReport rep = entropy_drop(sk, A, E, D);
    CHECK(rep.rhs_bound == Rational(1, 16));
    CHECK(std::fabs(rep.gap - (std::log(2.0) - 0.5623351446188083)) < 1e-9);
    CHECK(rep.gap >= rat_double(rep.rhs_bound) - kTol);

    // independence gives gap 0 and bound 0
    auto alg = uniform_algebra(4);
    Subalgebra A2 = Subalgebra::generated(alg, {alg.event({0, 1})});
    Subalgebra D2 = Subalgebra::generated(alg, {alg.event({0, 2})});
    EntropyDropReport indep = entropy_drop(alg, A2, Subalgebra::trivial(alg), D2);
    CHECK(indep.rhs_bound == 0);
    CHECK(std::fabs(indep.gap) < kTol);

    CHECK_THROWS_AS(entropy_drop(alg, A2, D2, Subalgebra::trivial(alg)), NotCoarsening);
}

TEST_CASE("entropy-forking gap on the running example") {
    auto sk = skewed4();
    Subalgebra E = Subalgebra::trivial(sk);
    Subalgebra D = Subalgebra::generated(sk, {sk.event({0, 1})});
    std::vector<Event> a{sk.event({0, 2}), sk.event({1, 3})};

    EntropyForkingReport rep = entropy_forking_gap(sk, a, E, D, Rational(1, 8));
    CHECK(rep.forks); // type distance 1/4 > 1/8
    CHECK(rep.inequality_ok);
    double gap = rep.h_coarse - rep.h_fine;
    CHECK(gap > 0.03125); // even the eps = 1/4 threshold is cleared

    EntropyForkingReport none = entropy_forking_gap(sk, a, D, D, Rational(1, 8));
    CHECK_FALSE(none.forks);
    CHECK(none.inequality_ok); // vacuously
}

TEST_CASE("monotonicity in both arguments") {
    Rng rng(82);
    for (int i = 0; i < 50; ++i) {
        auto alg = random_algebra(rng.next(), 2 + rng.below(7));
        Subalgebra C = random_subalgebra(rng, alg, 5);
        Subalgebra A = random_coarsening(rng, alg, C); // A <= C as subalgebras
        Subalgebra E0 = random_subalgebra(rng, alg, 4);
        CHECK(cond_entropy(alg, A, E0) <= cond_entropy(alg, C, E0) + kTol);

        Subalgebra D = random_subalgebra(rng, alg, 4);
        Subalgebra E = random_coarsening(rng, alg, D);
        CHECK(cond_entropy(alg, A, E) >= cond_entropy(alg, A, D) - kTol);
    }
}

TEST_CASE("entropy is invariant under measure-preserving atom permutations") {
    auto alg = uniform_algebra(6);
    Rng rng(83);
    std::vector<std::size_t> perm{3, 0, 5, 1, 2, 4};
    auto permute = [&](const Subalgebra& s) {
        std::vector<Bits> blocks;
        for (std::size_t j = 0; j < s.block_count(); ++j) {
            Bits b(alg.size());
            for (std::size_t i = 0; i < alg.size(); ++i)
                if (s.blocks()[j].test(i)) b.set(perm[i]);
            blocks.push_back(b);
        }
        return Subalgebra::from_blocks(alg, std::move(blocks));
    };
    for (int i = 0; i < 20; ++i) {
        Subalgebra A = random_subalgebra(rng, alg, 4);
        Subalgebra C = random_subalgebra(rng, alg, 4);
        CHECK(std::fabs(cond_entropy(alg, A, C) -
                        cond_entropy(alg, permute(A), permute(C))) < kTol);
    }
}
