#include <catch2/catch_amalgamated.hpp>

#include "pralg/rv.hpp"

using namespace pralg;

TEST_CASE("rho_2 and d_P on a swapped coin") {
    auto coin = uniform_algebra(2);
    RVPartition E = RVPartition::of(coin, {coin.event({0}), coin.event({1})});
    RVPartition F = RVPartition::of(coin, {coin.event({1}), coin.event({0})});
    CHECK(rho_n(coin, E, F) == Rational(1, 2));
    CHECK(rho_n(coin, E, E) == 0);
    CHECK(dP_rv(coin, E, F) == 1);
    CHECK(dP_rv(coin, E, E) == 0);
    // n = 2: d_P equals the distance of the first coordinates
    CHECK(dP_rv(coin, E, F) == coin.dist(E.parts[0], F.parts[0]));

    RVPartition longer = RVPartition::of(coin, {coin.event({0}), coin.event({1}),
                                                coin.empty_event()});
    CHECK_THROWS_AS(rho_n(coin, E, longer), LengthMismatch);
    CHECK_THROWS_AS(dP_rv(coin, E, longer), LengthMismatch);
}

TEST_CASE("rho_n equals the L1 distance of the step functions") {
    Rng rng(71);
    for (int i = 0; i < 60; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(8));
        std::size_t n = 1 + rng.below(6);
        RVPartition E = RVPartition::of(alg, random_partition(rng, alg, n));
        RVPartition F = RVPartition::of(alg, random_partition(rng, alg, n));
        CHECK(rho_n(alg, E, F) ==
              l1_distance(alg, step_function_of(alg, E), step_function_of(alg, F)));
        Rational dp = dP_rv(alg, E, F);
        CHECK(dp / static_cast<long long>(n) <= rho_n(alg, E, F));
        CHECK(rho_n(alg, E, F) <= dp);
    }
}

TEST_CASE("projection pi merges adjacent pairs") {
    auto alg = uniform_algebra(4);
    RVPartition E = RVPartition::of(
        alg, {alg.event({0}), alg.event({1}), alg.event({2}), alg.event({3})});
    RVPartition P = project_pi(alg, E);
    REQUIRE(P.n == 2);
    CHECK(P.parts[0] == alg.event({0, 1}));
    CHECK(P.parts[1] == alg.event({2, 3}));

    // all mass on the lower part of a coin: the projected value jumps by 1/m
    auto point = uniform_algebra(1);
    RVPartition low = RVPartition::of(point, {point.full_event(), point.empty_event()});
    RVPartition proj = project_pi(point, low);
    CHECK(l1_distance(point, step_function_of(point, low), step_function_of(point, proj)) ==
          Rational(1, 2));

    RVPartition odd = RVPartition::of(alg, {alg.event({0}), alg.event({1}),
                                            alg.event({2, 3})});
    CHECK_THROWS_AS(project_pi(alg, odd), OddLength);
}

TEST_CASE("projection gap is at most 1/m") {
    Rng rng(72);
    for (int i = 0; i < 60; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(8));
        std::size_t m = 1 + rng.below(4);
        RVPartition E = RVPartition::of(alg, random_partition(rng, alg, 2 * m));
        RVPartition P = project_pi(alg, E);
        StepFunction fe = step_function_of(alg, E), fp = step_function_of(alg, P);
        CHECK(l1_distance(alg, fe, fp) <= Rational(1, static_cast<long long>(m)));
    }
}

TEST_CASE("dyadic approximation at depth 1") {
    auto coin = uniform_algebra(2);
    StepFunction f{Subalgebra::discrete(coin), {Rational(1), Rational(1, 2)}};
    RVPartition E = dyadic_approx(coin, f, 1);
    REQUIRE(E.n == 2);
    CHECK(E.parts[0] == coin.event({1})); // value 1/2 -> [0, 1/2]
    CHECK(E.parts[1] == coin.event({0})); // value 1 -> (1/2, 1]
    CHECK(l1_distance(coin, step_function_of(coin, E), f) == 0);

    StepFunction ones = constant_step(coin, Subalgebra::trivial(coin), Rational(1));
    RVPartition top = dyadic_approx(coin, ones, 2);
    CHECK(top.parts[3] == coin.full_event());

    StepFunction bad{Subalgebra::discrete(coin), {Rational(2), Rational(0)}};
    CHECK_THROWS_AS(dyadic_approx(coin, bad, 1), ValueOutOfRange);
}

TEST_CASE("dyadic approximations are coherent under pi") {
    Rng rng(73);
    for (int i = 0; i < 60; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(8));
        Subalgebra C = random_subalgebra(rng, alg, 5);
        StepFunction f = cond_prob(alg, random_event(rng, alg), C);
        std::size_t depth = 1 + rng.below(4);
        RVPartition fine = dyadic_approx(alg, f, depth + 1);
        CHECK(project_pi(alg, fine) == dyadic_approx(alg, f, depth));
        Rational err = l1_distance(alg, step_function_of(alg, fine), f);
        CHECK(err <= Rational(1, 1ll << (depth + 1)));
    }
}
