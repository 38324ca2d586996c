#include <catch2/catch_amalgamated.hpp>

#include "pralg/independence.hpp"

using namespace pralg;

namespace {
FiniteProbabilityAlgebra half_quarter_quarter() {
    return FiniteProbabilityAlgebra({Rational(1, 2), Rational(1, 4), Rational(1, 4)},
                                    {"x", "y", "z"});
}
} // namespace

TEST_CASE("independence on the product algebra") {
    auto alg = uniform_algebra(4); // two fair coins: bit0 = {0,1}, bit1 = {0,2}
    std::vector<Event> S{alg.event({0, 1})};
    std::vector<Event> T{alg.event({0, 2})};
    CHECK(independent(alg, S, T, {}));
    CHECK(independence_defect(alg, S, T, {}) == 0);
    IndependenceReport rep = characterization_report(alg, S, T, {});
    CHECK(rep.all_agree());
    CHECK(rep.independent());
}

TEST_CASE("a dependent pair and its defect") {
    auto alg = half_quarter_quarter();
    std::vector<Event> S{alg.event({0})};
    std::vector<Event> T{alg.event({0, 1})};
    CHECK_FALSE(independent(alg, S, T, {}));
    CHECK(independence_defect(alg, S, T, {}) == Rational(1, 8));
    CHECK(independence_defect(alg, S, T, {}) == independence_defect(alg, T, S, {}));
    IndependenceReport rep = characterization_report(alg, S, T, {});
    CHECK(rep.all_agree());
    CHECK_FALSE(rep.product_identity);
    CHECK_FALSE(rep.cond_prob_drop);
    CHECK_FALSE(rep.w_measurable);
    CHECK_FALSE(rep.l2_norms_equal);
}

TEST_CASE("a trivial side is always independent") {
    auto alg = half_quarter_quarter();
    std::vector<Event> S{alg.event({0}), alg.event({1})};
    std::vector<Event> W{alg.event({0, 1})};
    CHECK(independent(alg, S, {alg.full_event()}, W));
}

TEST_CASE("monotone closure: adjoining <WT> atoms on the right") {
    Rng rng(51);
    for (int i = 0; i < 60; ++i) {
        auto alg = random_algebra(rng.next(), 2 + rng.below(6));
        std::vector<Event> S{random_event(rng, alg)};
        std::vector<Event> T{random_event(rng, alg)};
        std::vector<Event> W;
        if (rng.coin()) W.push_back(random_event(rng, alg));
        std::vector<Event> WT = W;
        WT.insert(WT.end(), T.begin(), T.end());
        Subalgebra gen = Subalgebra::generated(alg, WT);
        std::vector<Event> closure;
        for (std::size_t j = 0; j < gen.block_count(); ++j)
            closure.push_back(gen.block_event(j));
        CHECK(independent(alg, S, T, W) == independent(alg, S, closure, W));
    }
}

TEST_CASE("extension lemma on the running example") {
    auto alg = half_quarter_quarter();
    std::vector<Event> A{alg.event({0, 1}), alg.event({2})};
    IndependentCopy copy = extend_with_independent_copy(
        alg, A, Subalgebra::trivial(alg), Subalgebra::discrete(alg));

    // stacked pieces: each atom splits in the proportions (3/4, 1/4)
    REQUIRE(copy.extension.size() == 6);
    CHECK(copy.extension.weights() ==
          std::vector<Rational>{Rational(3, 8), Rational(1, 8), Rational(3, 16),
                                Rational(1, 16), Rational(3, 16), Rational(1, 16)});

    Event e1 = copy.copies[0];
    CHECK(copy.extension.mu(e1) == Rational(3, 4));
    Event x_img = copy.atom_images[0];
    CHECK(copy.extension.mu(meet(e1, x_img)) == Rational(3, 8));
    CHECK(copy.extension.mu(meet(e1, x_img)) ==
          copy.extension.mu(e1) * copy.extension.mu(x_img));
}

TEST_CASE("extension lemma degenerate cases") {
    auto alg = half_quarter_quarter();
    // A already C-measurable: pieces are indicator slices, no real splitting
    Subalgebra C = Subalgebra::generated(alg, {alg.event({0})});
    std::vector<Event> A{alg.event({0}), alg.event({1, 2})};
    IndependentCopy copy = extend_with_independent_copy(alg, A, C, Subalgebra::discrete(alg));
    CHECK(copy.extension.size() == alg.size());
    for (std::size_t i = 0; i < A.size(); ++i)
        CHECK(copy.copies[i] == copy.map_event(alg, A[i]));

    // m = 1: the identity extension
    IndependentCopy one = extend_with_independent_copy(
        alg, {alg.full_event()}, Subalgebra::trivial(alg), Subalgebra::discrete(alg));
    CHECK(one.extension.size() == alg.size());
    CHECK(one.copies[0] == one.extension.full_event());

    CHECK_THROWS_AS(extend_with_independent_copy(alg, {alg.event({0}), alg.event({0, 1})},
                                                 Subalgebra::trivial(alg),
                                                 Subalgebra::discrete(alg)),
                    NotAPartition);
    CHECK_THROWS_AS(extend_with_independent_copy(alg, A, Subalgebra::discrete(alg),
                                                 Subalgebra::trivial(alg)),
                    NotCoarsening);
}

TEST_CASE("extension lemma contract on random instances") {
    Rng rng(52);
    for (int i = 0; i < 60; ++i) {
        auto alg = random_algebra(rng.next(), 2 + rng.below(7));
        std::vector<Event> A = random_partition(rng, alg, 1 + rng.below(4));
        Subalgebra D = random_subalgebra(rng, alg, 4);
        Subalgebra C = random_coarsening(rng, alg, D);
        IndependentCopy copy = extend_with_independent_copy(alg, A, C, D);
        Subalgebra C_img = copy.map_subalgebra(alg, C);
        for (std::size_t idx = 0; idx < A.size(); ++idx)
            CHECK(cond_prob(copy.extension, copy.copies[idx], C_img) ==
                  cond_prob(copy.extension, copy.map_event(alg, A[idx]), C_img));
        std::vector<Event> D_img, C_gen;
        for (std::size_t j = 0; j < D.block_count(); ++j)
            D_img.push_back(copy.map_event(alg, D.block_event(j)));
        for (std::size_t j = 0; j < C.block_count(); ++j)
            C_gen.push_back(copy.map_event(alg, C.block_event(j)));
        CHECK(independent(copy.extension, copy.copies, D_img, C_gen));
        CHECK(copy.extension.mu(copy.extension.full_event()) == 1);
    }
}
