#include <catch2/catch_amalgamated.hpp>

#include "pralg/algebra.hpp"

using namespace pralg;

namespace {
FiniteProbabilityAlgebra half_quarter_quarter() {
    return FiniteProbabilityAlgebra({Rational(1, 2), Rational(1, 4), Rational(1, 4)},
                                    {"x", "y", "z"});
}
} // namespace

TEST_CASE("mu on the running three-atom algebra") {
    auto alg = half_quarter_quarter();
    CHECK(alg.mu(alg.empty_event()) == 0);
    CHECK(alg.mu(alg.full_event()) == 1);
    CHECK(alg.mu(alg.event({0, 1})) == Rational(3, 4));
}

TEST_CASE("dist is the measure of the symmetric difference") {
    auto alg = half_quarter_quarter();
    Event e = alg.event({0});
    CHECK(alg.dist(e, e) == 0);
    CHECK(alg.dist(alg.event({0}), alg.event({1})) == Rational(3, 4));
    // complement symmetry
    Event f = alg.event({1, 2});
    CHECK(alg.dist(complement_event(alg, e), complement_event(alg, f)) == alg.dist(e, f));
}

TEST_CASE("boolean operations") {
    auto alg = half_quarter_quarter();
    CHECK(complement_event(alg, alg.empty_event()) == alg.full_event());
    CHECK(meet(alg.event({0, 1}), alg.event({1, 2})) == alg.event({1}));
    Event e = alg.event({0, 2});
    CHECK(join(e, complement_event(alg, e)) == alg.full_event());
}

TEST_CASE("events of a different algebra are rejected") {
    auto a = half_quarter_quarter();
    auto b = uniform_algebra(3);
    CHECK_THROWS_AS(a.mu(b.full_event()), ForeignEvent);
    CHECK_THROWS_AS(meet(a.full_event(), b.full_event()), ForeignEvent);
}

TEST_CASE("associated partition of a pair, lexicographic cell order") {
    auto alg = half_quarter_quarter();
    std::vector<Event> tuple{alg.event({0}), alg.event({0, 1})};
    auto cells = associated_partition(alg, tuple);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0] == alg.event({2})); // (-1,-1)
    CHECK(cells[1] == alg.event({1})); // (-1,+1)
    CHECK(cells[2] == alg.empty_event());
    CHECK(cells[3] == alg.event({0})); // (+1,+1)

    auto single = associated_partition(alg, {alg.full_event()});
    CHECK(single[0] == alg.empty_event());
    CHECK(single[1] == alg.full_event());

    CHECK_THROWS_AS(associated_partition(alg, {}), EmptyTuple);
}

TEST_CASE("cells always partition 1") {
    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(8));
        std::vector<Event> tuple;
        for (std::size_t k = 0; k < 1 + rng.below(3); ++k)
            tuple.push_back(random_event(rng, alg));
        auto cells = associated_partition(alg, tuple);
        CHECK(is_partition_of_one(alg, cells));
    }
}

TEST_CASE("tuple_from_partition inverts associated_partition") {
    auto alg = half_quarter_quarter();
    std::vector<Event> tuple{alg.event({0}), alg.event({0, 1})};
    auto cells = associated_partition(alg, tuple);
    CHECK(tuple_from_partition(alg, cells) == tuple);

    CHECK(tuple_from_partition(alg, {alg.empty_event(), alg.full_event()}) ==
          std::vector<Event>{alg.full_event()});
    CHECK(tuple_from_partition(alg, {alg.full_event(), alg.empty_event()}) ==
          std::vector<Event>{alg.empty_event()});

    CHECK_THROWS_AS(
        tuple_from_partition(alg, {alg.empty_event(), alg.event({0}), alg.event({1, 2})}),
        BadLength);
    CHECK_THROWS_AS(tuple_from_partition(alg, {alg.event({0}), alg.event({0, 1, 2})}),
                    NotAPartition);

    Rng rng(12);
    for (int i = 0; i < 30; ++i) {
        auto rand_alg = random_algebra(rng.next(), 1 + rng.below(7));
        std::vector<Event> t;
        for (std::size_t k = 0; k < 1 + rng.below(3); ++k)
            t.push_back(random_event(rng, rand_alg));
        CHECK(tuple_from_partition(rand_alg, associated_partition(rand_alg, t)) == t);
    }
}

TEST_CASE("generated subalgebra: membership-pattern classes") {
    auto alg = half_quarter_quarter();
    Subalgebra trivial = Subalgebra::generated(alg, {});
    CHECK(trivial.block_count() == 1);

    Subalgebra s = Subalgebra::generated(alg, {alg.event({0})});
    REQUIRE(s.block_count() == 2);
    CHECK(s.block_event(0) == alg.event({0}));
    CHECK(s.block_event(1) == alg.event({1, 2}));

    Subalgebra full =
        Subalgebra::generated(alg, {alg.event({0}), alg.event({1}), alg.event({2})});
    CHECK(full == Subalgebra::discrete(alg));

    // every generator is a union of blocks
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        auto rand_alg = random_algebra(rng.next(), 1 + rng.below(8));
        std::vector<Event> gens;
        for (std::size_t k = 0; k < 1 + rng.below(3); ++k)
            gens.push_back(random_event(rng, rand_alg));
        Subalgebra g = Subalgebra::generated(rand_alg, gens);
        for (const Event& e : gens) CHECK(g.measures(e));
    }
}

TEST_CASE("measure identities, exhaustive on small algebras") {
    Rng rng(14);
    for (int i = 0; i < 10; ++i) {
        auto alg = random_algebra(rng.next(), 1 + rng.below(6));
        const std::uint64_t space = 1ull << alg.size();
        for (std::uint64_t x = 0; x < space; ++x)
            for (std::uint64_t y = 0; y < space; ++y) {
                Event ex = alg.event_from_mask(x), ey = alg.event_from_mask(y);
                CHECK(alg.mu(join(ex, ey)) + alg.mu(meet(ex, ey)) == alg.mu(ex) + alg.mu(ey));
                Event ez = alg.event_from_mask(rng.below(space));
                CHECK(alg.dist(ex, ey) <= alg.dist(ex, ez) + alg.dist(ez, ey));
            }
    }
}

TEST_CASE("verify_axioms: valid and deliberately broken structures") {
    CHECK(verify_axioms(uniform_algebra(2)).all_pass());

    auto broken_mass = FiniteProbabilityAlgebra::unchecked({Rational(1, 2), Rational(1, 4)});
    AxiomReport rep = verify_axioms(broken_mass);
    CHECK_FALSE(rep.all_pass());
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "total mass 1" && !c.pass) {
            found = true;
            CHECK(c.witness.find("3/4") != std::string::npos);
        }
    CHECK(found);

    auto zero_weight = FiniteProbabilityAlgebra::unchecked({Rational(1), Rational(0)});
    AxiomReport rep2 = verify_axioms(zero_weight);
    CHECK_FALSE(rep2.all_pass());
    bool positivity = false;
    for (const auto& c : rep2.checks)
        if (c.name == "strict positivity" && !c.pass) positivity = true;
    CHECK(positivity);
}

TEST_CASE("structure generators") {
    auto u4 = uniform_algebra(4);
    REQUIRE(u4.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(u4.weight(i) == Rational(1, 4));
    CHECK(uniform_algebra(1).weight(0) == 1);

    auto a = random_algebra(7, 3);
    auto b = random_algebra(7, 3);
    CHECK(a.weights() == b.weights());
    CHECK(verify_axioms(a).all_pass());

    CHECK_THROWS_AS(FiniteProbabilityAlgebra({Rational(1, 2), Rational(1, 4)}),
                    InvalidStructure);
    CHECK_THROWS_AS(FiniteProbabilityAlgebra({Rational(1), Rational(0)}), InvalidStructure);
}

TEST_CASE("subalgebra refinement and joins") {
    auto alg = uniform_algebra(4);
    Subalgebra discrete = Subalgebra::discrete(alg);
    Subalgebra trivial = Subalgebra::trivial(alg);
    Subalgebra split = Subalgebra::generated(alg, {alg.event({0, 1})});
    CHECK(discrete.refines(split));
    CHECK(split.refines(trivial));
    CHECK_FALSE(trivial.refines(split));
    CHECK(join_subalgebras(alg, split, trivial) == split);
    Subalgebra other = Subalgebra::generated(alg, {alg.event({0, 2})});
    CHECK(join_subalgebras(alg, split, other) == discrete);
}
