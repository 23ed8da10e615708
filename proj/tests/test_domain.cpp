#include <doctest.h>

#include "kex/domain.hpp"

using namespace kex;

TEST_CASE("blood compatibility follows the ABO donation rules") {
    CHECK(blood_compatible(BloodGroup::O, BloodGroup::A));
    CHECK_FALSE(blood_compatible(BloodGroup::AB, BloodGroup::O));
    CHECK(blood_compatible(BloodGroup::A, BloodGroup::A));

    const BloodGroup all[] = {BloodGroup::O, BloodGroup::A, BloodGroup::B, BloodGroup::AB};
    for (BloodGroup x : all) {
        CHECK(blood_compatible(x, BloodGroup::AB)); // AB is the universal recipient
        CHECK(blood_compatible(BloodGroup::O, x));  // O is the universal donor
        CHECK(blood_compatible(x, x));
        if (x != BloodGroup::AB) CHECK_FALSE(blood_compatible(BloodGroup::AB, x));
    }
    CHECK_FALSE(blood_compatible(BloodGroup::A, BloodGroup::B));
    CHECK_FALSE(blood_compatible(BloodGroup::B, BloodGroup::A));
    CHECK_FALSE(blood_compatible(BloodGroup::A, BloodGroup::O));
    CHECK_FALSE(blood_compatible(BloodGroup::B, BloodGroup::O));
}

TEST_CASE("blood group names round-trip") {
    for (int b = 0; b < kBloodGroupCount; ++b) {
        auto bg = static_cast<BloodGroup>(b);
        CHECK(blood_group_from_string(to_string(bg)) == bg);
    }
    CHECK_THROWS_AS(blood_group_from_string("Z"), ContractViolation);
}

namespace {

CompatibilityGraph two_cycle_graph() {
    std::vector<Pair> pool(2);
    pool[0].id = 0;
    pool[1].id = 1;
    return CompatibilityGraph(pool, {Arc{0, 1, 10.0}, Arc{1, 0, 10.0}});
}

} // namespace

TEST_CASE("graph construction rejects malformed input") {
    std::vector<Pair> pool(2);
    pool[0].id = 7;
    pool[1].id = 7;
    CHECK_THROWS_AS(CompatibilityGraph(pool, {}), ContractViolation); // duplicate ids

    pool[1].id = 8;
    CHECK_THROWS_AS(CompatibilityGraph(pool, {Arc{0, 0, 5.0}}), ContractViolation);
    CHECK_THROWS_AS(CompatibilityGraph(pool, {Arc{0, 1, 0.0}}), ContractViolation);
    CHECK_THROWS_AS(CompatibilityGraph(pool, {Arc{0, 2, 5.0}}), ContractViolation);
    CHECK_THROWS_AS(CompatibilityGraph(pool, {Arc{0, 1, 5.0}, Arc{0, 1, 6.0}}),
                    ContractViolation);
}

TEST_CASE("graph vertices are ordered by pair id") {
    std::vector<Pair> pool(3);
    pool[0].id = 30;
    pool[1].id = 10;
    pool[2].id = 20;
    CompatibilityGraph g(pool, {});
    CHECK(g.pair(0).id == 10);
    CHECK(g.pair(1).id == 20);
    CHECK(g.pair(2).id == 30);
    CHECK(g.index_of(20) == 1);
    CHECK(g.index_of(99) == -1);
}

TEST_CASE("exchange cycles must use arcs present in the graph") {
    CompatibilityGraph g = two_cycle_graph();
    ExchangeCycle c(g, {0, 1});
    CHECK(c.length() == 2);
    CHECK(c.weight() == doctest::Approx(20.0));

    CHECK_THROWS_AS(ExchangeCycle(g, {1, 0, 1}), ContractViolation);   // repeated vertex
    CHECK_THROWS_AS(ExchangeCycle(g, {0}), ContractViolation);         // too short

    std::vector<Pair> pool(3);
    for (int i = 0; i < 3; ++i) pool[static_cast<std::size_t>(i)].id = static_cast<PairId>(i);
    CompatibilityGraph path(pool, {Arc{0, 1, 5.0}, Arc{1, 2, 5.0}});
    CHECK_THROWS_AS(ExchangeCycle(path, {0, 1, 2}), ContractViolation); // 2->0 missing
}

TEST_CASE("cycle domestic counts track same-registry arcs") {
    std::vector<Pair> pool(4);
    for (int i = 0; i < 4; ++i) pool[static_cast<std::size_t>(i)].id = static_cast<PairId>(i);
    pool[0].registry = 0;
    pool[1].registry = 0;
    pool[2].registry = 1;
    pool[3].registry = 1;
    CompatibilityGraph g(pool, {Arc{0, 1, 10.0}, Arc{1, 2, 10.0}, Arc{2, 3, 10.0},
                                Arc{3, 0, 10.0}});
    ExchangeCycle c(g, {0, 1, 2, 3});
    REQUIRE(c.domestic_counts().size() == 2);
    CHECK(c.domestic_counts()[0] == 1); // 0->1
    CHECK(c.domestic_counts()[1] == 1); // 2->3
    int dom = c.domestic_counts()[0] + c.domestic_counts()[1];
    CHECK(dom <= c.length());
}

TEST_CASE("solutions reject overlapping cycles and add up their totals") {
    std::vector<Pair> pool(4);
    for (int i = 0; i < 4; ++i) pool[static_cast<std::size_t>(i)].id = static_cast<PairId>(i);
    CompatibilityGraph g(pool, {Arc{0, 1, 10.0}, Arc{1, 0, 12.0}, Arc{2, 3, 20.0},
                                Arc{3, 2, 20.0}, Arc{1, 2, 15.0}, Arc{2, 1, 15.0}});
    ExchangeCycle a(g, {0, 1});
    ExchangeCycle b(g, {2, 3});
    Solution sol(g, {a, b}, 1);
    CHECK(sol.total_transplants() == 4);
    CHECK(sol.total_score() == doctest::Approx(62.0));
    CHECK(sol.matched_per_registry()[0] == 4);
    int total = 0;
    for (int m : sol.matched_per_registry()) total += m;
    CHECK(total == sol.total_transplants());

    ExchangeCycle overlap(g, {1, 2});
    CHECK_THROWS_AS(Solution(g, {a, overlap}, 1), ContractViolation);
}
