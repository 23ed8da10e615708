#include <doctest.h>

#include <array>
#include <cmath>

#include "kex/generator.hpp"

using namespace kex;

namespace {

Registry point_mass_registry(std::vector<double> donor, std::vector<double> recipient) {
    Registry r;
    r.index = 0;
    r.name = "R1";
    r.donor_bg_distribution = std::move(donor);
    r.recipient_bg_distribution = std::move(recipient);
    return r;
}

bool same_pair(const Pair& a, const Pair& b) {
    return a.id == b.id && a.registry == b.registry && a.donor_bg == b.donor_bg &&
           a.recipient_bg == b.recipient_bg && a.donor_hla == b.donor_hla &&
           a.recipient_hla == b.recipient_hla && a.donor_age == b.donor_age &&
           a.recipient_age == b.recipient_age && a.arrival_round == b.arrival_round &&
           a.self_compatible == b.self_compatible &&
           a.own_match_score == b.own_match_score;
}

} // namespace

TEST_CASE("generator config validation") {
    GeneratorConfig bad;
    bad.crossmatch_positive_probability = 1.5;
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
    bad = GeneratorConfig{};
    bad.age_min = 10;
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
    bad = GeneratorConfig{};
    bad.antigen_alphabet_dr = 0;
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("point-mass distributions pin blood groups") {
    Registry reg = point_mass_registry({1, 0, 0, 0}, {0, 0, 0, 1});

    GeneratorConfig cfg;
    cfg.crossmatch_positive_probability = 0.0;
    PairGenerator gen(cfg, 42);
    Rng rng(7);
    Pair p = gen.draw_pair(reg, 0, rng);
    CHECK(p.donor_bg == BloodGroup::O);
    CHECK(p.recipient_bg == BloodGroup::AB);
    CHECK(p.self_compatible); // O donates to AB and the crossmatch is negative
    CHECK(p.own_match_score == edge_weight(p, p));

    cfg.crossmatch_positive_probability = 1.0;
    PairGenerator gen2(cfg, 42);
    Rng rng2(7);
    Pair q = gen2.draw_pair(reg, 0, rng2);
    CHECK_FALSE(q.self_compatible);
    CHECK(q.own_match_score == 0.0);
}

TEST_CASE("incompatible-only generation fails on a degenerate distribution") {
    Registry reg = point_mass_registry({1, 0, 0, 0}, {1, 0, 0, 0}); // all O
    GeneratorConfig cfg;
    cfg.include_compatible_pairs = false;
    cfg.crossmatch_positive_probability = 0.0; // every O->O pair is compatible
    PairGenerator gen(cfg, 1);
    Rng rng(1);
    CHECK_THROWS_AS(gen.draw_pair(reg, 0, rng), GenerationError);
}

TEST_CASE("incompatible-only generation never emits self-compatible pairs") {
    Registry reg = point_mass_registry({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
    GeneratorConfig cfg;
    cfg.include_compatible_pairs = false;
    PairGenerator gen(cfg, 99);
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) CHECK_FALSE(gen.draw_pair(reg, 0, rng).self_compatible);
}

TEST_CASE("identical seeds give identical pair streams") {
    Registry reg = point_mass_registry({0.2, 0.25, 0.4, 0.15}, {0.45, 0.2, 0.3, 0.05});
    reg.arrival_low = 5;
    reg.arrival_high = 10;
    GeneratorConfig cfg;

    PairGenerator a(cfg, 1234), b(cfg, 1234);
    for (int round = 0; round < 5; ++round) {
        Rng ra = a.arrival_stream(reg, round);
        Rng rb = b.arrival_stream(reg, round);
        std::vector<Pair> batch_a = a.arrivals(reg, round, ra);
        std::vector<Pair> batch_b = b.arrivals(reg, round, rb);
        REQUIRE(batch_a.size() == batch_b.size());
        for (std::size_t i = 0; i < batch_a.size(); ++i)
            CHECK(same_pair(batch_a[i], batch_b[i]));
        for (const Pair& p : batch_a) CHECK(p.arrival_round == round);
    }
}

TEST_CASE("degenerate arrival width gives exactly that many pairs") {
    Registry reg = point_mass_registry({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
    reg.arrival_low = 5;
    reg.arrival_high = 5;
    PairGenerator gen(GeneratorConfig{}, 7);
    Rng rng = gen.arrival_stream(reg, 3);
    CHECK(gen.arrivals(reg, 3, rng).size() == 5);
}

TEST_CASE("arrival counts have the discrete-uniform mean") {
    Registry reg = point_mass_registry({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
    reg.arrival_low = 5;
    reg.arrival_high = 10;
    PairGenerator gen(GeneratorConfig{}, 2024);
    double total = 0;
    const int rounds = 10000;
    for (int round = 0; round < rounds; ++round) {
        Rng rng = gen.arrival_stream(reg, round);
        total += static_cast<double>(rng.uniform_int(reg.arrival_low, reg.arrival_high));
    }
    double mean = total / rounds;
    CHECK(mean >= 7.35);
    CHECK(mean <= 7.65);
}

TEST_CASE("empirical blood-group frequencies match the configured vectors") {
    Registry reg = point_mass_registry({0.2, 0.25, 0.4, 0.15}, {0.45, 0.2, 0.3, 0.05});
    GeneratorConfig cfg;
    cfg.crossmatch_positive_probability = 1.0;
    cfg.include_compatible_pairs = true;
    PairGenerator gen(cfg, 555);
    Rng rng(555);

    const int samples = 10000;
    std::array<int, 4> donor{}, recipient{};
    for (int i = 0; i < samples; ++i) {
        Pair p = gen.draw_pair(reg, 0, rng);
        ++donor[static_cast<std::size_t>(p.donor_bg)];
        ++recipient[static_cast<std::size_t>(p.recipient_bg)];
    }
    for (int b = 0; b < 4; ++b) {
        double fd = static_cast<double>(donor[static_cast<std::size_t>(b)]) / samples;
        double fr = static_cast<double>(recipient[static_cast<std::size_t>(b)]) / samples;
        CHECK(std::abs(fd - reg.donor_bg_distribution[static_cast<std::size_t>(b)]) <= 0.02);
        CHECK(std::abs(fr - reg.recipient_bg_distribution[static_cast<std::size_t>(b)]) <=
              0.02);
    }
}

TEST_CASE("generated ages and antigens stay in their configured ranges") {
    Registry reg = point_mass_registry({0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25});
    GeneratorConfig cfg;
    cfg.age_min = 30;
    cfg.age_max = 40;
    cfg.antigen_alphabet_a = 2;
    cfg.antigen_alphabet_b = 3;
    cfg.antigen_alphabet_dr = 4;
    PairGenerator gen(cfg, 9);
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        Pair p = gen.draw_pair(reg, 0, rng);
        CHECK(p.donor_age >= 30);
        CHECK(p.donor_age <= 40);
        CHECK(p.recipient_age >= 30);
        CHECK(p.recipient_age <= 40);
        CHECK(p.donor_hla.a1 < 2);
        CHECK(p.donor_hla.b1 < 3);
        CHECK(p.donor_hla.dr1 < 4);
        CHECK(p.recipient_hla.a2 < 2);
        CHECK(p.recipient_hla.b2 < 3);
        CHECK(p.recipient_hla.dr2 < 4);
    }
}
