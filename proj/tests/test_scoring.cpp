#include <doctest.h>

#include <set>

#include "kex/rng.hpp"
#include "kex/scoring.hpp"

using namespace kex;

namespace {

// Independent mismatch oracle: literal multiset difference per locus.
int mismatch_oracle(const HlaProfile& d, const HlaProfile& r) {
    auto locus = [](int d1, int d2, int r1, int r2) {
        std::multiset<int> recipient{r1, r2};
        int mm = 0;
        for (int antigen : {d1, d2}) {
            auto it = recipient.find(antigen);
            if (it != recipient.end()) recipient.erase(it);
            else ++mm;
        }
        return mm;
    };
    return locus(d.a1, d.a2, r.a1, r.a2) + locus(d.b1, d.b2, r.b1, r.b2) +
           locus(d.dr1, d.dr2, r.dr1, r.dr2);
}

HlaProfile random_profile(Rng& rng, int alphabet) {
    HlaProfile p;
    p.a1 = rng.uniform_int(0, alphabet - 1);
    p.a2 = rng.uniform_int(0, alphabet - 1);
    p.b1 = rng.uniform_int(0, alphabet - 1);
    p.b2 = rng.uniform_int(0, alphabet - 1);
    p.dr1 = rng.uniform_int(0, alphabet - 1);
    p.dr2 = rng.uniform_int(0, alphabet - 1);
    return p;
}

} // namespace

TEST_CASE("hla score table") {
    CHECK(hla_score(0) == 100.0);
    CHECK(hla_score(1) == 85.0);
    CHECK(hla_score(2) == 70.0);
    CHECK(hla_score(3) == 55.0);
    CHECK(hla_score(4) == 40.0);
    CHECK(hla_score(5) == 25.0);
    CHECK(hla_score(6) == 10.0);
    for (int m = 0; m < 6; ++m) CHECK(hla_score(m) > hla_score(m + 1));
    CHECK_THROWS_AS(hla_score(-1), ContractViolation);
    CHECK_THROWS_AS(hla_score(7), ContractViolation);
}

TEST_CASE("hla mismatch counting") {
    HlaProfile d{1, 2, 3, 4, 5, 6};
    CHECK(hla_mismatch_count(d, d) == 0);

    HlaProfile disjoint{7, 8, 9, 10, 11, 12};
    CHECK(hla_mismatch_count(d, disjoint) == 6);

    // Donor A = {1,2}, recipient A = {2,3}: one shared antigen at locus A.
    HlaProfile r{2, 3, 3, 4, 5, 6};
    CHECK(hla_mismatch_count(d, r) == 1);

    // Duplicated donor antigen needs two copies on the recipient side.
    HlaProfile dd{1, 1, 3, 4, 5, 6};
    HlaProfile r1{1, 2, 3, 4, 5, 6};
    CHECK(hla_mismatch_count(dd, r1) == 1);
    HlaProfile r2{1, 1, 3, 4, 5, 6};
    CHECK(hla_mismatch_count(dd, r2) == 0);
}

TEST_CASE("hla mismatch matches the multiset oracle on random profiles") {
    Rng rng(0x5C0EE);
    for (int trial = 0; trial < 5000; ++trial) {
        int alphabet = trial % 2 == 0 ? 3 : 20; // small alphabet forces collisions
        HlaProfile d = random_profile(rng, alphabet);
        HlaProfile r = random_profile(rng, alphabet);
        int got = hla_mismatch_count(d, r);
        CHECK(got == mismatch_oracle(d, r));
        CHECK(got >= 0);
        CHECK(got <= 6);
    }
}

TEST_CASE("age score follows the truncated linear rule") {
    CHECK(age_score(40, 40) == 50.0);
    CHECK(age_score(18, 58) == 0.0);  // difference exactly 40
    CHECK(age_score(18, 59) == 0.0);  // difference 41, past truncation
    CHECK(age_score(30, 46) == 30.0); // difference 16
    CHECK(age_score(50, 42) == 40.0); // difference 8

    for (int a = 18; a <= 75; ++a)
        for (int b = 18; b <= 75; ++b) CHECK(age_score(a, b) == age_score(b, a));

    double prev = 51.0;
    for (int x = 0; x <= 57; ++x) { // ages 18..75 give differences 0..57
        double s = age_score(18, 18 + x);
        CHECK(s <= prev);
        CHECK(s >= 0.0);
        CHECK(s <= 50.0);
        prev = s;
    }
}

TEST_CASE("edge weight is the sum of both components") {
    Pair donor_side;
    Pair recipient_side;
    donor_side.donor_hla = {1, 2, 3, 4, 5, 6};
    donor_side.donor_age = 40;
    recipient_side.recipient_hla = {1, 2, 3, 4, 5, 6};
    recipient_side.recipient_age = 40;
    CHECK(edge_weight(donor_side, recipient_side) == 150.0);

    recipient_side.recipient_hla = {7, 8, 9, 10, 11, 12};
    recipient_side.recipient_age = 75;
    donor_side.donor_age = 18;
    CHECK(edge_weight(donor_side, recipient_side) == 10.0);

    // 2 mismatches at locus A plus an age gap of 8: 70 + 40.
    recipient_side.recipient_hla = {7, 8, 3, 4, 5, 6};
    donor_side.donor_age = 40;
    recipient_side.recipient_age = 48;
    CHECK(edge_weight(donor_side, recipient_side) == 110.0);

    ScoreBreakdown b = score_match(donor_side, recipient_side);
    CHECK(b.hla_mismatches == 2);
    CHECK(b.hla_score == 70.0);
    CHECK(b.age_score == 40.0);
    CHECK(b.total == b.hla_score + b.age_score);
}

TEST_CASE("edge weight never drops below 10") {
    Rng rng(0xED6E);
    for (int trial = 0; trial < 2000; ++trial) {
        Pair a, b;
        a.donor_hla = random_profile(rng, 4);
        b.recipient_hla = random_profile(rng, 4);
        a.donor_age = rng.uniform_int(18, 75);
        b.recipient_age = rng.uniform_int(18, 75);
        double w = edge_weight(a, b);
        CHECK(w >= 10.0);
        CHECK(w <= 150.0);
    }
}
