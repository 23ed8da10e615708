#pragma once

#include "kex/domain.hpp"

namespace kex {

// Per-match score components. total houses the arc weight w_ij.
struct ScoreBreakdown {
    int hla_mismatches = 0; // 0..6
    double hla_score = 0.0; // one of {100, 85, 70, 55, 40, 25, 10}
    double age_score = 0.0; // [0, 50]
    double total = 0.0;     // hla_score + age_score
};

// Donor antigens (multiset of two per locus) absent from the recipient's
// multiset at the same locus, summed over loci A, B, DR. Result in [0, 6].
int hla_mismatch_count(const HlaProfile& donor, const HlaProfile& recipient);

// Mismatch-count to score table; throws ContractViolation outside 0..6.
double hla_score(int mismatches);

// 50 - 1.25 * |donor_age - recipient_age|, truncated to 0 past a gap of 40.
// All values are exact multiples of 0.25.
double age_score(int donor_age, int recipient_age);

ScoreBreakdown score_match(const Pair& donor_side, const Pair& recipient_side);

// Arc weight w_ij: donor of donor_side giving to the recipient of
// recipient_side. Range [10, 150] for any compatible arc.
double edge_weight(const Pair& donor_side, const Pair& recipient_side);

} // namespace kex
