#include "kex/scoring.hpp"

#include <cmath>
#include <cstdlib>

namespace kex {

namespace {

// Mismatches of donor multiset {d1,d2} against recipient multiset {r1,r2}.
int locus_mismatches(int d1, int d2, int r1, int r2) {
    if (d1 == d2) {
        int matches = (r1 == d1 ? 1 : 0) + (r2 == d1 ? 1 : 0);
        return 2 - std::min(2, matches);
    }
    int mismatches = 0;
    // d1 matches one recipient slot; d2 may use the remaining one.
    if (d1 == r1) {
        if (d2 != r2) ++mismatches;
    } else if (d1 == r2) {
        if (d2 != r1) ++mismatches;
    } else {
        ++mismatches;
        if (d2 != r1 && d2 != r2) ++mismatches;
    }
    return mismatches;
}

} // namespace

int hla_mismatch_count(const HlaProfile& donor, const HlaProfile& recipient) {
    return locus_mismatches(donor.a1, donor.a2, recipient.a1, recipient.a2) +
           locus_mismatches(donor.b1, donor.b2, recipient.b1, recipient.b2) +
           locus_mismatches(donor.dr1, donor.dr2, recipient.dr1, recipient.dr2);
}

double hla_score(int mismatches) {
    static constexpr double table[7] = {100.0, 85.0, 70.0, 55.0, 40.0, 25.0, 10.0};
    if (mismatches < 0 || mismatches > 6)
        throw ContractViolation("hla mismatch count outside 0..6: " +
                                std::to_string(mismatches));
    return table[mismatches];
}

double age_score(int donor_age, int recipient_age) {
    int x = std::abs(donor_age - recipient_age);
    if (x > 40) return 0.0;
    return 50.0 - 1.25 * static_cast<double>(x);
}

ScoreBreakdown score_match(const Pair& donor_side, const Pair& recipient_side) {
    ScoreBreakdown b;
    b.hla_mismatches = hla_mismatch_count(donor_side.donor_hla, recipient_side.recipient_hla);
    b.hla_score = hla_score(b.hla_mismatches);
    b.age_score = age_score(donor_side.donor_age, recipient_side.recipient_age);
    b.total = b.hla_score + b.age_score;
    return b;
}

double edge_weight(const Pair& donor_side, const Pair& recipient_side) {
    return score_match(donor_side, recipient_side).total;
}

} // namespace kex
