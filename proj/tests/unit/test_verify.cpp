#include <doctest.h>

#include <cmath>
#include <obmrr/verify.hpp>

using namespace obmrr;

namespace {

// Independent oracle for the two-round pair trace with d=2: a direct
// transcription of the selector's coin tree, written without the library's
// state machine. Returns P(vertex a matched at round 2) = P(a selected at
// round 2 and not selected at round 1).
Rat two_round_oracle() {
    Rat total(0);
    // round 1 roles: sender consumes (l1, m1), receiver consumes (m1, l1)
    // with every tag Unknown. Either way each leg is selected w.p. 1/2 and
    // the written tags differ.
    // encode tag on a vertex as: 0 unknown, 1 selected, 2 not-selected
    for (int role1 = 0; role1 < 2; ++role1) {
        if (role1 == 0) {  // sender
            for (int l1 = 1; l1 <= 2; ++l1) {
                for (int m1 = 1; m1 <= 2; ++m1) {
                    const Rat w1 = Rat(1, 8);
                    int tag_a = 0, tag_b = 0;
                    (m1 == 1 ? tag_a : tag_b) = (m1 == l1) ? 1 : 2;
                    const bool a_selected_1 = l1 == 1;
                    total += w1 * round2_mass(tag_a, tag_b, a_selected_1);
                }
            }
        } else {  // receiver: probes m1, reads Unknown, draws l1
            for (int m1 = 1; m1 <= 2; ++m1) {
                for (int l1 = 1; l1 <= 2; ++l1) {
                    const Rat w1 = Rat(1, 8);
                    const bool a_selected_1 = l1 == 1;
                    total += w1 * round2_mass(0, 0, a_selected_1);
                }
            }
        }
    }
    return total;
}

// mass of "a selected at round 2" given round-1 tags, times the indicator
// that a was NOT selected at round 1 (with d=2, a is available at round 2
// iff it was not matched at round 1, and round 1 always matches its
// selection)
Rat round2_mass(int tag_a, int tag_b, bool a_selected_1);

Rat round2_mass(int tag_a, int tag_b, bool a_selected_1) {
    if (a_selected_1) return Rat(0);
    Rat mass(0);
    // sender round 2: a selected iff l2 == 1, prob 1/2; weight 1/2 * 1/4 each
    mass += Rat(1, 2) * Rat(1, 2);
    // receiver round 2: probe m2
    Rat recv(0);
    for (int m2 = 1; m2 <= 2; ++m2) {
        const int tag = m2 == 1 ? tag_a : tag_b;
        if (tag == 1) {  // selected: pick the other leg
            recv += Rat(1, 2) * (m2 == 1 ? Rat(0) : Rat(1));
        } else if (tag == 2) {  // not-selected: pick the probed leg
            recv += Rat(1, 2) * (m2 == 1 ? Rat(1) : Rat(0));
        } else {
            recv += Rat(1, 2) * Rat(1, 2);
        }
    }
    mass = Rat(1, 2) * Rat(1, 2) + Rat(1, 2) * recv;
    return mass;
}

QueryTrace two_pair_rounds() { return {Query(0, 1), Query(0, 1)}; }

const Rat& cell(const ExactDmu& t, long round, int vertex) {
    const auto* c = t.find(round, vertex);
    REQUIRE(c != nullptr);
    return c->dmu;
}

}  // namespace

TEST_CASE("exact enumeration reproduces the hand-computed two-round value") {
    const ExactDmu table = enumerate_exact_dmu(two_pair_rounds(), 2);
    CHECK(cell(table, 0, 0) == Rat(1, 2));
    CHECK(cell(table, 0, 1) == Rat(1, 2));
    CHECK(cell(table, 1, 0) == Rat(9, 32));
    CHECK(cell(table, 1, 1) == Rat(9, 32));
    CHECK(two_round_oracle() == Rat(9, 32));
}

TEST_CASE("exact enumeration of deterministic and first rounds") {
    const ExactDmu one = enumerate_exact_dmu({Query(0)}, 3);
    CHECK(cell(one, 0, 0) == Rat(1));

    const ExactDmu first = enumerate_exact_dmu({Query(0, 1)}, 3);
    CHECK(cell(first, 0, 0) == Rat(1, 2));
    CHECK(cell(first, 0, 1) == Rat(1, 2));
}

TEST_CASE("enumeration window sums never exceed one") {
    // per-vertex match events within any d-window are mutually exclusive
    QueryTrace trace = {Query(0, 1), Query(0, 2), Query(0, 1), std::nullopt,
                        Query(0, 2), Query(1, 2)};
    for (long d : {1L, 2L, 3L, 5L}) {
        const ExactDmu table = enumerate_exact_dmu(trace, d);
        for (long j = 0; j < static_cast<long>(table.rounds.size()); ++j) {
            for (int v = 0; v <= 2; ++v) {
                Rat window(0);
                for (long t = std::max(j - d + 1, 0L); t <= j; ++t)
                    if (const auto* c = table.find(t, v)) window += c->dmu;
                CHECK(window <= Rat(1));
            }
        }
    }
}

TEST_CASE("enumeration refuses oversized coin spaces") {
    QueryTrace big(13, Query(0, 1));
    CHECK_THROWS_AS(enumerate_exact_dmu(big, 2, 12), std::invalid_argument);
    CHECK_NOTHROW(enumerate_exact_dmu(QueryTrace(12, Query(0, 1)), 2, 12));
}

TEST_CASE("ocr guarantee passes at gamma=1/32 and fails at gamma=1/2") {
    const ExactDmu table = enumerate_exact_dmu(two_pair_rounds(), 2);

    const auto good = check_ocr_guarantee(table, 2, Rat(1, 32));
    CHECK(good.pass);
    // the carry cell is bound 17/64 against value 18/64
    bool saw_carry = false;
    for (const auto& c : good.cells) {
        if (c.round == 1 && c.vertex == 0) {
            saw_carry = true;
            CHECK(c.case_id == 4);
            CHECK(c.bound == doctest::Approx(17.0 / 64.0));
            CHECK(c.value == doctest::Approx(9.0 / 32.0));
        }
    }
    CHECK(saw_carry);

    const auto bad = check_ocr_guarantee(table, 2, Rat(1, 2));
    CHECK(!bad.pass);
    CHECK(!bad.notes.empty());
}

TEST_CASE("monte carlo estimates agree with enumeration within 3 sigma") {
    QueryTrace traces[] = {
        two_pair_rounds(),
        {Query(0, 1), Query(0, 2), Query(1, 2), Query(0, 1)},
        {Query(0), Query(0, 1), std::nullopt, Query(0, 1), Query(1)},
    };
    for (const auto& trace : traces) {
        for (long d : {1L, 2L, 3L}) {
            const ExactDmu exact = enumerate_exact_dmu(trace, d);
            const DmuEstimate est = estimate_dmu(trace, d, 100000, 4242, SelectorKind::Ocr, 2);
            for (long j = 0; j < static_cast<long>(exact.rounds.size()); ++j) {
                for (const auto& c : exact.rounds[j]) {
                    const auto* e = est.find(j, c.vertex);
                    REQUIRE(e != nullptr);
                    const double sigma = std::max(e->se, 1e-12);
                    CHECK(std::fabs(e->mean - to_double(c.dmu)) <= 4.5 * sigma);
                }
            }
        }
    }
}

TEST_CASE("deterministic-only traces estimate exactly") {
    QueryTrace trace = {Query(0), Query(0), Query(0)};
    const DmuEstimate est = estimate_dmu(trace, 2, 1000, 7, SelectorKind::Ocr);
    CHECK(est.find(0, 0)->mean == 1.0);
    CHECK(est.find(1, 0)->mean == 0.0);  // busy at round 2
    CHECK(est.find(2, 0)->mean == 1.0);  // released again
}

TEST_CASE("uniform selector satisfies the gamma=0 guarantee") {
    QueryTrace trace = {Query(0, 1), Query(0, 1), Query(0), Query(0, 1)};
    const DmuEstimate est = estimate_dmu(trace, 2, 200000, 99, SelectorKind::Uniform, 2);
    // two successive pair rounds at d=2: second-round mass is p/2 = 1/4
    CHECK(std::fabs(est.find(1, 0)->mean - 0.25) <= 4.5 * est.find(1, 0)->se);
    const auto rep = check_ocr_guarantee(est, 2, 0.0, 3.5);
    CHECK(rep.pass);
}

TEST_CASE("reversal symmetry holds exactly under enumeration") {
    SUBCASE("length-1 sequences are trivially symmetric") {
        const auto rep = check_reversal_exact({Query(0, 1)}, 2);
        CHECK(rep.pass);
    }
    SUBCASE("the two-round trace") {
        const auto rep = check_reversal_exact(two_pair_rounds(), 2);
        CHECK(rep.pass);
        for (const auto& row : rep.rows) CHECK(row.mu_forward == row.mu_backward);
    }
    SUBCASE("mixed traces with nulls and singletons") {
        QueryTrace traces[] = {
            {Query(0, 1), Query(2), Query(0, 2), std::nullopt, Query(0, 1)},
            {Query(0), Query(0, 1), Query(1, 2), Query(0, 2), Query(1)},
            {Query(0, 1), Query(0, 1), Query(0, 1), Query(0, 1)},
        };
        for (const auto& t : traces)
            for (long d : {1L, 2L, 3L, 4L}) CHECK(check_reversal_exact(t, d).pass);
    }
}

TEST_CASE("reversal symmetry holds within monte carlo error on longer traces") {
    QueryTrace trace = {Query(0, 1), Query(1, 2), Query(0),       Query(0, 2),
                        Query(1, 2), std::nullopt, Query(0, 1),   Query(2)};
    const auto rep = check_reversal_mc(trace, 3, 200000, 1234, 3.5, 2);
    CHECK(rep.pass);
}

TEST_CASE("guarantee report csv is one row per cell") {
    const ExactDmu table = enumerate_exact_dmu(two_pair_rounds(), 2);
    const auto rep = check_ocr_guarantee(table, 2, Rat(1, 32));
    const std::string csv = guarantee_report_csv(rep);
    CHECK(csv.find("round,vertex,case,bound,value,sigma,pass") == 0);
    // 4 cells + header + notes comment
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
