#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "seqrule/compile.hpp"
#include "seqrule/error.hpp"
#include "seqrule/expand.hpp"
#include "seqrule/recurrence.hpp"
#include "seqrule/rule_text.hpp"

using namespace seqrule;
namespace fx = seqrule::fixtures;

namespace {

std::vector<BigInt> big(std::initializer_list<long> values) {
    return {values.begin(), values.end()};
}

Recurrence random_positive_lead(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> order_dist(1, 5);
    std::uniform_int_distribution<int> coeff_dist(-9, 9);
    std::uniform_int_distribution<int> lead_dist(1, 9);
    const int k = order_dist(rng);
    std::vector<BigInt> coeffs(k);
    coeffs[0] = lead_dist(rng);
    for (int i = 1; i < k; ++i) coeffs[i] = coeff_dist(rng);
    while (coeffs.back() == 0) coeffs.back() = coeff_dist(rng);
    return Recurrence(std::move(coeffs));
}

}  // namespace

TEST_CASE("extended rule matches the golden forms") {
    CHECK(to_extended_rule(Recurrence(big({3, 2, -1}))) ==
          parse_rule(fx::kExtended321Text));
    CHECK(to_extended_rule(Recurrence(big({3, 2, -1}), big({2, 3}))) ==
          parse_rule(fx::kExtendedGeneric321Text));
    CHECK(to_extended_rule(Recurrence(big({2}))) == parse_rule(fx::kDoublingText));
}

TEST_CASE("extended rule tags the root when it collides with the core label") {
    SuccessionRule rule = to_extended_rule(Recurrence(big({2, 1}), big({2})));
    CHECK(rule.axiom() == label(2, 1));
    REQUIRE(rule.find(label(2, 1)));
    REQUIRE(rule.find(label(2)));
    CHECK(expand_totals(rule, 6) ==
          eval_sequence(Recurrence(big({2, 1}), big({2})), 6));
}

TEST_CASE("jump elimination matches the golden forms") {
    CHECK(eliminate_jumps(Recurrence(big({3, 2, -1}))) ==
          parse_rule(fx::kJumpfree321Text));
    CHECK(eliminate_jumps(Recurrence(big({5, -6, 2}))) ==
          parse_rule(fx::kJumpfree562Text));
    CHECK(eliminate_jumps(Recurrence(big({2}))) == parse_rule(fx::kDoublingText));
}

TEST_CASE("jump elimination tags colliding chain labels") {
    // prefix sums 2, 2, 1: two distinct labels share the value 2
    SuccessionRule rule = eliminate_jumps(Recurrence(big({2, 0, -1})));
    CHECK(rule.axiom() == label(2));
    REQUIRE(rule.find(label(2)));
    REQUIRE(rule.find(label(2, 1)));
    CHECK(expand_totals(rule, 12) == eval_sequence(Recurrence(big({2, 0, -1})), 12));
}

TEST_CASE("quotient/remainder decomposition") {
    QRDecomposition qr = qr_for(big({5, -6, 2}));
    CHECK(qr.quotients == big({1, 0}));
    CHECK(qr.remainders == big({4, 1}));

    qr = qr_for(big({3, 2, -1}));
    CHECK(qr.quotients == big({0, 0}));
    CHECK(qr.remainders == big({5, 4}));

    qr = qr_for(big({4, -4}));
    CHECK(qr.quotients == big({1}));
    CHECK(qr.remainders == big({4}));
    // r = s + q*a1 holds on the zero prefix-sum edge
    CHECK(qr.remainders[0] == BigInt(0) + qr.quotients[0] * 4);

    CHECK_NOTHROW(qr_for(big({5, -6, 2}), big({2, 0})));
    CHECK_THROWS_AS(qr_for(big({5, -6, 2}), big({0, 0})), Error);  // q2 must be >= 1
    CHECK_THROWS_AS(qr_for(big({3, 2, -1}), big({1, 0})), Error);  // q2 must be 0
    CHECK_THROWS_AS(qr_for(big({5, -6, 2}), big({1})), Error);     // wrong arity
    CHECK_THROWS_AS(qr_for(big({-1, 1}), std::nullopt), Error);    // needs a1 >= 1
}

TEST_CASE("ordinary rule matches the golden forms") {
    Recurrence rec(big({5, -6, 2}));
    OrdinaryRule ordinary = to_ordinary_rule(rec, qr_for(rec.coeffs()));
    CHECK(ordinary.is_ordinary);
    CHECK(ordinary.rule == parse_rule(fx::kOrdinary562Text));

    // all quotients zero: the construction reduces to the jump-free chain
    Recurrence rec2(big({3, 2, -1}));
    OrdinaryRule reduced = to_ordinary_rule(rec2, qr_for(rec2.coeffs()));
    CHECK(reduced.is_ordinary);
    CHECK(reduced.rule == parse_rule(fx::kJumpfree321Text));
}

TEST_CASE("ordinary rule flags negative exponents instead of hiding them") {
    Recurrence rec(big({1, -1}));
    OrdinaryRule flagged = to_ordinary_rule(rec, qr_for(rec.coeffs()));
    CHECK_FALSE(flagged.is_ordinary);
    CHECK(classify(flagged.rule) == RuleKind::Marked);
    // still a faithful rule: signed counting reproduces the sequence
    CHECK(expand_totals(flagged.rule, 12) == eval_sequence(rec, 12));

    CHECK_THROWS_AS(to_ordinary_rule(Recurrence(big({-2, 1})), QRDecomposition{{0}, {-1}}),
                    Error);
}

TEST_CASE("positivity witnesses on the worked examples") {
    auto witness = positivity_check(Recurrence(big({5, -6, 2})));
    REQUIRE(witness);
    CHECK(witness->qr.quotients == big({1, 0}));
    CHECK(witness->qr.remainders == big({4, 1}));
    CHECK(witness->slack == big({3, 1, 0}));

    CHECK_FALSE(positivity_check(Recurrence(big({1, -1}))));

    auto w44 = positivity_check(Recurrence(big({4, -4})));
    REQUIRE(w44);
    CHECK(w44->qr.quotients == big({1}));
    CHECK(w44->slack == big({2, 0}));

    auto w1 = positivity_check(Recurrence(big({7})));
    REQUIRE(w1);
    CHECK(w1->slack == big({6}));

    CHECK_FALSE(positivity_check(Recurrence(big({-3, 1}))));  // needs a1 >= 1
}

TEST_CASE("degree-2 positivity matches the discriminant exactly") {
    for (int a1 = 1; a1 <= 10; ++a1) {
        for (int a2 = -30; a2 <= 30; ++a2) {
            if (a2 == 0) continue;  // genuine degree 2 only
            bool witness = positivity_check(Recurrence(big({a1, a2}))).has_value();
            bool discriminant = a1 * a1 + 4 * a2 >= 0;
            CAPTURE(a1);
            CAPTURE(a2);
            CHECK(witness == discriminant);
        }
    }
}

TEST_CASE("witness implies a consistent ordinary rule that tracks the oracle") {
    std::mt19937_64 rng(20250101);
    int witnesses = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Recurrence rec = random_positive_lead(rng);
        std::vector<BigInt> oracle = eval_sequence(rec, 15);

        CHECK(expand_totals(to_extended_rule(rec), 15) == oracle);
        CHECK(expand_totals(eliminate_jumps(rec), 15) == oracle);

        auto witness = positivity_check(rec);
        if (!witness) continue;
        ++witnesses;
        OrdinaryRule ordinary = to_ordinary_rule(rec, witness->qr);
        CHECK(ordinary.is_ordinary);
        CHECK(classify(ordinary.rule) == RuleKind::Ordinary);
        CHECK(is_consistent(ordinary.rule).consistent);
        std::vector<BigInt> totals = expand_totals(ordinary.rule, 15);
        CHECK(totals == oracle);
        for (const BigInt& t : totals) CHECK(t >= 1);
        std::vector<BigInt> f = eval_sequence(rec, 30);
        for (const BigInt& t : f) CHECK(t >= 1);
        for (const BigInt& s : witness->slack) CHECK(s >= 0);
    }
    CHECK(witnesses > 30);  // the sweep must actually exercise witnesses
}

TEST_CASE("son counts in the ordinary construction equal the label values") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        Recurrence rec = random_positive_lead(rng);
        auto witness = positivity_check(rec);
        if (!witness) continue;
        OrdinaryRule ordinary = to_ordinary_rule(rec, witness->qr);
        for (const auto& [parent, prod] : ordinary.rule.productions()) {
            CHECK(prod.son_count() == parent.value);
        }
    }
}

TEST_CASE("generic compile reproduces the golden tagged rule") {
    SuccessionRule rule = compile_generic(Recurrence(big({3, 2, -1}), big({2, 3})));
    CHECK(rule == parse_rule(fx::kGeneric321Text));
    CHECK(expand_totals(rule, 7) == fx::kTotalsGeneric321);
    CHECK(classify(rule) == RuleKind::Ordinary);
}

TEST_CASE("generic compile degenerates to the default pipeline") {
    SuccessionRule via_generic =
        compile_generic(Recurrence(big({2}), std::vector<BigInt>{}));
    Recurrence default_rec(big({2}));
    SuccessionRule direct =
        to_ordinary_rule(default_rec, qr_for(default_rec.coeffs())).rule;
    CHECK(via_generic == direct);
}

TEST_CASE("generic compile error modes") {
    try {
        compile_generic(Recurrence(big({1, -1}), big({1})));
        FAIL("expected core-not-positive");
    } catch (const Error& e) {
        CHECK(e.code() == Error::Code::CoreNotPositive);
    }
    try {
        // f(1) = 0 makes the first level unrealizable: 1,0,-1,-2,...
        compile_generic(Recurrence(big({2, -1}), big({0})));
        FAIL("expected prefix-not-eliminable");
    } catch (const Error& e) {
        CHECK(e.code() == Error::Code::PrefixNotEliminable);
    }
}

TEST_CASE("generic compile tracks the oracle on random positive prefixes") {
    std::mt19937_64 rng(13572468);
    std::uniform_int_distribution<int> h_dist(1, 12);
    int compiled = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Recurrence core = random_positive_lead(rng);
        if (core.order() == 1 || !positivity_check(core)) continue;
        std::vector<BigInt> inits(core.order() - 1);
        for (auto& h : inits) h = h_dist(rng);
        Recurrence rec(core.coeffs(), inits);
        SuccessionRule rule;
        try {
            rule = compile_generic(rec);
        } catch (const Error& e) {
            CHECK(e.code() == Error::Code::PrefixNotEliminable);
            continue;
        }
        ++compiled;
        CHECK(expand_totals(rule, 15) == eval_sequence(rec, 15));
        CHECK(classify(rule) == RuleKind::Ordinary);
    }
    CHECK(compiled > 25);
}

TEST_CASE("verification report covers every applicable stage") {
    VerifyReport ok = verify(Recurrence(big({3, 2, -1})), 7);
    CHECK(ok.all_match);
    REQUIRE(ok.stages.size() == 3);
    CHECK(ok.stages[0].stage == "extended");
    CHECK(ok.stages[1].stage == "jumpfree");
    CHECK(ok.stages[2].stage == "ordinary");
    for (const StageReport& s : ok.stages) {
        CHECK(s.applicable);
        CHECK(s.match);
    }

    VerifyReport inconclusive = verify(Recurrence(big({1, -1})), 6);
    CHECK(inconclusive.all_match);  // skipped stages do not fail the report
    CHECK_FALSE(inconclusive.stages[2].applicable);

    VerifyReport generic = verify(Recurrence(big({3, 2, -1}), big({2, 3})), 7);
    CHECK(generic.all_match);
    REQUIRE(generic.stages.size() == 2);
    CHECK(generic.stages[0].stage == "extended");
    CHECK(generic.stages[1].stage == "generic");

    VerifyReport worked = verify(Recurrence(big({5, -6, 2})), 6);
    CHECK(worked.all_match);
    CHECK(worked.oracle == fx::kTotals562);
}
