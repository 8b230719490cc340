#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqrule/recurrence.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

/// Per-index decomposition of the coefficient prefix sums s_i = a1+...+ai,
/// for i = 2..k: if s_i <= 0, positive q_i, r_i with |s_i| = q_i*a1 - r_i;
/// otherwise q_i = 0 and r_i = s_i. Always r_i = s_i + q_i*a1.
struct QRDecomposition {
    std::vector<BigInt> quotients;   // q_2..q_k
    std::vector<BigInt> remainders;  // r_2..r_k

    bool operator==(const QRDecomposition&) const = default;
};

/// A q-assignment satisfying the positivity inequality system, together with
/// the k inequality left-hand sides (all >= 0). Existence certifies that the
/// compiled finite rule is ordinary and the sequence strictly positive.
struct PositivityWitness {
    QRDecomposition qr;
    std::vector<BigInt> slack;
};

/// Result of the ordinary-rule construction. When some exponent would be
/// negative the rule is still returned (with marked fillers) but flagged.
struct OrdinaryRule {
    SuccessionRule rule;
    bool is_ordinary = true;
};

/// Stage-by-stage comparison of rule expansions against the exact sequence.
struct StageReport {
    std::string stage;
    bool applicable = true;
    std::string note;            // skip reason, or extra context
    bool match = false;          // meaningful only when applicable
    int divergence_level = -1;   // first mismatching level, -1 if none
    BigInt expected = 0;
    BigInt actual = 0;
};

struct VerifyReport {
    int depth = 0;
    std::vector<BigInt> oracle;
    std::vector<StageReport> stages;
    bool all_match = true;  // over applicable stages
};

/// Recurrence as-is, one production per jump distance: default inits give
/// axiom (a1) with (a1) =i=> (a1)^(a_i); explicit inits prepend an axiom
/// whose jump-i exponents absorb the initial conditions. Works for any
/// coefficient signs; negative exponents appear as marked labels.
SuccessionRule to_extended_rule(const Recurrence& rec);

/// Jump-free equivalent (default inits): a chain label per prefix sum s_i,
/// each producing the next chain label plus (a1)-fillers. Labels may be
/// negative-valued and fillers marked when prefix sums dip below 1.
SuccessionRule eliminate_jumps(const Recurrence& rec);

/// Minimal decomposition when q_choice is absent (smallest q_i with
/// q_i*a1 - |s_i| >= 1 on the nonpositive branch); otherwise validates and
/// returns q_choice. Throws Error{A1NotPositive} or Error{InvalidQ}.
QRDecomposition qr_for(const std::vector<BigInt>& coeffs,
                       const std::optional<std::vector<BigInt>>& q_choice = std::nullopt);

/// Mark-free construction from a decomposition (default inits, a1 >= 1):
/// (a1) and each (r_i) produce zero-label padding, the next remainder label
/// and (a1)-fillers so that every son count equals the parent value. Equal
/// label values with different productions get distinct tags.
OrdinaryRule to_ordinary_rule(const Recurrence& rec, const QRDecomposition& qr);

/// Backtracking search for a q-assignment satisfying the positivity system;
/// q_i is forced to 0 where s_i > 0, otherwise ranges over the finite
/// interval the system itself allows. Returns the lexicographically least
/// witness, or nullopt ("unknown" -- never "not positive").
std::optional<PositivityWitness> positivity_check(const Recurrence& rec);

/// Ordinary rule for explicit initial conditions: unrolls the first levels
/// into a chain of freshly tagged labels whose son counts reproduce the
/// sequence prefix and absorb every would-be marked label, then flows into
/// the default-init ordinary rule. Throws Error{CoreNotPositive} when the
/// default core has no positivity witness and Error{PrefixNotEliminable}
/// when no nonnegative unrolling is found.
SuccessionRule compile_generic(const Recurrence& rec);

/// Compiles every applicable stage, expands each to `depth`, and compares
/// the totals against eval_sequence. Divergence is reported, not thrown.
VerifyReport verify(const Recurrence& rec, int depth);

}  // namespace seqrule
