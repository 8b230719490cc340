#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqrule/bigint.hpp"

namespace seqrule {

/// slope*k + offset, evaluated at the parent label value.
struct AffineExpr {
    BigInt slope = 0;
    BigInt offset = 0;

    BigInt eval(const BigInt& k) const { return slope * k + offset; }
    bool is_constant() const { return slope == 0; }

    bool operator==(const AffineExpr&) const = default;
    std::string to_string() const;
};

inline AffineExpr affine(BigInt slope, BigInt offset) {
    return AffineExpr{std::move(slope), std::move(offset)};
}
inline AffineExpr affine_const(BigInt offset) { return affine(0, std::move(offset)); }

/// Conjunction of affine inequalities expr >= 0; empty guard always holds.
struct Guard {
    std::vector<AffineExpr> nonneg;

    bool holds(const BigInt& k) const {
        for (const AffineExpr& e : nonneg) {
            if (e.eval(k) < 0) return false;
        }
        return true;
    }
    bool operator==(const Guard&) const = default;
};

/// One group of sons of a parent labelled (k): either a single label or a
/// consecutive range lo..hi of labels, each taken `multiplicity` times.
/// Ranges cover productions like (1)(2)...(k-1); an empty range (hi < lo)
/// contributes nothing.
struct SuccessorSchema {
    bool is_range = false;
    AffineExpr lo;   // the label itself when !is_range
    AffineExpr hi;   // ignored when !is_range
    AffineExpr multiplicity = affine_const(1);

    bool operator==(const SuccessorSchema&) const = default;
};

struct ProductionSchema {
    int jump = 1;
    Guard guard;
    std::vector<SuccessorSchema> successors;

    bool operator==(const ProductionSchema&) const = default;
};

/// Succession rule over the infinite label set {(k)}: every node with value k
/// applies every schema whose guard holds at k. Multiplicities must evaluate
/// >= 0 for every reachable label; a violation rejects the rule at expansion
/// time. If level_indexed, expansion checks that each reachable label's value
/// equals the level it occupies.
struct ParametricRule {
    BigInt axiom = 0;
    std::vector<ProductionSchema> schemas;
    bool level_indexed = false;

    bool operator==(const ParametricRule&) const = default;
};

struct LevelProfile;  // expand.hpp

/// Level profiles 0..depth with the same counting semantics as the finite
/// engine. Throws Error{NegativeMultiplicity} or Error{LevelIndexMismatch}.
std::vector<LevelProfile> expand_parametric(const ParametricRule& rule, int depth);

/// Coefficient polynomial of a holonomic recurrence, with an optional common
/// denominator: p(n) = (num[0] + num[1]*n + ...)/den.
struct RationalPoly {
    std::vector<BigInt> num;
    BigInt den = 1;

    bool operator==(const RationalPoly&) const = default;
};

/// Translate f(n) = p1(n)f(n-1) + ... + pm(n)f(n-m) into a level-indexed
/// parametric rule with axiom (0) and one jump-j schema (k) =j=> (k+j)^e(k),
/// where e(k) = pj(k+j) so that the sons landing on level k+j contribute
/// exactly the recurrence term for index k+j. Coefficients must compose to
/// integer affine expressions: degree > 1 throws Error{NotAffine}, fractional
/// results throw Error{NonIntegerEvaluation}.
ParametricRule holonomic_to_level_indexed(const std::vector<RationalPoly>& coeff_polys);

}  // namespace seqrule
