#include "seqrule/parametric.hpp"

#include <map>
#include <sstream>

#include "seqrule/error.hpp"
#include "seqrule/expand.hpp"

namespace seqrule {

namespace {

[[noreturn]] void negative_multiplicity(const BigInt& k, int schema_index,
                                        const BigInt& mult) {
    std::ostringstream msg;
    msg << "schema #" << schema_index << " gives label (" << k.str() << ") "
        << mult.str() << " copies of a son; multiplicities must be >= 0";
    throw Error(Error::Code::NegativeMultiplicity, msg.str());
}

}  // namespace

std::vector<LevelProfile> expand_parametric(const ParametricRule& rule, int depth) {
    if (depth < 0) {
        throw Error(Error::Code::InvalidArgument, "depth must be >= 0");
    }
    std::vector<LevelProfile> levels(depth + 1);
    for (int n = 0; n <= depth; ++n) levels[n].level = n;
    levels[0].signed_counts[label(rule.axiom)] = 1;
    for (int n = 0; n <= depth; ++n) {
        for (const auto& [lab, count] : levels[n].signed_counts) {
            levels[n].total += count;
            const BigInt& k = lab.value;
            if (rule.level_indexed && k != n) {
                std::ostringstream msg;
                msg << "label (" << k.str() << ") sits on level " << n
                    << " of a level-indexed rule";
                throw Error(Error::Code::LevelIndexMismatch, msg.str());
            }
            if (n == depth) continue;
            for (std::size_t s = 0; s < rule.schemas.size(); ++s) {
                const ProductionSchema& schema = rule.schemas[s];
                if (!schema.guard.holds(k)) continue;
                const int target = n + schema.jump;
                if (target > depth) continue;
                for (const SuccessorSchema& succ : schema.successors) {
                    BigInt mult = succ.multiplicity.eval(k);
                    if (mult < 0) negative_multiplicity(k, static_cast<int>(s), mult);
                    if (mult == 0) continue;
                    BigInt lo = succ.lo.eval(k);
                    BigInt hi = succ.is_range ? succ.hi.eval(k) : lo;
                    for (BigInt v = lo; v <= hi; ++v) {
                        levels[target].signed_counts[label(v)] += count * mult;
                    }
                }
            }
        }
    }
    return levels;
}

ParametricRule holonomic_to_level_indexed(const std::vector<RationalPoly>& coeff_polys) {
    if (coeff_polys.empty()) {
        throw Error(Error::Code::InvalidArgument,
                    "holonomic recurrence needs at least one coefficient polynomial");
    }
    ParametricRule rule;
    rule.axiom = 0;
    rule.level_indexed = true;
    for (std::size_t j = 1; j <= coeff_polys.size(); ++j) {
        const RationalPoly& p = coeff_polys[j - 1];
        if (p.den == 0) {
            throw Error(Error::Code::InvalidArgument, "zero denominator");
        }
        if (p.num.size() > 2) {
            std::ostringstream msg;
            msg << "coefficient polynomial #" << j << " has degree "
                << p.num.size() - 1 << "; only affine coefficients translate";
            throw Error(Error::Code::NotAffine, msg.str());
        }
        // Sons from level k land on level n = k + j, so the multiplicity is
        // p_j evaluated at n = k + j, as an affine function of k.
        BigInt c0 = p.num.empty() ? BigInt(0) : p.num[0];
        BigInt c1 = p.num.size() > 1 ? p.num[1] : BigInt(0);
        BigInt slope_num = c1;
        BigInt offset_num = c0 + c1 * BigInt(j);
        if (slope_num % p.den != 0 || offset_num % p.den != 0) {
            std::ostringstream msg;
            msg << "coefficient polynomial #" << j
                << " evaluates to non-integer multiplicities at integer levels";
            throw Error(Error::Code::NonIntegerEvaluation, msg.str());
        }
        AffineExpr mult = affine(slope_num / p.den, offset_num / p.den);
        if (mult.slope == 0 && mult.offset == 0) continue;  // vanishing term
        ProductionSchema schema;
        schema.jump = static_cast<int>(j);
        SuccessorSchema succ;
        succ.lo = affine(1, BigInt(j));  // (k+j)
        succ.multiplicity = mult;
        schema.successors.push_back(succ);
        rule.schemas.push_back(std::move(schema));
    }
    return rule;
}

}  // namespace seqrule
