#pragma once

#include <stdexcept>
#include <string>

namespace seqrule {

// Single exception type for the whole library; `code` lets callers branch
// without string matching.
class Error : public std::runtime_error {
public:
    enum class Code {
        InvalidArgument,      // malformed recurrence, series, or call
        SyntaxError,          // rule DSL parse failure (message has line:col)
        UnresolvedLabel,      // successor without a production (and not a sink)
        JumpsPresent,         // production matrix requested for a jumping rule
        NodeBudgetExceeded,   // DOT export tree larger than the node cap
        A1NotPositive,        // ordinary-rule construction needs lead coeff >= 1
        InvalidQ,             // supplied quotient vector violates the decomposition
        CoreNotPositive,      // generic compile: default-init core has no witness
        PrefixNotEliminable,  // generic compile: no nonnegative prefix unrolling
        NegativeMultiplicity, // parametric expansion hit a negative multiplicity
        LevelIndexMismatch,   // level-indexed rule placed a label off its level
        NonIntegerEvaluation, // holonomic translation produced fractional counts
        NotAffine,            // holonomic translation needs affine coefficients
    };

    Error(Code code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

}  // namespace seqrule
