#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "seqrule/parametric.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

// Rule DSL, one item per line, '#' starts a comment:
//
//   axiom (V[:T])
//   (V[:T]) -> B1 B2 ...          jump-1 production
//   (V[:T]) =J=> B1 B2 ...        jump-J production (J >= 1)
//
// Branch B: (W[:T]) | (W[:T])^M | (~W[:T]) | (~W[:T])^M, M a nonzero integer.
// Lines for the same parent merge into one production.
//
// Parametric rules use affine expressions in k for values and exponents
// ((k-1)^{k-1}, (k+2)^{k+1}), label ranges (1..k-1), an optional
// `level-indexed` directive, and guards: ... when k>=2[, k<=5].

/// Parses an ordinary/jumping/marked rule. Throws Error{SyntaxError} with
/// line:column on malformed text and Error{UnresolvedLabel} if a referenced
/// nonzero label has no production.
SuccessionRule parse_rule(std::string_view text);

/// Canonical text form; parse_rule(print_rule(r)) == r.
std::string print_rule(const SuccessionRule& rule);

/// Parses the parametric dialect. Constant parents become guarded schemas.
ParametricRule parse_parametric_rule(std::string_view text);

std::string print_parametric_rule(const ParametricRule& rule);

using AnyRule = std::variant<SuccessionRule, ParametricRule>;

/// Dispatches on the dialect: text using k, ranges, guards or the
/// level-indexed directive parses as parametric, anything else as ordinary.
AnyRule parse_any_rule(std::string_view text);

}  // namespace seqrule
