#pragma once

// Golden fixtures shared by the unit and acceptance suites: the worked rules
// for the coefficient vectors [3,2,-1] and [5,-6,2], the explicit-inits rule
// for [3,2,-1] with f(1)=2, f(2)=3, the classical marked rule for the Catalan
// numbers, and the infinite rules used by the parametric engine.

#include <string>
#include <vector>

#include "seqrule/bigint.hpp"
#include "seqrule/parametric.hpp"
#include "seqrule/rule.hpp"
#include "seqrule/rule_text.hpp"

namespace seqrule::fixtures {

// --- [3,2,-1], default inits: 1,3,11,38,133,464,1620,5655 ------------------

inline const char* kExtended321Text =
    "axiom (3)\n"
    "(3) -> (3)^3\n"
    "(3) =2=> (3)^2\n"
    "(3) =3=> (~3)\n";

inline const char* kJumpfree321Text =
    "axiom (3)\n"
    "(3) -> (5) (3)^2\n"
    "(5) -> (4) (3)^4\n"
    "(4) -> (4) (3)^3\n";

inline const std::vector<BigInt> kTotals321 = {1, 3, 11, 38, 133, 464, 1620, 5655};

// --- [5,-6,2], default inits: 1,5,19,67,231,791,2703 -----------------------

inline const char* kJumpfree562Text =
    "axiom (5)\n"
    "(5) -> (-1) (5)^4\n"
    "(-1) -> (1) (~5)^2\n"
    "(1) -> (1)\n";

inline const char* kOrdinary562Text =
    "axiom (5)\n"
    "(5) -> (0) (4) (5)^3\n"
    "(4) -> (0) (4) (1) (5)\n"
    "(1) -> (1)\n";

inline const std::vector<BigInt> kTotals562 = {1, 5, 19, 67, 231, 791, 2703};

// --- [3,2,-1] with f(1)=2, f(2)=3: 1,2,3,12,40,141,491,1715 ----------------

inline const char* kExtendedGeneric321Text =
    "axiom (2)\n"
    "(2) -> (3)^2\n"
    "(2) =2=> (~3)^3\n"
    "(2) =3=> (~3)\n"
    "(3) -> (3)^3\n"
    "(3) =2=> (3)^2\n"
    "(3) =3=> (~3)\n";

inline const char* kGeneric321Text =
    "axiom (2)\n"
    "(2) -> (0) (3:1)\n"
    "(3:1) -> (6) (3)^2\n"
    "(6) -> (3)^5 (3:2)\n"
    "(3:2) -> (4) (3)^2\n"
    "(3) -> (5) (3)^2\n"
    "(5) -> (4) (3)^4\n"
    "(4) -> (4) (3)^3\n";

inline const std::vector<BigInt> kTotalsGeneric321 = {1, 2, 3, 12, 40, 141, 491, 1715};

// --- the finite 2^n rule ----------------------------------------------------

inline const char* kDoublingText =
    "axiom (2)\n"
    "(2) -> (2)^2\n";

// --- classical marked rule for the Catalan numbers, truncated --------------
// (v) -> (2)(3)...(v)(v+1)(v)(~v); labels above max_value stay dangling,
// which is fine as long as the expansion depth never reaches them.

inline SuccessionRule catalan_rule(int max_value) {
    SuccessionRule rule(label(2));
    for (int v = 2; v <= max_value; ++v) {
        std::vector<Branch> branches;
        for (int w = 2; w <= v; ++w) branches.push_back(Branch{1, label(w), 1});
        branches.push_back(Branch{1, label(v + 1), 1});
        branches.push_back(Branch{1, label(v), 1});
        branches.push_back(Branch{1, marked_label(v), 1});
        rule.add_production(label(v), std::move(branches));
    }
    return rule;
}

// --- jumping rule for 2-generalized Motzkin paths --------------------------
// Infinite form: (k) =1=> (1)(2)...(k-1)(k+1); (k) =2=> (k).

inline SuccessionRule motzkin2_rule_truncated(int max_value) {
    SuccessionRule rule(label(1));
    for (int v = 1; v <= max_value; ++v) {
        std::vector<Branch> branches;
        for (int w = 1; w < v; ++w) branches.push_back(Branch{1, label(w), 1});
        branches.push_back(Branch{1, label(v + 1), 1});
        branches.push_back(Branch{2, label(v), 1});
        rule.add_production(label(v), std::move(branches));
    }
    return rule;
}

inline const char* kMotzkin2ParametricText =
    "axiom (1)\n"
    "(k) -> (1..k-1) (k+1)\n"
    "(k) =2=> (k)\n";

// --- involutions: f(n) = f(n-1) + (n-1)f(n-2): 1,1,2,4,10,26,76,232 --------

inline const char* kInvolutionsLevelIndexedText =
    "level-indexed\n"
    "axiom (0)\n"
    "(k) -> (k+1)\n"
    "(k) =2=> (k+2)^{k+1}\n";

inline const char* kInvolutionsOrdinaryText =
    "axiom (1)\n"
    "(k) -> (k-1)^{k-1} (k+1)\n";

inline const std::vector<BigInt> kTotalsInvolutions = {1, 1, 2, 4, 10, 26, 76, 232};

// --- infinite form of the 2^n rule ------------------------------------------

inline const char* kDoublingParametricText =
    "axiom (2)\n"
    "(k) -> (1)^{k-1} (k+1)\n";

}  // namespace seqrule::fixtures
