#pragma once

#include <map>
#include <string>
#include <vector>

#include "seqrule/bigint.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

/// Signed multiset of labels on one tree level. Marked labels are folded
/// into their unmarked key with negated count, so `total` (the sequence
/// term) is simply the sum of all counts. Zero entries are dropped.
struct LevelProfile {
    int level = 0;
    std::map<Label, BigInt> signed_counts;
    BigInt total = 0;

    bool operator==(const LevelProfile&) const = default;
};

/// Level profiles 0..depth of the generating tree, by exact signed counting:
/// a label with signed count c contributes c*m to successor S at `jump`
/// levels below, for every branch (jump, S, m). Sons that would land beyond
/// `depth` are discarded. Productions depend only on the label, so counting
/// multisets is equivalent to materializing trees with annihilation.
/// Throws Error{UnresolvedLabel} if a nonzero-valued label with no
/// production must be expanded.
std::vector<LevelProfile> expand(const SuccessionRule& rule, int depth);

/// Convenience: just the per-level totals of expand().
std::vector<BigInt> expand_totals(const SuccessionRule& rule, int depth);

/// Square matrix of jump-1 successor multiplicities of a finite rule:
/// entry[i][j] = signed multiplicity of label j among the sons of label i
/// (negative when the son is marked). Row of zeros for sinks.
struct ProductionMatrix {
    std::vector<Label> label_index;
    std::vector<std::vector<BigInt>> matrix;
};

/// Defined for jump-free rules only (throws Error{JumpsPresent} otherwise);
/// all labels must be resolvable (throws Error{UnresolvedLabel}). Labels are
/// indexed in discovery order from the axiom, then any unreachable parents.
ProductionMatrix production_matrix(const SuccessionRule& rule);

/// Level totals 0..depth via powers of the production matrix: start from the
/// axiom indicator row vector and sum its entries after each multiplication.
std::vector<BigInt> matrix_level_totals(const ProductionMatrix& pm, const Label& axiom,
                                        int depth);

struct DotOptions {
    bool compact = false;
    int node_cap = 5000;
};

/// Graphviz DOT text for the generating tree to `depth`.
///
/// Default mode materializes nodes explicitly and resolves marks by
/// annihilation (a marked node and one unmarked same-value node on the same
/// level both die and stop producing); dead nodes are drawn dashed rather
/// than removed. Compact mode aggregates equal labels per level into one
/// node "(v)^count", so each level's exponents sum to the sequence term.
/// Throws Error{NodeBudgetExceeded} if more than options.node_cap nodes
/// would be drawn.
std::string export_dot(const SuccessionRule& rule, int depth, DotOptions options = {});

}  // namespace seqrule
