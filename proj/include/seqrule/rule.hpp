#pragma once

#include <map>
#include <string>
#include <vector>

#include "seqrule/bigint.hpp"

namespace seqrule {

/// Node identity in a generating tree: (value, marked, tag). Two labels with
/// the same value but different tags are distinct labels with their own
/// productions. Marking twice cancels: make_label folds that away.
struct Label {
    BigInt value;
    bool marked = false;
    int tag = 0;

    Label unmarked() const { return Label{value, false, tag}; }
    Label marked_flipped() const { return Label{value, !marked, tag}; }

    bool operator==(const Label& o) const {
        return value == o.value && marked == o.marked && tag == o.tag;
    }
    bool operator<(const Label& o) const {
        if (value != o.value) return value < o.value;
        if (tag != o.tag) return tag < o.tag;
        return marked < o.marked;
    }

    /// "(3)", "(~3)", "(3:1)", "(~3:1)" -- the DSL spelling.
    std::string to_string() const;
};

inline Label label(BigInt value, int tag = 0) { return Label{std::move(value), false, tag}; }
inline Label marked_label(BigInt value, int tag = 0) { return Label{std::move(value), true, tag}; }

/// One group of sons: `multiplicity` copies of `successor`, placed `jump`
/// levels below the parent. Stored multiplicities are positive; a negative
/// multiplicity in the source notation is the same sons with the mark flipped.
struct Branch {
    int jump = 1;
    Label successor;
    BigInt multiplicity = 1;

    bool operator==(const Branch&) const = default;
};

/// All sons of one label, canonicalized: sign folded into marks, zero
/// multiplicities dropped, equal (jump, successor) merged, deterministic
/// order. Canonical form makes rule equality and printing stable.
class Production {
public:
    Production() = default;
    Production(Label parent, std::vector<Branch> branches);

    const Label& parent() const { return parent_; }
    const std::vector<Branch>& branches() const { return branches_; }

    /// Son count as the paper-style consistency check sees it: sum of
    /// absolute multiplicities over every branch, marked or not.
    BigInt son_count() const;

    int max_jump() const;
    bool has_marks() const;

    bool operator==(const Production&) const = default;

private:
    Label parent_;
    std::vector<Branch> branches_;
};

/// Axiom plus a finite production table. A label without an entry is a sink
/// when its value is 0 (it simply has no sons); any other unresolved label is
/// reported by dangling_labels() and rejected if actually reached during
/// expansion.
class SuccessionRule {
public:
    SuccessionRule() = default;
    explicit SuccessionRule(Label axiom) : axiom_(std::move(axiom)) {}

    const Label& axiom() const { return axiom_; }
    void set_axiom(Label axiom) { axiom_ = std::move(axiom); }

    /// Branches for the same parent accumulate (production lines merge).
    void add_production(const Label& parent, std::vector<Branch> branches);

    const std::map<Label, Production>& productions() const { return productions_; }
    const Production* find(const Label& label) const;

    /// Every label that appears anywhere (axiom, parents, successors),
    /// mark-normalized, in sorted order.
    std::vector<Label> all_labels() const;

    /// Referenced labels with no production entry and nonzero value.
    std::vector<Label> dangling_labels() const;

    bool operator==(const SuccessionRule&) const = default;

private:
    Label axiom_;
    std::map<Label, Production> productions_;
};

enum class RuleKind { Ordinary, Jumping, Marked, JumpingMarked };

std::string to_string(RuleKind kind);

/// Ordinary: all jumps 1, no marks. Jumping / Marked: exactly one of the two
/// features present. JumpingMarked: both.
RuleKind classify(const SuccessionRule& rule);

struct ConsistencyReport {
    struct Violation {
        Label label;
        BigInt sons;  // |multiplicity| sum over all branches of that label
    };
    bool consistent = true;
    std::vector<Violation> violations;
};

/// True iff every positive-valued unmarked label has exactly `value` sons
/// (absolute multiplicities, all jumps) and every zero-valued label has none.
/// Diagnostic only; rules are usable either way.
ConsistencyReport is_consistent(const SuccessionRule& rule);

}  // namespace seqrule
