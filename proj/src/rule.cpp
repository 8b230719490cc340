#include "seqrule/rule.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "seqrule/error.hpp"

namespace seqrule {

std::string Label::to_string() const {
    std::ostringstream out;
    out << "(";
    if (marked) out << "~";
    out << value.str();
    if (tag != 0) out << ":" << tag;
    out << ")";
    return out.str();
}

namespace {

bool branch_order(const Branch& a, const Branch& b) {
    if (a.jump != b.jump) return a.jump < b.jump;
    return a.successor < b.successor;
}

}  // namespace

Production::Production(Label parent, std::vector<Branch> branches)
    : parent_(std::move(parent)) {
    std::map<std::pair<int, Label>, BigInt> merged;
    for (Branch& b : branches) {
        if (b.jump < 1) {
            throw Error(Error::Code::InvalidArgument, "branch jump must be >= 1");
        }
        if (b.multiplicity == 0) continue;
        Label succ = b.successor;
        BigInt mult = b.multiplicity;
        if (mult < 0) {  // (k)^-n is n marked copies of (k)
            succ = succ.marked_flipped();
            mult = -mult;
        }
        merged[{b.jump, succ}] += mult;
    }
    branches_.reserve(merged.size());
    for (auto& [key, mult] : merged) {
        branches_.push_back(Branch{key.first, key.second, mult});
    }
    std::sort(branches_.begin(), branches_.end(), branch_order);
}

BigInt Production::son_count() const {
    BigInt total = 0;
    for (const Branch& b : branches_) total += b.multiplicity;
    return total;
}

int Production::max_jump() const {
    int jump = 1;
    for (const Branch& b : branches_) jump = std::max(jump, b.jump);
    return jump;
}

bool Production::has_marks() const {
    return std::any_of(branches_.begin(), branches_.end(),
                       [](const Branch& b) { return b.successor.marked; });
}

void SuccessionRule::add_production(const Label& parent, std::vector<Branch> branches) {
    if (parent.marked) {
        throw Error(Error::Code::InvalidArgument,
                    "productions are keyed by unmarked labels");
    }
    auto it = productions_.find(parent);
    if (it != productions_.end()) {
        std::vector<Branch> all = it->second.branches();
        all.insert(all.end(), branches.begin(), branches.end());
        it->second = Production(parent, std::move(all));
    } else {
        productions_.emplace(parent, Production(parent, std::move(branches)));
    }
}

const Production* SuccessionRule::find(const Label& label) const {
    auto it = productions_.find(label.unmarked());
    return it == productions_.end() ? nullptr : &it->second;
}

std::vector<Label> SuccessionRule::all_labels() const {
    std::set<Label> labels;
    labels.insert(axiom_.unmarked());
    for (const auto& [parent, prod] : productions_) {
        labels.insert(parent);
        for (const Branch& b : prod.branches()) {
            labels.insert(b.successor.unmarked());
        }
    }
    return {labels.begin(), labels.end()};
}

std::vector<Label> SuccessionRule::dangling_labels() const {
    std::vector<Label> missing;
    for (const Label& l : all_labels()) {
        if (l.value != 0 && !find(l)) missing.push_back(l);
    }
    return missing;
}

std::string to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::Ordinary: return "ordinary";
        case RuleKind::Jumping: return "jumping";
        case RuleKind::Marked: return "marked";
        case RuleKind::JumpingMarked: return "jumping+marked";
    }
    return "?";
}

RuleKind classify(const SuccessionRule& rule) {
    bool jumps = false;
    bool marks = rule.axiom().marked;
    for (const auto& [parent, prod] : rule.productions()) {
        jumps = jumps || prod.max_jump() > 1;
        marks = marks || prod.has_marks();
    }
    if (jumps && marks) return RuleKind::JumpingMarked;
    if (jumps) return RuleKind::Jumping;
    if (marks) return RuleKind::Marked;
    return RuleKind::Ordinary;
}

ConsistencyReport is_consistent(const SuccessionRule& rule) {
    ConsistencyReport report;
    for (const Label& l : rule.all_labels()) {
        if (l.value < 0) continue;  // negative labels carry no son contract
        const Production* prod = rule.find(l);
        BigInt sons = prod ? prod->son_count() : BigInt(0);
        if (sons != l.value) {
            report.consistent = false;
            report.violations.push_back({l, sons});
        }
    }
    return report;
}

}  // namespace seqrule
