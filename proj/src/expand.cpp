#include "seqrule/expand.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "seqrule/error.hpp"

namespace seqrule {

namespace {

[[noreturn]] void throw_unresolved(const Label& label) {
    throw Error(Error::Code::UnresolvedLabel,
                "label " + label.to_string() + " has no production and is not a sink");
}

// Missing production: fine for value-0 labels (sinks), an error otherwise.
const Production* production_or_sink(const SuccessionRule& rule, const Label& label) {
    const Production* prod = rule.find(label);
    if (!prod && label.value != 0) throw_unresolved(label);
    return prod;
}

void add_count(std::map<Label, BigInt>& counts, const Label& succ, const BigInt& delta) {
    Label key = succ.unmarked();
    BigInt& slot = counts[key];
    slot += succ.marked ? -delta : delta;
    if (slot == 0) counts.erase(key);
}

}  // namespace

std::vector<LevelProfile> expand(const SuccessionRule& rule, int depth) {
    if (depth < 0) {
        throw Error(Error::Code::InvalidArgument, "depth must be >= 0");
    }
    std::vector<LevelProfile> levels(depth + 1);
    for (int n = 0; n <= depth; ++n) levels[n].level = n;
    add_count(levels[0].signed_counts, rule.axiom(), 1);
    for (int n = 0; n <= depth; ++n) {
        for (const auto& [label, count] : levels[n].signed_counts) {
            levels[n].total += count;
            if (n == depth) continue;
            const Production* prod = production_or_sink(rule, label);
            if (!prod) continue;
            for (const Branch& b : prod->branches()) {
                if (n + b.jump > depth) continue;
                add_count(levels[n + b.jump].signed_counts, b.successor,
                          count * b.multiplicity);
            }
        }
    }
    return levels;
}

std::vector<BigInt> expand_totals(const SuccessionRule& rule, int depth) {
    std::vector<BigInt> totals;
    for (const LevelProfile& p : expand(rule, depth)) totals.push_back(p.total);
    return totals;
}

ProductionMatrix production_matrix(const SuccessionRule& rule) {
    RuleKind kind = classify(rule);
    if (kind == RuleKind::Jumping || kind == RuleKind::JumpingMarked) {
        throw Error(Error::Code::JumpsPresent,
                    "production matrix is defined for jump-free rules only");
    }
    if (auto missing = rule.dangling_labels(); !missing.empty()) {
        throw_unresolved(missing.front());
    }

    // Discovery order from the axiom keeps the index stable and readable.
    ProductionMatrix pm;
    std::map<Label, int> index;
    auto intern = [&](const Label& label) {
        Label key = label.unmarked();
        auto [it, fresh] = index.emplace(key, static_cast<int>(pm.label_index.size()));
        if (fresh) pm.label_index.push_back(key);
        return it->second;
    };
    std::deque<Label> queue{rule.axiom().unmarked()};
    intern(rule.axiom());
    while (!queue.empty()) {
        Label current = queue.front();
        queue.pop_front();
        const Production* prod = rule.find(current);
        if (!prod) continue;
        for (const Branch& b : prod->branches()) {
            Label key = b.successor.unmarked();
            if (!index.count(key)) {
                intern(key);
                queue.push_back(key);
            }
        }
    }
    for (const auto& [parent, prod] : rule.productions()) {
        (void)prod;
        if (!index.count(parent)) intern(parent);
    }

    const int n = static_cast<int>(pm.label_index.size());
    pm.matrix.assign(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i) {
        const Production* prod = rule.find(pm.label_index[i]);
        if (!prod) continue;
        for (const Branch& b : prod->branches()) {
            int j = index.at(b.successor.unmarked());
            pm.matrix[i][j] += b.successor.marked ? -b.multiplicity : b.multiplicity;
        }
    }
    return pm;
}

std::vector<BigInt> matrix_level_totals(const ProductionMatrix& pm, const Label& axiom,
                                        int depth) {
    const int n = static_cast<int>(pm.label_index.size());
    std::vector<BigInt> row(n, 0);
    for (int i = 0; i < n; ++i) {
        if (pm.label_index[i] == axiom.unmarked()) row[i] = 1;
    }
    std::vector<BigInt> totals;
    for (int level = 0; level <= depth; ++level) {
        BigInt sum = 0;
        for (const BigInt& v : row) sum += v;
        totals.push_back(sum);
        if (level == depth) break;
        std::vector<BigInt> next(n, 0);
        for (int i = 0; i < n; ++i) {
            if (row[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (pm.matrix[i][j] != 0) next[j] += row[i] * pm.matrix[i][j];
            }
        }
        row = std::move(next);
    }
    return totals;
}

namespace {

std::string escape_dot(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

struct TreeNode {
    Label label;
    int level = 0;
    int parent = -1;  // -1 for the root
    bool alive = true;
};

// Materialize the tree level by level, resolving marks by annihilation at
// each level before anyone there produces. Dead nodes never produce, which
// kills both subtrees of an annihilated pair.
std::vector<TreeNode> materialize_tree(const SuccessionRule& rule, int depth,
                                       int node_cap) {
    std::vector<TreeNode> nodes;
    std::vector<std::vector<int>> by_level(depth + 1);
    auto add_node = [&](const Label& label, int level, int parent) {
        if (static_cast<int>(nodes.size()) >= node_cap) {
            std::ostringstream msg;
            msg << "tree exceeds the node budget of " << node_cap;
            throw Error(Error::Code::NodeBudgetExceeded, msg.str());
        }
        nodes.push_back(TreeNode{label, level, parent, true});
        by_level[level].push_back(static_cast<int>(nodes.size()) - 1);
    };
    add_node(rule.axiom(), 0, -1);
    for (int n = 0; n <= depth; ++n) {
        // Annihilation round: each marked node kills one unmarked node with
        // the same value and tag on its level (earliest victim first).
        for (int id : by_level[n]) {
            if (!nodes[id].alive || !nodes[id].label.marked) continue;
            for (int victim : by_level[n]) {
                if (victim == id || !nodes[victim].alive) continue;
                const Label& v = nodes[victim].label;
                if (!v.marked && v.value == nodes[id].label.value &&
                    v.tag == nodes[id].label.tag) {
                    nodes[victim].alive = false;
                    nodes[id].alive = false;
                    break;
                }
            }
        }
        if (n == depth) break;
        for (int id : by_level[n]) {
            if (!nodes[id].alive) continue;
            const Production* prod = production_or_sink(rule, nodes[id].label);
            if (!prod) continue;
            for (const Branch& b : prod->branches()) {
                int target = n + b.jump;
                if (target > depth) continue;
                // A marked parent's sons inherit the flipped mark so that its
                // whole subtree counts negatively until annihilated.
                for (BigInt c = 0; c < b.multiplicity; ++c) {
                    Label son = nodes[id].label.marked ? b.successor.marked_flipped()
                                                       : b.successor;
                    add_node(son, target, id);
                }
            }
        }
    }
    return nodes;
}

std::string export_dot_tree(const SuccessionRule& rule, int depth,
                            const DotOptions& options) {
    std::vector<TreeNode> nodes = materialize_tree(rule, depth, options.node_cap);
    std::ostringstream out;
    out << "digraph generating_tree {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=ellipse];\n";
    std::vector<std::vector<int>> by_level(depth + 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        by_level[nodes[i].level].push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const TreeNode& node = nodes[i];
        out << "  n" << i << " [label=\"" << escape_dot(node.label.to_string())
            << "\"";
        if (!node.alive || node.label.marked) out << ", style=dashed";
        out << "];\n";
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].parent >= 0) {
            out << "  n" << nodes[i].parent << " -> n" << i << ";\n";
        }
    }
    for (int n = 0; n <= depth; ++n) {
        if (by_level[n].empty()) continue;
        out << "  { rank=same;";
        for (int id : by_level[n]) out << " n" << id << ";";
        out << " }\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot_compact(const SuccessionRule& rule, int depth,
                               const DotOptions& options) {
    std::vector<LevelProfile> levels = expand(rule, depth);
    int node_count = 0;
    for (const LevelProfile& p : levels) {
        node_count += static_cast<int>(p.signed_counts.size());
    }
    if (node_count > options.node_cap) {
        throw Error(Error::Code::NodeBudgetExceeded,
                    "compact graph exceeds the node budget");
    }
    std::ostringstream out;
    out << "digraph generating_tree_compact {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=box];\n";
    std::map<std::pair<int, Label>, std::string> names;
    for (const LevelProfile& p : levels) {
        int i = 0;
        for (const auto& [label, count] : p.signed_counts) {
            std::string name = "L" + std::to_string(p.level) + "_" + std::to_string(i++);
            names[{p.level, label}] = name;
            // Negative aggregate counts render as marked labels so the
            // exponents on a level always sum to the sequence term.
            Label shown = count < 0 ? label.marked_flipped() : label;
            std::ostringstream text;
            text << shown.to_string() << "^" << abs(count).str();
            out << "  " << name << " [label=\"" << escape_dot(text.str()) << "\"";
            if (count < 0) out << ", style=dashed";
            out << "];\n";
        }
    }
    for (const LevelProfile& p : levels) {
        for (const auto& [label, count] : p.signed_counts) {
            (void)count;
            const Production* prod = rule.find(label);
            if (!prod) continue;
            for (const Branch& b : prod->branches()) {
                int target = p.level + b.jump;
                if (target > depth) continue;
                auto to = names.find({target, b.successor.unmarked()});
                if (to == names.end()) continue;  // fully cancelled on arrival
                out << "  " << names.at({p.level, label}) << " -> " << to->second
                    << ";\n";
            }
        }
    }
    for (const LevelProfile& p : levels) {
        if (p.signed_counts.empty()) continue;
        out << "  { rank=same;";
        for (const auto& [label, count] : p.signed_counts) {
            (void)count;
            out << " " << names.at({p.level, label}) << ";";
        }
        out << " }\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace

std::string export_dot(const SuccessionRule& rule, int depth, DotOptions options) {
    if (depth < 0) {
        throw Error(Error::Code::InvalidArgument, "depth must be >= 0");
    }
    return options.compact ? export_dot_compact(rule, depth, options)
                           : export_dot_tree(rule, depth, options);
}

}  // namespace seqrule
