#include "seqrule/compile.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include "seqrule/error.hpp"
#include "seqrule/expand.hpp"

namespace seqrule {

namespace {

std::vector<BigInt> prefix_sums(const std::vector<BigInt>& coeffs) {
    std::vector<BigInt> sums(coeffs.size());
    BigInt acc = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        acc += coeffs[i];
        sums[i] = acc;
    }
    return sums;
}

void require_default_inits(const Recurrence& rec, const char* op) {
    if (!rec.has_default_inits()) {
        throw Error(Error::Code::InvalidArgument,
                    std::string(op) + " requires default initial conditions");
    }
}

// ---------------------------------------------------------------------------
// Abstract-node assembly: build a rule from nodes whose branches reference
// node ids, merging bisimilar nodes (same value, same production up to the
// merge) and giving same-value nodes distinct tags in node order.
// ---------------------------------------------------------------------------

constexpr int kSinkTarget = -1;

struct AbstractBranch {
    int jump = 1;
    int target = kSinkTarget;
    BigInt multiplicity = 1;
};

struct AbstractNode {
    BigInt value;
    std::vector<AbstractBranch> branches;
};

SuccessionRule assemble_nodes(const std::vector<AbstractNode>& nodes, int axiom_node) {
    const int n = static_cast<int>(nodes.size());
    std::vector<int> block(n);
    for (int i = 0; i < n; ++i) block[i] = 0;

    // Partition refinement on (value, branch targets' blocks) until stable.
    using Signature = std::pair<BigInt, std::vector<std::tuple<int, int, BigInt>>>;
    while (true) {
        std::map<Signature, int> ids;
        std::vector<int> next(n);
        for (int i = 0; i < n; ++i) {
            Signature sig{nodes[i].value, {}};
            for (const AbstractBranch& b : nodes[i].branches) {
                int target_block = b.target == kSinkTarget ? -1 : block[b.target];
                sig.second.emplace_back(b.jump, target_block, b.multiplicity);
            }
            std::sort(sig.second.begin(), sig.second.end());
            auto [it, fresh] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
            (void)fresh;
            next[i] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }

    // One label per block; blocks ordered by first node, tags count earlier
    // same-value blocks so the axiom-side label always keeps tag 0.
    std::vector<int> representative;
    std::vector<int> block_of_label(n, -1);
    std::map<int, int> label_of_block;
    std::map<BigInt, int> tags_used;
    std::vector<Label> labels;
    for (int i = 0; i < n; ++i) {
        if (label_of_block.count(block[i])) continue;
        int tag = tags_used[nodes[i].value]++;
        label_of_block[block[i]] = static_cast<int>(labels.size());
        labels.push_back(Label{nodes[i].value, false, tag});
        representative.push_back(i);
    }
    (void)block_of_label;

    SuccessionRule rule(labels[label_of_block.at(block[axiom_node])]);
    for (std::size_t li = 0; li < labels.size(); ++li) {
        const AbstractNode& node = nodes[representative[li]];
        std::vector<Branch> branches;
        for (const AbstractBranch& b : node.branches) {
            Label succ = b.target == kSinkTarget
                             ? label(0)
                             : labels[label_of_block.at(block[b.target])];
            branches.push_back(Branch{b.jump, succ, b.multiplicity});
        }
        rule.add_production(labels[li], std::move(branches));
    }
    return rule;
}

}  // namespace

// ---------------------------------------------------------------------------
// Extended rule
// ---------------------------------------------------------------------------

SuccessionRule to_extended_rule(const Recurrence& rec) {
    const int k = rec.order();
    const BigInt& a1 = rec.lead();
    const Label core = label(a1);

    std::vector<Branch> core_branches;
    for (int i = 1; i <= k; ++i) {
        core_branches.push_back(Branch{i, core, rec.coeffs()[i - 1]});
    }

    if (rec.has_default_inits() || k == 1) {
        SuccessionRule rule(core);
        rule.add_production(core, std::move(core_branches));
        return rule;
    }

    const std::vector<BigInt>& h = rec.explicit_inits();
    // A separate root whose jump-i branches inject the correction between
    // the wanted prefix and what earlier injections already produce.
    const Label root = label(h[0], h[0] == a1 ? 1 : 0);
    std::vector<Branch> root_branches;
    root_branches.push_back(Branch{1, core, h[0]});
    for (int i = 2; i < k; ++i) {
        BigInt exponent = h[i - 1];
        for (int j = 1; j < i; ++j) {
            exponent -= h[j - 1] * rec.coeffs()[i - j - 1];
        }
        root_branches.push_back(Branch{i, core, exponent});
    }
    root_branches.push_back(Branch{k, core, rec.coeffs()[k - 1]});

    SuccessionRule rule(root);
    rule.add_production(root, std::move(root_branches));
    rule.add_production(core, std::move(core_branches));
    return rule;
}

// ---------------------------------------------------------------------------
// Jump elimination
// ---------------------------------------------------------------------------

SuccessionRule eliminate_jumps(const Recurrence& rec) {
    require_default_inits(rec, "eliminate_jumps");
    const int k = rec.order();
    const std::vector<BigInt> sums = prefix_sums(rec.coeffs());

    // Chain node i carries prefix sum s_(i+1); each produces the next chain
    // node plus (a1)-fillers, the last one feeding itself.
    std::vector<AbstractNode> nodes(k);
    for (int i = 0; i < k; ++i) {
        nodes[i].value = sums[i];
        const int head = i + 1 < k ? i + 1 : k - 1;
        nodes[i].branches.push_back(AbstractBranch{1, head, 1});
        nodes[i].branches.push_back(AbstractBranch{1, 0, sums[i] - 1});
    }
    return assemble_nodes(nodes, 0);
}

// ---------------------------------------------------------------------------
// Quotient/remainder decomposition
// ---------------------------------------------------------------------------

QRDecomposition qr_for(const std::vector<BigInt>& coeffs,
                       const std::optional<std::vector<BigInt>>& q_choice) {
    if (coeffs.empty() || coeffs.back() == 0) {
        throw Error(Error::Code::InvalidArgument, "invalid coefficient vector");
    }
    const BigInt& a1 = coeffs.front();
    if (a1 < 1) {
        throw Error(Error::Code::A1NotPositive,
                    "the decomposition needs a leading coefficient >= 1");
    }
    const int k = static_cast<int>(coeffs.size());
    const std::vector<BigInt> sums = prefix_sums(coeffs);
    if (q_choice && static_cast<int>(q_choice->size()) != k - 1) {
        std::ostringstream msg;
        msg << "q vector needs " << k - 1 << " entries, got " << q_choice->size();
        throw Error(Error::Code::InvalidQ, msg.str());
    }

    QRDecomposition qr;
    for (int i = 2; i <= k; ++i) {
        const BigInt& s = sums[i - 1];
        BigInt q;
        if (q_choice) {
            q = (*q_choice)[i - 2];
            if (s > 0 && q != 0) {
                throw Error(Error::Code::InvalidQ,
                            "q must be 0 where the prefix sum is positive");
            }
            if (s <= 0 && (q < 1 || s + q * a1 < 1)) {
                throw Error(Error::Code::InvalidQ,
                            "need q >= 1 and q*a1 - |s| >= 1 where the prefix sum is <= 0");
            }
        } else {
            q = s > 0 ? BigInt(0) : ceil_div(1 - s, a1);
        }
        qr.quotients.push_back(q);
        qr.remainders.push_back(s + q * a1);
    }
    return qr;
}

// ---------------------------------------------------------------------------
// Ordinary rule
// ---------------------------------------------------------------------------

OrdinaryRule to_ordinary_rule(const Recurrence& rec, const QRDecomposition& qr) {
    require_default_inits(rec, "to_ordinary_rule");
    const BigInt& a1 = rec.lead();
    if (a1 < 1) {
        throw Error(Error::Code::A1NotPositive,
                    "the ordinary construction needs a leading coefficient >= 1");
    }
    const int k = rec.order();
    if (static_cast<int>(qr.quotients.size()) != k - 1) {
        throw Error(Error::Code::InvalidQ, "decomposition size does not match order");
    }

    OrdinaryRule out;
    if (k == 1) {
        std::vector<AbstractNode> nodes(1);
        nodes[0].value = a1;
        nodes[0].branches.push_back(AbstractBranch{1, 0, a1});
        out.rule = assemble_nodes(nodes, 0);
        return out;
    }

    auto q = [&](int i) { return qr.quotients[i - 2]; };   // i in 2..k
    auto r = [&](int i) { return qr.remainders[i - 2]; };

    // Node 0 is the (a1) label, node i-1 the (r_i) label.
    std::vector<AbstractNode> nodes(k);
    std::vector<BigInt> fillers(k);
    nodes[0].value = a1;
    nodes[0].branches.push_back(AbstractBranch{1, kSinkTarget, q(2)});
    nodes[0].branches.push_back(AbstractBranch{1, 1, 1});
    fillers[0] = a1 - (q(2) + 1);
    nodes[0].branches.push_back(AbstractBranch{1, 0, fillers[0]});
    for (int i = 2; i <= k; ++i) {
        AbstractNode& node = nodes[i - 1];
        node.value = r(i);
        // Leading block ((0)^q2 (r_2))^qi keeps killing the sons the parent's
        // own delayed injections would mark.
        node.branches.push_back(AbstractBranch{1, kSinkTarget, q(2) * q(i)});
        node.branches.push_back(AbstractBranch{1, 1, q(i)});
        const BigInt q_next = i < k ? q(i + 1) : q(k);
        const int head = i < k ? i : k - 1;
        node.branches.push_back(AbstractBranch{1, kSinkTarget, q_next});
        node.branches.push_back(AbstractBranch{1, head, 1});
        fillers[i - 1] = r(i) - (q(i) * (q(2) + 1) + q_next + 1);
        node.branches.push_back(AbstractBranch{1, 0, fillers[i - 1]});
    }
    for (const BigInt& f : fillers) {
        if (f < 0) out.is_ordinary = false;
    }
    out.rule = assemble_nodes(nodes, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Positivity search
// ---------------------------------------------------------------------------

namespace {

struct PositivitySearch {
    const BigInt a1;
    const std::vector<BigInt> sums;
    const int k;
    std::vector<BigInt> q;  // q_2..q_k as chosen so far
    std::vector<BigInt> r;

    explicit PositivitySearch(const Recurrence& rec)
        : a1(rec.lead()), sums(prefix_sums(rec.coeffs())), k(rec.order()) {}

    const BigInt& sum(int i) const { return sums[i - 1]; }

    BigInt inequality(int i) const {
        // i = 1: a1 - (q2+1); 2 <= i <= k-1: r_i - (q_i(q2+1) + q_(i+1) + 1);
        // i = k: r_k - (q_k(q2+1) + q_k + 1).
        if (i == 1) return a1 - (q[0] + 1);
        const BigInt& qi = q[i - 2];
        const BigInt& q_next = i < k ? q[i - 1] : q[i - 2];
        return r[i - 2] - (qi * (q[0] + 1) + q_next + 1);
    }

    bool choose(int i) {  // pick q_i, i in 2..k
        if (i > k) return inequality(k) >= 0;
        const BigInt& s = sum(i);
        BigInt lo, hi;
        if (s > 0) {
            lo = hi = 0;
        } else {
            lo = ceil_div(1 - s, a1);  // smallest q with r >= 1
            if (lo < 1) lo = 1;
            // The system itself bounds the search: the previous inequality
            // caps q_i, and q_2 is capped by the first inequality.
            hi = i == 2 ? BigInt(a1 - 1)
                        : BigInt(r[i - 3] - q[i - 3] * (q[0] + 1) - 1);
        }
        for (BigInt candidate = lo; candidate <= hi; ++candidate) {
            q.push_back(candidate);
            r.push_back(s + candidate * a1);
            if (inequality(i - 1) >= 0 && choose(i + 1)) return true;
            q.pop_back();
            r.pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<PositivityWitness> positivity_check(const Recurrence& rec) {
    require_default_inits(rec, "positivity_check");
    if (rec.lead() < 1) return std::nullopt;
    const int k = rec.order();
    if (k == 1) {
        return PositivityWitness{QRDecomposition{}, {rec.lead() - 1}};
    }
    PositivitySearch search(rec);
    if (!search.choose(2)) return std::nullopt;
    PositivityWitness witness;
    witness.qr.quotients = search.q;
    witness.qr.remainders = search.r;
    for (int i = 1; i <= k; ++i) witness.slack.push_back(search.inequality(i));
    return witness;
}

// ---------------------------------------------------------------------------
// Generic initial conditions
// ---------------------------------------------------------------------------

namespace {

// Wanted future of a subtree, as a signed combination of delayed core
// subtrees: demand[(delay, X)] copies of "an X-subtree planted delay levels
// down". Advancing one level decrements delays and unfolds the delay-0 part
// through the core productions.
using Demand = std::map<std::pair<int, Label>, BigInt>;

void demand_add(Demand& demand, int delay, const Label& label, const BigInt& count) {
    if (count == 0) return;
    auto key = std::make_pair(delay, label);
    BigInt& slot = demand[key];
    slot += count;
    if (slot == 0) demand.erase(key);
}

struct PrefixRealization {
    bool terminal = false;
    std::map<Label, BigInt> terminal_sons;  // nonnegative core multiset
    BigInt zeros = 0, fillers = 0;          // chain step
    BigInt head_value = 0;
    std::unique_ptr<PrefixRealization> head_sons;
};

class PrefixBuilder {
public:
    PrefixBuilder(const SuccessionRule& core, Label core_axiom)
        : core_(core), core_axiom_(std::move(core_axiom)) {}

    std::unique_ptr<PrefixRealization> realize(const Demand& demand, int chain_len) {
        if (chain_len > kMaxChain || ++steps_ > kMaxSteps) return nullptr;
        if (auto terminal = try_terminal(demand)) return terminal;
        BigInt sons = count_now(demand);
        if (sons < 1) return nullptr;
        // Fillers are core-axiom sons; the rest of the budget is zero-label
        // padding around a single fresh head that carries the leftover
        // demand. Prefer as many fillers as keep the head's value >= 0.
        BigInt grandsons = count_now(step(demand));
        const BigInt a1 = core_axiom_.value;
        BigInt max_fillers = sons - 1;
        if (grandsons < 0) return nullptr;
        if (max_fillers * a1 > grandsons) max_fillers = grandsons / a1;
        for (BigInt fillers = max_fillers; fillers >= 0; --fillers) {
            Demand head = demand;
            demand_add(head, 0, core_axiom_, -fillers);
            demand_add(head, 0, label(0), -(sons - 1 - fillers));
            Demand head_sons = step(head);
            auto sub = realize(head_sons, chain_len + 1);
            if (!sub) continue;
            auto out = std::make_unique<PrefixRealization>();
            out->zeros = sons - 1 - fillers;
            out->fillers = fillers;
            out->head_value = count_now(head_sons);
            out->head_sons = std::move(sub);
            return out;
        }
        return nullptr;
    }

private:
    static constexpr int kMaxChain = 64;
    static constexpr long kMaxSteps = 100000;

    static BigInt count_now(const Demand& demand) {
        BigInt total = 0;
        for (const auto& [key, count] : demand) {
            if (key.first == 0) total += count;
        }
        return total;
    }

    std::unique_ptr<PrefixRealization> try_terminal(const Demand& demand) const {
        for (const auto& [key, count] : demand) {
            if (key.first != 0 || count < 0) return nullptr;
        }
        auto out = std::make_unique<PrefixRealization>();
        out->terminal = true;
        for (const auto& [key, count] : demand) {
            out->terminal_sons[key.second] = count;
        }
        return out;
    }

    Demand step(const Demand& demand) const {
        Demand next;
        for (const auto& [key, count] : demand) {
            const auto& [delay, lab] = key;
            if (delay > 0) {
                demand_add(next, delay - 1, lab, count);
                continue;
            }
            const Production* prod = core_.find(lab);
            if (!prod) continue;  // sinks have no future
            for (const Branch& b : prod->branches()) {
                BigInt delta = b.successor.marked ? -b.multiplicity : b.multiplicity;
                demand_add(next, 0, b.successor.unmarked(), count * delta);
            }
        }
        return next;
    }

    const SuccessionRule& core_;
    Label core_axiom_;
    long steps_ = 0;
};

}  // namespace

SuccessionRule compile_generic(const Recurrence& rec) {
    const Recurrence core_rec = rec.default_core();
    auto witness = positivity_check(core_rec);
    if (!witness) {
        throw Error(Error::Code::CoreNotPositive,
                    "no positivity witness for the default-init core");
    }
    OrdinaryRule core = to_ordinary_rule(core_rec, witness->qr);
    if (rec.has_default_inits() || rec.order() == 1) {
        return core.rule;
    }

    const int k = rec.order();
    const std::vector<BigInt>& h = rec.explicit_inits();
    const Label core_axiom = core.rule.axiom();

    // The extended form injects (a1)-subtrees at the first k levels; the
    // root's wanted sons are exactly those injections, delayed.
    Demand root_sons;
    demand_add(root_sons, 0, core_axiom, h[0]);
    for (int i = 2; i < k; ++i) {
        BigInt exponent = h[i - 1];
        for (int j = 1; j < i; ++j) {
            exponent -= h[j - 1] * rec.coeffs()[i - j - 1];
        }
        demand_add(root_sons, i - 1, core_axiom, exponent);
    }
    demand_add(root_sons, k - 1, core_axiom, rec.coeffs()[k - 1]);

    if (root_sons.empty()) {
        // Degenerate all-zero tail: the root alone, producing nothing.
        return SuccessionRule(label(0));
    }

    PrefixBuilder builder(core.rule, core_axiom);
    auto realization = builder.realize(root_sons, 0);
    if (!realization) {
        throw Error(Error::Code::PrefixNotEliminable,
                    "no nonnegative unrolling of the initial levels was found");
    }

    SuccessionRule rule = core.rule;
    std::map<BigInt, int> next_tag;
    for (const Label& l : core.rule.all_labels()) {
        int& slot = next_tag[l.value];
        slot = std::max(slot, l.tag + 1);
    }
    auto fresh_label = [&](const BigInt& value) {
        return Label{value, false, next_tag[value]++};
    };

    Label root = fresh_label(h[0]);
    rule.set_axiom(root);
    const PrefixRealization* current = realization.get();
    Label parent = root;
    while (true) {
        if (current->terminal) {
            std::vector<Branch> branches;
            for (const auto& [lab, count] : current->terminal_sons) {
                branches.push_back(Branch{1, lab, count});
            }
            rule.add_production(parent, std::move(branches));
            break;
        }
        Label head = current->head_value == 0 ? label(0)
                                              : fresh_label(current->head_value);
        std::vector<Branch> branches;
        branches.push_back(Branch{1, label(0), current->zeros});
        branches.push_back(Branch{1, head, 1});
        branches.push_back(Branch{1, core_axiom, current->fillers});
        rule.add_production(parent, std::move(branches));
        if (head.value == 0) break;
        parent = head;
        current = current->head_sons.get();
    }
    return rule;
}

// ---------------------------------------------------------------------------
// Verification against the exact sequence
// ---------------------------------------------------------------------------

namespace {

StageReport compare_stage(const std::string& stage, const SuccessionRule& rule,
                          const std::vector<BigInt>& oracle, int depth) {
    StageReport report;
    report.stage = stage;
    report.match = true;
    std::vector<BigInt> totals = expand_totals(rule, depth);
    for (int n = 0; n <= depth; ++n) {
        if (totals[n] != oracle[n]) {
            report.match = false;
            report.divergence_level = n;
            report.expected = oracle[n];
            report.actual = totals[n];
            break;
        }
    }
    return report;
}

StageReport skipped_stage(const std::string& stage, const std::string& why) {
    StageReport report;
    report.stage = stage;
    report.applicable = false;
    report.note = why;
    return report;
}

}  // namespace

VerifyReport verify(const Recurrence& rec, int depth) {
    if (depth < 1) {
        throw Error(Error::Code::InvalidArgument, "verification depth must be >= 1");
    }
    VerifyReport report;
    report.depth = depth;
    report.oracle = eval_sequence(rec, depth);

    report.stages.push_back(
        compare_stage("extended", to_extended_rule(rec), report.oracle, depth));
    if (rec.has_default_inits()) {
        report.stages.push_back(
            compare_stage("jumpfree", eliminate_jumps(rec), report.oracle, depth));
        if (auto witness = positivity_check(rec)) {
            OrdinaryRule ordinary = to_ordinary_rule(rec, witness->qr);
            StageReport stage =
                compare_stage("ordinary", ordinary.rule, report.oracle, depth);
            if (!ordinary.is_ordinary) stage.note = "construction left negative exponents";
            report.stages.push_back(std::move(stage));
        } else {
            report.stages.push_back(
                skipped_stage("ordinary", "positivity test inconclusive"));
        }
    } else {
        try {
            report.stages.push_back(
                compare_stage("generic", compile_generic(rec), report.oracle, depth));
        } catch (const Error& e) {
            report.stages.push_back(skipped_stage("generic", e.what()));
        }
    }
    for (const StageReport& stage : report.stages) {
        if (stage.applicable && !stage.match) report.all_match = false;
    }
    return report;
}

}  // namespace seqrule
