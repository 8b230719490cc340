// seqrule: compile linear constant-coefficient recurrences into succession
// rules, enumerate generating trees, and test the positivity condition.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqrule/compile.hpp"
#include "seqrule/error.hpp"
#include "seqrule/expand.hpp"
#include "seqrule/parametric.hpp"
#include "seqrule/recurrence.hpp"
#include "seqrule/rule_text.hpp"

namespace {

using nlohmann::json;
using namespace seqrule;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitMismatch = 3;

[[noreturn]] void usage_error(const std::string& message) {
    throw CLI::ValidationError(message);
}

std::vector<BigInt> parse_int_list(const std::string& text, const char* what) {
    std::vector<BigInt> values;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        // strip blanks around each entry
        std::size_t begin = item.find_first_not_of(" \t");
        std::size_t end = item.find_last_not_of(" \t");
        if (begin == std::string::npos) {
            usage_error(std::string(what) + ": empty entry in '" + text + "'");
        }
        item = item.substr(begin, end - begin + 1);
        try {
            values.push_back(BigInt(item));
        } catch (const std::exception&) {
            usage_error(std::string(what) + ": '" + item + "' is not an integer");
        }
    }
    if (values.empty()) {
        usage_error(std::string(what) + ": expected a comma-separated integer list");
    }
    return values;
}

json to_json_list(const std::vector<BigInt>& values) {
    json out = json::array();
    for (const BigInt& v : values) out.push_back(v.str());
    return out;
}

std::string join_terms(const std::vector<BigInt>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << values[i].str();
    }
    return out.str();
}

// Options shared by the recurrence-taking subcommands.
struct RecurrenceArgs {
    std::string coeffs;
    std::string init = "default";

    void attach(CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--coeffs", coeffs,
                                    "comma-separated coefficients a1,a2,...");
        if (required) opt->required();
        cmd->add_option("--init", init,
                        "'default' or comma-separated f(1)..f(k-1)");
    }

    bool given() const { return !coeffs.empty(); }

    Recurrence build() const {
        std::vector<BigInt> c = parse_int_list(coeffs, "--coeffs");
        if (init == "default") return Recurrence(std::move(c));
        return Recurrence(std::move(c), parse_int_list(init, "--init"));
    }

    json inputs_json() const {
        json inputs;
        inputs["coeffs"] = to_json_list(parse_int_list(coeffs, "--coeffs"));
        if (init == "default") {
            inputs["inits"] = "default";
        } else {
            inputs["inits"] = to_json_list(parse_int_list(init, "--init"));
        }
        return inputs;
    }
};

struct Output {
    bool as_json = false;
    json doc;
    std::ostringstream text;

    void emit(const std::string& command, const json& inputs) {
        if (as_json) {
            doc["command"] = command;
            doc["inputs"] = inputs;
            if (!doc.contains("diagnostics")) doc["diagnostics"] = json::array();
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << text.str();
        }
    }

    void diagnostic(const std::string& message) {
        if (as_json) {
            if (!doc.contains("diagnostics")) doc["diagnostics"] = json::array();
            doc["diagnostics"].push_back(message);
        } else {
            std::cerr << "note: " << message << "\n";
        }
    }
};

int check_depth(int depth, int cap) {
    if (depth < 0) usage_error("--depth must be >= 0");
    if (depth > cap) {
        usage_error("--depth exceeds the cap of " + std::to_string(cap) +
                    " (raise it with --depth-cap)");
    }
    return depth;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) usage_error("cannot open rule file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

SuccessionRule compile_stage(const Recurrence& rec, const std::string& stage,
                             const std::optional<std::vector<BigInt>>& q_override,
                             Output& out) {
    if (stage == "extended") return to_extended_rule(rec);
    if (stage == "jumpfree") return eliminate_jumps(rec);
    if (stage == "generic") return compile_generic(rec);
    if (stage == "ordinary") {
        if (!rec.has_default_inits()) {
            usage_error("--stage ordinary needs default inits; use --stage generic");
        }
        QRDecomposition qr;
        if (q_override) {
            qr = qr_for(rec.coeffs(), q_override);
        } else if (auto witness = positivity_check(rec)) {
            qr = witness->qr;
        } else {
            qr = qr_for(rec.coeffs());
            out.diagnostic("positivity test inconclusive; using the minimal decomposition");
        }
        OrdinaryRule ordinary = to_ordinary_rule(rec, qr);
        if (!ordinary.is_ordinary) {
            out.diagnostic("rule is not ordinary: some exponents are negative");
        }
        return ordinary.rule;
    }
    usage_error("unknown stage '" + stage + "'");
}

json profile_json(const LevelProfile& profile) {
    json labels = json::array();
    for (const auto& [label, count] : profile.signed_counts) {
        labels.push_back({{"label", label.to_string()}, {"count", count.str()}});
    }
    return {{"level", profile.level}, {"labels", labels}, {"total", profile.total.str()}};
}

// ---------------------------------------------------------------------------

int run_seq(const RecurrenceArgs& rec_args, int depth, Output& out) {
    std::vector<BigInt> terms = eval_sequence(rec_args.build(), depth);
    out.doc["result"]["terms"] = to_json_list(terms);
    out.text << join_terms(terms) << "\n";
    out.emit("seq", [&] {
        json j = rec_args.inputs_json();
        j["depth"] = depth;
        return j;
    }());
    return kExitOk;
}

int run_gf(const RecurrenceArgs& rec_args, Output& out) {
    RationalGF gf = generating_function(rec_args.build());
    out.doc["result"]["numerator"] = to_json_list(gf.numerator);
    out.doc["result"]["denominator"] = to_json_list(gf.denominator);
    out.doc["result"]["text"] = gf.to_string();
    out.text << gf.to_string() << "\n";
    out.emit("gf", rec_args.inputs_json());
    return kExitOk;
}

int run_compile(const RecurrenceArgs& rec_args, const std::string& stage,
                const std::string& q_text, Output& out) {
    std::optional<std::vector<BigInt>> q_override;
    if (!q_text.empty()) q_override = parse_int_list(q_text, "--q");
    Recurrence rec = rec_args.build();
    SuccessionRule rule = compile_stage(rec, stage, q_override, out);
    std::string text = print_rule(rule);
    ConsistencyReport consistency = is_consistent(rule);
    out.doc["result"]["stage"] = stage;
    out.doc["result"]["rule"] = text;
    out.doc["result"]["classification"] = to_string(classify(rule));
    out.doc["result"]["consistent"] = consistency.consistent;
    out.text << text;
    json inputs = rec_args.inputs_json();
    inputs["stage"] = stage;
    if (q_override) inputs["q"] = to_json_list(*q_override);
    out.emit("compile", inputs);
    return kExitOk;
}

int run_positivity(const RecurrenceArgs& rec_args, Output& out) {
    Recurrence rec = rec_args.build();
    if (!rec.has_default_inits()) {
        usage_error("positivity takes default initial conditions only");
    }
    auto witness = positivity_check(rec);
    if (!witness) {
        out.doc["result"]["status"] = "unknown";
        out.text << "unknown: the positivity test is inconclusive\n";
        out.emit("positivity", rec_args.inputs_json());
        return kExitInconclusive;
    }
    out.doc["result"]["status"] = "witness";
    out.doc["result"]["q"] = to_json_list(witness->qr.quotients);
    out.doc["result"]["r"] = to_json_list(witness->qr.remainders);
    out.doc["result"]["slack"] = to_json_list(witness->slack);
    out.text << "witness: q = [" << join_terms(witness->qr.quotients) << "], r = ["
             << join_terms(witness->qr.remainders) << "], slack = ["
             << join_terms(witness->slack) << "]\n";
    out.emit("positivity", rec_args.inputs_json());
    return kExitOk;
}

void render_levels(const std::vector<LevelProfile>& levels, Output& out) {
    json result_levels = json::array();
    std::vector<BigInt> totals;
    for (const LevelProfile& p : levels) {
        totals.push_back(p.total);
        result_levels.push_back(profile_json(p));
        out.text << p.level << " " << p.total.str() << "\n";
    }
    out.doc["result"]["totals"] = to_json_list(totals);
    out.doc["result"]["levels"] = result_levels;
}

int run_expand(const RecurrenceArgs& rec_args, const std::string& rule_file,
               const std::string& stage, int depth, Output& out) {
    if (rec_args.given() == !rule_file.empty()) {
        usage_error("expand needs exactly one of --coeffs or --rule");
    }
    json inputs;
    if (!rule_file.empty()) {
        inputs["rule_file"] = rule_file;
        inputs["depth"] = depth;
        AnyRule any = parse_any_rule(read_file(rule_file));
        if (std::holds_alternative<SuccessionRule>(any)) {
            render_levels(expand(std::get<SuccessionRule>(any), depth), out);
        } else {
            render_levels(expand_parametric(std::get<ParametricRule>(any), depth), out);
        }
    } else {
        inputs = rec_args.inputs_json();
        inputs["stage"] = stage;
        inputs["depth"] = depth;
        SuccessionRule rule = compile_stage(rec_args.build(), stage, std::nullopt, out);
        render_levels(expand(rule, depth), out);
    }
    out.emit("expand", inputs);
    return kExitOk;
}

int run_verify(const RecurrenceArgs& rec_args, int depth, Output& out) {
    VerifyReport report = verify(rec_args.build(), depth);
    out.text << "oracle: " << join_terms(report.oracle) << "\n";
    json stages = json::array();
    for (const StageReport& stage : report.stages) {
        json s;
        s["stage"] = stage.stage;
        if (!stage.applicable) {
            s["status"] = "skipped";
            s["reason"] = stage.note;
            out.text << stage.stage << ": skipped (" << stage.note << ")\n";
        } else if (stage.match) {
            s["status"] = "match";
            out.text << stage.stage << ": match\n";
        } else {
            s["status"] = "mismatch";
            s["first_divergence"] = {{"level", stage.divergence_level},
                                     {"expected", stage.expected.str()},
                                     {"actual", stage.actual.str()}};
            out.text << stage.stage << ": diverges at level " << stage.divergence_level
                     << " (expected " << stage.expected.str() << ", got "
                     << stage.actual.str() << ")\n";
        }
        stages.push_back(std::move(s));
    }
    out.doc["result"]["depth"] = report.depth;
    out.doc["result"]["oracle"] = to_json_list(report.oracle);
    out.doc["result"]["stages"] = stages;
    out.doc["result"]["all_match"] = report.all_match;
    out.text << (report.all_match ? "all stages match\n" : "MISMATCH\n");
    json inputs = rec_args.inputs_json();
    inputs["depth"] = depth;
    out.emit("verify", inputs);
    return report.all_match ? kExitOk : kExitMismatch;
}

int run_dot(const RecurrenceArgs& rec_args, const std::string& rule_file,
            const std::string& stage, int depth, bool compact, int node_cap,
            const std::string& out_path, Output& out) {
    if (rec_args.given() == !rule_file.empty()) {
        usage_error("dot needs exactly one of --coeffs or --rule");
    }
    SuccessionRule rule;
    json inputs;
    if (!rule_file.empty()) {
        inputs["rule_file"] = rule_file;
        AnyRule any = parse_any_rule(read_file(rule_file));
        if (!std::holds_alternative<SuccessionRule>(any)) {
            usage_error("dot export supports finite rules only");
        }
        rule = std::get<SuccessionRule>(any);
    } else {
        inputs = rec_args.inputs_json();
        inputs["stage"] = stage;
        rule = compile_stage(rec_args.build(), stage, std::nullopt, out);
    }
    inputs["depth"] = depth;
    inputs["compact"] = compact;
    DotOptions options;
    options.compact = compact;
    options.node_cap = node_cap;
    std::string dot = export_dot(rule, depth, options);
    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) usage_error("cannot write to '" + out_path + "'");
        file << dot;
        out.text << "wrote " << out_path << "\n";
        out.doc["result"]["path"] = out_path;
    } else {
        out.text << dot;
        out.doc["result"]["dot"] = dot;
    }
    out.emit("dot", inputs);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"succession-rule compiler and generating-tree enumerator"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    int depth_cap = 64;
    app.add_flag("--json", as_json, "emit one JSON document instead of text");
    app.add_option("--depth-cap", depth_cap, "maximum accepted --depth")
        ->capture_default_str();

    RecurrenceArgs seq_rec, gf_rec, compile_rec, pos_rec, expand_rec, verify_rec, dot_rec;
    int seq_depth = 10, expand_depth = 10, verify_depth = 10, dot_depth = 4;
    std::string compile_stage_name = "ordinary";
    std::string compile_q;
    std::string expand_rule, dot_rule;
    std::string expand_stage = "ordinary", dot_stage = "ordinary";
    bool dot_compact = false;
    int dot_node_cap = 5000;
    std::string dot_out;

    CLI::App* seq = app.add_subcommand("seq", "sequence terms from the recurrence");
    seq_rec.attach(seq);
    seq->add_option("--depth", seq_depth, "last index to print")->capture_default_str();

    CLI::App* gf = app.add_subcommand("gf", "rational generating function");
    gf_rec.attach(gf);

    CLI::App* compile = app.add_subcommand("compile", "emit a succession rule");
    compile_rec.attach(compile);
    compile->add_option("--stage", compile_stage_name,
                        "extended | jumpfree | ordinary | generic")
        ->capture_default_str();
    compile->add_option("--q", compile_q, "override the quotient vector q2,...,qk");

    CLI::App* positivity = app.add_subcommand("positivity", "positivity condition test");
    pos_rec.attach(positivity);

    CLI::App* expand_cmd = app.add_subcommand("expand", "level totals of a rule");
    expand_rec.attach(expand_cmd, /*required=*/false);
    expand_cmd->add_option("--rule", expand_rule, "rule file in the DSL");
    expand_cmd->add_option("--stage", expand_stage, "stage when using --coeffs")
        ->capture_default_str();
    expand_cmd->add_option("--depth", expand_depth, "levels to enumerate")
        ->capture_default_str();

    CLI::App* verify_cmd = app.add_subcommand("verify", "compare stages to the sequence");
    verify_rec.attach(verify_cmd);
    verify_cmd->add_option("--depth", verify_depth, "levels to compare")
        ->capture_default_str();

    CLI::App* dot = app.add_subcommand("dot", "Graphviz export of the generating tree");
    dot_rec.attach(dot, /*required=*/false);
    dot->add_option("--rule", dot_rule, "rule file in the DSL");
    dot->add_option("--stage", dot_stage, "stage when using --coeffs")
        ->capture_default_str();
    dot->add_option("--depth", dot_depth, "levels to draw")->capture_default_str();
    dot->add_flag("--compact", dot_compact, "aggregate equal labels per level");
    dot->add_option("--node-cap", dot_node_cap, "node budget")->capture_default_str();
    dot->add_option("--out", dot_out, "write DOT here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    Output out;
    out.as_json = as_json;
    try {
        if (seq->parsed()) return run_seq(seq_rec, check_depth(seq_depth, depth_cap), out);
        if (gf->parsed()) return run_gf(gf_rec, out);
        if (compile->parsed())
            return run_compile(compile_rec, compile_stage_name, compile_q, out);
        if (positivity->parsed()) return run_positivity(pos_rec, out);
        if (expand_cmd->parsed())
            return run_expand(expand_rec, expand_rule, expand_stage,
                              check_depth(expand_depth, depth_cap), out);
        if (verify_cmd->parsed())
            return run_verify(verify_rec, check_depth(verify_depth, depth_cap), out);
        if (dot->parsed())
            return run_dot(dot_rec, dot_rule, dot_stage,
                           check_depth(dot_depth, depth_cap), dot_compact,
                           dot_node_cap, dot_out, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
