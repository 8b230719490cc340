#include "seqrule/rule_text.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

#include "seqrule/error.hpp"

namespace seqrule {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    LParen, RParen, Tilde, Colon, Caret, Plus, Minus,
    Arrow,       // ->
    JumpArrow,   // =J=>
    DotDot,      // ..
    LBrace, RBrace, Comma,
    Int, KVar,
    KwAxiom, KwWhen, KwLevelIndexed,
    CmpGe, CmpLe, CmpGt, CmpLt, CmpEq,
    End,
};

struct Token {
    Tok kind;
    BigInt number;  // Int, JumpArrow
    int line = 0;
    int column = 0;
};

[[noreturn]] void fail(int line, int column, const std::string& what) {
    std::ostringstream msg;
    msg << line << ":" << column << ": " << what;
    throw Error(Error::Code::SyntaxError, msg.str());
}

class LineLexer {
public:
    LineLexer(std::string_view text, int line) : text_(text), line_(line) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (done() || peek() == '#') break;
            out.push_back(next_token());
        }
        out.push_back(Token{Tok::End, 0, line_, column()});
        return out;
    }

private:
    bool done() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    int column() const { return static_cast<int>(pos_) + 1; }
    void skip_space() {
        while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
    }

    Token make(Tok kind, int col, BigInt number = 0) {
        return Token{kind, std::move(number), line_, col};
    }

    Token next_token() {
        const int col = column();
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return make(Tok::Int, col, read_number());
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return read_word(col);
        ++pos_;
        switch (c) {
            case '(': return make(Tok::LParen, col);
            case ')': return make(Tok::RParen, col);
            case '~': return make(Tok::Tilde, col);
            case ':': return make(Tok::Colon, col);
            case '^': return make(Tok::Caret, col);
            case '+': return make(Tok::Plus, col);
            case '{': return make(Tok::LBrace, col);
            case '}': return make(Tok::RBrace, col);
            case ',': return make(Tok::Comma, col);
            case '-':
                if (peek() == '>') {
                    ++pos_;
                    return make(Tok::Arrow, col);
                }
                return make(Tok::Minus, col);
            case '.':
                if (peek() == '.') {
                    ++pos_;
                    return make(Tok::DotDot, col);
                }
                fail(line_, col, "unexpected '.'");
            case '=': {
                if (peek() == '=') {
                    ++pos_;
                    return make(Tok::CmpEq, col);
                }
                if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                    fail(line_, col, "expected jump arrow =J=> or ==");
                }
                BigInt jump = read_number();
                if (peek() != '=' || peek(1) != '>') {
                    fail(line_, column(), "expected '=>' to close jump arrow");
                }
                pos_ += 2;
                if (jump < 1) fail(line_, col, "jump must be >= 1");
                return make(Tok::JumpArrow, col, jump);
            }
            case '>':
                if (peek() == '=') {
                    ++pos_;
                    return make(Tok::CmpGe, col);
                }
                return make(Tok::CmpGt, col);
            case '<':
                if (peek() == '=') {
                    ++pos_;
                    return make(Tok::CmpLe, col);
                }
                return make(Tok::CmpLt, col);
            default:
                fail(line_, col, std::string("unexpected character '") + c + "'");
        }
    }

    BigInt read_number() {
        std::string digits;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            digits.push_back(text_[pos_++]);
        }
        return BigInt(digits);
    }

    Token read_word(int col) {
        std::string word;
        while (!done() && std::isalpha(static_cast<unsigned char>(peek()))) {
            word.push_back(text_[pos_++]);
        }
        if (word == "k") return make(Tok::KVar, col);
        if (word == "axiom") return make(Tok::KwAxiom, col);
        if (word == "when") return make(Tok::KwWhen, col);
        if (word == "level" && peek() == '-' &&
            text_.substr(pos_ + 1, 7) == "indexed") {
            pos_ += 8;
            return make(Tok::KwLevelIndexed, col);
        }
        fail(line_, col, "unknown word '" + word + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

// ---------------------------------------------------------------------------
// Line parser into a dialect-neutral form
// ---------------------------------------------------------------------------

struct GenericLabel {
    bool marked = false;
    bool is_range = false;
    AffineExpr lo;
    AffineExpr hi;  // ranges only
    int tag = 0;
    int line = 0, column = 0;
};

struct GenericBranch {
    GenericLabel label;
    AffineExpr multiplicity = affine_const(1);
};

struct GenericProduction {
    GenericLabel parent;
    int jump = 1;
    std::vector<GenericBranch> branches;
    Guard guard;
    bool has_guard = false;
    int line = 0;
};

struct GenericRule {
    std::optional<GenericLabel> axiom;
    int axiom_line = 0;
    std::vector<GenericProduction> productions;
    bool level_indexed = false;
    bool parametric_syntax = false;  // k, range, guard, or directive seen
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    GenericRule run() {
        GenericRule rule;
        int line_no = 0;
        std::size_t start = 0;
        while (start <= text_.size()) {
            std::size_t end = text_.find('\n', start);
            std::string_view line = text_.substr(
                start, end == std::string_view::npos ? std::string_view::npos
                                                     : end - start);
            ++line_no;
            parse_line(line, line_no, rule);
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        if (!rule.axiom) {
            fail(line_no, 1, "rule has no axiom line");
        }
        return rule;
    }

private:
    void parse_line(std::string_view line, int line_no, GenericRule& rule) {
        tokens_ = LineLexer(line, line_no).run();
        pos_ = 0;
        if (at(Tok::End)) return;
        if (at(Tok::KwLevelIndexed)) {
            advance();
            expect(Tok::End, "end of line after level-indexed");
            rule.level_indexed = true;
            rule.parametric_syntax = true;
            return;
        }
        if (at(Tok::KwAxiom)) {
            advance();
            if (rule.axiom) fail(line_no, cur().column, "duplicate axiom line");
            GenericLabel axiom = parse_label(rule);
            if (axiom.marked) fail(axiom.line, axiom.column, "axiom cannot be marked");
            if (axiom.is_range) fail(axiom.line, axiom.column, "axiom cannot be a range");
            expect(Tok::End, "end of line after axiom");
            rule.axiom = axiom;
            rule.axiom_line = line_no;
            return;
        }
        GenericProduction prod;
        prod.line = line_no;
        prod.parent = parse_label(rule);
        if (prod.parent.is_range) {
            fail(prod.parent.line, prod.parent.column, "parent cannot be a range");
        }
        if (prod.parent.marked) {
            fail(prod.parent.line, prod.parent.column, "parent cannot be marked");
        }
        if (at(Tok::Arrow)) {
            advance();
        } else if (at(Tok::JumpArrow)) {
            prod.jump = static_cast<int>(cur().number);
            advance();
        } else {
            fail(cur().line, cur().column, "expected '->' or '=J=>'");
        }
        while (at(Tok::LParen)) {
            GenericBranch branch;
            branch.label = parse_label(rule);
            if (at(Tok::Caret)) {
                advance();
                branch.multiplicity = parse_exponent(rule);
            }
            prod.branches.push_back(std::move(branch));
        }
        if (prod.branches.empty()) {
            fail(cur().line, cur().column, "production needs at least one branch");
        }
        if (at(Tok::KwWhen)) {
            advance();
            prod.has_guard = true;
            rule.parametric_syntax = true;
            parse_guard_condition(prod.guard);
            while (at(Tok::Comma)) {
                advance();
                parse_guard_condition(prod.guard);
            }
        }
        expect(Tok::End, "end of line");
        rule.productions.push_back(std::move(prod));
    }

    GenericLabel parse_label(GenericRule& rule) {
        GenericLabel label;
        label.line = cur().line;
        label.column = cur().column;
        expect(Tok::LParen, "'('");
        if (at(Tok::Tilde)) {
            label.marked = true;
            advance();
        }
        label.lo = parse_affine(rule);
        if (at(Tok::DotDot)) {
            if (label.marked) {
                fail(cur().line, cur().column, "a range cannot be marked");
            }
            advance();
            label.is_range = true;
            label.hi = parse_affine(rule);
            rule.parametric_syntax = true;
        } else if (at(Tok::Colon)) {
            advance();
            Token t = expect(Tok::Int, "tag integer");
            label.tag = static_cast<int>(t.number);
        }
        expect(Tok::RParen, "')'");
        return label;
    }

    AffineExpr parse_exponent(GenericRule& rule) {
        if (at(Tok::LBrace)) {
            advance();
            AffineExpr e = parse_affine(rule);
            expect(Tok::RBrace, "'}'");
            return e;
        }
        bool negative = false;
        if (at(Tok::Minus)) {
            negative = true;
            advance();
        }
        Token t = expect(Tok::Int, "multiplicity integer");
        BigInt value = negative ? BigInt(-t.number) : t.number;
        if (value == 0) fail(t.line, t.column, "multiplicity must be nonzero");
        return affine_const(value);
    }

    AffineExpr parse_affine(GenericRule& rule) {
        AffineExpr expr;
        bool first = true;
        while (true) {
            int sign = 1;
            if (at(Tok::Plus)) {
                advance();
            } else if (at(Tok::Minus)) {
                sign = -1;
                advance();
            } else if (!first) {
                break;
            }
            if (at(Tok::Int)) {
                BigInt value = cur().number;
                advance();
                if (at(Tok::KVar)) {
                    advance();
                    expr.slope += sign * value;
                    rule.parametric_syntax = true;
                } else {
                    expr.offset += sign * value;
                }
            } else if (at(Tok::KVar)) {
                advance();
                expr.slope += sign;
                rule.parametric_syntax = true;
            } else {
                fail(cur().line, cur().column, "expected integer or k");
            }
            first = false;
        }
        return expr;
    }

    void parse_guard_condition(Guard& guard) {
        expect(Tok::KVar, "k in guard");
        Tok cmp = cur().kind;
        if (cmp != Tok::CmpGe && cmp != Tok::CmpLe && cmp != Tok::CmpGt &&
            cmp != Tok::CmpLt && cmp != Tok::CmpEq) {
            fail(cur().line, cur().column, "expected comparison operator");
        }
        advance();
        bool negative = false;
        if (at(Tok::Minus)) {
            negative = true;
            advance();
        }
        Token t = expect(Tok::Int, "guard bound integer");
        BigInt bound = negative ? BigInt(-t.number) : t.number;
        switch (cmp) {
            case Tok::CmpGe: guard.nonneg.push_back(affine(1, -bound)); break;
            case Tok::CmpGt: guard.nonneg.push_back(affine(1, -bound - 1)); break;
            case Tok::CmpLe: guard.nonneg.push_back(affine(-1, bound)); break;
            case Tok::CmpLt: guard.nonneg.push_back(affine(-1, bound - 1)); break;
            default:
                guard.nonneg.push_back(affine(1, -bound));
                guard.nonneg.push_back(affine(-1, bound));
                break;
        }
    }

    const Token& cur() const { return tokens_[pos_]; }
    bool at(Tok kind) const { return cur().kind == kind; }
    void advance() {
        if (!at(Tok::End)) ++pos_;
    }
    Token expect(Tok kind, const std::string& what) {
        if (!at(kind)) fail(cur().line, cur().column, "expected " + what);
        Token t = cur();
        advance();
        return t;
    }

    std::string_view text_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Dialect assembly
// ---------------------------------------------------------------------------

BigInt constant_of(const AffineExpr& e, int line, int column, const char* where) {
    if (!e.is_constant()) {
        fail(line, column, std::string("expected a constant ") + where +
                               " in an ordinary rule");
    }
    return e.offset;
}

Label ordinary_label(const GenericLabel& g) {
    if (g.is_range) fail(g.line, g.column, "ranges need the parametric dialect");
    BigInt value = constant_of(g.lo, g.line, g.column, "label value");
    return Label{value, g.marked, g.tag};
}

SuccessionRule assemble_ordinary(const GenericRule& g) {
    SuccessionRule rule(ordinary_label(*g.axiom));
    std::map<Label, std::vector<Branch>> branches;
    for (const GenericProduction& p : g.productions) {
        if (p.has_guard) fail(p.line, 1, "guards need the parametric dialect");
        Label parent = ordinary_label(p.parent);
        auto& list = branches[parent];
        for (const GenericBranch& b : p.branches) {
            BigInt mult = constant_of(b.multiplicity, b.label.line, b.label.column,
                                      "multiplicity");
            list.push_back(Branch{p.jump, ordinary_label(b.label), mult});
        }
    }
    for (auto& [parent, list] : branches) {
        rule.add_production(parent, std::move(list));
    }
    if (auto missing = rule.dangling_labels(); !missing.empty()) {
        std::ostringstream msg;
        msg << "no production for referenced label";
        if (missing.size() > 1) msg << "s";
        for (const Label& l : missing) msg << " " << l.to_string();
        throw Error(Error::Code::UnresolvedLabel, msg.str());
    }
    return rule;
}

ParametricRule assemble_parametric(const GenericRule& g) {
    ParametricRule rule;
    rule.level_indexed = g.level_indexed;
    const GenericLabel& axiom = *g.axiom;
    if (!axiom.lo.is_constant()) {
        fail(axiom.line, axiom.column, "axiom must be a constant label");
    }
    if (axiom.tag != 0) fail(axiom.line, axiom.column, "tags need the ordinary dialect");
    rule.axiom = axiom.lo.offset;
    for (const GenericProduction& p : g.productions) {
        ProductionSchema schema;
        schema.jump = p.jump;
        schema.guard = p.guard;
        const GenericLabel& parent = p.parent;
        if (parent.tag != 0) {
            fail(parent.line, parent.column, "tags need the ordinary dialect");
        }
        if (parent.lo.is_constant()) {
            // (5) -> ... is shorthand for (k) -> ... when k==5.
            schema.guard.nonneg.push_back(affine(1, -parent.lo.offset));
            schema.guard.nonneg.push_back(affine(-1, parent.lo.offset));
        } else if (!(parent.lo.slope == 1 && parent.lo.offset == 0)) {
            fail(parent.line, parent.column, "parent must be (k) or a constant");
        }
        for (const GenericBranch& b : p.branches) {
            if (b.label.marked) {
                fail(b.label.line, b.label.column,
                     "marked labels need the ordinary dialect");
            }
            if (b.label.tag != 0) {
                fail(b.label.line, b.label.column, "tags need the ordinary dialect");
            }
            SuccessorSchema succ;
            succ.is_range = b.label.is_range;
            succ.lo = b.label.lo;
            succ.hi = b.label.hi;
            succ.multiplicity = b.multiplicity;
            schema.successors.push_back(std::move(succ));
        }
        rule.schemas.push_back(std::move(schema));
    }
    return rule;
}

}  // namespace

SuccessionRule parse_rule(std::string_view text) {
    GenericRule g = Parser(text).run();
    return assemble_ordinary(g);
}

ParametricRule parse_parametric_rule(std::string_view text) {
    GenericRule g = Parser(text).run();
    return assemble_parametric(g);
}

AnyRule parse_any_rule(std::string_view text) {
    GenericRule g = Parser(text).run();
    if (g.parametric_syntax) return assemble_parametric(g);
    return assemble_ordinary(g);
}

// ---------------------------------------------------------------------------
// Printers
// ---------------------------------------------------------------------------

namespace {

std::string multiplicity_suffix(const BigInt& mult) {
    if (mult == 1) return "";
    return "^" + mult.str();
}

void print_branches(std::ostream& out, const Label& parent,
                    const std::vector<Branch>& branches, int jump) {
    out << parent.to_string();
    if (jump == 1) {
        out << " ->";
    } else {
        out << " =" << jump << "=>";
    }
    for (const Branch& b : branches) {
        out << " " << b.successor.to_string() << multiplicity_suffix(b.multiplicity);
    }
    out << "\n";
}

}  // namespace

std::string print_rule(const SuccessionRule& rule) {
    std::ostringstream out;
    out << "axiom " << rule.axiom().to_string() << "\n";
    for (const auto& [parent, prod] : rule.productions()) {
        // One line per jump; branches are already in canonical order.
        std::vector<Branch> same_jump;
        int jump = -1;
        for (const Branch& b : prod.branches()) {
            if (b.jump != jump) {
                if (!same_jump.empty()) print_branches(out, parent, same_jump, jump);
                same_jump.clear();
                jump = b.jump;
            }
            same_jump.push_back(b);
        }
        if (!same_jump.empty()) print_branches(out, parent, same_jump, jump);
    }
    return out.str();
}

std::string AffineExpr::to_string() const {
    std::ostringstream out;
    if (slope == 0) return offset.str();
    if (slope == -1) {
        out << "-k";
    } else if (slope == 1) {
        out << "k";
    } else {
        out << slope.str() << "k";
    }
    if (offset > 0) out << "+" << offset.str();
    if (offset < 0) out << offset.str();
    return out.str();
}

std::string print_parametric_rule(const ParametricRule& rule) {
    std::ostringstream out;
    if (rule.level_indexed) out << "level-indexed\n";
    out << "axiom (" << rule.axiom.str() << ")\n";
    for (const ProductionSchema& schema : rule.schemas) {
        out << "(k)";
        if (schema.jump == 1) {
            out << " ->";
        } else {
            out << " =" << schema.jump << "=>";
        }
        for (const SuccessorSchema& succ : schema.successors) {
            out << " (" << succ.lo.to_string();
            if (succ.is_range) out << ".." << succ.hi.to_string();
            out << ")";
            const AffineExpr& m = succ.multiplicity;
            if (!m.is_constant()) {
                out << "^{" << m.to_string() << "}";
            } else if (m.offset != 1) {
                out << "^" << m.offset.str();
            }
        }
        bool first = true;
        for (const AffineExpr& cond : schema.guard.nonneg) {
            out << (first ? " when " : ", ");
            first = false;
            if (cond.slope == 1) {
                out << "k>=" << BigInt(-cond.offset).str();
            } else if (cond.slope == -1) {
                out << "k<=" << cond.offset.str();
            } else {
                // Not reachable from the parser; keep something parseable.
                out << "k>=" << BigInt(-cond.offset).str();
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace seqrule
