#include "tsreason/plan/parse.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"

namespace tsreason::plan {

Expr Expr::ident(std::string name) {
    Expr e;
    e.kind = Kind::identifier;
    e.text = std::move(name);
    return e;
}

Expr Expr::num(double v) {
    Expr e;
    e.kind = Kind::number;
    e.number = v;
    return e;
}

Expr Expr::str(std::string s) {
    Expr e;
    e.kind = Kind::string;
    e.text = std::move(s);
    return e;
}

Expr Expr::list(std::vector<Expr> items) {
    Expr e;
    e.kind = Kind::list;
    e.items = std::move(items);
    return e;
}

std::string Plan::result_name() const {
    if (steps.empty()) return "";
    for (const Step& s : steps)
        if (s.target == "FINAL_RESULT") return s.target;
    return steps.back().target;
}

namespace {

// Single-line statement scanner. Column numbers are 1-based and refer to the
// original line, so diagnostics point into the text the decomposer emitted.
class LineParser {
public:
    LineParser(const std::string& line, int line_no) : s_(line), line_(line_no) {}

    Step parse_statement() {
        Step step;
        step.target = expect_identifier("assignment target");
        skip_ws();
        expect('=', "'=' after the target name");
        skip_ws();
        step.op = expect_identifier("operator name");
        skip_ws();
        expect('(', "'(' starting the argument list");
        skip_ws();
        if (!at(')')) {
            for (;;) {
                skip_ws();
                const std::string kw = expect_identifier("argument keyword");
                skip_ws();
                expect('=', "'=' after argument keyword '" + kw + "'");
                skip_ws();
                if (step.args.count(kw))
                    error("duplicate argument keyword '" + kw + "'");
                step.args.emplace(kw, parse_expr());
                skip_ws();
                if (at(',')) {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect(')', "')' closing the argument list");
        skip_ws();
        if (pos_ != s_.size()) error("unexpected trailing text");
        return step;
    }

private:
    bool at(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    [[noreturn]] void error(const std::string& what) const {
        fail("SyntaxError", "line " + std::to_string(line_) + ", col " +
                                std::to_string(pos_ + 1) + ": " + what);
    }

    void expect(char c, const std::string& what) {
        if (!at(c)) error("expected " + what);
        ++pos_;
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string expect_identifier(const std::string& what) {
        if (pos_ >= s_.size() || !ident_start(s_[pos_])) error("expected " + what);
        const std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    Expr parse_expr() {
        skip_ws();
        if (pos_ >= s_.size()) error("expected an expression");
        const char c = s_[pos_];
        if (c == '"') return parse_string();
        if (c == '[') return parse_list();
        if (c == '{') return parse_placeholder();
        if (ident_start(c)) return Expr::ident(expect_identifier("identifier"));
        if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
            return parse_number();
        error("expected an expression");
    }

    Expr parse_string() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) error("unterminated escape in string literal");
                const char esc = s_[pos_++];
                switch (esc) {
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    default: error(std::string("unknown escape '\\") + esc + "'");
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size()) error("unterminated string literal");
        ++pos_;  // closing quote
        return Expr::str(std::move(out));
    }

    Expr parse_list() {
        ++pos_;  // '['
        std::vector<Expr> items;
        skip_ws();
        if (!at(']')) {
            for (;;) {
                items.push_back(parse_expr());
                skip_ws();
                if (at(',')) {
                    ++pos_;
                    skip_ws();
                    continue;
                }
                break;
            }
        }
        expect(']', "']' closing the list");
        return Expr::list(std::move(items));
    }

    Expr parse_placeholder() {
        ++pos_;  // '{'
        const std::string name = expect_identifier("placeholder name");
        expect('}', "'}' closing the placeholder");
        Expr e;
        e.kind = Expr::Kind::placeholder;
        e.text = name;
        return e;
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        if (at('-') || at('+')) ++pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                s_[pos_] == 'e' || s_[pos_] == 'E' ||
                ((s_[pos_] == '-' || s_[pos_] == '+') &&
                 (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
            ++pos_;
        const std::string tok = s_.substr(start, pos_ - start);
        double v = 0.0;
        try {
            v = parse_double(tok);
        } catch (const OpError&) {
            pos_ = start;
            error("malformed number '" + tok + "'");
        }
        return Expr::num(v);
    }

    const std::string& s_;
    int line_;
    std::size_t pos_ = 0;
};

// Cut off a trailing comment, honoring '#' inside string literals.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

bool blank(const std::string& line) {
    for (const char c : line)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

bool fence_line(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.compare(i, 3, "```") == 0;
}

}  // namespace

Plan parse_plan(const std::string& text) {
    Plan plan;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (fence_line(line)) continue;
        line = strip_comment(line);
        if (blank(line)) continue;
        plan.steps.push_back(LineParser(line, line_no).parse_statement());
    }
    return plan;
}

}  // namespace tsreason::plan
