#include "histq/scenario.hpp"

#include "histq/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <utility>

namespace histq {

namespace {

// ---------------------------------------------------------------- lexer

struct Token {
    enum class Kind { Name, Number, Ket, Sym, Tensor, End };
    Kind kind = Kind::End;
    std::string text; // raw spelling; ket stores the bits only
    char sym = 0;
    int col = 0; // 1-based start column
};

// Thrown inside one line's handling; converted to a Diagnostic by the
// top-level loop.
struct LineError {
    int col;
    std::string message;
};

[[noreturn]] void fail(int col, const std::string& msg) { throw LineError{col, msg}; }

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex_line(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        const int col = static_cast<int>(i) + 1;
        if (is_name_start(c)) {
            std::size_t j = i;
            while (j < line.size() && is_name_char(line[j])) ++j;
            out.push_back({Token::Kind::Name, line.substr(i, j - i), 0, col});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            if (j < line.size() && line[j] == '.') {
                ++j;
                while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            }
            if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
                if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
                    ++k;
                    while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
                    j = k;
                }
            }
            out.push_back({Token::Kind::Number, line.substr(i, j - i), 0, col});
            i = j;
        } else if (c == '|') {
            std::size_t j = i + 1;
            std::string bits;
            while (j < line.size() && line[j] != '>' && line.compare(j, 3, "\xE2\x9F\xA9") != 0) {
                if (line[j] != '0' && line[j] != '1') {
                    fail(static_cast<int>(j) + 1, "ket literals hold bits only, e.g. |01>");
                }
                bits += line[j];
                ++j;
            }
            if (j >= line.size()) fail(col, "unterminated ket literal");
            if (bits.empty()) fail(col, "empty ket literal");
            out.push_back({Token::Kind::Ket, bits, 0, col});
            i = (line[j] == '>') ? j + 1 : j + 3;
        } else if (line.compare(i, 3, "(x)") == 0) {
            out.push_back({Token::Kind::Tensor, "(x)", 0, col});
            i += 3;
        } else if (line.compare(i, 3, "\xE2\x8A\x97") == 0) { // ⊗
            out.push_back({Token::Kind::Tensor, "(x)", 0, col});
            i += 3;
        } else if (std::string("+-*/()[]{},=?~").find(c) != std::string::npos) {
            out.push_back({Token::Kind::Sym, std::string(1, c), c, col});
            ++i;
        } else {
            fail(col, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::Kind::End, "", 0, static_cast<int>(line.size()) + 1});
    return out;
}

// ------------------------------------------------------- expression eval

struct Value {
    enum class Kind { Scalar, State, Op };
    Kind kind = Kind::Scalar;
    Complex scalar{};
    StateVector state;
    ComplexMatrix op;
};

Value make_scalar(Complex z) {
    Value v;
    v.kind = Value::Kind::Scalar;
    v.scalar = z;
    return v;
}

Value make_state(StateVector s) {
    Value v;
    v.kind = Value::Kind::State;
    v.state = std::move(s);
    return v;
}

Value make_op(ComplexMatrix m) {
    Value v;
    v.kind = Value::Kind::Op;
    v.op = std::move(m);
    return v;
}

const char* a_kind(Value::Kind k) {
    switch (k) {
        case Value::Kind::Scalar: return "a scalar";
        case Value::Kind::State: return "a state";
        default: return "an operator";
    }
}

const std::set<std::string>& reserved_names() {
    static const std::set<std::string> names = {
        "dim",  "state",  "op",    "init",  "slot",    "final",  "query",   "record",
        "unitary", "frame", "i",   "sqrt",  "basis",   "I",      "H",       "X",
        "Z",    "CNOT",   "comp",  "lift",  "binary",  "trivial"};
    return names;
}

// Recursive-descent evaluator over one token range.  The document
// provides name lookup; evaluation happens during parsing, so every
// error carries a column.
class ExprParser {
public:
    ExprParser(const std::vector<Token>& toks, std::size_t begin, std::size_t end,
               const ScenarioDocument& doc)
        : toks_(toks), pos_(begin), end_(end), doc_(doc) {}

    Value parse_to_end(const char* what) {
        Value v = parse_sum();
        if (pos_ != end_) fail(peek().col, std::string("unexpected token after ") + what);
        return v;
    }

    Frame parse_frame_to_end() {
        Frame f = parse_frame();
        if (pos_ != end_) fail(peek().col, "unexpected token after frame expression");
        return f;
    }

    Frame parse_frame() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Name) fail(t.col, "expected a frame expression");
        if (t.text == "comp") {
            advance();
            expect_sym('(');
            const std::size_t n = parse_size("qubit count");
            expect_sym(')');
            if (n == 0) fail(t.col, "comp() needs at least one qubit");
            return computational_frame(n);
        }
        if (t.text == "trivial") {
            advance();
            expect_sym('(');
            const std::size_t n = parse_size("dimension");
            expect_sym(')');
            if (n == 0) fail(t.col, "trivial() needs dimension >= 1");
            return trivial_frame(n);
        }
        if (t.text == "lift") {
            advance();
            expect_sym('(');
            Frame base = parse_frame();
            expect_sym(',');
            const Token& pos_tok = peek();
            const std::size_t position = parse_size("subsystem position");
            expect_sym(',');
            expect_sym('[');
            std::vector<std::size_t> dims;
            dims.push_back(parse_size("subsystem dimension"));
            while (peek().sym == ',') {
                advance();
                dims.push_back(parse_size("subsystem dimension"));
            }
            expect_sym(']');
            expect_sym(')');
            if (position == 0 || position > dims.size()) {
                fail(pos_tok.col, "subsystem position is 1-based and must address one of the listed dims");
            }
            try {
                return subsystem_frame(base, position - 1, dims);
            } catch (const Error& e) {
                fail(pos_tok.col, e.what());
            }
        }
        if (t.text == "binary") {
            advance();
            expect_sym('(');
            const Token& name_tok = expect_name("state name");
            expect_sym(')');
            const StateVector v = lookup_state(name_tok);
            try {
                return binary_frame(state_projector(v, name_tok.text));
            } catch (const Error& e) {
                fail(name_tok.col, e.what());
            }
        }
        if (t.text == "frame") {
            advance();
            expect_sym('{');
            std::vector<Projector> ps;
            const Token& first = expect_name("state name");
            ps.push_back(checked_member(first));
            while (peek().sym == ',') {
                advance();
                const Token& more = expect_name("state name");
                ps.push_back(checked_member(more));
            }
            expect_sym('}');
            std::string label = "set(";
            for (std::size_t k = 0; k < ps.size(); ++k) label += (k ? "," : "") + ps[k].label;
            label += ")";
            try {
                return Frame::checked(std::move(ps), std::move(label));
            } catch (const Error& e) {
                fail(t.col, e.what());
            }
        }
        fail(t.col, "expected a frame expression (comp/lift/binary/frame/trivial)");
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_ < end_ ? pos_++ : pos_]; }

    void expect_sym(char c) {
        if (peek().kind != Token::Kind::Sym || peek().sym != c) {
            fail(peek().col, std::string("expected '") + c + "'");
        }
        advance();
    }

    const Token& expect_name(const char* what) {
        if (peek().kind != Token::Kind::Name) fail(peek().col, std::string("expected ") + what);
        return advance();
    }

    std::size_t parse_size(const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
            fail(t.col, std::string("expected an integer ") + what);
        }
        advance();
        return static_cast<std::size_t>(std::strtoull(t.text.c_str(), nullptr, 10));
    }

    StateVector lookup_state(const Token& name_tok) {
        for (const auto& def : doc_.defs) {
            if (def.name == name_tok.text) {
                if (def.kind != NamedDef::Kind::State) {
                    fail(name_tok.col, "'" + name_tok.text + "' names an operator, not a state");
                }
                return def.state;
            }
        }
        fail(name_tok.col, "undefined state '" + name_tok.text + "'");
    }

    Projector checked_member(const Token& name_tok) {
        const StateVector v = lookup_state(name_tok);
        try {
            return state_projector(v, name_tok.text);
        } catch (const Error& e) {
            fail(name_tok.col, e.what());
        }
    }

    Value parse_sum() {
        Value lhs = parse_product();
        while (peek().kind == Token::Kind::Sym && (peek().sym == '+' || peek().sym == '-')) {
            const Token op = advance();
            Value rhs = parse_product();
            lhs = apply_addsub(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Value parse_product() {
        Value lhs = parse_unary();
        while (true) {
            const Token& t = peek();
            if (t.kind == Token::Kind::Tensor) {
                advance();
                Value rhs = parse_unary();
                lhs = apply_tensor(t, std::move(lhs), std::move(rhs));
            } else if (t.kind == Token::Kind::Sym && (t.sym == '*' || t.sym == '/')) {
                advance();
                Value rhs = parse_unary();
                lhs = (t.sym == '*') ? apply_mul(t, std::move(lhs), std::move(rhs))
                                     : apply_div(t, std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    Value parse_unary() {
        if (peek().kind == Token::Kind::Sym && peek().sym == '-') {
            const Token op = advance();
            Value v = parse_unary();
            switch (v.kind) {
                case Value::Kind::Scalar: v.scalar = -v.scalar; return v;
                case Value::Kind::State: v.state *= Complex(-1.0); return v;
                case Value::Kind::Op: v.op *= Complex(-1.0); return v;
            }
        }
        if (peek().kind == Token::Kind::Sym && peek().sym == '+') {
            advance();
            return parse_unary();
        }
        return parse_atom();
    }

    Value parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::Kind::Number: {
                advance();
                return make_scalar(Complex(std::strtod(t.text.c_str(), nullptr), 0.0));
            }
            case Token::Kind::Ket: {
                advance();
                std::size_t dim = std::size_t{1} << t.text.size();
                std::size_t index = 0;
                for (char b : t.text) index = index * 2 + (b == '1' ? 1 : 0);
                return make_state(StateVector::basis(dim, index));
            }
            case Token::Kind::Sym:
                if (t.sym == '(') {
                    advance();
                    Value v = parse_sum();
                    expect_sym(')');
                    return v;
                }
                if (t.sym == '[') return parse_matrix_literal();
                fail(t.col, "expected a value");
            case Token::Kind::Name: break;
            default: fail(t.col, "expected a value");
        }
        advance();
        if (t.text == "i") return make_scalar(Complex(0.0, 1.0));
        if (t.text == "sqrt") {
            expect_sym('(');
            Value arg = parse_sum();
            expect_sym(')');
            if (arg.kind != Value::Kind::Scalar || std::abs(arg.scalar.imag()) > 1e-15 ||
                arg.scalar.real() < 0.0) {
                fail(t.col, "sqrt() needs a nonnegative real scalar");
            }
            return make_scalar(Complex(std::sqrt(arg.scalar.real()), 0.0));
        }
        if (t.text == "basis") {
            expect_sym('(');
            const std::size_t d = parse_size("dimension");
            expect_sym(',');
            const Token& idx_tok = peek();
            const std::size_t j = parse_size("basis index");
            expect_sym(')');
            if (d == 0) fail(t.col, "basis() needs dimension >= 1");
            if (j >= d) fail(idx_tok.col, "basis index out of range");
            return make_state(StateVector::basis(d, j));
        }
        if (t.text == "I") {
            expect_sym('(');
            const std::size_t n = parse_size("dimension");
            expect_sym(')');
            if (n == 0) fail(t.col, "I() needs dimension >= 1");
            return make_op(ComplexMatrix::identity(n));
        }
        if (t.text == "H") return make_op(gate_H());
        if (t.text == "X") return make_op(gate_X());
        if (t.text == "Z") return make_op(gate_Z());
        if (t.text == "CNOT") return make_op(gate_CNOT());
        for (const auto& def : doc_.defs) {
            if (def.name == t.text) {
                return def.kind == NamedDef::Kind::State ? make_state(def.state) : make_op(def.op);
            }
        }
        fail(t.col, "undefined name '" + t.text + "'");
    }

    Value parse_matrix_literal() {
        const Token& open = peek();
        expect_sym('[');
        std::vector<std::vector<Complex>> rows;
        rows.push_back(parse_matrix_row());
        while (peek().sym == ',') {
            advance();
            rows.push_back(parse_matrix_row());
        }
        expect_sym(']');
        try {
            return make_op(ComplexMatrix::from_rows(rows));
        } catch (const std::exception& e) {
            fail(open.col, e.what());
        }
    }

    std::vector<Complex> parse_matrix_row() {
        expect_sym('[');
        std::vector<Complex> row;
        row.push_back(parse_scalar_entry());
        while (peek().sym == ',') {
            advance();
            row.push_back(parse_scalar_entry());
        }
        expect_sym(']');
        return row;
    }

    Complex parse_scalar_entry() {
        const Token& t = peek();
        Value v = parse_sum();
        if (v.kind != Value::Kind::Scalar) fail(t.col, "matrix entries must be scalars");
        return v.scalar;
    }

    Value apply_addsub(const Token& op, Value lhs, Value rhs) {
        const bool plus = op.sym == '+';
        if (lhs.kind != rhs.kind) {
            fail(op.col, std::string("cannot ") + (plus ? "add" : "subtract") + " " +
                             a_kind(rhs.kind) + " to " + a_kind(lhs.kind));
        }
        try {
            switch (lhs.kind) {
                case Value::Kind::Scalar:
                    return make_scalar(plus ? lhs.scalar + rhs.scalar : lhs.scalar - rhs.scalar);
                case Value::Kind::State:
                    return make_state(plus ? lhs.state + rhs.state : lhs.state - rhs.state);
                case Value::Kind::Op: return make_op(plus ? lhs.op + rhs.op : lhs.op - rhs.op);
            }
        } catch (const std::exception& e) {
            fail(op.col, e.what());
        }
        fail(op.col, "unreachable");
    }

    Value apply_mul(const Token& op, Value lhs, Value rhs) {
        try {
            if (lhs.kind == Value::Kind::Scalar && rhs.kind == Value::Kind::Scalar) {
                return make_scalar(lhs.scalar * rhs.scalar);
            }
            if (lhs.kind == Value::Kind::Scalar && rhs.kind == Value::Kind::State) {
                return make_state(lhs.scalar * rhs.state);
            }
            if (lhs.kind == Value::Kind::State && rhs.kind == Value::Kind::Scalar) {
                return make_state(rhs.scalar * lhs.state);
            }
            if (lhs.kind == Value::Kind::Scalar && rhs.kind == Value::Kind::Op) {
                return make_op(lhs.scalar * rhs.op);
            }
            if (lhs.kind == Value::Kind::Op && rhs.kind == Value::Kind::Scalar) {
                return make_op(rhs.scalar * lhs.op);
            }
            if (lhs.kind == Value::Kind::Op && rhs.kind == Value::Kind::Op) {
                return make_op(lhs.op * rhs.op);
            }
            if (lhs.kind == Value::Kind::Op && rhs.kind == Value::Kind::State) {
                return make_state(lhs.op * rhs.state);
            }
        } catch (const std::exception& e) {
            fail(op.col, e.what());
        }
        fail(op.col, std::string("cannot multiply ") + a_kind(lhs.kind) + " by " +
                         a_kind(rhs.kind));
    }

    Value apply_div(const Token& op, Value lhs, Value rhs) {
        if (rhs.kind != Value::Kind::Scalar) fail(op.col, "can only divide by a scalar");
        if (std::abs(rhs.scalar) < 1e-300) fail(op.col, "division by zero");
        const Complex inv = Complex(1.0, 0.0) / rhs.scalar;
        switch (lhs.kind) {
            case Value::Kind::Scalar: return make_scalar(lhs.scalar * inv);
            case Value::Kind::State: return make_state(inv * lhs.state);
            case Value::Kind::Op: return make_op(inv * lhs.op);
        }
        fail(op.col, "unreachable");
    }

    Value apply_tensor(const Token& op, Value lhs, Value rhs) {
        if (lhs.kind == Value::Kind::State && rhs.kind == Value::Kind::State) {
            return make_state(tensor(lhs.state, rhs.state));
        }
        if (lhs.kind == Value::Kind::Op && rhs.kind == Value::Kind::Op) {
            return make_op(tensor(lhs.op, rhs.op));
        }
        fail(op.col, std::string("cannot tensor ") + a_kind(lhs.kind) + " with " +
                         a_kind(rhs.kind));
    }

    const std::vector<Token>& toks_;
    std::size_t pos_;
    std::size_t end_;
    const ScenarioDocument& doc_;
};

// --------------------------------------------------------- line parsing

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Key/value segments of a slot line: positions of `name=` markers.
struct Segment {
    std::string key;
    int key_col = 0;
    std::size_t begin = 0; // token range (begin, end) after the '='
    std::size_t end = 0;
    int text_begin = 0; // character range in the raw line
    int text_end = 0;
};

std::vector<Segment> split_segments(const std::vector<Token>& toks, std::size_t first,
                                    const std::string& raw) {
    std::vector<Segment> segs;
    for (std::size_t k = first; k + 1 < toks.size(); ++k) {
        if (toks[k].kind == Token::Kind::Name && toks[k + 1].kind == Token::Kind::Sym &&
            toks[k + 1].sym == '=' &&
            (toks[k].text == "unitary" || toks[k].text == "frame" || toks[k].text == "record")) {
            segs.push_back({toks[k].text, toks[k].col, k + 2, 0, toks[k + 1].col, 0});
        }
    }
    if (segs.empty()) return segs;
    if (toks[first].col != segs.front().key_col) {
        fail(toks[first].col, "expected key=value (unitary=, frame=, record=)");
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const bool last = (k + 1 == segs.size());
        // find the token index where the next key starts
        std::size_t next_tok = toks.size() - 1; // End token
        int next_col = static_cast<int>(raw.size()) + 1;
        if (!last) {
            next_col = 0;
            for (std::size_t j = segs[k].begin; j < toks.size(); ++j) {
                if (toks[j].col == segs[k + 1].key_col) {
                    next_tok = j;
                    next_col = toks[j].col;
                    break;
                }
            }
        }
        segs[k].end = last ? toks.size() - 1 : next_tok;
        segs[k].text_end = last ? static_cast<int>(raw.size()) + 1 : next_col;
        if (segs[k].begin >= segs[k].end) fail(segs[k].key_col, "empty value for " + segs[k].key + "=");
    }
    return segs;
}

std::string segment_text(const Segment& seg, const std::string& raw) {
    // text between the '=' and the next key (columns are 1-based)
    const int from = seg.text_begin;              // character after '='
    const int to = seg.text_end - 1;              // character before next key
    if (from >= to) return "";
    return trim(raw.substr(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from)));
}

std::string parse_label(const std::vector<Token>& toks, std::size_t& pos) {
    std::string label;
    if (toks[pos].kind == Token::Kind::Sym && toks[pos].sym == '~') {
        label = "~";
        ++pos;
    }
    if (toks[pos].kind != Token::Kind::Name && toks[pos].kind != Token::Kind::Number) {
        fail(toks[pos].col, "expected an outcome label");
    }
    label += toks[pos].text;
    ++pos;
    return label;
}

struct PendingQuery {
    int lineno = 0;
    std::string raw;
    std::vector<Token> toks;
};

class DocBuilder {
public:
    explicit DocBuilder(const std::string& name) { doc_.name = name; }

    void handle_line(int lineno, const std::string& raw) {
        const std::vector<Token> toks = lex_line(raw);
        if (toks.front().kind == Token::Kind::End) return;
        if (toks.front().kind != Token::Kind::Name) {
            fail(toks.front().col, "expected a directive (dim/state/op/init/slot/final/query)");
        }
        const std::string& kw = toks.front().text;
        if (kw == "dim") return handle_dim(toks);
        if (kw == "state") return handle_def(NamedDef::Kind::State, toks, raw);
        if (kw == "op") return handle_def(NamedDef::Kind::Op, toks, raw);
        if (kw == "init") return handle_init(toks, raw);
        if (kw == "slot") return handle_slot(toks, raw);
        if (kw == "final") return handle_final(toks, raw);
        if (kw == "query") {
            pending_.push_back({lineno, raw, toks});
            return;
        }
        fail(toks.front().col, "unknown directive '" + kw + "'");
    }

    void finish(std::vector<Diagnostic>& diags) {
        if (diags.empty()) {
            // structural hints aren't useful when a line already failed
            if (doc_.dim == 0) diags.push_back({1, 1, "missing dim declaration"});
            if (!init_seen_) diags.push_back({1, 1, "missing init declaration"});
            if (doc_.slots.empty()) diags.push_back({1, 1, "scenario has no slots"});
        }
        if (!diags.empty()) return;
        for (const auto& pq : pending_) {
            try {
                handle_query(pq);
            } catch (const LineError& e) {
                diags.push_back({pq.lineno, e.col, e.message});
            }
        }
    }

    ScenarioDocument take() { return std::move(doc_); }

private:
    void require_dim(int col, const char* what) const {
        if (doc_.dim == 0) fail(col, std::string("dim must be declared before ") + what);
    }

    void handle_dim(const std::vector<Token>& toks) {
        if (doc_.dim != 0) fail(toks[0].col, "duplicate dim declaration");
        if (toks[1].kind != Token::Kind::Number ||
            toks[1].text.find_first_not_of("0123456789") != std::string::npos) {
            fail(toks[1].col, "expected an integer dimension");
        }
        if (toks.size() != 3) fail(toks[2].col, "unexpected token after dimension");
        const std::size_t d = static_cast<std::size_t>(std::strtoull(toks[1].text.c_str(), nullptr, 10));
        if (d == 0) fail(toks[1].col, "dimension must be >= 1");
        doc_.dim = d;
    }

    void handle_def(NamedDef::Kind kind, const std::vector<Token>& toks, const std::string& raw) {
        if (toks[1].kind != Token::Kind::Name) fail(toks[1].col, "expected a name to define");
        const std::string& name = toks[1].text;
        if (reserved_names().count(name)) fail(toks[1].col, "'" + name + "' is a reserved word");
        for (const auto& def : doc_.defs) {
            if (def.name == name) fail(toks[1].col, "'" + name + "' is already defined");
        }
        if (toks[2].kind != Token::Kind::Sym || toks[2].sym != '=') fail(toks[2].col, "expected '='");
        ExprParser p(toks, 3, toks.size() - 1, doc_);
        Value v = p.parse_to_end("the definition");
        NamedDef def;
        def.kind = kind;
        def.name = name;
        def.text = trim(raw.substr(static_cast<std::size_t>(toks[2].col)));
        if (kind == NamedDef::Kind::State) {
            if (v.kind != Value::Kind::State) {
                fail(toks[3].col, std::string("state definition evaluates to ") + a_kind(v.kind));
            }
            def.state = std::move(v.state);
        } else {
            if (v.kind != Value::Kind::Op) {
                fail(toks[3].col, std::string("op definition evaluates to ") + a_kind(v.kind));
            }
            def.op = std::move(v.op);
        }
        doc_.defs.push_back(std::move(def));
    }

    void handle_init(const std::vector<Token>& toks, const std::string& raw) {
        require_dim(toks[0].col, "init");
        if (init_seen_) fail(toks[0].col, "duplicate init declaration");
        ExprParser p(toks, 1, toks.size() - 1, doc_);
        Value v = p.parse_to_end("the initial state");
        if (v.kind != Value::Kind::State) {
            fail(toks[1].col, std::string("init needs a state, got ") + a_kind(v.kind));
        }
        if (v.state.dim() != doc_.dim) {
            fail(toks[1].col, "initial state has dim " + std::to_string(v.state.dim()) +
                                  ", scenario has dim " + std::to_string(doc_.dim));
        }
        doc_.init_value = std::move(v.state);
        doc_.init_text = trim(raw.substr(static_cast<std::size_t>(toks[1].col) - 1));
        doc_.init_label = end_label(toks, 1);
        init_seen_ = true;
    }

    void handle_final(const std::vector<Token>& toks, const std::string& raw) {
        require_dim(toks[0].col, "final");
        if (doc_.final_text) fail(toks[0].col, "duplicate final declaration");
        ExprParser p(toks, 1, toks.size() - 1, doc_);
        Value v = p.parse_to_end("the final state");
        if (v.kind != Value::Kind::State) {
            fail(toks[1].col, std::string("final needs a state, got ") + a_kind(v.kind));
        }
        if (v.state.dim() != doc_.dim) {
            fail(toks[1].col, "final state has dim " + std::to_string(v.state.dim()) +
                                  ", scenario has dim " + std::to_string(doc_.dim));
        }
        doc_.final_value = std::move(v.state);
        doc_.final_text = trim(raw.substr(static_cast<std::size_t>(toks[1].col) - 1));
        doc_.final_label = end_label(toks, 1);
    }

    // Display label for init/final: a lone name or ket reads naturally,
    // anything else falls back to psi/phi.
    std::string end_label(const std::vector<Token>& toks, std::size_t at) const {
        if (toks.size() == at + 2) {
            if (toks[at].kind == Token::Kind::Name || toks[at].kind == Token::Kind::Ket) {
                return toks[at].text;
            }
        }
        return toks[0].text == "init" ? "psi" : "phi";
    }

    void handle_slot(const std::vector<Token>& toks, const std::string& raw) {
        require_dim(toks[0].col, "slot");
        auto segs = split_segments(toks, 1, raw);
        if (segs.empty()) fail(toks[0].col, "slot needs unitary=... frame=...");
        SlotDecl decl;
        bool have_unitary = false, have_frame = false;
        for (const auto& seg : segs) {
            if (seg.key == "unitary") {
                if (have_unitary) fail(seg.key_col, "duplicate unitary=");
                ExprParser p(toks, seg.begin, seg.end, doc_);
                Value v = p.parse_to_end("the unitary");
                if (v.kind != Value::Kind::Op) {
                    fail(seg.key_col, std::string("unitary needs an operator, got ") + a_kind(v.kind));
                }
                if (v.op.dim() != doc_.dim) {
                    fail(seg.key_col, "unitary has dim " + std::to_string(v.op.dim()) +
                                          ", scenario has dim " + std::to_string(doc_.dim));
                }
                decl.unitary = std::move(v.op);
                decl.unitary_text = segment_text(seg, raw);
                have_unitary = true;
            } else if (seg.key == "frame") {
                if (have_frame) fail(seg.key_col, "duplicate frame=");
                ExprParser p(toks, seg.begin, seg.end, doc_);
                decl.frame = p.parse_frame_to_end();
                if (decl.frame.dim != doc_.dim) {
                    fail(seg.key_col, "frame has dim " + std::to_string(decl.frame.dim) +
                                          ", scenario has dim " + std::to_string(doc_.dim));
                }
                decl.frame_text = segment_text(seg, raw);
                have_frame = true;
            } else { // record
                if (decl.record) fail(seg.key_col, "duplicate record=");
                std::size_t pos = seg.begin;
                std::string label = parse_label(toks, pos);
                if (pos != seg.end) fail(toks[pos].col, "unexpected token after record label");
                decl.record = std::move(label);
            }
        }
        if (!have_unitary) fail(toks[0].col, "slot is missing unitary=");
        if (!have_frame) fail(toks[0].col, "slot is missing frame=");
        if (decl.record && decl.frame.index_of(*decl.record) < 0) {
            fail(toks[0].col, "recorded outcome '" + *decl.record + "' is not an outcome of the frame");
        }
        doc_.slots.push_back(std::move(decl));
    }

    void handle_query(const PendingQuery& pq) {
        const std::vector<Token>& toks = pq.toks;
        if (toks.size() < 2 || toks[1].kind != Token::Kind::Name) {
            fail(toks[1].col, "expected a query kind");
        }
        Query q;
        const std::string& kw = toks[1].text;
        std::size_t pos = 2;
        if (kw == "histories") {
            q.kind = Query::Kind::Histories;
        } else if (kw == "operator") {
            q.kind = Query::Kind::Operator;
        } else if (kw == "amplitude") {
            q.kind = Query::Kind::Amplitude;
            parse_full_labels(toks, pos, q);
        } else if (kw == "consistent") {
            q.kind = Query::Kind::Consistent;
            if (toks[pos].sym != '?') fail(toks[pos].col, "expected '?'");
            ++pos;
        } else if (kw == "sumrule") {
            q.kind = Query::Kind::SumRule;
            q.slot = parse_slot_number(toks, pos);
        } else if (kw == "collapse") {
            q.kind = Query::Kind::Collapse;
            const int label_col = toks[pos].col;
            q.labels.push_back(parse_label(toks, pos));
            parse_frame_override(toks, pos, pq.raw, q);
            const Frame& f = q.frame_value ? *q.frame_value : doc_.slots.back().frame;
            if (f.index_of(q.labels[0]) < 0) {
                fail(label_col, "no outcome '" + q.labels[0] + "' in the frame");
            }
        } else if (kw == "prob") {
            if (toks[pos].kind != Token::Kind::Name) fail(toks[pos].col, "expected joint/next/at/twovector");
            const std::string& sub = toks[pos].text;
            ++pos;
            if (sub == "joint") {
                q.kind = Query::Kind::ProbJoint;
                parse_full_labels(toks, pos, q);
            } else if (sub == "next") {
                q.kind = Query::Kind::ProbNext;
                const int label_col = toks[pos].col;
                q.labels.push_back(parse_label(toks, pos));
                parse_frame_override(toks, pos, pq.raw, q);
                const Frame& f = q.frame_value ? *q.frame_value : doc_.slots.back().frame;
                if (f.index_of(q.labels[0]) < 0) {
                    fail(label_col, "no outcome '" + q.labels[0] + "' in the frame");
                }
            } else if (sub == "at" || sub == "twovector") {
                q.kind = (sub == "at") ? Query::Kind::ProbAt : Query::Kind::ProbTwoVector;
                q.slot = parse_slot_number(toks, pos);
                const Token& label_tok = toks[pos];
                q.labels.push_back(parse_label(toks, pos));
                if (doc_.slots[q.slot - 1].frame.index_of(q.labels[0]) < 0) {
                    fail(label_tok.col,
                         "no outcome '" + q.labels[0] + "' in slot " + std::to_string(q.slot) + "'s frame");
                }
            } else {
                fail(toks[pos - 1].col, "unknown prob query '" + sub + "'");
            }
        } else {
            fail(toks[1].col, "unknown query '" + kw + "'");
        }
        if (toks[pos].kind != Token::Kind::End) fail(toks[pos].col, "unexpected token after query");
        doc_.queries.push_back(std::move(q));
    }

    void parse_full_labels(const std::vector<Token>& toks, std::size_t& pos, Query& q) {
        while (toks[pos].kind != Token::Kind::End) q.labels.push_back(parse_label(toks, pos));
        if (q.labels.size() != doc_.slots.size()) {
            fail(toks[pos].col, "expected " + std::to_string(doc_.slots.size()) +
                                    " outcome labels (one per slot), got " +
                                    std::to_string(q.labels.size()));
        }
        for (std::size_t k = 0; k < q.labels.size(); ++k) {
            if (doc_.slots[k].frame.index_of(q.labels[k]) < 0) {
                fail(toks[1].col, "no outcome '" + q.labels[k] + "' in slot " + std::to_string(k + 1) +
                                      "'s frame");
            }
        }
    }

    std::size_t parse_slot_number(const std::vector<Token>& toks, std::size_t& pos) {
        const Token& t = toks[pos];
        if (t.kind != Token::Kind::Number ||
            t.text.find_first_not_of("0123456789") != std::string::npos) {
            fail(t.col, "expected a slot number");
        }
        const std::size_t slot = static_cast<std::size_t>(std::strtoull(t.text.c_str(), nullptr, 10));
        if (slot == 0 || slot > doc_.slots.size()) {
            fail(t.col, "slot " + t.text + " out of range (scenario has " +
                            std::to_string(doc_.slots.size()) + " slots)");
        }
        ++pos;
        return slot;
    }

    void parse_frame_override(const std::vector<Token>& toks, std::size_t& pos, const std::string& raw,
                              Query& q) {
        if (toks[pos].kind == Token::Kind::Name && toks[pos].text == "frame" &&
            toks[pos + 1].kind == Token::Kind::Sym && toks[pos + 1].sym == '=') {
            const int text_from = toks[pos + 1].col; // character index just after '='
            pos += 2;
            ExprParser p(toks, pos, toks.size() - 1, doc_);
            q.frame_value = p.parse_frame_to_end();
            pos = toks.size() - 1;
            q.frame_text = trim(raw.substr(static_cast<std::size_t>(text_from)));
            if (q.frame_value->dim != doc_.dim) {
                fail(text_from, "frame has dim " + std::to_string(q.frame_value->dim) +
                                    ", scenario has dim " + std::to_string(doc_.dim));
            }
        }
    }

    ScenarioDocument doc_;
    bool init_seen_ = false;
    std::vector<PendingQuery> pending_;
};

} // namespace

ScenarioDocument parse(const std::string& text, const std::string& name) {
    DocBuilder builder(name);
    std::vector<Diagnostic> diags;
    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string line =
            nl == std::string::npos ? text.substr(start) : text.substr(start, nl - start);
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (!trim(line).empty()) {
            try {
                builder.handle_line(lineno, line);
            } catch (const LineError& e) {
                diags.push_back({lineno, e.col, e.message});
            }
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    builder.finish(diags);
    if (!diags.empty()) throw ParseError(std::move(diags));
    return builder.take();
}

Schedule ScenarioDocument::to_schedule() const {
    Schedule s;
    s.dim = dim;
    s.initial = init_value;
    s.initial_label = init_label;
    for (const auto& decl : slots) {
        Slot slot{decl.unitary, decl.frame, std::nullopt};
        if (decl.record) slot.recorded = static_cast<std::size_t>(decl.frame.index_of(*decl.record));
        s.slots.push_back(std::move(slot));
    }
    if (final_value) {
        s.final = final_value;
        s.final_label = final_label;
    }
    return s;
}

} // namespace histq
