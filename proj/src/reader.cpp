#include "reader.hpp"

#include <cctype>

namespace closurevm {

std::string pos_to_string(SourcePos pos) {
    if (pos.line <= 0) {
        return "?:?";
    }
    return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

ReadError::ReadError(std::string msg, SourcePos p)
    : std::runtime_error(pos_to_string(p) + ": " + msg), pos(p) {}

namespace {

bool symbol_char(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
        return true;
    }
    switch (c) {
        case '+': case '-': case '*': case '_':
        case '[': case ']': case '=': case '<':
            return true;
        default:
            return false;
    }
}

bool integer_lexeme(std::string_view s) {
    if (!s.empty() && s.front() == '-') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct Scanner {
    std::string_view text;
    size_t i = 0;
    int line = 1;
    int column = 1;

    bool done() const { return i >= text.size(); }
    char peek() const { return text[i]; }
    char peek2() const { return i + 1 < text.size() ? text[i + 1] : '\0'; }
    SourcePos pos() const { return {line, column}; }

    char advance() {
        char c = text[i++];
        if (c == '\n') {
            line++;
            column = 1;
        } else {
            column++;
        }
        return c;
    }
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    Scanner s{text};
    std::vector<Token> tokens;
    while (!s.done()) {
        char c = s.peek();
        if (std::isspace(static_cast<unsigned char>(c))) {
            s.advance();
            continue;
        }
        if (c == ';') {
            while (!s.done() && s.peek() != '\n') {
                s.advance();
            }
            continue;
        }
        SourcePos at = s.pos();
        if (c == '(') {
            s.advance();
            tokens.push_back({TokenKind::LParen, "(", at});
        } else if (c == ')') {
            s.advance();
            tokens.push_back({TokenKind::RParen, ")", at});
        } else if (c == '"') {
            s.advance();
            std::string body;
            while (true) {
                if (s.done() || s.peek() == '\n') {
                    throw ReadError("unterminated string", at);
                }
                char d = s.advance();
                if (d == '"') {
                    break;
                }
                body += d;
            }
            tokens.push_back({TokenKind::String, std::move(body), at});
        } else if (c == '#') {
            if (s.peek2() != '\'') {
                throw ReadError("illegal character '#'", at);
            }
            s.advance();
            s.advance();
            tokens.push_back({TokenKind::FunctionRefMarker, "#'", at});
        } else if (c == '\'') {
            s.advance();
            tokens.push_back({TokenKind::QuoteMarker, "'", at});
        } else if (symbol_char(c)) {
            std::string word;
            while (!s.done() && symbol_char(s.peek())) {
                word += s.advance();
            }
            if (integer_lexeme(word)) {
                tokens.push_back({TokenKind::Integer, std::move(word), at});
            } else {
                tokens.push_back({TokenKind::Symbol, to_lower(word), at});
            }
        } else {
            throw ReadError(std::string("illegal character '") + c + "'", at);
        }
    }
    return tokens;
}

SExprPtr SExpr::make_integer(BigInt v, SourcePos pos) {
    auto e = std::make_shared<SExpr>();
    e->kind = Kind::Integer;
    e->pos = pos;
    e->int_value = std::move(v);
    return e;
}

SExprPtr SExpr::make_string(std::string s, SourcePos pos) {
    auto e = std::make_shared<SExpr>();
    e->kind = Kind::String;
    e->pos = pos;
    e->text = std::move(s);
    return e;
}

SExprPtr SExpr::make_symbol(std::string name, SourcePos pos) {
    auto e = std::make_shared<SExpr>();
    e->kind = Kind::Symbol;
    e->pos = pos;
    e->text = std::move(name);
    return e;
}

SExprPtr SExpr::make_list(std::vector<SExprPtr> elems, SourcePos pos) {
    auto e = std::make_shared<SExpr>();
    e->kind = Kind::List;
    e->pos = pos;
    e->elements = std::move(elems);
    return e;
}

SExprPtr SExpr::make_function_ref(SExprPtr inner, SourcePos pos) {
    auto e = std::make_shared<SExpr>();
    e->kind = Kind::FunctionRef;
    e->pos = pos;
    e->inner = std::move(inner);
    return e;
}

SExprPtr SExpr::make_quoted(SExprPtr inner, SourcePos pos) {
    auto e = std::make_shared<SExpr>();
    e->kind = Kind::Quoted;
    e->pos = pos;
    e->inner = std::move(inner);
    return e;
}

namespace {

struct Parser {
    const std::vector<Token>& tokens;
    size_t i = 0;

    bool done() const { return i >= tokens.size(); }
    const Token& peek() const { return tokens[i]; }

    SExprPtr form() {
        const Token& t = tokens[i];
        switch (t.kind) {
            case TokenKind::Integer:
                i++;
                return SExpr::make_integer(BigInt(t.lexeme), t.pos);
            case TokenKind::String:
                i++;
                return SExpr::make_string(t.lexeme, t.pos);
            case TokenKind::Symbol:
                i++;
                return SExpr::make_symbol(t.lexeme, t.pos);
            case TokenKind::LParen: {
                i++;
                std::vector<SExprPtr> elems;
                while (true) {
                    if (done()) {
                        throw ReadError("unbalanced parenthesis: missing ')'", t.pos);
                    }
                    if (peek().kind == TokenKind::RParen) {
                        i++;
                        break;
                    }
                    elems.push_back(form());
                }
                return SExpr::make_list(std::move(elems), t.pos);
            }
            case TokenKind::RParen:
                throw ReadError("unbalanced parenthesis: stray ')'", t.pos);
            case TokenKind::FunctionRefMarker: {
                i++;
                if (done()) {
                    throw ReadError("dangling #' at end of input", t.pos);
                }
                SExprPtr inner = form();
                if (inner->kind != SExpr::Kind::Symbol) {
                    throw ReadError("#' must be followed by a symbol", t.pos);
                }
                return SExpr::make_function_ref(std::move(inner), t.pos);
            }
            case TokenKind::QuoteMarker: {
                i++;
                if (done()) {
                    throw ReadError("dangling ' at end of input", t.pos);
                }
                return SExpr::make_quoted(form(), t.pos);
            }
        }
        throw ReadError("unreachable token kind", t.pos);
    }
};

}  // namespace

std::vector<SExprPtr> parse(const std::vector<Token>& tokens) {
    Parser p{tokens};
    std::vector<SExprPtr> forms;
    while (!p.done()) {
        forms.push_back(p.form());
    }
    return forms;
}

std::vector<SExprPtr> parse_source(std::string_view text) {
    return parse(tokenize(text));
}

std::string print_form(const SExpr& form) {
    switch (form.kind) {
        case SExpr::Kind::Integer:
            return form.int_value.str();
        case SExpr::Kind::String:
            return "\"" + form.text + "\"";
        case SExpr::Kind::Symbol:
            return form.text;
        case SExpr::Kind::List: {
            std::string out = "(";
            for (size_t k = 0; k < form.elements.size(); k++) {
                if (k > 0) {
                    out += ' ';
                }
                out += print_form(*form.elements[k]);
            }
            out += ')';
            return out;
        }
        case SExpr::Kind::FunctionRef:
            return "#'" + print_form(*form.inner);
        case SExpr::Kind::Quoted:
            return "'" + print_form(*form.inner);
    }
    return "";
}

bool equal_forms(const SExpr& a, const SExpr& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
        case SExpr::Kind::Integer:
            return a.int_value == b.int_value;
        case SExpr::Kind::String:
        case SExpr::Kind::Symbol:
            return a.text == b.text;
        case SExpr::Kind::List: {
            if (a.elements.size() != b.elements.size()) {
                return false;
            }
            for (size_t k = 0; k < a.elements.size(); k++) {
                if (!equal_forms(*a.elements[k], *b.elements[k])) {
                    return false;
                }
            }
            return true;
        }
        case SExpr::Kind::FunctionRef:
        case SExpr::Kind::Quoted:
            return equal_forms(*a.inner, *b.inner);
    }
    return false;
}

bool source_complete(std::string_view text) {
    std::vector<Token> tokens;
    try {
        tokens = tokenize(text);
    } catch (const ReadError&) {
        // Strings cannot span lines, so a lexical error can never be fixed
        // by reading more input; report it instead of waiting.
        return true;
    }
    if (tokens.empty()) {
        return false;
    }
    int depth = 0;
    for (const Token& t : tokens) {
        if (t.kind == TokenKind::LParen) {
            depth++;
        } else if (t.kind == TokenKind::RParen) {
            if (depth == 0) {
                return true;  // stray ')': let the parser report it
            }
            depth--;
        }
    }
    if (depth > 0) {
        return false;
    }
    TokenKind last = tokens.back().kind;
    return last != TokenKind::FunctionRefMarker && last != TokenKind::QuoteMarker;
}

}  // namespace closurevm
