// Surface syntax: tokenizer, s-expression parser and canonical printer.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace closurevm {

using BigInt = boost::multiprecision::cpp_int;

// 1-based source position; line 0 means "unknown".
struct SourcePos {
    int line = 0;
    int column = 0;
};

std::string pos_to_string(SourcePos pos);

class ReadError : public std::runtime_error {
public:
    ReadError(std::string msg, SourcePos pos);
    SourcePos pos;
};

enum class TokenKind {
    LParen,
    RParen,
    Integer,
    String,
    Symbol,
    FunctionRefMarker,  // #'
    QuoteMarker,        // '
};

struct Token {
    TokenKind kind;
    std::string lexeme;  // symbols already normalized to lower case
    SourcePos pos;
};

// Splits source text into tokens. `;` comments run to end of line.
// Throws ReadError on unterminated strings and illegal characters.
std::vector<Token> tokenize(std::string_view text);

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SExpr {
    enum class Kind { Integer, String, Symbol, List, FunctionRef, Quoted };

    Kind kind;
    SourcePos pos;
    BigInt int_value;                // Kind::Integer
    std::string text;                // string contents / symbol name
    std::vector<SExprPtr> elements;  // Kind::List
    SExprPtr inner;                  // Kind::FunctionRef / Kind::Quoted

    static SExprPtr make_integer(BigInt v, SourcePos pos = {});
    static SExprPtr make_string(std::string s, SourcePos pos = {});
    static SExprPtr make_symbol(std::string name, SourcePos pos = {});
    static SExprPtr make_list(std::vector<SExprPtr> elems, SourcePos pos = {});
    static SExprPtr make_function_ref(SExprPtr inner, SourcePos pos = {});
    static SExprPtr make_quoted(SExprPtr inner, SourcePos pos = {});

    bool is_symbol(std::string_view name) const {
        return kind == Kind::Symbol && text == name;
    }
};

// Parses a whole token stream into the sequence of top-level forms.
// #'x becomes FunctionRef(Symbol x), 'x becomes Quoted(x).
std::vector<SExprPtr> parse(const std::vector<Token>& tokens);

// tokenize + parse in one step.
std::vector<SExprPtr> parse_source(std::string_view text);

// Canonical single-space rendering; parse(tokenize(print_form(f))) == [f].
std::string print_form(const SExpr& form);

bool equal_forms(const SExpr& a, const SExpr& b);

// REPL balance rule: true once the buffer holds at least one form and no
// unclosed paren or dangling #'/' marker remains. Lexical errors count as
// complete so the evaluator can report them.
bool source_complete(std::string_view text);

}  // namespace closurevm
