// Data substrate of the interpreter: interned symbols, runtime values,
// binding cells, lexical frames, the global table and free-variable analysis.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "reader.hpp"

namespace closurevm {

class Interp;

// Runtime diagnostic; unwinds to the top level / REPL as one line.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(std::string msg, SourcePos pos = {});
    SourcePos pos;
};

struct Symbol {
    uint32_t id = 0;
    bool operator==(const Symbol&) const = default;
    auto operator<=>(const Symbol&) const = default;
};

// Injective name <-> id store; id equality decides symbol equality.
class SymbolTable {
public:
    Symbol intern(std::string_view name);
    const std::string& name(Symbol sym) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, uint32_t> ids_;
};

class Value;

struct ConsCell;
using ListPtr = std::shared_ptr<const ConsCell>;  // null = empty list

struct FunctionObject;
using FunctionPtr = std::shared_ptr<const FunctionObject>;

using BundlePtr = std::shared_ptr<const std::vector<Value>>;

class Value {
public:
    Value() : rep_(ListPtr{}) {}  // empty list

    static Value integer(BigInt v);
    static Value str(std::string s);
    static Value list(ListPtr l);
    static Value function(FunctionPtr f);
    static Value bundle(std::vector<Value> elems);

    bool is_integer() const { return std::holds_alternative<BigInt>(rep_); }
    bool is_str() const { return std::holds_alternative<std::string>(rep_); }
    bool is_list() const { return std::holds_alternative<ListPtr>(rep_); }
    bool is_function() const { return std::holds_alternative<FunctionPtr>(rep_); }
    bool is_bundle() const { return std::holds_alternative<BundlePtr>(rep_); }

    const BigInt& as_integer() const { return std::get<BigInt>(rep_); }
    const std::string& as_str() const { return std::get<std::string>(rep_); }
    const ListPtr& as_list() const { return std::get<ListPtr>(rep_); }
    const FunctionPtr& as_function() const { return std::get<FunctionPtr>(rep_); }
    const std::vector<Value>& as_bundle() const { return *std::get<BundlePtr>(rep_); }

    // Empty list is false, everything else is true.
    bool truthy() const { return !is_list() || as_list() != nullptr; }

    const char* type_name() const;

private:
    std::variant<BigInt, std::string, ListPtr, FunctionPtr, BundlePtr> rep_;
};

struct ConsCell {
    Value head;
    ListPtr tail;
};

ListPtr cons(Value head, ListPtr tail);
ListPtr list_from_vector(const std::vector<Value>& elems);
std::vector<Value> list_to_vector(ListPtr l);
uint64_t list_length(ListPtr l);

// Structural equality; functions compare by object identity.
bool equal_values(const Value& a, const Value& b);

// Identity-bearing mutable holder of one value; sharing a cell is what lets
// sibling closures observe each other's assignments.
struct BindingCell {
    uint64_t identity = 0;
    Value content;
};
using CellPtr = std::shared_ptr<BindingCell>;

inline void cell_write(const CellPtr& cell, Value v) { cell->content = std::move(v); }
inline const Value& cell_read(const CellPtr& cell) { return cell->content; }

struct LexicalFrame;
using FramePtr = std::shared_ptr<const LexicalFrame>;

// Frames are never mutated after construction except through their cells.
struct LexicalFrame {
    std::vector<std::pair<Symbol, CellPtr>> bindings;
    FramePtr parent;
};

struct LexicalHit {
    CellPtr cell;        // null if absent
    int frames_examined; // for lookup cost accounting
};

// Innermost-first search along the parent chain.
LexicalHit lookup_lexical(const LexicalFrame* frame, Symbol sym);

// Native operation descriptor; builtin bodies live in the evaluator.
struct NativeOp {
    std::string name;
    int min_args = 0;
    int max_args = -1;  // -1: variadic
    std::function<Value(Interp&, std::vector<Value>&)> apply;
};

struct GlobalTable {
    std::unordered_map<uint32_t, CellPtr> variables;
    std::unordered_map<uint32_t, NativeOp> builtins;  // fixed after init

    const NativeOp* find_builtin(Symbol sym) const {
        auto it = builtins.find(sym.id);
        return it == builtins.end() ? nullptr : &it->second;
    }
    CellPtr find_variable(Symbol sym) const {
        auto it = variables.find(sym.id);
        return it == variables.end() ? nullptr : it->second;
    }
};

// One CodeObject per lambda occurrence in source; every function generated
// from that occurrence shares it.
struct CodeObject {
    int site_id = 0;
    std::vector<Symbol> params;
    std::vector<SExprPtr> body;
    SExprPtr origin;                // the lambda form itself, kept alive
    std::vector<Symbol> free_vars;  // first-occurrence order
};
using CodePtr = std::shared_ptr<const CodeObject>;

struct FunctionObject {
    enum class Kind { Ordinary, Closure };

    Kind kind = Kind::Ordinary;
    CodePtr code;                    // null for natives
    const NativeOp* native = nullptr;
    std::vector<std::pair<Symbol, CellPtr>> captures;
    int print_id = 0;                // natives print by name instead

    bool is_native() const { return native != nullptr; }
};

// Lexically-bound free variables of a lambda form, in first-occurrence
// order. Operator-position builtin names and special-form heads are not
// variables; setq targets count as occurrences; #'x and quoted data
// contribute nothing. Throws EvalError (see machine_meter.hpp) on a
// malformed lambda.
std::vector<Symbol> free_variables(const SExpr& lambda_form,
                                   const GlobalTable& globals,
                                   SymbolTable& symbols);

// Rendering of runtime values; functions display as #<Function N>,
// #<Closure N> or #<Function name> for natives.
std::string print_value(const Value& v);

// Input size: integers cost 1 + bit length, strings 1 + length, lists
// 1 + sum over elements, functions 1. Bundles have no size.
uint64_t value_size(const Value& v);

uint64_t integer_bit_length(const BigInt& v);
uint64_t integer_limbs(const BigInt& v);

}  // namespace closurevm
