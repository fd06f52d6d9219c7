#include "core_model.hpp"

#include <algorithm>

namespace closurevm {

EvalError::EvalError(std::string msg, SourcePos p)
    : std::runtime_error(p.line > 0 ? pos_to_string(p) + ": " + msg : msg), pos(p) {}

Symbol SymbolTable::intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) {
        return Symbol{it->second};
    }
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return Symbol{id};
}

const std::string& SymbolTable::name(Symbol sym) const {
    return names_.at(sym.id);
}

Value Value::integer(BigInt v) {
    Value out;
    out.rep_ = std::move(v);
    return out;
}

Value Value::str(std::string s) {
    Value out;
    out.rep_ = std::move(s);
    return out;
}

Value Value::list(ListPtr l) {
    Value out;
    out.rep_ = std::move(l);
    return out;
}

Value Value::function(FunctionPtr f) {
    Value out;
    out.rep_ = std::move(f);
    return out;
}

Value Value::bundle(std::vector<Value> elems) {
    Value out;
    out.rep_ = std::make_shared<const std::vector<Value>>(std::move(elems));
    return out;
}

const char* Value::type_name() const {
    if (is_integer()) return "integer";
    if (is_str()) return "string";
    if (is_list()) return "list";
    if (is_function()) return "function";
    return "bundle";
}

ListPtr cons(Value head, ListPtr tail) {
    return std::make_shared<const ConsCell>(ConsCell{std::move(head), std::move(tail)});
}

ListPtr list_from_vector(const std::vector<Value>& elems) {
    ListPtr out;
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        out = cons(*it, out);
    }
    return out;
}

std::vector<Value> list_to_vector(ListPtr l) {
    std::vector<Value> out;
    for (; l; l = l->tail) {
        out.push_back(l->head);
    }
    return out;
}

uint64_t list_length(ListPtr l) {
    uint64_t n = 0;
    for (; l; l = l->tail) {
        n++;
    }
    return n;
}

bool equal_values(const Value& a, const Value& b) {
    if (a.is_integer() && b.is_integer()) {
        return a.as_integer() == b.as_integer();
    }
    if (a.is_str() && b.is_str()) {
        return a.as_str() == b.as_str();
    }
    if (a.is_list() && b.is_list()) {
        ListPtr x = a.as_list();
        ListPtr y = b.as_list();
        while (x && y) {
            if (!equal_values(x->head, y->head)) {
                return false;
            }
            x = x->tail;
            y = y->tail;
        }
        return !x && !y;
    }
    if (a.is_function() && b.is_function()) {
        return a.as_function() == b.as_function();
    }
    if (a.is_bundle() && b.is_bundle()) {
        const auto& x = a.as_bundle();
        const auto& y = b.as_bundle();
        return x.size() == y.size() &&
               std::equal(x.begin(), x.end(), y.begin(),
                          [](const Value& p, const Value& q) { return equal_values(p, q); });
    }
    return false;
}

LexicalHit lookup_lexical(const LexicalFrame* frame, Symbol sym) {
    int examined = 0;
    for (; frame; frame = frame->parent.get()) {
        examined++;
        for (const auto& [bound, cell] : frame->bindings) {
            if (bound == sym) {
                return {cell, examined};
            }
        }
    }
    return {nullptr, examined};
}

namespace {

// Scope-aware occurrence walk. `bound` holds names bound by enclosing
// lambda parameters and let bindings inside the form under analysis.
struct FreeVarWalk {
    const GlobalTable& globals;
    SymbolTable& symbols;
    std::vector<std::string> order;
    std::unordered_map<std::string, bool> seen;

    void occurrence(const std::string& name, const std::vector<std::string>& bound) {
        if (std::find(bound.begin(), bound.end(), name) != bound.end()) {
            return;
        }
        if (!seen.emplace(name, true).second) {
            return;
        }
        order.push_back(name);
    }

    bool special_head(const std::string& name) const {
        return name == "setq" || name == "let" || name == "lambda" ||
               name == "quote" || name == "if" || name == "multiple-value-setq" ||
               name == "funcall";
    }

    void walk(const SExpr& form, std::vector<std::string>& bound) {
        switch (form.kind) {
            case SExpr::Kind::Integer:
            case SExpr::Kind::String:
            case SExpr::Kind::FunctionRef:
            case SExpr::Kind::Quoted:
                return;
            case SExpr::Kind::Symbol:
                occurrence(form.text, bound);
                return;
            case SExpr::Kind::List:
                break;
        }
        if (form.elements.empty()) {
            return;
        }
        const SExpr& head = *form.elements[0];
        if (head.kind != SExpr::Kind::Symbol) {
            for (const auto& e : form.elements) {
                walk(*e, bound);
            }
            return;
        }
        const std::string& op = head.text;
        if (op == "quote") {
            return;
        }
        if (op == "lambda") {
            if (form.elements.size() < 2 || form.elements[1]->kind != SExpr::Kind::List) {
                throw EvalError("malformed lambda: missing parameter list", form.pos);
            }
            size_t mark = bound.size();
            for (const auto& p : form.elements[1]->elements) {
                if (p->kind != SExpr::Kind::Symbol) {
                    throw EvalError("malformed lambda: parameter is not a symbol", p->pos);
                }
                bound.push_back(p->text);
            }
            for (size_t k = 2; k < form.elements.size(); k++) {
                walk(*form.elements[k], bound);
            }
            bound.resize(mark);
            return;
        }
        if (op == "let") {
            if (form.elements.size() < 2 || form.elements[1]->kind != SExpr::Kind::List) {
                throw EvalError("malformed let: missing binding list", form.pos);
            }
            // init forms see the enclosing scope
            std::vector<std::string> names;
            for (const auto& b : form.elements[1]->elements) {
                if (b->kind != SExpr::Kind::List || b->elements.size() != 2 ||
                    b->elements[0]->kind != SExpr::Kind::Symbol) {
                    throw EvalError("malformed let binding", b->pos);
                }
                names.push_back(b->elements[0]->text);
                walk(*b->elements[1], bound);
            }
            size_t mark = bound.size();
            bound.insert(bound.end(), names.begin(), names.end());
            for (size_t k = 2; k < form.elements.size(); k++) {
                walk(*form.elements[k], bound);
            }
            bound.resize(mark);
            return;
        }
        if (op == "setq") {
            // the assignment target needs the cell just as a read does
            if (form.elements.size() == 3 && form.elements[1]->kind == SExpr::Kind::Symbol) {
                occurrence(form.elements[1]->text, bound);
                walk(*form.elements[2], bound);
                return;
            }
            for (size_t k = 1; k < form.elements.size(); k++) {
                walk(*form.elements[k], bound);
            }
            return;
        }
        if (op == "multiple-value-setq") {
            if (form.elements.size() == 3 && form.elements[1]->kind == SExpr::Kind::List) {
                for (const auto& t : form.elements[1]->elements) {
                    if (t->kind == SExpr::Kind::Symbol) {
                        occurrence(t->text, bound);
                    }
                }
                walk(*form.elements[2], bound);
                return;
            }
            for (size_t k = 1; k < form.elements.size(); k++) {
                walk(*form.elements[k], bound);
            }
            return;
        }
        size_t first_arg = 1;
        if (!special_head(op)) {
            // non-builtin heads stay variable occurrences
            SymbolTable& st = symbols;
            Symbol head_sym = st.intern(op);
            if (globals.find_builtin(head_sym) == nullptr) {
                occurrence(op, bound);
            }
        }
        for (size_t k = first_arg; k < form.elements.size(); k++) {
            walk(*form.elements[k], bound);
        }
    }
};

}  // namespace

std::vector<Symbol> free_variables(const SExpr& lambda_form,
                                   const GlobalTable& globals,
                                   SymbolTable& symbols) {
    if (lambda_form.kind != SExpr::Kind::List || lambda_form.elements.empty() ||
        !lambda_form.elements[0]->is_symbol("lambda")) {
        throw EvalError("free_variables: not a lambda form", lambda_form.pos);
    }
    FreeVarWalk w{globals, symbols, {}, {}};
    std::vector<std::string> bound;
    w.walk(lambda_form, bound);
    std::vector<Symbol> out;
    out.reserve(w.order.size());
    for (const auto& name : w.order) {
        out.push_back(symbols.intern(name));
    }
    return out;
}

std::string print_value(const Value& v) {
    if (v.is_integer()) {
        return v.as_integer().str();
    }
    if (v.is_str()) {
        return "\"" + v.as_str() + "\"";
    }
    if (v.is_function()) {
        const FunctionObject& f = *v.as_function();
        if (f.is_native()) {
            return "#<Function " + f.native->name + ">";
        }
        const char* label = f.kind == FunctionObject::Kind::Closure ? "Closure" : "Function";
        return std::string("#<") + label + " " + std::to_string(f.print_id) + ">";
    }
    if (v.is_bundle()) {
        // transient; shown only if a bundle leaks to the printer
        const auto& elems = v.as_bundle();
        return elems.empty() ? "()" : print_value(elems.front());
    }
    std::string out = "(";
    bool first = true;
    for (ListPtr l = v.as_list(); l; l = l->tail) {
        if (!first) {
            out += ' ';
        }
        first = false;
        out += print_value(l->head);
    }
    out += ')';
    return out;
}

uint64_t integer_bit_length(const BigInt& v) {
    if (v == 0) {
        return 0;
    }
    BigInt a = v < 0 ? BigInt(-v) : v;
    return static_cast<uint64_t>(boost::multiprecision::msb(a)) + 1;
}

uint64_t integer_limbs(const BigInt& v) {
    return static_cast<uint64_t>(v.backend().size());
}

uint64_t value_size(const Value& v) {
    if (v.is_integer()) {
        return 1 + integer_bit_length(v.as_integer());
    }
    if (v.is_str()) {
        return 1 + static_cast<uint64_t>(v.as_str().size());
    }
    if (v.is_function()) {
        return 1;
    }
    if (v.is_bundle()) {
        throw EvalError("a bundle has no size");
    }
    uint64_t total = 1;
    for (ListPtr l = v.as_list(); l; l = l->tail) {
        total += value_size(l->head);
    }
    return total;
}

}  // namespace closurevm
