#include "evaluator.hpp"

#include <algorithm>
#include <unordered_set>

namespace closurevm {

namespace {

// ------------------------------
// helpers
// ------------------------------

class FrameGuard {
public:
    explicit FrameGuard(Machine& m) : machine_(m) {}
    ~FrameGuard() { machine_.pop_frame(); }
    FrameGuard(const FrameGuard&) = delete;
    FrameGuard& operator=(const FrameGuard&) = delete;

private:
    Machine& machine_;
};

const BigInt& want_integer(const char* who, const Value& v) {
    if (!v.is_integer()) {
        throw EvalError(std::string(who) + ": expected an integer, got " + print_value(v));
    }
    return v.as_integer();
}

const std::string& want_string(const char* who, const Value& v) {
    if (!v.is_str()) {
        throw EvalError(std::string(who) + ": expected a string, got " + print_value(v));
    }
    return v.as_str();
}

ListPtr want_list(const char* who, const Value& v) {
    if (!v.is_list()) {
        throw EvalError(std::string(who) + ": expected a list, got " + print_value(v));
    }
    return v.as_list();
}

Value apply_native(const NativeOp& op, std::vector<Value>& args, EvalContext& ctx,
                   SourcePos pos) {
    if (static_cast<int>(args.size()) < op.min_args ||
        (op.max_args >= 0 && static_cast<int>(args.size()) > op.max_args)) {
        throw EvalError(op.name + ": wrong number of arguments (" +
                            std::to_string(args.size()) + ")",
                        pos);
    }
    return op.apply(ctx.interp, args);
}

// Variable resolution: nearest lexical cell first, then the global table.
// Charges 1 per frame examined plus 1 for the global probe.
CellPtr resolve_cell(Symbol sym, EvalContext& ctx) {
    Machine& m = ctx.interp.machine();
    LexicalHit hit = lookup_lexical(ctx.lexical.get(), sym);
    if (hit.frames_examined > 0) {
        m.charge(m.current_phase(), static_cast<uint64_t>(hit.frames_examined));
    }
    if (hit.cell) {
        return hit.cell;
    }
    m.charge(m.current_phase(), 1);
    return ctx.interp.globals().find_variable(sym);
}

void assign_variable(Symbol sym, Value v, EvalContext& ctx) {
    CellPtr cell = resolve_cell(sym, ctx);
    if (cell) {
        cell_write(cell, std::move(v));
        return;
    }
    ctx.interp.globals().variables[sym.id] = ctx.interp.new_cell(std::move(v));
}

Value quote_to_value(const SExpr& form) {
    switch (form.kind) {
        case SExpr::Kind::Integer:
            return Value::integer(form.int_value);
        case SExpr::Kind::String:
            return Value::str(form.text);
        case SExpr::Kind::Symbol:
            // no first-class symbols; quoted names read back as strings
            return Value::str(form.text);
        case SExpr::Kind::List: {
            std::vector<Value> elems;
            elems.reserve(form.elements.size());
            for (const auto& e : form.elements) {
                elems.push_back(quote_to_value(*e));
            }
            return Value::list(list_from_vector(elems));
        }
        case SExpr::Kind::FunctionRef:
        case SExpr::Kind::Quoted:
            break;
    }
    throw EvalError("cannot quote this form", form.pos);
}

// ------------------------------
// special forms
// ------------------------------

Value sf_setq(const SExpr& form, EvalContext& ctx) {
    if (form.elements.size() != 3 || form.elements[1]->kind != SExpr::Kind::Symbol) {
        throw EvalError("malformed setq", form.pos);
    }
    Symbol sym = ctx.interp.symbols().intern(form.elements[1]->text);
    Value v = eval_collapsed(form.elements[2], ctx);
    assign_variable(sym, v, ctx);
    return v;
}

Value sf_let(const SExpr& form, EvalContext& ctx) {
    if (form.elements.size() < 2 || form.elements[1]->kind != SExpr::Kind::List) {
        throw EvalError("malformed let: missing binding list", form.pos);
    }
    Machine& m = ctx.interp.machine();
    std::vector<std::pair<Symbol, CellPtr>> bindings;
    {
        PhaseGuard prepare(m, Phase::Prepare);
        std::unordered_set<uint32_t> seen;
        for (const auto& b : form.elements[1]->elements) {
            if (b->kind != SExpr::Kind::List || b->elements.size() != 2 ||
                b->elements[0]->kind != SExpr::Kind::Symbol) {
                throw EvalError("malformed let binding", b->pos);
            }
            Symbol sym = ctx.interp.symbols().intern(b->elements[0]->text);
            if (!seen.insert(sym.id).second) {
                throw EvalError("duplicate let binding '" + b->elements[0]->text + "'",
                                b->pos);
            }
            Value init = eval_collapsed(b->elements[1], ctx);
            m.charge(Phase::Prepare, 1);
            bindings.emplace_back(sym, ctx.interp.new_cell(std::move(init)));
        }
    }
    auto frame = std::make_shared<LexicalFrame>();
    frame->bindings = std::move(bindings);
    frame->parent = ctx.lexical;
    EvalContext inner{ctx.interp, frame};
    Value result;
    for (size_t k = 2; k < form.elements.size(); k++) {
        result = eval_expr(form.elements[k], inner);
    }
    return result;
}

Value sf_if(const SExpr& form, EvalContext& ctx) {
    if (form.elements.size() != 4) {
        throw EvalError("malformed if: expected condition, then, else", form.pos);
    }
    Value cond = eval_collapsed(form.elements[1], ctx);
    return eval_expr(form.elements[cond.truthy() ? 2 : 3], ctx);
}

Value sf_multiple_value_setq(const SExpr& form, EvalContext& ctx) {
    if (form.elements.size() != 3 || form.elements[1]->kind != SExpr::Kind::List) {
        throw EvalError("malformed multiple-value-setq", form.pos);
    }
    std::vector<Symbol> targets;
    for (const auto& t : form.elements[1]->elements) {
        if (t->kind != SExpr::Kind::Symbol) {
            throw EvalError("multiple-value-setq: target is not a symbol", t->pos);
        }
        targets.push_back(ctx.interp.symbols().intern(t->text));
    }
    Value result = eval_expr(form.elements[2], ctx);
    std::vector<Value> elems;
    if (result.is_bundle()) {
        elems = result.as_bundle();
    } else {
        elems.push_back(std::move(result));
    }
    Machine& m = ctx.interp.machine();
    for (size_t k = 0; k < targets.size(); k++) {
        m.charge(m.current_phase(), 1);
        assign_variable(targets[k], k < elems.size() ? elems[k] : Value(), ctx);
    }
    // only the first value is displayed
    return elems.empty() ? Value() : elems.front();
}

Value sf_funcall(const SExpr& form, EvalContext& ctx) {
    if (form.elements.size() < 2) {
        throw EvalError("malformed funcall", form.pos);
    }
    Value fv = eval_collapsed(form.elements[1], ctx);
    if (!fv.is_function()) {
        throw EvalError("not a function: " + print_value(fv), form.elements[1]->pos);
    }
    std::vector<Value> args;
    args.reserve(form.elements.size() - 2);
    for (size_t k = 2; k < form.elements.size(); k++) {
        args.push_back(eval_collapsed(form.elements[k], ctx));
    }
    return invoke(fv.as_function(), std::move(args), ctx, &form);
}

}  // namespace

Value collapse_bundle(Value v) {
    if (!v.is_bundle()) {
        return v;
    }
    const auto& elems = v.as_bundle();
    return elems.empty() ? Value() : elems.front();
}

Value eval_collapsed(const SExprPtr& form, EvalContext& ctx) {
    return collapse_bundle(eval_expr(form, ctx));
}

FunctionPtr make_function(const SExprPtr& lambda_form, EvalContext& ctx) {
    CodePtr code = ctx.interp.code_for(lambda_form);
    auto f = std::make_shared<FunctionObject>();
    f->code = code;
    for (Symbol v : code->free_vars) {
        LexicalHit hit = lookup_lexical(ctx.lexical.get(), v);
        if (hit.cell) {
            f->captures.emplace_back(v, hit.cell);
        }
    }
    f->kind = f->captures.empty() ? FunctionObject::Kind::Ordinary
                                  : FunctionObject::Kind::Closure;
    f->print_id = ctx.interp.take_print_id();
    ctx.interp.machine().charge_generation(code->site_id, f->captures.size(),
                                           f->kind == FunctionObject::Kind::Closure);
    return f;
}

Value invoke(const FunctionPtr& f, std::vector<Value> args, EvalContext& ctx,
             const SExpr* call_site) {
    Machine& m = ctx.interp.machine();
    if (f->is_native()) {
        m.charge(m.current_phase(), 1);
        return apply_native(*f->native, args, ctx,
                            call_site ? call_site->pos : SourcePos{});
    }
    const CodeObject& code = *f->code;
    if (args.size() != code.params.size()) {
        throw EvalError("arity mismatch: " + print_value(Value::function(f)) + " takes " +
                            std::to_string(code.params.size()) + " argument(s), got " +
                            std::to_string(args.size()),
                        call_site ? call_site->pos : SourcePos{});
    }

    m.push_frame(ActivationRecord{call_site, f, args});
    FrameGuard frame_guard(m);
    PhaseGuard call_phase(m, Phase::Call);
    m.charge(Phase::Call, 1 + static_cast<uint64_t>(code.params.size()));

    auto frame = std::make_shared<LexicalFrame>();
    if (!f->captures.empty()) {
        auto capture_frame = std::make_shared<LexicalFrame>();
        capture_frame->bindings = f->captures;
        frame->parent = capture_frame;
    }
    frame->bindings.reserve(code.params.size());
    for (size_t k = 0; k < code.params.size(); k++) {
        frame->bindings.emplace_back(code.params[k],
                                     ctx.interp.new_cell(std::move(args[k])));
    }

    EvalContext inner{ctx.interp, frame};
    Value result;
    for (const auto& body_form : code.body) {
        result = eval_expr(body_form, inner);
    }
    return result;
}

Value eval_expr(const SExprPtr& form_ptr, EvalContext& ctx) {
    Machine& m = ctx.interp.machine();
    m.charge(m.current_phase(), 1);  // node dispatch

    const SExpr& form = *form_ptr;
    switch (form.kind) {
        case SExpr::Kind::Integer:
            return Value::integer(form.int_value);
        case SExpr::Kind::String:
            return Value::str(form.text);
        case SExpr::Kind::Symbol: {
            Symbol sym = ctx.interp.symbols().intern(form.text);
            CellPtr cell = resolve_cell(sym, ctx);
            if (!cell) {
                throw EvalError("unbound variable '" + form.text + "'", form.pos);
            }
            return cell_read(cell);
        }
        case SExpr::Kind::FunctionRef: {
            m.charge(m.current_phase(), 1);  // builtin-namespace probe
            Symbol sym = ctx.interp.symbols().intern(form.inner->text);
            FunctionPtr native = ctx.interp.native_function(sym);
            if (!native) {
                throw EvalError("no builtin function named '" + form.inner->text + "'",
                                form.pos);
            }
            return Value::function(native);
        }
        case SExpr::Kind::Quoted:
            return quote_to_value(*form.inner);
        case SExpr::Kind::List:
            break;
    }

    if (form.elements.empty()) {
        return Value();  // () evaluates to the empty list
    }
    const SExpr& head = *form.elements[0];
    if (head.kind != SExpr::Kind::Symbol) {
        throw EvalError("operator position must be a symbol", head.pos);
    }
    const std::string& op = head.text;
    if (op == "setq") return sf_setq(form, ctx);
    if (op == "let") return sf_let(form, ctx);
    if (op == "lambda") return Value::function(make_function(form_ptr, ctx));
    if (op == "if") return sf_if(form, ctx);
    if (op == "multiple-value-setq") return sf_multiple_value_setq(form, ctx);
    if (op == "funcall") return sf_funcall(form, ctx);
    if (op == "quote") {
        if (form.elements.size() != 2) {
            throw EvalError("malformed quote", form.pos);
        }
        return quote_to_value(*form.elements[1]);
    }

    Symbol sym = ctx.interp.symbols().intern(op);
    const NativeOp* native = ctx.interp.globals().find_builtin(sym);
    if (!native) {
        throw EvalError("undefined operator '" + op + "'", head.pos);
    }
    std::vector<Value> args;
    args.reserve(form.elements.size() - 1);
    for (size_t k = 1; k < form.elements.size(); k++) {
        args.push_back(eval_collapsed(form.elements[k], ctx));
    }
    m.charge(m.current_phase(), 1);
    return apply_native(*native, args, ctx, form.pos);
}

// ------------------------------
// builtins
// ------------------------------

namespace {

void charge_now(Interp& interp, uint64_t amount) {
    if (amount > 0) {
        Machine& m = interp.machine();
        m.charge(m.current_phase(), amount);
    }
}

uint64_t arith_step(const BigInt& a, const BigInt& b) {
    return std::max(integer_limbs(a), integer_limbs(b));
}

}  // namespace

void install_builtins(Interp& interp) {
    auto& builtins = interp.globals().builtins;
    auto define = [&](const char* name, int min_args, int max_args,
                      std::function<Value(Interp&, std::vector<Value>&)> apply) {
        Symbol sym = interp.symbols().intern(name);
        builtins.emplace(sym.id, NativeOp{name, min_args, max_args, std::move(apply)});
    };

    define("+", 0, -1, [](Interp& in, std::vector<Value>& args) {
        BigInt acc = 0;
        for (const Value& v : args) {
            const BigInt& x = want_integer("+", v);
            charge_now(in, arith_step(acc, x));
            acc += x;
        }
        return Value::integer(std::move(acc));
    });
    define("*", 0, -1, [](Interp& in, std::vector<Value>& args) {
        BigInt acc = 1;
        for (const Value& v : args) {
            const BigInt& x = want_integer("*", v);
            charge_now(in, arith_step(acc, x));
            acc *= x;
        }
        return Value::integer(std::move(acc));
    });
    define("-", 1, -1, [](Interp& in, std::vector<Value>& args) {
        BigInt acc = want_integer("-", args[0]);
        if (args.size() == 1) {
            charge_now(in, integer_limbs(acc));
            return Value::integer(-acc);
        }
        for (size_t k = 1; k < args.size(); k++) {
            const BigInt& x = want_integer("-", args[k]);
            charge_now(in, arith_step(acc, x));
            acc -= x;
        }
        return Value::integer(std::move(acc));
    });
    define("1+", 1, 1, [](Interp& in, std::vector<Value>& args) {
        const BigInt& x = want_integer("1+", args[0]);
        charge_now(in, integer_limbs(x));
        return Value::integer(x + 1);
    });
    define("=", 1, -1, [](Interp& in, std::vector<Value>& args) {
        bool all = true;
        want_integer("=", args[0]);
        for (size_t k = 0; k + 1 < args.size(); k++) {
            const BigInt& a = want_integer("=", args[k]);
            const BigInt& b = want_integer("=", args[k + 1]);
            charge_now(in, arith_step(a, b));
            all = all && (a == b);
        }
        if (args.size() == 1) {
            charge_now(in, 1);
        }
        return all ? Value::integer(1) : Value();
    });
    define("<", 1, -1, [](Interp& in, std::vector<Value>& args) {
        bool increasing = true;
        want_integer("<", args[0]);
        for (size_t k = 0; k + 1 < args.size(); k++) {
            const BigInt& a = want_integer("<", args[k]);
            const BigInt& b = want_integer("<", args[k + 1]);
            charge_now(in, arith_step(a, b));
            increasing = increasing && (a < b);
        }
        if (args.size() == 1) {
            charge_now(in, 1);
        }
        return increasing ? Value::integer(1) : Value();
    });
    define("first", 1, 1, [](Interp& in, std::vector<Value>& args) {
        ListPtr l = want_list("first", args[0]);
        if (!l) {
            throw EvalError("first: empty list");
        }
        charge_now(in, 1);
        return l->head;
    });
    define("second", 1, 1, [](Interp& in, std::vector<Value>& args) {
        ListPtr l = want_list("second", args[0]);
        if (!l || !l->tail) {
            throw EvalError("second: list has no second element");
        }
        charge_now(in, 2);
        return l->tail->head;
    });
    define("rest", 1, 1, [](Interp& in, std::vector<Value>& args) {
        ListPtr l = want_list("rest", args[0]);
        if (!l) {
            throw EvalError("rest: empty list");
        }
        charge_now(in, 1);
        return Value::list(l->tail);  // shares structure: constant cost
    });
    define("cons", 2, 2, [](Interp& in, std::vector<Value>& args) {
        ListPtr tail = want_list("cons", args[1]);
        charge_now(in, 1);
        return Value::list(cons(args[0], std::move(tail)));
    });
    define("list", 0, -1, [](Interp& in, std::vector<Value>& args) {
        charge_now(in, std::max<uint64_t>(1, args.size()));
        return Value::list(list_from_vector(args));
    });
    define("append", 0, -1, [](Interp& in, std::vector<Value>& args) {
        if (args.empty()) {
            charge_now(in, 1);
            return Value();
        }
        // copies every list but the last, shares the last
        ListPtr out = want_list("append", args.back());
        uint64_t touched = 1;
        for (size_t k = args.size() - 1; k-- > 0;) {
            std::vector<Value> elems = list_to_vector(want_list("append", args[k]));
            touched += elems.size();
            for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
                out = cons(*it, out);
            }
        }
        charge_now(in, touched);
        return Value::list(out);
    });
    define("length", 1, 1, [](Interp& in, std::vector<Value>& args) {
        uint64_t n = list_length(want_list("length", args[0]));
        charge_now(in, 1 + n);
        return Value::integer(BigInt(n));
    });
    define("nth", 2, 2, [](Interp& in, std::vector<Value>& args) {
        const BigInt& index = want_integer("nth", args[0]);
        if (index < 0) {
            throw EvalError("nth: negative index " + index.str());
        }
        ListPtr l = want_list("nth", args[1]);
        uint64_t walked = 1;
        for (BigInt k = 0; l && k < index; k++, l = l->tail) {
            walked++;
        }
        charge_now(in, walked);
        return l ? l->head : Value();  // out of range reads as ()
    });
    define("concatenate", 1, -1, [](Interp& in, std::vector<Value>& args) {
        const std::string& kind = want_string("concatenate", args[0]);
        if (kind != "string") {
            throw EvalError("concatenate: unsupported result type '" + kind + "'");
        }
        std::string out;
        uint64_t touched = 1;
        for (size_t k = 1; k < args.size(); k++) {
            const std::string& piece = want_string("concatenate", args[k]);
            touched += piece.size();
            out += piece;
        }
        charge_now(in, touched);
        return Value::str(std::move(out));
    });
    define("values", 0, -1, [](Interp& in, std::vector<Value>& args) {
        charge_now(in, std::max<uint64_t>(1, args.size()));
        return Value::bundle(args);
    });
    define("print", 1, 1, [](Interp& in, std::vector<Value>& args) {
        charge_now(in, value_size(args[0]));
        in.append_print_output(print_value(args[0]) + "\n");
        return args[0];
    });
}

}  // namespace closurevm
