#include "interp.hpp"

#include "evaluator.hpp"

namespace closurevm {

Interp::Interp(size_t depth_limit) : machine_(depth_limit) {
    install_builtins(*this);
}

std::vector<Value> Interp::eval_source(std::string_view src) {
    std::vector<SExprPtr> forms = parse_source(src);
    std::vector<Value> results;
    results.reserve(forms.size());
    for (const auto& form : forms) {
        results.push_back(eval_form(form));
    }
    return results;
}

Value Interp::eval_form(const SExprPtr& form) {
    EvalContext ctx{*this, nullptr};
    return eval_expr(form, ctx);
}

Value Interp::invoke_function(const FunctionPtr& f, std::vector<Value> args) {
    EvalContext ctx{*this, nullptr};
    return invoke(f, std::move(args), ctx, nullptr);
}

std::optional<Value> Interp::global_value(std::string_view name) {
    Symbol sym = symbols_.intern(name);
    CellPtr cell = globals_.find_variable(sym);
    if (!cell) {
        return std::nullopt;
    }
    return cell_read(cell);
}

void Interp::set_global(std::string_view name, Value v) {
    Symbol sym = symbols_.intern(name);
    if (CellPtr cell = globals_.find_variable(sym)) {
        cell_write(cell, std::move(v));
    } else {
        globals_.variables[sym.id] = new_cell(std::move(v));
    }
}

std::string Interp::take_print_output() {
    std::string out = std::move(print_sink_);
    print_sink_.clear();
    return out;
}

CellPtr Interp::new_cell(Value v) {
    auto cell = std::make_shared<BindingCell>();
    cell->identity = next_cell_id_++;
    cell->content = std::move(v);
    machine_.count_cell_allocation();
    return cell;
}

CodePtr Interp::code_for(const SExprPtr& lambda_form) {
    auto it = code_cache_.find(lambda_form.get());
    if (it != code_cache_.end()) {
        return it->second;
    }
    const SExpr& form = *lambda_form;
    if (form.elements.size() < 2 || form.elements[1]->kind != SExpr::Kind::List) {
        throw EvalError("malformed lambda: missing parameter list", form.pos);
    }
    auto code = std::make_shared<CodeObject>();
    code->origin = lambda_form;
    for (const auto& p : form.elements[1]->elements) {
        if (p->kind != SExpr::Kind::Symbol) {
            throw EvalError("malformed lambda: parameter is not a symbol", p->pos);
        }
        Symbol sym = symbols_.intern(p->text);
        for (Symbol prior : code->params) {
            if (prior == sym) {
                throw EvalError("duplicate lambda parameter '" + p->text + "'", p->pos);
            }
        }
        code->params.push_back(sym);
    }
    code->body.assign(form.elements.begin() + 2, form.elements.end());
    code->free_vars = free_variables(form, globals_, symbols_);
    code->site_id = next_site_id_++;
    code_cache_.emplace(lambda_form.get(), code);
    return code;
}

FunctionPtr Interp::native_function(Symbol sym) {
    auto it = native_fns_.find(sym.id);
    if (it != native_fns_.end()) {
        return it->second;
    }
    const NativeOp* op = globals_.find_builtin(sym);
    if (!op) {
        return nullptr;
    }
    auto f = std::make_shared<FunctionObject>();
    f->native = op;
    native_fns_.emplace(sym.id, f);
    return f;
}

}  // namespace closurevm
