// One interpreter instance: symbol store, global table, cell graph and
// machine. Instances are confined to a single thread of control; any number
// of independent instances may run in parallel.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core_model.hpp"
#include "machine_meter.hpp"

namespace closurevm {

class Interp {
public:
    explicit Interp(size_t depth_limit = Machine::kDefaultDepthLimit);

    // Parses and evaluates every top-level form; returns one value per form.
    std::vector<Value> eval_source(std::string_view src);
    Value eval_form(const SExprPtr& form);

    // Direct call of a function value at top level; entry point for the
    // probe and oracle harnesses.
    Value invoke_function(const FunctionPtr& f, std::vector<Value> args);

    std::optional<Value> global_value(std::string_view name);
    void set_global(std::string_view name, Value v);

    // REPL rendering of a result; a transient bundle shows its first element.
    std::string display(const Value& v) const { return print_value(v); }

    SymbolTable& symbols() { return symbols_; }
    GlobalTable& globals() { return globals_; }
    Machine& machine() { return machine_; }
    const Machine& machine() const { return machine_; }

    // Output accumulated by the print builtin; cleared by the call.
    std::string take_print_output();
    void append_print_output(std::string_view text) { print_sink_ += text; }

    // Internals used by the evaluator.
    CellPtr new_cell(Value v);
    CodePtr code_for(const SExprPtr& lambda_form);
    int take_print_id() { return next_print_id_++; }
    FunctionPtr native_function(Symbol sym);

private:
    SymbolTable symbols_;
    GlobalTable globals_;
    Machine machine_;
    int next_print_id_ = 1;
    uint64_t next_cell_id_ = 1;
    int next_site_id_ = 1;
    std::unordered_map<const SExpr*, CodePtr> code_cache_;
    std::unordered_map<uint32_t, FunctionPtr> native_fns_;
    std::string print_sink_;
};

}  // namespace closurevm
