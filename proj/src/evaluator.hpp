// Form evaluation: special forms, the capture decision, the invocation
// protocol over the instrumented stack, and the builtin operations.
#pragma once

#include "interp.hpp"

namespace closurevm {

struct EvalContext {
    Interp& interp;
    FramePtr lexical;  // null exactly at top level
};

// Evaluates one form; may return a transient bundle (from `values`).
Value eval_expr(const SExprPtr& form, EvalContext& ctx);

// eval_expr with a bundle result collapsed to its first element; used at
// every argument/storage position so bundles never reach lists or cells.
Value eval_collapsed(const SExprPtr& form, EvalContext& ctx);

// Generates the function object for one lambda occurrence: captures the
// lexically-bound free variables, reuses the site's code object, and is a
// closure exactly when the capture map is nonempty.
FunctionPtr make_function(const SExprPtr& lambda_form, EvalContext& ctx);

// Calls a function value: pushes the activation record, binds parameters to
// fresh cells over the capture chain, runs the body, pops the record.
Value invoke(const FunctionPtr& f, std::vector<Value> args, EvalContext& ctx,
             const SExpr* call_site);

void install_builtins(Interp& interp);

Value collapse_bundle(Value v);

}  // namespace closurevm
