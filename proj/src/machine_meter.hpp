// Explicit activation stack and deterministic step accounting.
//
// Charging model (abstract steps, never wall clock):
//   - evaluating a node charges 1 under the innermost active phase
//   - variable resolution charges 1 per lexical frame examined plus 1 when
//     the global table is probed
//   - a builtin charges 1 plus its own rule: integer arithmetic pays 1 per
//     machine word of the larger operand, list and string builtins pay 1
//     per element touched
//   - generating a function charges exactly 1 + |captures| under Generate;
//     the per-site total therefore stays an exact multiple of that constant
//   - invoking an interpreted function charges 1 + |params| under Call
//   - let charges its init-form work and fresh bindings under Prepare
//
// eval_steps accumulates every charge, so
//   eval_steps = prepare_steps + generation_steps + call_steps + top-level
//   dispatch charges
// holds exactly.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace closurevm {

enum class Phase { Eval, Prepare, Generate, Call };

struct SiteCost {
    uint64_t generations = 0;
    uint64_t generation_steps = 0;
};

struct CostCounters {
    uint64_t eval_steps = 0;
    uint64_t closure_generations = 0;
    uint64_t generation_steps = 0;
    uint64_t prepare_steps = 0;
    uint64_t call_steps = 0;
    uint64_t frame_pushes = 0;
    uint64_t cell_allocations = 0;
    std::map<int, SiteCost> sites;  // site-id -> per-site generation cost
};

// Componentwise subtraction; throws std::logic_error if any component of
// `after` is smaller than in `before`.
CostCounters counters_diff(const CostCounters& before, const CostCounters& after);

// Plain-text key=value report, one `site <id> ...` line per lambda site.
std::string counters_report(const CostCounters& c);

// The three per-call components: where to continue, what was called, and
// what it was called with.
struct ActivationRecord {
    const SExpr* return_descriptor = nullptr;  // opaque continuation token
    FunctionPtr callee;
    std::vector<Value> arguments;
};

class Machine {
public:
    static constexpr size_t kDefaultDepthLimit = 10000;

    explicit Machine(size_t depth_limit = kDefaultDepthLimit)
        : depth_limit_(depth_limit) {}

    void push_frame(ActivationRecord record);
    ActivationRecord pop_frame();
    size_t depth() const { return stack_.size(); }
    size_t peak_depth() const { return peak_depth_; }
    size_t depth_limit() const { return depth_limit_; }

    void charge(Phase phase, uint64_t amount);
    void charge_generation(int site_id, uint64_t capture_count, bool closure);
    void count_cell_allocation() { counters_.cell_allocations++; }

    Phase current_phase() const {
        return phase_stack_.empty() ? Phase::Eval : phase_stack_.back();
    }
    void push_phase(Phase p) { phase_stack_.push_back(p); }
    void pop_phase() { phase_stack_.pop_back(); }

    const CostCounters& counters() const { return counters_; }
    CostCounters snapshot() const { return counters_; }

private:
    std::vector<ActivationRecord> stack_;
    std::vector<Phase> phase_stack_;
    CostCounters counters_;
    size_t depth_limit_;
    size_t peak_depth_ = 0;
};

// Scoped phase switch.
class PhaseGuard {
public:
    PhaseGuard(Machine& m, Phase p) : machine_(m) { machine_.push_phase(p); }
    ~PhaseGuard() { machine_.pop_phase(); }
    PhaseGuard(const PhaseGuard&) = delete;
    PhaseGuard& operator=(const PhaseGuard&) = delete;

private:
    Machine& machine_;
};

}  // namespace closurevm
