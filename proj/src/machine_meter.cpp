#include "machine_meter.hpp"

#include <stdexcept>

namespace closurevm {

namespace {

uint64_t sub_checked(uint64_t after, uint64_t before, const char* what) {
    if (after < before) {
        throw std::logic_error(std::string("counters_diff: ") + what +
                               " decreased between snapshots");
    }
    return after - before;
}

}  // namespace

CostCounters counters_diff(const CostCounters& before, const CostCounters& after) {
    CostCounters d;
    d.eval_steps = sub_checked(after.eval_steps, before.eval_steps, "eval_steps");
    d.closure_generations =
        sub_checked(after.closure_generations, before.closure_generations, "closure_generations");
    d.generation_steps =
        sub_checked(after.generation_steps, before.generation_steps, "generation_steps");
    d.prepare_steps = sub_checked(after.prepare_steps, before.prepare_steps, "prepare_steps");
    d.call_steps = sub_checked(after.call_steps, before.call_steps, "call_steps");
    d.frame_pushes = sub_checked(after.frame_pushes, before.frame_pushes, "frame_pushes");
    d.cell_allocations =
        sub_checked(after.cell_allocations, before.cell_allocations, "cell_allocations");
    for (const auto& [site, cost] : after.sites) {
        auto it = before.sites.find(site);
        SiteCost base = it == before.sites.end() ? SiteCost{} : it->second;
        SiteCost delta{sub_checked(cost.generations, base.generations, "site generations"),
                       sub_checked(cost.generation_steps, base.generation_steps,
                                   "site generation_steps")};
        if (delta.generations > 0 || delta.generation_steps > 0) {
            d.sites.emplace(site, delta);
        }
    }
    for (const auto& [site, cost] : before.sites) {
        if (after.sites.find(site) == after.sites.end() &&
            (cost.generations > 0 || cost.generation_steps > 0)) {
            throw std::logic_error("counters_diff: site vanished between snapshots");
        }
    }
    return d;
}

std::string counters_report(const CostCounters& c) {
    std::string out;
    out += "eval_steps=" + std::to_string(c.eval_steps) + "\n";
    out += "prepare_steps=" + std::to_string(c.prepare_steps) + "\n";
    out += "generation_steps=" + std::to_string(c.generation_steps) + "\n";
    out += "call_steps=" + std::to_string(c.call_steps) + "\n";
    out += "closure_generations=" + std::to_string(c.closure_generations) + "\n";
    out += "frame_pushes=" + std::to_string(c.frame_pushes) + "\n";
    out += "cell_allocations=" + std::to_string(c.cell_allocations) + "\n";
    for (const auto& [site, cost] : c.sites) {
        if (cost.generations == 0 || cost.generation_steps % cost.generations != 0) {
            throw std::logic_error("counters_report: non-constant per-site generation cost");
        }
        out += "site " + std::to_string(site) +
               " generations=" + std::to_string(cost.generations) +
               " steps_per_generation=" +
               std::to_string(cost.generation_steps / cost.generations) + "\n";
    }
    return out;
}

void Machine::push_frame(ActivationRecord record) {
    if (stack_.size() >= depth_limit_) {
        throw EvalError("stack overflow: depth limit " + std::to_string(depth_limit_) +
                        " exceeded");
    }
    stack_.push_back(std::move(record));
    counters_.frame_pushes++;
    if (stack_.size() > peak_depth_) {
        peak_depth_ = stack_.size();
    }
}

ActivationRecord Machine::pop_frame() {
    if (stack_.empty()) {
        throw std::logic_error("pop_frame on empty activation stack");
    }
    ActivationRecord record = std::move(stack_.back());
    stack_.pop_back();
    return record;
}

void Machine::charge(Phase phase, uint64_t amount) {
    counters_.eval_steps += amount;
    switch (phase) {
        case Phase::Eval:
            break;
        case Phase::Prepare:
            counters_.prepare_steps += amount;
            break;
        case Phase::Generate:
            counters_.generation_steps += amount;
            break;
        case Phase::Call:
            counters_.call_steps += amount;
            break;
    }
}

void Machine::charge_generation(int site_id, uint64_t capture_count, bool closure) {
    uint64_t cost = 1 + capture_count;
    charge(Phase::Generate, cost);
    SiteCost& site = counters_.sites[site_id];
    site.generations++;
    site.generation_steps += cost;
    if (closure) {
        counters_.closure_generations++;
    }
}

}  // namespace closurevm
