// extern "C" surface over the interpreter core.
#include "closurevm/closurevm.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "evaluator.hpp"
#include "interp.hpp"
#include "poly_probe.hpp"
#include "transcript.hpp"

using namespace closurevm;

struct clsvm_interp {
    Interp core;
    std::string last_error;

    explicit clsvm_interp(uint32_t depth_limit)
        : core(depth_limit == 0 ? Machine::kDefaultDepthLimit : depth_limit) {}
};

namespace {

char* copy_out(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out) {
        std::memcpy(out, text.c_str(), text.size() + 1);
    }
    return out;
}

void fill(char** slot, const std::string& text) {
    if (slot) {
        *slot = copy_out(text);
    }
}

}  // namespace

extern "C" {

clsvm_interp* clsvm_interp_new(uint32_t depth_limit) {
    try {
        return new clsvm_interp(depth_limit);
    } catch (...) {
        return nullptr;
    }
}

void clsvm_interp_free(clsvm_interp* interp) {
    delete interp;
}

int clsvm_source_complete(const char* src) {
    if (!src) {
        return 0;
    }
    return source_complete(src) ? 1 : 0;
}

clsvm_status clsvm_eval(clsvm_interp* interp, const char* src, char** out) {
    if (!interp || !src) {
        return CLSVM_ERR_USAGE;
    }
    try {
        std::vector<Value> values = interp->core.eval_source(src);
        std::string joined;
        for (size_t k = 0; k < values.size(); k++) {
            if (k > 0) {
                joined += "\n";
            }
            joined += interp->core.display(values[k]);
        }
        fill(out, joined);
        return CLSVM_OK;
    } catch (const ReadError& e) {
        interp->last_error = e.what();
        return CLSVM_ERR_PARSE;
    } catch (const EvalError& e) {
        interp->last_error = e.what();
        return CLSVM_ERR_EVAL;
    } catch (const std::exception& e) {
        interp->last_error = e.what();
        return CLSVM_ERR_EVAL;
    }
}

const char* clsvm_last_error(const clsvm_interp* interp) {
    return interp ? interp->last_error.c_str() : "";
}

char* clsvm_take_print_output(clsvm_interp* interp) {
    if (!interp) {
        return copy_out("");
    }
    return copy_out(interp->core.take_print_output());
}

char* clsvm_counters_report(const clsvm_interp* interp) {
    if (!interp) {
        return copy_out("");
    }
    return copy_out(counters_report(interp->core.machine().counters()));
}

clsvm_status clsvm_check_transcript(const char* path, char** report) {
    if (!path) {
        return CLSVM_ERR_USAGE;
    }
    try {
        TranscriptCase tc = load_transcript_file(path);
        Interp fresh;
        std::optional<TranscriptMismatch> mismatch = run_transcript(tc, fresh);
        if (!mismatch) {
            fill(report, std::string(path) + ": pass (" + std::to_string(tc.steps.size()) +
                             " steps)");
            return CLSVM_OK;
        }
        std::ostringstream out;
        out << path << ": mismatch at step " << (mismatch->step_index + 1) << " (line "
            << mismatch->line << ")\n"
            << "input:    " << mismatch->input << "\n"
            << "expected: " << mismatch->expected << "\n"
            << "actual:   " << mismatch->actual;
        fill(report, out.str());
        return CLSVM_FAIL;
    } catch (const TranscriptFormatError& e) {
        fill(report, std::string(path) + ": " + e.what());
        return CLSVM_ERR_FORMAT;
    } catch (const std::exception& e) {
        fill(report, e.what());
        return CLSVM_ERR_IO;
    }
}

clsvm_status clsvm_profile_source(const char* src, uint32_t depth_limit, char** report) {
    if (!src) {
        return CLSVM_ERR_USAGE;
    }
    try {
        Interp interp(depth_limit == 0 ? Machine::kDefaultDepthLimit : depth_limit);
        interp.eval_source(src);
        fill(report, counters_report(interp.machine().counters()));
        return CLSVM_OK;
    } catch (const ReadError& e) {
        fill(report, e.what());
        return CLSVM_ERR_PARSE;
    } catch (const std::exception& e) {
        fill(report, e.what());
        return CLSVM_ERR_EVAL;
    }
}

clsvm_status clsvm_probe(const char* family_path, const clsvm_probe_config* config,
                         char** report) {
    if (!family_path) {
        return CLSVM_ERR_USAGE;
    }
    try {
        ProbeConfig cfg;
        if (config) {
            if (config->seed) cfg.seed = config->seed;
            if (config->degree_max) cfg.degree_max = config->degree_max;
            if (config->chi_degree_max) cfg.chi_degree_max = config->chi_degree_max;
            if (config->sizes) cfg.sizes = parse_sizes_spec(config->sizes);
            if (config->samples_per_size) cfg.samples_per_size = config->samples_per_size;
            if (config->depth_limit) cfg.depth_limit = config->depth_limit;
        }
        FamilySpec family = load_family_file(family_path);
        ProbeResult result = run_probe(family, cfg);
        fill(report, result.report);
        return result.pass ? CLSVM_OK : CLSVM_FAIL;
    } catch (const ReadError& e) {
        fill(report, e.what());
        return CLSVM_ERR_PARSE;
    } catch (const EvalError& e) {
        fill(report, e.what());
        return CLSVM_ERR_EVAL;
    } catch (const std::invalid_argument& e) {
        fill(report, e.what());
        return CLSVM_ERR_FORMAT;
    } catch (const std::exception& e) {
        fill(report, e.what());
        return CLSVM_ERR_IO;
    }
}

void clsvm_string_free(char* text) {
    std::free(text);
}

}  // extern "C"
