// closurevm command line: REPL, script runner, transcript checker, cost
// profiler and polynomiality probe. Talks to the interpreter exclusively
// through the public C API.
//
// Exit codes: 0 success/pass, 1 check or probe failure, 2 usage, parse or
// runtime error.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "closurevm/closurevm.h"

namespace {

// Owns a string returned by the library.
class ApiString {
public:
    ApiString() = default;
    ~ApiString() { clsvm_string_free(text_); }
    ApiString(const ApiString&) = delete;
    ApiString& operator=(const ApiString&) = delete;

    char** slot() { return &text_; }
    std::string str() const { return text_ ? text_ : ""; }
    bool empty() const { return !text_ || text_[0] == '\0'; }

private:
    char* text_ = nullptr;
};

class ApiInterp {
public:
    explicit ApiInterp(uint32_t depth_limit) : interp_(clsvm_interp_new(depth_limit)) {}
    ~ApiInterp() { clsvm_interp_free(interp_); }
    ApiInterp(const ApiInterp&) = delete;
    ApiInterp& operator=(const ApiInterp&) = delete;

    clsvm_interp* get() { return interp_; }

private:
    clsvm_interp* interp_;
};

// Files resolve as given first, then under $CLOSUREVM_CORPUS.
std::string resolve_path(const std::string& raw) {
    namespace fs = std::filesystem;
    if (fs::exists(raw)) {
        return raw;
    }
    if (const char* corpus = std::getenv("CLOSUREVM_CORPUS")) {
        fs::path under = fs::path(corpus) / raw;
        if (fs::exists(under)) {
            return under.string();
        }
    }
    return raw;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path);
    if (!in) {
        return false;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    out = buffer.str();
    return true;
}

int status_to_exit(clsvm_status status) {
    switch (status) {
        case CLSVM_OK:
            return 0;
        case CLSVM_FAIL:
            return 1;
        default:
            return 2;
    }
}

int cmd_repl(uint32_t depth_limit) {
    ApiInterp interp(depth_limit);
    std::string buffer;
    std::string line;
    std::cout << "> " << std::flush;
    while (std::getline(std::cin, line)) {
        buffer += buffer.empty() ? line : "\n" + line;
        if (buffer.find_first_not_of(" \t\r\n") == std::string::npos) {
            buffer.clear();
            std::cout << "> " << std::flush;
            continue;
        }
        if (!clsvm_source_complete(buffer.c_str())) {
            continue;  // keep reading until the parentheses balance
        }
        ApiString results;
        clsvm_status status = clsvm_eval(interp.get(), buffer.c_str(), results.slot());
        ApiString printed;
        *printed.slot() = clsvm_take_print_output(interp.get());
        if (!printed.empty()) {
            std::cout << printed.str();
        }
        if (status == CLSVM_OK) {
            if (!results.empty()) {
                std::cout << results.str() << "\n";
            }
        } else {
            std::cout << "error: " << clsvm_last_error(interp.get()) << "\n";
        }
        buffer.clear();
        std::cout << "> " << std::flush;
    }
    std::cout << "\n";
    return 0;
}

int cmd_run(const std::string& file, uint32_t depth_limit) {
    std::string source;
    if (!read_file(resolve_path(file), source)) {
        std::cerr << "closurevm: cannot open " << file << "\n";
        return 2;
    }
    ApiInterp interp(depth_limit);
    ApiString results;
    clsvm_status status = clsvm_eval(interp.get(), source.c_str(), results.slot());
    ApiString printed;
    *printed.slot() = clsvm_take_print_output(interp.get());
    if (!printed.empty()) {
        std::cout << printed.str();
    }
    if (status != CLSVM_OK) {
        std::cerr << "closurevm: " << clsvm_last_error(interp.get()) << "\n";
        return 2;
    }
    std::string all = results.str();
    size_t last_line = all.find_last_of('\n');
    std::string final_value = last_line == std::string::npos ? all : all.substr(last_line + 1);
    if (!final_value.empty()) {
        std::cout << final_value << "\n";
    }
    return 0;
}

int cmd_check_transcript(const std::vector<std::string>& files) {
    int exit_code = 0;
    for (const std::string& file : files) {
        ApiString report;
        clsvm_status status = clsvm_check_transcript(resolve_path(file).c_str(),
                                                     report.slot());
        std::cout << report.str() << "\n";
        exit_code = std::max(exit_code, status_to_exit(status));
    }
    return exit_code;
}

int cmd_profile(const std::string& file, uint32_t depth_limit) {
    std::string source;
    if (!read_file(resolve_path(file), source)) {
        std::cerr << "closurevm: cannot open " << file << "\n";
        return 2;
    }
    ApiString report;
    clsvm_status status = clsvm_profile_source(source.c_str(), depth_limit, report.slot());
    if (status != CLSVM_OK) {
        std::cerr << "closurevm: " << report.str() << "\n";
        return 2;
    }
    std::cout << report.str();
    return 0;
}

int cmd_probe(const std::string& family, const clsvm_probe_config& config) {
    ApiString report;
    clsvm_status status = clsvm_probe(resolve_path(family).c_str(), &config, report.slot());
    if (status == CLSVM_OK || status == CLSVM_FAIL) {
        std::cout << report.str();
        return status_to_exit(status);
    }
    std::cerr << "closurevm: " << report.str() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closurevm: instrumented interpreter with closure cost metering"};
    app.require_subcommand(1);

    uint32_t depth_limit = 0;
    app.add_option("--depth-limit", depth_limit, "activation stack depth limit");

    CLI::App* repl = app.add_subcommand("repl", "interactive session");

    std::string run_file;
    CLI::App* run = app.add_subcommand("run", "evaluate a program file");
    run->add_option("file", run_file, "program file (.fl)")->required();

    std::vector<std::string> transcript_files;
    CLI::App* check = app.add_subcommand("check-transcript", "replay golden sessions");
    check->add_option("files", transcript_files, "transcript files")->required();

    std::string profile_file;
    CLI::App* profile = app.add_subcommand("profile", "run a program and report counters");
    profile->add_option("file", profile_file, "program file (.fl)")->required();

    std::string family_file;
    uint64_t seed = 0;
    uint32_t degree_max = 0;
    uint32_t chi_degree_max = 0;
    std::string sizes;
    uint32_t samples_per_size = 0;
    CLI::App* probe = app.add_subcommand("probe", "polynomiality probe over a family file");
    probe->add_option("family", family_file, "probe family file")->required();
    probe->add_option("--seed", seed, "generator seed (default 42)");
    probe->add_option("--degree-max", degree_max, "largest output degree searched");
    probe->add_option("--chi-degree-max", chi_degree_max, "largest chi exponent searched");
    probe->add_option("--sizes", sizes, "size ladder, e.g. 2..256 or 2,4,8,12");
    probe->add_option("--samples-per-size", samples_per_size, "samples per ladder rung");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (repl->parsed()) {
        return cmd_repl(depth_limit);
    }
    if (run->parsed()) {
        return cmd_run(run_file, depth_limit);
    }
    if (check->parsed()) {
        return cmd_check_transcript(transcript_files);
    }
    if (profile->parsed()) {
        return cmd_profile(profile_file, depth_limit);
    }
    if (probe->parsed()) {
        clsvm_probe_config config{};
        config.seed = seed;
        config.degree_max = degree_max;
        config.chi_degree_max = chi_degree_max;
        config.sizes = sizes.empty() ? nullptr : sizes.c_str();
        config.samples_per_size = samples_per_size;
        config.depth_limit = depth_limit;
        return cmd_probe(family_file, config);
    }
    return 2;
}
