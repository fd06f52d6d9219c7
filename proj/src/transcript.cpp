#include "transcript.hpp"

#include <fstream>
#include <sstream>

namespace closurevm {

TranscriptFormatError::TranscriptFormatError(const std::string& msg, int l)
    : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}

namespace {

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') {
                current.pop_back();
            }
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        lines.push_back(std::move(current));
    }
    return lines;
}

}  // namespace

TranscriptCase load_transcript_text(std::string_view text, std::string name) {
    std::vector<std::string> lines = split_lines(text);
    TranscriptCase tc;
    tc.name = std::move(name);
    size_t i = 0;
    while (i < lines.size() && blank(lines[i])) {
        i++;
    }
    while (i < lines.size()) {
        if (lines[i].rfind("> ", 0) != 0) {
            throw TranscriptFormatError("expected a '> ' input line", static_cast<int>(i + 1));
        }
        TranscriptStep step;
        step.line = static_cast<int>(i + 1);
        step.input = lines[i].substr(2);
        i++;
        while (!source_complete(step.input)) {
            if (i >= lines.size()) {
                throw TranscriptFormatError("input never balances", step.line);
            }
            step.input += "\n" + lines[i];
            i++;
        }
        while (i < lines.size() && lines[i].rfind("> ", 0) != 0) {
            step.expected.push_back(lines[i]);
            i++;
        }
        while (!step.expected.empty() && blank(step.expected.back())) {
            step.expected.pop_back();
        }
        tc.steps.push_back(std::move(step));
    }
    return tc;
}

TranscriptCase load_transcript_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open transcript file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_transcript_text(buffer.str(), path);
}

bool expected_line_matches(const std::string& pattern, const std::string& actual) {
    static const std::string kFn = "#<Function _>";
    static const std::string kCl = "#<Closure _>";
    size_t p = 0;
    size_t a = 0;
    while (p < pattern.size()) {
        bool is_fn = pattern.compare(p, kFn.size(), kFn) == 0;
        bool is_cl = !is_fn && pattern.compare(p, kCl.size(), kCl) == 0;
        if (is_fn || is_cl) {
            const std::string prefix = is_fn ? "#<Function " : "#<Closure ";
            if (actual.compare(a, prefix.size(), prefix) != 0) {
                return false;
            }
            a += prefix.size();
            size_t close = actual.find('>', a);
            if (close == std::string::npos || close == a) {
                return false;
            }
            a = close + 1;
            p += is_fn ? kFn.size() : kCl.size();
            continue;
        }
        if (a >= actual.size() || actual[a] != pattern[p]) {
            return false;
        }
        a++;
        p++;
    }
    return a == actual.size();
}

namespace {

std::vector<std::string> actual_output_lines(Interp& interp, const std::string& input) {
    std::string text;
    try {
        std::vector<Value> values = interp.eval_source(input);
        text = interp.take_print_output();
        if (!values.empty()) {
            text += interp.display(values.back()) + "\n";
        }
    } catch (const ReadError& e) {
        text += std::string("error: ") + e.what();
        text += "\n";
    } catch (const EvalError& e) {
        interp.take_print_output();
        text += std::string("error: ") + e.what();
        text += "\n";
    }
    return split_lines(text);
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (size_t k = 0; k < lines.size(); k++) {
        if (k > 0) {
            out += "\n";
        }
        out += lines[k];
    }
    return out;
}

}  // namespace

std::optional<TranscriptMismatch> run_transcript(const TranscriptCase& tc, Interp& interp) {
    for (size_t k = 0; k < tc.steps.size(); k++) {
        const TranscriptStep& step = tc.steps[k];
        std::vector<std::string> actual = actual_output_lines(interp, step.input);
        bool ok = actual.size() == step.expected.size();
        for (size_t j = 0; ok && j < actual.size(); j++) {
            ok = expected_line_matches(step.expected[j], actual[j]);
        }
        if (!ok) {
            return TranscriptMismatch{k, step.line, step.input, join_lines(step.expected),
                                      join_lines(actual)};
        }
    }
    return std::nullopt;
}

}  // namespace closurevm
