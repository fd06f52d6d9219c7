// Golden-transcript sessions: `> ` lines are inputs (continuing until the
// parentheses balance), the following lines up to the next `> ` are the
// expected output. Inside an expected line, #<Function _> and #<Closure _>
// match any id while the kind label stays exact.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "interp.hpp"

namespace closurevm {

struct TranscriptStep {
    std::string input;
    std::vector<std::string> expected;
    int line = 0;  // line of the `> ` that started the step
};

struct TranscriptCase {
    std::string name;
    std::vector<TranscriptStep> steps;
};

class TranscriptFormatError : public std::runtime_error {
public:
    TranscriptFormatError(const std::string& msg, int line);
    int line;
};

TranscriptCase load_transcript_text(std::string_view text, std::string name);
TranscriptCase load_transcript_file(const std::string& path);

struct TranscriptMismatch {
    size_t step_index = 0;
    int line = 0;
    std::string input;
    std::string expected;
    std::string actual;
};

// Runs every step in order inside the given fresh instance; stops at the
// first mismatch.
std::optional<TranscriptMismatch> run_transcript(const TranscriptCase& tc, Interp& interp);

bool expected_line_matches(const std::string& pattern, const std::string& actual);

}  // namespace closurevm
