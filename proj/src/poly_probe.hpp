// Empirical polynomiality harness. Membership of a function in P^d_c is
// checked with exact rationals: the coefficient is fitted on the small half
// of a size ladder and validated, with a fixed relaxation factor, on the
// held-out large half. The harness refutes or fails to refute polynomiality
// on sampled inputs; it proves nothing, and its reports say so.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "interp.hpp"
#include "oracles.hpp"

namespace closurevm {

using Rational = boost::multiprecision::cpp_rational;

// One measurement: input size sigma and deterministic step count tau.
struct Sample {
    uint64_t input_size = 0;
    uint64_t steps = 0;
};

// sigma; bundles have no size.
uint64_t size_of(const Value& v);

// Steps of exactly one call of f on input, counting the work of f and its
// callees; the generation of f itself happened before the window.
Sample measure(Interp& interp, const FunctionPtr& f, const Value& input);

// Least c with tau <= c(1+sigma)^d across all samples, as an exact rational.
Rational min_coefficient(const std::vector<Sample>& samples, unsigned degree);

// Definition-1 inequality on every sample.
bool check_membership(const std::vector<Sample>& samples, const Rational& c,
                      unsigned degree);

struct PolyMembership {
    unsigned degree = 0;
    Rational coefficient;
    bool witnessed = false;  // true iff every sample obeys coefficient
};

enum class InputKind {
    Int,            // integer of the target bit budget
    ZeroList,       // list of zeros, length = size - 1
    String,         // random lowercase string
    PairInt,        // (x y) two integers
    PairString,     // (x y) two strings
    ProdPairInt,    // ((x1 b1) (x2 b2)) product-monoid element pair over ints
    ProdPairString, // same with string first components
};

InputKind parse_input_kind(const std::string& text);
Value generate_input(InputKind kind, uint64_t target_size, SeedStream& seeds);

struct FamilyMember {
    std::string name;               // global symbol holding a unary function
    InputKind inputs = InputKind::ZeroList;
    InputKind transform_inputs = InputKind::ZeroList;  // domain of alpha(f)
};

struct FamilySpec {
    std::vector<std::string> programs;  // resolved source file paths
    unsigned degree = 1;
    std::optional<std::string> transform;  // global symbol naming alpha
    std::vector<FamilyMember> members;
    std::optional<std::vector<uint64_t>> sizes;  // ladder override
};

// Format: `program <path>`, `degree <n>`, `sizes <spec>`,
// `transform <symbol>`, `member <name> inputs=<kind> [tinputs=<kind>]`.
// Relative program paths resolve against the family file's directory, then
// against $CLOSUREVM_CORPUS.
FamilySpec load_family_file(const std::string& path);

struct ProbeConfig {
    uint64_t seed = 42;
    unsigned degree_max = 4;
    unsigned chi_degree_max = 3;
    std::vector<uint64_t> sizes;  // empty = default ladder 2..256
    unsigned samples_per_size = 8;
    size_t depth_limit = Machine::kDefaultDepthLimit;
};

// "lo..hi" doubling ladder or explicit "a,b,c" list.
std::vector<uint64_t> parse_sizes_spec(const std::string& spec);
std::vector<uint64_t> default_sizes_ladder();

struct ProbeResult {
    bool pass = false;
    std::string report;
};

ProbeResult run_probe(const FamilySpec& family, const ProbeConfig& config);

}  // namespace closurevm
