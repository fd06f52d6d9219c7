#include "poly_probe.hpp"

#include "evaluator.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace closurevm {

namespace {

// Coefficients fitted on the training half must cover the held-out half up
// to this factor. Affine-cost programs settle well inside it; genuinely
// super-polynomial growth escapes it within a few ladder rungs.
const Rational kValidationMargin = 2;

Rational rational_pow(const Rational& base, unsigned e) {
    Rational out = 1;
    for (unsigned k = 0; k < e; k++) {
        out *= base;
    }
    return out;
}

BigInt size_term_pow(uint64_t sigma, unsigned degree) {
    BigInt base = BigInt(sigma) + 1;
    BigInt out = 1;
    for (unsigned k = 0; k < degree; k++) {
        out *= base;
    }
    return out;
}

}  // namespace

uint64_t size_of(const Value& v) {
    return value_size(v);
}

Sample measure(Interp& interp, const FunctionPtr& f, const Value& input) {
    uint64_t sigma = size_of(input);
    CostCounters before = interp.machine().snapshot();
    Value out = interp.invoke_function(f, {input});
    (void)out;
    CostCounters used = counters_diff(before, interp.machine().snapshot());
    return Sample{sigma, used.eval_steps};
}

Rational min_coefficient(const std::vector<Sample>& samples, unsigned degree) {
    if (samples.empty()) {
        throw std::invalid_argument("min_coefficient: no samples");
    }
    Rational best = 0;
    for (const Sample& s : samples) {
        Rational c(BigInt(s.steps), size_term_pow(s.input_size, degree));
        if (c > best) {
            best = c;
        }
    }
    return best;
}

bool check_membership(const std::vector<Sample>& samples, const Rational& c,
                      unsigned degree) {
    for (const Sample& s : samples) {
        if (Rational(BigInt(s.steps)) > c * Rational(size_term_pow(s.input_size, degree))) {
            return false;
        }
    }
    return true;
}

InputKind parse_input_kind(const std::string& text) {
    if (text == "int") return InputKind::Int;
    if (text == "zerolist") return InputKind::ZeroList;
    if (text == "string") return InputKind::String;
    if (text == "pair-int") return InputKind::PairInt;
    if (text == "pair-string") return InputKind::PairString;
    if (text == "prodpair-int") return InputKind::ProdPairInt;
    if (text == "prodpair-string") return InputKind::ProdPairString;
    throw std::invalid_argument("unknown input kind '" + text + "'");
}

namespace {

Value pair_value(Value a, Value b) {
    std::vector<Value> elems{std::move(a), std::move(b)};
    return Value::list(list_from_vector(elems));
}

Value int_of_size(uint64_t size, SeedStream& seeds) {
    return Value::integer(seeds.integer_with_bits(size > 0 ? size - 1 : 0));
}

Value string_of_size(uint64_t size, SeedStream& seeds) {
    return Value::str(seeds.lowercase(size > 0 ? size - 1 : 0));
}

}  // namespace

Value generate_input(InputKind kind, uint64_t target_size, SeedStream& seeds) {
    switch (kind) {
        case InputKind::Int:
            return int_of_size(target_size, seeds);
        case InputKind::String:
            return string_of_size(target_size, seeds);
        case InputKind::ZeroList: {
            uint64_t len = target_size > 0 ? target_size - 1 : 0;
            std::vector<Value> elems(len, Value::integer(0));
            return Value::list(list_from_vector(elems));
        }
        case InputKind::PairInt:
        case InputKind::PairString: {
            uint64_t budget = target_size > 2 ? target_size - 1 : 2;
            uint64_t first = std::max<uint64_t>(1, (budget + 1) / 2);
            uint64_t second = std::max<uint64_t>(1, budget - first);
            if (kind == InputKind::PairInt) {
                return pair_value(int_of_size(first, seeds), int_of_size(second, seeds));
            }
            return pair_value(string_of_size(first, seeds), string_of_size(second, seeds));
        }
        case InputKind::ProdPairInt:
        case InputKind::ProdPairString: {
            uint64_t half = target_size > 6 ? (target_size - 1) / 2 : 3;
            auto one_pair = [&](uint64_t pair_budget) {
                Value tag = Value::integer(BigInt(seeds.below(8)));
                uint64_t carrier = pair_budget > 3 ? pair_budget - 3 : 1;
                Value lead = kind == InputKind::ProdPairInt ? int_of_size(carrier, seeds)
                                                            : string_of_size(carrier, seeds);
                return pair_value(std::move(lead), std::move(tag));
            };
            return pair_value(one_pair(half), one_pair(half));
        }
    }
    throw std::invalid_argument("generate_input: bad kind");
}

std::vector<uint64_t> parse_sizes_spec(const std::string& spec) {
    std::vector<uint64_t> out;
    size_t dots = spec.find("..");
    if (dots != std::string::npos) {
        uint64_t lo = std::stoull(spec.substr(0, dots));
        uint64_t hi = std::stoull(spec.substr(dots + 2));
        if (lo == 0 || hi < lo) {
            throw std::invalid_argument("bad sizes spec '" + spec + "'");
        }
        for (uint64_t s = lo; s <= hi; s *= 2) {
            out.push_back(s);
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(std::stoull(item));
        }
    }
    if (out.empty() || !std::is_sorted(out.begin(), out.end())) {
        throw std::invalid_argument("bad sizes spec '" + spec + "'");
    }
    return out;
}

std::vector<uint64_t> default_sizes_ladder() {
    return parse_sizes_spec("2..256");
}

namespace {

std::string resolve_probe_path(const std::string& raw, const std::string& family_dir) {
    namespace fs = std::filesystem;
    if (fs::exists(raw)) {
        return raw;
    }
    fs::path relative = fs::path(family_dir) / raw;
    if (fs::exists(relative)) {
        return relative.string();
    }
    if (const char* corpus = std::getenv("CLOSUREVM_CORPUS")) {
        fs::path under = fs::path(corpus) / raw;
        if (fs::exists(under)) {
            return under.string();
        }
    }
    throw std::runtime_error("cannot find probe program file: " + raw);
}

std::vector<std::string> split_words(const std::string& line) {
    std::stringstream ss(line);
    std::vector<std::string> words;
    std::string w;
    while (ss >> w) {
        words.push_back(w);
    }
    return words;
}

}  // namespace

FamilySpec load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open family file: " + path);
    }
    std::string family_dir = std::filesystem::path(path).parent_path().string();
    FamilySpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (size_t hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::vector<std::string> words = split_words(line);
        if (words.empty()) {
            continue;
        }
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
        };
        const std::string& key = words[0];
        if (key == "program" && words.size() == 2) {
            spec.programs.push_back(resolve_probe_path(words[1], family_dir));
        } else if (key == "degree" && words.size() == 2) {
            spec.degree = static_cast<unsigned>(std::stoul(words[1]));
        } else if (key == "sizes" && words.size() == 2) {
            spec.sizes = parse_sizes_spec(words[1]);
        } else if (key == "transform" && words.size() == 2) {
            spec.transform = words[1];
        } else if (key == "member" && words.size() >= 2) {
            FamilyMember member;
            member.name = words[1];
            bool saw_inputs = false;
            for (size_t k = 2; k < words.size(); k++) {
                const std::string& opt = words[k];
                if (opt.rfind("inputs=", 0) == 0) {
                    member.inputs = parse_input_kind(opt.substr(7));
                    if (!saw_inputs) {
                        member.transform_inputs = member.inputs;
                    }
                    saw_inputs = true;
                } else if (opt.rfind("tinputs=", 0) == 0) {
                    member.transform_inputs = parse_input_kind(opt.substr(8));
                } else {
                    fail("unknown member option '" + opt + "'");
                }
            }
            spec.members.push_back(std::move(member));
        } else {
            fail("unrecognized line");
        }
    }
    if (spec.members.empty()) {
        throw std::runtime_error(path + ": family names no members");
    }
    return spec;
}

// ------------------------------
// probe driver
// ------------------------------

namespace {

struct LoadedPrograms {
    std::vector<std::string> sources;
};

LoadedPrograms read_programs(const FamilySpec& family) {
    LoadedPrograms loaded;
    for (const std::string& path : family.programs) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open probe program file: " + path);
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        loaded.sources.push_back(buffer.str());
    }
    return loaded;
}

FunctionPtr resolve_function(Interp& interp, const std::string& name) {
    std::optional<Value> v = interp.global_value(name);
    if (!v || !v->is_function()) {
        throw std::runtime_error("probe: '" + name + "' is not a function in the family program");
    }
    return v->as_function();
}

// One measurement in a fresh instance; `transform` wraps the member first.
Sample measure_in_fresh_instance(const LoadedPrograms& programs, const ProbeConfig& config,
                                 const std::string& member,
                                 const std::optional<std::string>& transform,
                                 const Value& input) {
    Interp interp(config.depth_limit);
    for (const std::string& src : programs.sources) {
        interp.eval_source(src);
    }
    FunctionPtr f = resolve_function(interp, member);
    if (transform) {
        FunctionPtr alpha = resolve_function(interp, *transform);
        Value g = collapse_bundle(interp.invoke_function(alpha, {Value::function(f)}));
        if (!g.is_function()) {
            throw std::runtime_error("probe: transform '" + *transform +
                                     "' returned a non-function");
        }
        f = g.as_function();
    }
    return measure(interp, f, input);
}

std::vector<Value> build_inputs(InputKind kind, const std::vector<uint64_t>& sizes,
                                unsigned samples_per_size, SeedStream& seeds) {
    std::vector<Value> inputs;
    inputs.reserve(sizes.size() * samples_per_size);
    for (uint64_t size : sizes) {
        for (unsigned k = 0; k < samples_per_size; k++) {
            inputs.push_back(generate_input(kind, size, seeds));
        }
    }
    return inputs;
}

struct SplitSamples {
    std::vector<Sample> all;
    std::vector<Sample> train;     // small half of the ladder
    std::vector<Sample> heldout;   // large half
};

SplitSamples split_by_rung(const std::vector<Sample>& samples, size_t rungs,
                           unsigned samples_per_size) {
    SplitSamples out;
    out.all = samples;
    size_t train_rungs = (rungs + 1) / 2;
    size_t cut = train_rungs * samples_per_size;
    out.train.assign(samples.begin(), samples.begin() + std::min(cut, samples.size()));
    if (cut < samples.size()) {
        out.heldout.assign(samples.begin() + cut, samples.end());
    }
    return out;
}

// Trained coefficient must cover the held-out rungs within the margin.
bool validated_at_degree(const SplitSamples& samples, unsigned degree) {
    Rational trained = min_coefficient(samples.train, degree);
    if (samples.heldout.empty()) {
        return true;
    }
    return check_membership(samples.heldout, kValidationMargin * trained, degree);
}

PolyMembership membership_outcome(const SplitSamples& samples, unsigned degree) {
    PolyMembership out;
    out.degree = degree;
    if (validated_at_degree(samples, degree)) {
        out.coefficient = min_coefficient(samples.all, degree);
        out.witnessed = true;
    } else {
        out.coefficient = kValidationMargin * min_coefficient(samples.train, degree);
        out.witnessed = false;
    }
    return out;
}

std::string rational_str(const Rational& r) {
    return r.str();
}

const char* kHonestyHeader =
    "# polynomiality probe: refutes or fails to refute on sampled inputs; it proves "
    "nothing\n";

}  // namespace

ProbeResult run_probe(const FamilySpec& family, const ProbeConfig& config) {
    LoadedPrograms programs = read_programs(family);
    std::vector<uint64_t> sizes =
        family.sizes ? *family.sizes : (config.sizes.empty() ? default_sizes_ladder()
                                                             : config.sizes);
    unsigned per_size = config.samples_per_size;

    // sample every member on its own input stream
    std::vector<SplitSamples> member_samples;    // f itself
    std::vector<SplitSamples> transformed;       // alpha(f), higher-order mode
    for (size_t m = 0; m < family.members.size(); m++) {
        const FamilyMember& member = family.members[m];
        SeedStream f_seeds(config.seed + 2 * m);
        std::vector<Value> f_inputs = build_inputs(member.inputs, sizes, per_size, f_seeds);
        std::vector<Sample> samples;
        samples.reserve(f_inputs.size());
        for (const Value& input : f_inputs) {
            samples.push_back(measure_in_fresh_instance(programs, config, member.name,
                                                        std::nullopt, input));
        }
        member_samples.push_back(split_by_rung(samples, sizes.size(), per_size));

        if (family.transform) {
            std::vector<Value> g_inputs;
            if (member.transform_inputs == member.inputs) {
                g_inputs = f_inputs;
            } else {
                SeedStream g_seeds(config.seed + 2 * m + 1);
                g_inputs = build_inputs(member.transform_inputs, sizes, per_size, g_seeds);
            }
            std::vector<Sample> g_samples;
            g_samples.reserve(g_inputs.size());
            for (const Value& input : g_inputs) {
                g_samples.push_back(measure_in_fresh_instance(programs, config, member.name,
                                                              family.transform, input));
            }
            transformed.push_back(split_by_rung(g_samples, sizes.size(), per_size));
        }
    }

    std::string report = kHonestyHeader;
    report += "degree_d=" + std::to_string(family.degree) + "\n";

    if (!family.transform) {
        bool pass = true;
        std::string member_lines;
        for (size_t m = 0; m < family.members.size(); m++) {
            PolyMembership outcome = membership_outcome(member_samples[m], family.degree);
            pass = pass && outcome.witnessed;
            member_lines += "member=" + family.members[m].name +
                            " c=" + rational_str(outcome.coefficient) +
                            " witnessed=" + (outcome.witnessed ? "true" : "false") + "\n";
        }
        report += std::string("verdict=") + (pass ? "pass" : "fail") + "\n";
        report += member_lines;
        return ProbeResult{pass, report};
    }

    // ---- higher-order mode (Definition 2) ----
    std::vector<Rational> c_in;
    for (const SplitSamples& samples : member_samples) {
        c_in.push_back(min_coefficient(samples.all, family.degree));
    }

    std::optional<unsigned> dprime;
    for (unsigned dp = 0; dp <= config.degree_max && !dprime; dp++) {
        bool all_ok = true;
        for (const SplitSamples& samples : transformed) {
            all_ok = all_ok && validated_at_degree(samples, dp);
        }
        if (all_ok) {
            dprime = dp;
        }
    }

    std::vector<Rational> c_out;
    if (dprime) {
        for (const SplitSamples& samples : transformed) {
            c_out.push_back(min_coefficient(samples.all, *dprime));
        }
    }

    // chi envelope: fit a*c^e+b on the members with the smaller input
    // coefficients, validate on the rest, then restate over all pairs.
    std::optional<unsigned> chi_e;
    Rational chi_a = 0;
    Rational chi_b = 0;
    if (dprime) {
        std::vector<size_t> order(c_in.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t x, size_t y) { return c_in[x] < c_in[y]; });
        size_t train_count = (order.size() + 1) / 2;
        for (unsigned e = 0; e <= config.chi_degree_max && !chi_e; e++) {
            Rational b;
            bool first = true;
            for (size_t k = 0; k < train_count; k++) {
                const Rational& candidate = c_out[order[k]];
                if (first || candidate < b) {
                    b = candidate;
                    first = false;
                }
            }
            Rational a = 0;
            for (size_t k = 0; k < train_count; k++) {
                size_t idx = order[k];
                Rational denom = rational_pow(c_in[idx], e);
                if (denom == 0) {
                    continue;
                }
                Rational slope = (c_out[idx] - b) / denom;
                if (slope > a) {
                    a = slope;
                }
            }
            bool ok = true;
            for (size_t k = train_count; k < order.size(); k++) {
                size_t idx = order[k];
                Rational bound = kValidationMargin * (a * rational_pow(c_in[idx], e) + b);
                ok = ok && c_out[idx] <= bound;
            }
            if (ok) {
                chi_e = e;
            }
        }
        if (chi_e) {
            bool first = true;
            for (const Rational& c : c_out) {
                if (first || c < chi_b) {
                    chi_b = c;
                    first = false;
                }
            }
            chi_a = 0;
            for (size_t m = 0; m < c_in.size(); m++) {
                Rational denom = rational_pow(c_in[m], *chi_e);
                if (denom == 0) {
                    continue;
                }
                Rational slope = (c_out[m] - chi_b) / denom;
                if (slope > chi_a) {
                    chi_a = slope;
                }
            }
        }
    }

    bool pass = dprime.has_value() && chi_e.has_value();
    report += "degree_dprime=" + (dprime ? std::to_string(*dprime) : std::string("none")) +
              "\n";
    if (pass) {
        report += "chi=" + rational_str(chi_a) + "*c^" + std::to_string(*chi_e) + "+" +
                  rational_str(chi_b) + "\n";
    } else {
        report += "chi=none\n";
    }
    report += std::string("verdict=") + (pass ? "pass" : "fail") + "\n";
    for (size_t m = 0; m < family.members.size(); m++) {
        report += "member=" + family.members[m].name + " c_in=" + rational_str(c_in[m]);
        if (dprime) {
            report += " c_out=" + rational_str(c_out[m]);
        }
        report += "\n";
    }
    return ProbeResult{pass, report};
}

}  // namespace closurevm
