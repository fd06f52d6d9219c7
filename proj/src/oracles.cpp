#include "oracles.hpp"

#include <stdexcept>

namespace closurevm {

Simplex face_kz1(const Simplex& s, int i) {
    if (s.dim < 1) {
        throw std::invalid_argument("face_kz1: 0-simplex has no faces");
    }
    if (static_cast<int>(s.entries.size()) != s.dim) {
        throw std::invalid_argument("face_kz1: entry count does not match dimension");
    }
    if (i < 0 || i > s.dim) {
        throw std::invalid_argument("face_kz1: face index out of range");
    }
    Simplex out;
    out.dim = s.dim - 1;
    if (i == 0) {
        out.entries.assign(s.entries.begin() + 1, s.entries.end());
    } else if (i == s.dim) {
        out.entries.assign(s.entries.begin(), s.entries.end() - 1);
    } else {
        out.entries.assign(s.entries.begin(), s.entries.begin() + (i - 1));
        out.entries.push_back(s.entries[i - 1] + s.entries[i]);
        out.entries.insert(out.entries.end(), s.entries.begin() + (i + 1), s.entries.end());
    }
    return out;
}

Value simplex_to_value(const Simplex& s) {
    std::vector<Value> entries;
    entries.reserve(s.entries.size());
    for (const BigInt& e : s.entries) {
        entries.push_back(Value::integer(e));
    }
    std::vector<Value> pair;
    pair.push_back(Value::integer(BigInt(s.dim)));
    pair.push_back(Value::list(list_from_vector(entries)));
    return Value::list(list_from_vector(pair));
}

Simplex simplex_from_value(const Value& v) {
    std::vector<Value> pair = list_to_vector(v.is_list() ? v.as_list() : nullptr);
    if (pair.size() != 2 || !pair[0].is_integer() || !pair[1].is_list()) {
        throw std::invalid_argument("simplex_from_value: expected (dim (entries...))");
    }
    Simplex s;
    s.dim = static_cast<int>(pair[0].as_integer());
    for (const Value& e : list_to_vector(pair[1].as_list())) {
        if (!e.is_integer()) {
            throw std::invalid_argument("simplex_from_value: entry is not an integer");
        }
        s.entries.push_back(e.as_integer());
    }
    if (static_cast<int>(s.entries.size()) != s.dim) {
        throw std::invalid_argument("simplex_from_value: entry count does not match dim");
    }
    return s;
}

MonoidOracle nplus_oracle() {
    return {"N+", Value::integer(0), [](const Value& a, const Value& b) {
                return Value::integer(a.as_integer() + b.as_integer());
            }};
}

MonoidOracle nstar_oracle() {
    return {"N*", Value::integer(1), [](const Value& a, const Value& b) {
                return Value::integer(a.as_integer() * b.as_integer());
            }};
}

MonoidOracle cs_oracle() {
    return {"CS", Value::str(""), [](const Value& a, const Value& b) {
                return Value::str(a.as_str() + b.as_str());
            }};
}

MonoidOracle monoid_product_native(MonoidOracle m1, MonoidOracle m2) {
    MonoidOracle out;
    out.name = m1.name + "x" + m2.name;
    std::vector<Value> id{m1.identity, m2.identity};
    out.identity = Value::list(list_from_vector(id));
    out.operation = [op1 = m1.operation, op2 = m2.operation, name = out.name](
                        const Value& a, const Value& b) {
        std::vector<Value> pa = list_to_vector(a.is_list() ? a.as_list() : nullptr);
        std::vector<Value> pb = list_to_vector(b.is_list() ? b.as_list() : nullptr);
        if (pa.size() != 2 || pb.size() != 2) {
            throw std::invalid_argument(name + ": element is not a pair");
        }
        std::vector<Value> result{op1(pa[0], pb[0]), op2(pa[1], pb[1])};
        return Value::list(list_from_vector(result));
    };
    return out;
}

uint64_t SeedStream::below(uint64_t n) {
    if (n == 0) {
        return 0;
    }
    // rejection sampling keeps the stream implementation-independent
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return draw % n;
}

int64_t SeedStream::in_range(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(below(span));
}

BigInt SeedStream::integer_with_bits(uint64_t bits) {
    if (bits == 0) {
        return 0;
    }
    BigInt out = 1;
    for (uint64_t k = 1; k < bits; k++) {
        out <<= 1;
        out += static_cast<int>(below(2));
    }
    return out;
}

std::string SeedStream::lowercase(size_t length) {
    std::string out;
    out.reserve(length);
    for (size_t k = 0; k < length; k++) {
        out += static_cast<char>('a' + below(26));
    }
    return out;
}

Simplex random_simplex(SeedStream& seeds, int max_dim, int64_t magnitude) {
    Simplex s;
    s.dim = static_cast<int>(seeds.in_range(1, max_dim));
    s.entries.reserve(s.dim);
    for (int k = 0; k < s.dim; k++) {
        s.entries.push_back(BigInt(seeds.in_range(-magnitude, magnitude)));
    }
    return s;
}

}  // namespace closurevm
