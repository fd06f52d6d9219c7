// Native reference implementations checked against the in-language corpus:
// the K(Z,1) face operator and the monoid product construction, plus the
// seeded generators feeding their property suites.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace closurevm {

// An n-simplex of K(Z,1): a list of n integers.
struct Simplex {
    int dim = 0;
    std::vector<BigInt> entries;

    bool operator==(const Simplex&) const = default;
};

// Face operator: index 0 drops the first entry, index dim drops the last,
// an interior index i merges entries i and i+1 (1-based) into their sum.
// Throws std::invalid_argument when dim = 0 or i is out of range.
Simplex face_kz1(const Simplex& s, int i);

// (dim (entries...)) encoding shared with the in-language corpus.
Value simplex_to_value(const Simplex& s);
Simplex simplex_from_value(const Value& v);

struct MonoidOracle {
    std::string name;
    Value identity;
    std::function<Value(const Value&, const Value&)> operation;
};

MonoidOracle nplus_oracle();   // (N,+), identity 0
MonoidOracle nstar_oracle();   // (Z,*), identity 1
MonoidOracle cs_oracle();      // strings under concatenation, identity ""

// Product monoid: pairs, identity of identities, componentwise operation.
MonoidOracle monoid_product_native(MonoidOracle m1, MonoidOracle m2);

// Deterministic seeded random source; all reduction is done by rejection so
// the stream depends only on the seed.
class SeedStream {
public:
    explicit SeedStream(uint64_t seed) : engine_(seed) {}

    uint64_t below(uint64_t n);                    // uniform in [0, n)
    int64_t in_range(int64_t lo, int64_t hi);      // uniform inclusive
    BigInt integer_with_bits(uint64_t bits);       // top bit set; 0 bits = 0
    std::string lowercase(size_t length);

private:
    std::mt19937_64 engine_;
};

Simplex random_simplex(SeedStream& seeds, int max_dim, int64_t magnitude);

}  // namespace closurevm
