#pragma once

#include <cstdint>
#include <vector>

namespace treelift::modp {

// 61-bit Mersenne prime 2^61 - 1; residue products fit in 128 bits.
inline constexpr std::uint64_t kDefaultPrime = (1ull << 61) - 1;

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    if (s >= p || s < a) s -= p;
    return s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

std::uint64_t pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
std::uint64_t inv(std::uint64_t a, std::uint64_t p);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

// Dense square matrix over Z/p, row-major.
struct ModMatrix {
    int dim = 0;
    std::vector<std::uint64_t> a;

    explicit ModMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d, 0) {}
    std::uint64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    std::uint64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
};

// Gaussian elimination determinant mod p.
std::uint64_t det_mod(ModMatrix m, std::uint64_t p);

// SplitMix64; used to derive per-trial seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic uniform draw in [1, p-1] by rejection from a 64-bit
// generator (any callable returning uint64_t).
template <typename Gen>
std::uint64_t uniform_nonzero(Gen& gen, std::uint64_t p) {
    const std::uint64_t limit = p * (~0ull / p);  // largest multiple of p
    while (true) {
        std::uint64_t r = gen();
        if (r >= limit) continue;
        r %= p;
        if (r != 0) return r;
    }
}

}  // namespace treelift::modp
