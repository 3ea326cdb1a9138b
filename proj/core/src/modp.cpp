#include "treelift/modp.hpp"

#include <stdexcept>

namespace treelift::modp {

std::uint64_t pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t acc = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) acc = mul(acc, base, p);
        base = mul(base, base, p);
        exp >>= 1;
    }
    return acc;
}

std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw std::domain_error("inverse of zero residue");
    return pow(a, p - 2, p);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // these witnesses decide primality for all n < 3.3e24
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mul(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::uint64_t det_mod(ModMatrix m, std::uint64_t p) {
    const int n = m.dim;
    if (n == 0) return 1 % p;
    std::uint64_t det = 1 % p;
    bool flip = false;
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int i = k; i < n; ++i) {
            if (m.at(i, k) % p != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) return 0;
        if (pivot != k) {
            for (int j = k; j < n; ++j) std::swap(m.at(pivot, j), m.at(k, j));
            flip = !flip;
        }
        const std::uint64_t pk = m.at(k, k) % p;
        det = mul(det, pk, p);
        const std::uint64_t pk_inv = inv(pk, p);
        for (int i = k + 1; i < n; ++i) {
            const std::uint64_t f = mul(m.at(i, k) % p, pk_inv, p);
            if (f == 0) continue;
            for (int j = k; j < n; ++j)
                m.at(i, j) = sub(m.at(i, j) % p, mul(f, m.at(k, j) % p, p), p);
        }
    }
    return flip ? (p - det) % p : det;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace treelift::modp
