#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "treelift/lift.hpp"
#include "treelift/modp.hpp"

namespace treelift {

// First minor of the lifted chain: det(-R^(t)) with row and column t
// removed. Generating polynomial of the covering trees of T rooted at t.
Poly rho(const LiftedChain& lc, int tree_index);
// Variant with selected variables specialized to 1 before elimination.
Poly rho(const LiftedChain& lc, int tree_index, const std::set<VarId>& ones);

// The common quotient rho(t) / pi(t). Every witness must yield the same
// polynomial quotient; anything else signals a bug and throws.
Poly compute_psi(const LiftedChain& lc, const std::vector<int>& witnesses);

// Outcome of dividing psi by powers of the symmetric minors of -Q.
// Subsets are the KEPT vertex sets of each minor, ascending.
struct FactorReport {
    std::map<std::vector<int>, int> multiplicities;  // only positive entries
    Poly residual;
    mpz_class psi_leading_coeff;
    int psi_degree = 0;

    bool clean() const { return residual.is_one(); }
    // exponent shared by every minor of the given rank, or nullopt when
    // the ranks' subsets disagree
    std::optional<int> uniform_exponent(int n, int rank) const;
};

// Extracts the maximal power of every proper symmetric minor from psi,
// rank descending then kept-subset lex ascending. Multiplicities are
// order-independent (unique factorization); the order only fixes the
// iteration.
FactorReport factor_into_minors(const Poly& psi, const RateGraph& g);
// Same computation over an explicit extraction order of kept subsets.
FactorReport factor_into_minors_ordered(const Poly& psi, const RateGraph& g,
                                        const std::vector<std::vector<int>>& kept_order);

struct PitOptions {
    int trials = 20;
    std::uint64_t prime = modp::kDefaultPrime;
    std::uint64_t seed = 0;
    int witness = 0;  // tree index used for rho/pi
};

struct PitResult {
    int trials = 0;
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;
    int failures = 0;
    int redraws = 0;
    bool verified() const { return failures == 0; }
    // first failing assignment, when any trial mismatched
    std::map<VarId, std::uint64_t> failing_assignment;
    // per-run Schwartz-Zippel bound: (deg psi / prime)^trials
    double error_bound = 0.0;
};

// Probabilistic check of psi = prod_k m_k^claim[k] by evaluating both
// sides at independent uniform nonzero assignments mod prime. The left
// side is det(-R^(w)) / pi(w) computed numerically; assignments that
// zero the denominator are redrawn and never counted as a verdict.
PitResult pit_verify(const LiftedChain& lc, const std::map<int, long long>& claim,
                     const PitOptions& opts);

// Conjectured exponent of m_k for the complete graph on n vertices.
long long chapuy_exponent(int n, int k);
std::map<int, long long> chapuy_claim(int n);

// Exact-integer check of
//   sum_{k=2}^{n-1} C(n,k) k (k-1) (n-1)^{n-k-1} = n^{n-1} - n.
bool degree_identity_check(int n);

// Ring-only check that the coefficient of
//   q_{n,1}^{n-1} * prod_{i<n} q_{i,i+1}^{n}
// in rho([n,n]) is exactly 1, that the edge set of all ascending-labelled
// transitions minus the one leaving [n,n] is a covering tree of T rooted
// at [n,n], and that the same coefficient in pi([n,n]) * m_{n-1}(Q) is 1.
bool distinguished_monomial_check(const LiftedChain& lc);

}  // namespace treelift
