#include "treelift/psi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace treelift {

namespace {

int wrap(int v, int n) { return (v - 1 + n) % n + 1; }

// -R with row/column t removed, entries optionally specialized to 1.
SymbolicMatrix minor_of_neg_r(const LiftedChain& lc, int t,
                              const std::set<VarId>& ones) {
    const int m = lc.tree_count();
    std::vector<int> pos(static_cast<std::size_t>(m), -1);
    int k = 0;
    for (int s = 0; s < m; ++s)
        if (s != t) pos[static_cast<std::size_t>(s)] = k++;

    auto var_poly = [&ones](VarId v) {
        return ones.count(v) ? Poly::one() : Poly::var(v);
    };

    SymbolicMatrix out(m - 1);
    for (const Transition& tr : lc.transitions()) {
        if (tr.from == t || tr.to == t) continue;
        out.at(pos[static_cast<std::size_t>(tr.from)],
               pos[static_cast<std::size_t>(tr.to)]) = -var_poly(tr.label);
    }
    for (int s = 0; s < m; ++s) {
        if (s == t) continue;
        Poly diag;
        for (int j : lc.base().out(lc.projection(s)))
            diag += var_poly({lc.projection(s), j});
        out.at(pos[static_cast<std::size_t>(s)], pos[static_cast<std::size_t>(s)]) =
            std::move(diag);
    }
    return out;
}

}  // namespace

Poly rho(const LiftedChain& lc, int tree_index) {
    return rho(lc, tree_index, {});
}

Poly rho(const LiftedChain& lc, int tree_index, const std::set<VarId>& ones) {
    if (tree_index < 0 || tree_index >= lc.tree_count())
        throw std::out_of_range("tree index out of range");
    return det(minor_of_neg_r(lc, tree_index, ones));
}

Poly compute_psi(const LiftedChain& lc, const std::vector<int>& witnesses) {
    if (witnesses.empty())
        throw std::invalid_argument("psi needs at least one witness tree");
    std::optional<Poly> psi;
    for (int w : witnesses) {
        Poly r = rho(lc, w);
        Poly pi = Poly::term(tree_weight(lc.tree(w)), 1);
        auto q = r.exact_div(pi);
        if (!q)
            throw std::logic_error(
                "rho(t) is not divisible by pi(t); the lift is broken");
        if (psi && *psi != *q)
            throw std::logic_error("witness trees disagree about psi");
        psi = std::move(*q);
    }
    return *psi;
}

std::optional<int> FactorReport::uniform_exponent(int n, int rank) const {
    std::optional<int> e;
    for (const auto& kept : subsets_of_size(n, rank)) {
        auto it = multiplicities.find(kept);
        int m = it == multiplicities.end() ? 0 : it->second;
        if (e && *e != m) return std::nullopt;
        e = m;
    }
    return e;
}

FactorReport factor_into_minors_ordered(
    const Poly& psi, const RateGraph& g,
    const std::vector<std::vector<int>>& kept_order) {
    if (psi.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    const int n = g.vertex_count();
    SymbolicMatrix q = rate_matrix(g);

    FactorReport report;
    report.psi_degree = psi.degree();
    report.psi_leading_coeff = psi.leading_term().coeff;
    report.residual = psi;

    for (const auto& kept : kept_order) {
        std::set<int> removed;
        for (int v = 1; v <= n; ++v) removed.insert(v);
        for (int v : kept) removed.erase(v);
        Poly minor = symmetric_minor(q, removed);
        if (minor.degree() < 1) continue;  // degenerate minor, nothing to extract
        int mult = 0;
        while (true) {
            auto quotient = report.residual.exact_div(minor);
            if (!quotient) break;
            report.residual = std::move(*quotient);
            ++mult;
        }
        if (mult > 0) report.multiplicities[kept] = mult;
    }
    return report;
}

FactorReport factor_into_minors(const Poly& psi, const RateGraph& g) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> order;
    for (int rank = n - 1; rank >= 1; --rank)
        for (auto& kept : subsets_of_size(n, rank)) order.push_back(std::move(kept));
    return factor_into_minors_ordered(psi, g, order);
}

PitResult pit_verify(const LiftedChain& lc, const std::map<int, long long>& claim,
                     const PitOptions& opts) {
    if (opts.trials < 1) throw std::invalid_argument("trial count must be positive");
    if (!modp::is_prime(opts.prime) || opts.prime <= (1ull << 60))
        throw std::invalid_argument("modulus must be a prime above 2^60");
    const RateGraph& g = lc.base();
    const int n = g.vertex_count();
    const int m = lc.tree_count();
    const std::uint64_t p = opts.prime;
    for (const auto& [rank, exp] : claim) {
        if (rank < 1 || rank >= n)
            throw std::out_of_range("claimed minor rank out of range");
        if (exp < 0) throw std::invalid_argument("claimed exponent must be >= 0");
    }

    const Monomial pi_w = tree_weight(lc.tree(opts.witness));

    PitResult result;
    result.trials = opts.trials;
    result.prime = p;
    result.seed = opts.seed;
    const int deg_psi = m - n;
    result.error_bound =
        std::pow(static_cast<double>(deg_psi) / static_cast<double>(p),
                 static_cast<double>(opts.trials));

    for (int trial = 0; trial < opts.trials; ++trial) {
        std::mt19937_64 rng(modp::splitmix64(
            opts.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(trial + 1))));

        std::map<VarId, std::uint64_t> assignment;
        std::uint64_t pi_val = 0;
        while (true) {
            assignment.clear();
            for (const VarId& e : g.edges())
                assignment[e] = modp::uniform_nonzero(rng, p);
            pi_val = 1;
            for (const auto& [v, e] : pi_w.entries())
                pi_val = modp::mul(pi_val, modp::pow(assignment[v], e, p), p);
            if (pi_val != 0) break;
            ++result.redraws;  // unreachable with nonzero draws; kept as a guard
        }

        // left side: det(-R^(w)) / pi(w) evaluated
        modp::ModMatrix neg_r(m - 1);
        {
            std::vector<int> pos(static_cast<std::size_t>(m), -1);
            int k = 0;
            for (int s = 0; s < m; ++s)
                if (s != opts.witness) pos[static_cast<std::size_t>(s)] = k++;
            for (const Transition& tr : lc.transitions()) {
                if (tr.from == opts.witness || tr.to == opts.witness) continue;
                neg_r.at(pos[static_cast<std::size_t>(tr.from)],
                         pos[static_cast<std::size_t>(tr.to)]) =
                    (p - assignment[tr.label]) % p;
            }
            for (int s = 0; s < m; ++s) {
                if (s == opts.witness) continue;
                std::uint64_t diag = 0;
                for (int j : g.out(lc.projection(s)))
                    diag = modp::add(diag, assignment[VarId{lc.projection(s), j}], p);
                neg_r.at(pos[static_cast<std::size_t>(s)],
                         pos[static_cast<std::size_t>(s)]) = diag;
            }
        }
        const std::uint64_t lhs =
            modp::mul(modp::det_mod(std::move(neg_r), p), modp::inv(pi_val, p), p);

        // right side: product of evaluated symmetric minors per the claim
        std::uint64_t rhs = 1;
        for (const auto& [rank, exp] : claim) {
            if (exp == 0) continue;
            for (const auto& kept : subsets_of_size(n, rank)) {
                modp::ModMatrix neg_q(rank);
                for (int a = 0; a < rank; ++a) {
                    const int i = kept[static_cast<std::size_t>(a)];
                    std::uint64_t diag = 0;
                    for (int j : g.out(i))
                        diag = modp::add(diag, assignment[VarId{i, j}], p);
                    neg_q.at(a, a) = diag;
                    for (int b = 0; b < rank; ++b) {
                        const int j = kept[static_cast<std::size_t>(b)];
                        if (i != j && g.has_edge(i, j))
                            neg_q.at(a, b) = (p - assignment[VarId{i, j}]) % p;
                    }
                }
                const std::uint64_t minor_val = modp::det_mod(std::move(neg_q), p);
                rhs = modp::mul(
                    rhs, modp::pow(minor_val, static_cast<std::uint64_t>(exp), p), p);
            }
        }

        if (lhs != rhs) {
            if (result.failures == 0) result.failing_assignment = assignment;
            ++result.failures;
        }
    }
    return result;
}

long long chapuy_exponent(int n, int k) {
    if (k < 2 || k > n - 1)
        throw std::out_of_range("exponent formula needs 2 <= k <= n-1");
    long long acc = k - 1;
    for (int e = 0; e < n - k - 1; ++e) acc *= n - 1;
    return acc;
}

std::map<int, long long> chapuy_claim(int n) {
    std::map<int, long long> claim;
    for (int k = 2; k <= n - 1; ++k) claim[k] = chapuy_exponent(n, k);
    return claim;
}

bool degree_identity_check(int n) {
    if (n < 3) throw std::invalid_argument("identity needs n >= 3");
    mpz_class sum = 0;
    for (int k = 2; k <= n - 1; ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n),
                     static_cast<unsigned long>(k));
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n - 1),
                      static_cast<unsigned long>(n - k - 1));
        sum += binom * k * (k - 1) * pw;
    }
    mpz_class rhs;
    mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(n - 1));
    rhs -= n;
    return sum == rhs;
}

bool distinguished_monomial_check(const LiftedChain& lc) {
    const RateGraph& g = lc.base();
    auto idx = ring_tree_index(lc);  // throws unless the base is a ring
    const int n = g.vertex_count();
    const int t_nn = idx[{n, n}];

    // the distinguished monomial q_{n,1}^{n-1} prod_{i<n} q_{i,i+1}^n
    std::vector<Monomial::Entry> entries;
    entries.emplace_back(VarId{n, 1}, static_cast<std::uint32_t>(n - 1));
    for (int i = 1; i < n; ++i)
        entries.emplace_back(VarId{i, i + 1}, static_cast<std::uint32_t>(n));
    const Monomial target = Monomial::from_entries(std::move(entries));

    if (rho(lc, t_nn).coefficient_of(target) != 1) return false;

    // the ascending-labelled transitions minus the one leaving [n,n]
    // must form a covering tree of T rooted at [n,n]
    const int m = lc.tree_count();
    std::vector<int> chosen_to(static_cast<std::size_t>(m), -1);
    std::map<VarId, int> label_count;
    for (const Transition& tr : lc.transitions()) {
        const int i = lc.projection(tr.from);
        if (tr.label != VarId{i, wrap(i + 1, n)}) continue;
        ++label_count[tr.label];
        if (tr.from == t_nn) continue;
        if (chosen_to[static_cast<std::size_t>(tr.from)] != -1)
            return false;  // two ascending edges out of one tree
        chosen_to[static_cast<std::size_t>(tr.from)] = tr.to;
    }
    for (int i = 1; i <= n; ++i)
        if (label_count[VarId{i, wrap(i + 1, n)}] != n)
            return false;  // each ascending label occurs n times in T
    for (int s = 0; s < m; ++s) {
        if (s == t_nn) continue;
        int cur = s;
        for (int steps = 0; cur != t_nn; ++steps) {
            if (steps > m || cur < 0) return false;
            cur = chosen_to[static_cast<std::size_t>(cur)];
        }
    }

    // and the matching coefficient in pi([n,n]) * m_{n-1}(Q) is also 1
    const Poly product =
        Poly::term(tree_weight(lc.tree(t_nn)), 1) * m_k(rate_matrix(g), n - 1);
    return product.coefficient_of(target) == 1;
}

}  // namespace treelift
