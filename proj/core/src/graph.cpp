#include "treelift/graph.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace treelift {

RateGraph::RateGraph(int n, std::vector<VarId> edges)
    : n_(n), edges_(std::move(edges)), out_(static_cast<std::size_t>(n) + 1) {
    std::sort(edges_.begin(), edges_.end());
    for (const VarId& e : edges_)
        out_[static_cast<std::size_t>(e.source)].push_back(e.target);
}

RateGraph RateGraph::ring(int n) {
    if (n < 3) throw std::invalid_argument("ring needs at least 3 vertices");
    std::vector<VarId> es;
    for (int i = 1; i <= n; ++i) {
        es.push_back({i, i % n + 1});
        es.push_back({i, (i + n - 2) % n + 1});
    }
    return RateGraph(n, std::move(es));
}

RateGraph RateGraph::complete(int n) {
    if (n < 2) throw std::invalid_argument("complete graph needs at least 2 vertices");
    std::vector<VarId> es;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j) es.push_back({i, j});
    return RateGraph(n, std::move(es));
}

RateGraph RateGraph::from_edges(int n, const std::vector<std::pair<int, int>>& pairs) {
    if (n < 1) throw std::invalid_argument("vertex count must be positive");
    std::set<std::pair<int, int>> seen;
    std::vector<VarId> es;
    for (auto [i, j] : pairs) {
        if (i < 1 || i > n || j < 1 || j > n)
            throw std::invalid_argument("edge endpoint out of range: " +
                                        std::to_string(i) + " " + std::to_string(j));
        if (i == j)
            throw std::invalid_argument("loop edge at vertex " + std::to_string(i));
        if (!seen.insert({i, j}).second)
            throw std::invalid_argument("duplicate edge " + std::to_string(i) +
                                        " -> " + std::to_string(j));
        es.push_back({i, j});
    }
    return RateGraph(n, std::move(es));
}

RateGraph RateGraph::load(std::istream& in) {
    int n = 0;
    if (!(in >> n)) throw std::invalid_argument("graph file: missing vertex count");
    std::vector<std::pair<int, int>> pairs;
    int i, j;
    while (in >> i >> j) pairs.emplace_back(i, j);
    return from_edges(n, pairs);
}

bool RateGraph::has_edge(int i, int j) const {
    const auto& o = out_[static_cast<std::size_t>(i)];
    return std::binary_search(o.begin(), o.end(), j);
}

bool RateGraph::irreducible() const {
    if (n_ == 0) return false;
    for (int s = 1; s <= n_; ++s) {
        std::vector<char> seen(static_cast<std::size_t>(n_) + 1, 0);
        std::vector<int> stack{s};
        seen[static_cast<std::size_t>(s)] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : out(v)) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        if (count != n_) return false;
    }
    return true;
}

std::string RateGraph::describe() const {
    // recognize the generated families for friendlier reports
    bool is_complete = edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1);
    if (is_complete) return "complete n=" + std::to_string(n_);
    if (n_ >= 3) {
        bool is_ring = true;
        for (int i = 1; i <= n_ && is_ring; ++i) {
            int up = i % n_ + 1;
            int down = (i + n_ - 2) % n_ + 1;
            if (!has_edge(i, up) || !has_edge(i, down)) is_ring = false;
        }
        if (is_ring && edges_.size() == static_cast<std::size_t>(2) * n_)
            return "ring n=" + std::to_string(n_);
    }
    return "custom n=" + std::to_string(n_) + " (" +
           std::to_string(edges_.size()) + " edges)";
}

SymbolicMatrix SymbolicMatrix::negated() const {
    SymbolicMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) out.at(i, j) = -at(i, j);
    return out;
}

SymbolicMatrix SymbolicMatrix::submatrix(const std::vector<int>& keep) const {
    SymbolicMatrix out(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            out.at(static_cast<int>(i), static_cast<int>(j)) =
                at(keep[i], keep[j]);
    return out;
}

SymbolicMatrix SymbolicMatrix::assign_one(const std::set<VarId>& vars) const {
    SymbolicMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) out.at(i, j) = at(i, j).assign_one(vars);
    return out;
}

SymbolicMatrix rate_matrix(const RateGraph& g) {
    const int n = g.vertex_count();
    SymbolicMatrix q(n);
    for (int i = 1; i <= n; ++i) {
        Poly diag;
        for (int j : g.out(i)) {
            Poly v = Poly::var({i, j});
            q.at(i - 1, j - 1) = v;
            diag -= v;
        }
        q.at(i - 1, i - 1) = std::move(diag);
    }
    return q;
}

Poly cofactor_det(const SymbolicMatrix& m) {
    const int n = m.dim();
    if (n == 0) return Poly::one();
    if (n == 1) return m.at(0, 0);
    if (n == 2) return det2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1));
    Poly acc;
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        if (m.at(i, 0).is_zero()) continue;
        keep.clear();
        for (int r = 0; r < n; ++r)
            if (r != i) keep.push_back(r);
        SymbolicMatrix sub(n - 1);
        for (int r = 0; r < n - 1; ++r)
            for (int c = 0; c < n - 1; ++c) sub.at(r, c) = m.at(keep[r], c + 1);
        Poly cof = m.at(i, 0) * cofactor_det(sub);
        if (i % 2 == 0)
            acc += cof;
        else
            acc -= cof;
    }
    return acc;
}

Poly bareiss_det(const SymbolicMatrix& m) {
    const int n = m.dim();
    if (n == 0) return Poly::one();
    std::vector<std::vector<Poly>> a(static_cast<std::size_t>(n),
                                     std::vector<Poly>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m.at(i, j);

    bool flip = false;
    Poly prev = Poly::one();
    for (int k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            int r = -1;
            for (int i = k + 1; i < n; ++i) {
                if (!a[i][k].is_zero()) {
                    r = i;
                    break;
                }
            }
            if (r < 0) return Poly();  // zero column, singular
            std::swap(a[k], a[r]);
            flip = !flip;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Poly num = det2(a[k][k], a[k][j], a[i][k], a[i][j]);
                auto q = num.exact_div(prev);
                if (!q)
                    throw std::logic_error(
                        "fraction-free elimination produced an inexact division");
                a[i][j] = std::move(*q);
            }
            a[i][k] = Poly();
        }
        prev = a[k][k];
    }
    return flip ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

Poly det(const SymbolicMatrix& m) {
    // measured crossover; both engines are exact
    return m.dim() <= 4 ? cofactor_det(m) : bareiss_det(m);
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

Poly symmetric_minor(const SymbolicMatrix& q, const std::set<int>& removed) {
    const int n = q.dim();
    if (removed.empty()) throw std::invalid_argument("no rows/columns removed");
    if (static_cast<int>(removed.size()) >= n)
        throw std::invalid_argument("symmetric minor with empty complement");
    for (int v : removed)
        if (v < 1 || v > n)
            throw std::invalid_argument("removed vertex out of range");
    std::vector<int> keep;
    for (int v = 1; v <= n; ++v)
        if (!removed.count(v)) keep.push_back(v - 1);
    return det(q.negated().submatrix(keep));
}

Poly m_k(const SymbolicMatrix& q, int k) {
    const int n = q.dim();
    if (k < 1 || k >= n)
        throw std::out_of_range("minor rank must satisfy 1 <= k <= n-1");
    Poly prod = Poly::one();
    for (const auto& kept : subsets_of_size(n, k)) {
        std::set<int> removed;
        for (int v = 1; v <= n; ++v) removed.insert(v);
        for (int v : kept) removed.erase(v);
        prod *= symmetric_minor(q, removed);
    }
    return prod;
}

bool invariant_measure_check(const RateGraph& g) {
    if (!g.irreducible())
        throw std::domain_error("invariant measure check needs an irreducible graph");
    const int n = g.vertex_count();
    SymbolicMatrix q = rate_matrix(g);
    std::vector<Poly> mu;
    mu.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) mu.push_back(symmetric_minor(q, {i}));
    for (int j = 0; j < n; ++j) {
        Poly col;
        for (int i = 0; i < n; ++i)
            col += mu[static_cast<std::size_t>(i)] * q.at(i, j);
        if (!col.is_zero()) return false;
    }
    return true;
}

}  // namespace treelift
