#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "treelift/poly.hpp"

namespace treelift {

// Finite directed graph on vertices 1..n with one symbolic variable per
// edge. No loops, no multiple edges.
class RateGraph {
public:
    static RateGraph ring(int n);      // edges (i, i±1 mod n), n >= 3
    static RateGraph complete(int n);  // all ordered pairs, n >= 2
    static RateGraph from_edges(int n, const std::vector<std::pair<int, int>>& pairs);
    // Text format: first line n, then one "i j" pair per line.
    static RateGraph load(std::istream& in);

    int vertex_count() const { return n_; }
    const std::vector<VarId>& edges() const { return edges_; }
    bool has_edge(int i, int j) const;
    // Out-neighbours of i, ascending.
    const std::vector<int>& out(int i) const { return out_[static_cast<std::size_t>(i)]; }
    bool irreducible() const;

    std::string describe() const;  // "ring n=4" / "complete n=3" / "custom n=5 (12 edges)"

private:
    RateGraph(int n, std::vector<VarId> edges);

    int n_ = 0;
    std::vector<VarId> edges_;            // sorted by (source, target)
    std::vector<std::vector<int>> out_;   // 1-based index
};

// Dense square matrix of polynomials.
class SymbolicMatrix {
public:
    explicit SymbolicMatrix(int dim)
        : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim) {}

    int dim() const { return dim_; }
    Poly& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
    const Poly& at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * dim_ + j];
    }

    SymbolicMatrix negated() const;
    // Keeps the listed rows/columns (0-based), in the given order.
    SymbolicMatrix submatrix(const std::vector<int>& keep) const;
    SymbolicMatrix assign_one(const std::set<VarId>& vars) const;

private:
    int dim_;
    std::vector<Poly> entries_;
};

// Symbolic rate matrix Q of a graph: off-diagonal (i,j) is q_{ij} when the
// edge exists, each diagonal entry is minus the sum of its row, so every
// row sums to zero.
SymbolicMatrix rate_matrix(const RateGraph& g);

// Exact determinant engines. det() expands small matrices by cofactors and
// switches to fraction-free elimination above dim 4; both are exposed so
// they can be cross-checked against each other.
Poly det(const SymbolicMatrix& m);
Poly bareiss_det(const SymbolicMatrix& m);
Poly cofactor_det(const SymbolicMatrix& m);

// det(-Q) with the rows and columns in `removed` (1-based vertices)
// deleted. Throws when removed is empty or covers every vertex.
Poly symmetric_minor(const SymbolicMatrix& q, const std::set<int>& removed);

// Product of all symmetric minors of rank k of -Q, 1 <= k <= n-1.
Poly m_k(const SymbolicMatrix& q, int k);

// Checks sum_i mu(i) q_{ij} = 0 for every column j, with
// mu(i) = det(-Q^(i)). Throws when g is not irreducible.
bool invariant_measure_check(const RateGraph& g);

// All size-k subsets of {1..n} in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(int n, int k);

}  // namespace treelift
