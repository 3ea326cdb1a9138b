#pragma once

#include <map>
#include <utility>
#include <vector>

#include "treelift/arborescence.hpp"
#include "treelift/graph.hpp"

namespace treelift {

// One transition of the lifted chain: tree `from` hands the token to tree
// `to` and the rate is the base-graph variable `label`.
struct Transition {
    int from = 0;
    int to = 0;
    VarId label;

    auto operator<=>(const Transition&) const = default;
};

// Markov chain on the covering rooted trees of a base graph. Trees are
// indexed by root ascending, then lexicographically on their out-edge
// maps; `projection` sends a tree index to its root.
class LiftedChain {
public:
    explicit LiftedChain(RateGraph base);

    const RateGraph& base() const { return base_; }
    int tree_count() const { return static_cast<int>(trees_.size()); }
    const std::vector<Arborescence>& trees() const { return trees_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    int projection(int tree_index) const;
    const Arborescence& tree(int tree_index) const;
    int index_of(const Arborescence& t) const;  // -1 if absent

    // Tree weights pi(t), in index order.
    std::vector<Monomial> weights() const;

    LabeledDigraph transition_digraph() const;

private:
    RateGraph base_;
    std::vector<Arborescence> trees_;
    std::vector<Transition> transitions_;
    std::vector<int> projection_;
    std::map<std::vector<int>, int> index_;
};

// Builds the lift: for a tree s rooted at i and a base edge (i,j), remove
// the out-edge of j from s and add (i,j); the result is a tree rooted at j
// and the transition carries label q_{ij}. Throws when g is reducible.
LiftedChain build_lift(const RateGraph& g);

// Symbolic transition matrix R of the lifted chain: off-diagonal (s,t) is
// the transition label, the diagonal is minus the row sum (and equals the
// diagonal entry of Q at the root of s).
SymbolicMatrix r_matrix(const LiftedChain& lc);

// True iff the row vector (pi(t))_t times R vanishes as exact polynomials.
bool pi_invariance_check(const LiftedChain& lc);

// Strong connectivity of the transition digraph.
bool lift_irreducibility_check(const LiftedChain& lc);

// Ring-specific indexing: [i,j] is the unique covering tree rooted at i
// with no edge in either direction between j and j+1. Throws when the
// base graph is not a ring.
std::map<std::pair<int, int>, int> ring_tree_index(const LiftedChain& lc);

// Verifies the full transition structure of a lifted ring: the two
// opposite oriented rings [i,i] -> [i+1,i+1] (label q_{i,i+1}) and
// [i,i-1] -> [i-1,i-2] (label q_{i,i-1}), plus doubly-linked lines
// [i,j] <-> [i+1,j] for j != i.
bool ring_structure_check(const LiftedChain& lc);

// Restriction-of-lift lemma: for both vertex sets
//   G = {[1,n], [2,1], ..., [n,1], [1,1]} and
//   H = {[1,n], [2,n], ..., [n,n], [1,1]}
// the generating polynomial of covering forests of the induced transition
// subgraph rooted at {[1,n], [1,1]} equals det(-Q^(1)).
bool lemma_forest_check(const LiftedChain& lc);

// Weight-preserving projection of forests of G onto covering trees of the
// base graph rooted at 1; exposed for the bijection test.
struct InducedSubgraph {
    std::vector<int> vertices;  // tree indices, in LiftedChain order
    LabeledDigraph graph;       // relabelled to 0..vertices.size()-1
};
InducedSubgraph induced_transition_subgraph(const LiftedChain& lc,
                                            const std::vector<int>& tree_indices);

}  // namespace treelift
