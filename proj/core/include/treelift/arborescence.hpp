#pragma once

#include <set>
#include <vector>

#include "treelift/graph.hpp"
#include "treelift/poly.hpp"

namespace treelift {

// Covering tree of a graph rooted at `root`: every non-root vertex has one
// outgoing edge and a unique oriented path to the root. to[v] is the edge
// target for vertex v, 0 for the root (index 0 unused).
struct Arborescence {
    int root = 0;
    std::vector<int> to;

    bool operator==(const Arborescence&) const = default;
};

// Covering forest rooted at a vertex set; every non-root vertex has one
// outgoing edge and reaches exactly one root.
struct Forest {
    std::vector<int> roots;
    std::vector<int> to;
};

// Generic labelled digraph on vertices 0..vertex_count-1. Used both for
// base graphs and for the transition graph of a lifted chain, where
// several edges may carry the same label.
struct LabeledDigraph {
    struct Edge {
        int to = 0;
        VarId label;
    };
    int vertex_count = 0;
    std::vector<std::vector<Edge>> out;  // each list sorted by target
};

LabeledDigraph to_digraph(const RateGraph& g);

// All ways to give each non-root vertex one of its out-edges without
// creating a cycle. choice[v] is an index into out[v], -1 for roots.
// Deterministic: vertices are processed ascending and edge choices
// ascending, so results come out in lexicographic order.
std::vector<std::vector<int>> enumerate_functional_forests(
    const LabeledDigraph& g, const std::vector<char>& is_root);

Monomial choice_weight(const LabeledDigraph& g, const std::vector<int>& choice);

// True when the choice map is a covering tree of g rooted at root.
bool is_arborescence_choice(const LabeledDigraph& g, int root,
                            const std::vector<int>& choice);

// All covering trees of g rooted at root, each exactly once, in
// lexicographic order of their out-edge maps.
std::vector<Arborescence> enumerate_arborescences(const RateGraph& g, int root);

// Product of the edge variables of the tree.
Monomial tree_weight(const Arborescence& t);

std::vector<Forest> enumerate_forests(const RateGraph& g, const std::set<int>& roots);
Monomial forest_weight(const Forest& f);

// Sum of tree weights over all covering trees rooted at root; equals the
// symmetric minor of the rate matrix at {root}.
Poly kirchhoff_sum(const RateGraph& g, int root);

// Generating polynomial of covering forests rooted at the given set.
Poly forest_sum(const RateGraph& g, const std::set<int>& roots);

}  // namespace treelift
