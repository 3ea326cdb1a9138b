#include "treelift/arborescence.hpp"

#include <algorithm>
#include <stdexcept>

namespace treelift {

LabeledDigraph to_digraph(const RateGraph& g) {
    LabeledDigraph d;
    d.vertex_count = g.vertex_count();
    d.out.resize(static_cast<std::size_t>(d.vertex_count));
    for (int i = 1; i <= g.vertex_count(); ++i)
        for (int j : g.out(i))
            d.out[static_cast<std::size_t>(i - 1)].push_back({j - 1, VarId{i, j}});
    return d;
}

namespace {

// Union-find over out-edge chains: find() walks to the end of the chain of
// assigned edges. No path compression, so a backtracking step only has to
// reset its own slot.
struct ChainFind {
    std::vector<int> next;

    explicit ChainFind(int n) : next(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] = i;
    }
    int find(int v) const {
        while (next[static_cast<std::size_t>(v)] != v)
            v = next[static_cast<std::size_t>(v)];
        return v;
    }
};

}  // namespace

std::vector<std::vector<int>> enumerate_functional_forests(
    const LabeledDigraph& g, const std::vector<char>& is_root) {
    const int n = g.vertex_count;
    std::vector<int> pending;
    for (int v = 0; v < n; ++v)
        if (!is_root[static_cast<std::size_t>(v)]) pending.push_back(v);

    std::vector<std::vector<int>> results;
    std::vector<int> choice(static_cast<std::size_t>(n), -1);
    ChainFind chains(n);

    // depth-first over pending vertices in ascending order
    std::vector<std::size_t> edge_idx(pending.size(), 0);
    std::size_t depth = 0;
    while (true) {
        if (depth == pending.size()) {
            results.push_back(choice);
            if (depth == 0) break;
            --depth;
            int v = pending[depth];
            chains.next[static_cast<std::size_t>(v)] = v;
            choice[static_cast<std::size_t>(v)] = -1;
            ++edge_idx[depth];
            continue;
        }
        int v = pending[depth];
        const auto& edges = g.out[static_cast<std::size_t>(v)];
        bool advanced = false;
        while (edge_idx[depth] < edges.size()) {
            int w = edges[edge_idx[depth]].to;
            int end = chains.find(w);
            if (end != v) {
                chains.next[static_cast<std::size_t>(v)] = end;
                choice[static_cast<std::size_t>(v)] =
                    static_cast<int>(edge_idx[depth]);
                ++depth;
                if (depth < pending.size()) edge_idx[depth] = 0;
                advanced = true;
                break;
            }
            ++edge_idx[depth];
        }
        if (advanced) continue;
        if (depth == 0) break;
        --depth;
        int u = pending[depth];
        chains.next[static_cast<std::size_t>(u)] = u;
        choice[static_cast<std::size_t>(u)] = -1;
        ++edge_idx[depth];
    }
    return results;
}

Monomial choice_weight(const LabeledDigraph& g, const std::vector<int>& choice) {
    std::vector<Monomial::Entry> entries;
    for (int v = 0; v < g.vertex_count; ++v) {
        int c = choice[static_cast<std::size_t>(v)];
        if (c >= 0)
            entries.emplace_back(
                g.out[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)].label, 1);
    }
    return Monomial::from_entries(std::move(entries));
}

bool is_arborescence_choice(const LabeledDigraph& g, int root,
                            const std::vector<int>& choice) {
    const int n = g.vertex_count;
    if (choice[static_cast<std::size_t>(root)] != -1) return false;
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        int c = choice[static_cast<std::size_t>(v)];
        if (c < 0 ||
            c >= static_cast<int>(g.out[static_cast<std::size_t>(v)].size()))
            return false;
        // walk toward the root; more than n steps means a cycle
        int cur = v;
        for (int steps = 0; cur != root; ++steps) {
            if (steps > n) return false;
            cur = g.out[static_cast<std::size_t>(cur)]
                       [static_cast<std::size_t>(choice[static_cast<std::size_t>(cur)])]
                           .to;
        }
    }
    return true;
}

std::vector<Arborescence> enumerate_arborescences(const RateGraph& g, int root) {
    if (root < 1 || root > g.vertex_count())
        throw std::invalid_argument("root out of range");
    LabeledDigraph d = to_digraph(g);
    std::vector<char> is_root(static_cast<std::size_t>(d.vertex_count), 0);
    is_root[static_cast<std::size_t>(root - 1)] = 1;
    std::vector<Arborescence> trees;
    for (const auto& choice : enumerate_functional_forests(d, is_root)) {
        if (!is_arborescence_choice(d, root - 1, choice)) continue;
        Arborescence t;
        t.root = root;
        t.to.assign(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
        for (int v = 0; v < d.vertex_count; ++v) {
            int c = choice[static_cast<std::size_t>(v)];
            if (c >= 0)
                t.to[static_cast<std::size_t>(v + 1)] =
                    d.out[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)].to + 1;
        }
        trees.push_back(std::move(t));
    }
    return trees;
}

Monomial tree_weight(const Arborescence& t) {
    std::vector<Monomial::Entry> entries;
    for (int v = 1; v < static_cast<int>(t.to.size()); ++v)
        if (t.to[static_cast<std::size_t>(v)] != 0)
            entries.emplace_back(VarId{v, t.to[static_cast<std::size_t>(v)]}, 1);
    return Monomial::from_entries(std::move(entries));
}

std::vector<Forest> enumerate_forests(const RateGraph& g, const std::set<int>& roots) {
    if (roots.empty()) throw std::invalid_argument("forest needs at least one root");
    for (int r : roots)
        if (r < 1 || r > g.vertex_count())
            throw std::invalid_argument("root out of range");
    LabeledDigraph d = to_digraph(g);
    std::vector<char> is_root(static_cast<std::size_t>(d.vertex_count), 0);
    for (int r : roots) is_root[static_cast<std::size_t>(r - 1)] = 1;
    std::vector<Forest> forests;
    for (const auto& choice : enumerate_functional_forests(d, is_root)) {
        Forest f;
        f.roots.assign(roots.begin(), roots.end());
        f.to.assign(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
        for (int v = 0; v < d.vertex_count; ++v) {
            int c = choice[static_cast<std::size_t>(v)];
            if (c >= 0)
                f.to[static_cast<std::size_t>(v + 1)] =
                    d.out[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)].to + 1;
        }
        forests.push_back(std::move(f));
    }
    return forests;
}

Monomial forest_weight(const Forest& f) {
    std::vector<Monomial::Entry> entries;
    for (int v = 1; v < static_cast<int>(f.to.size()); ++v)
        if (f.to[static_cast<std::size_t>(v)] != 0)
            entries.emplace_back(VarId{v, f.to[static_cast<std::size_t>(v)]}, 1);
    return Monomial::from_entries(std::move(entries));
}

Poly kirchhoff_sum(const RateGraph& g, int root) {
    std::vector<Monomial> ws;
    for (const Arborescence& t : enumerate_arborescences(g, root))
        ws.push_back(tree_weight(t));
    return Poly::from_monomials(ws);
}

Poly forest_sum(const RateGraph& g, const std::set<int>& roots) {
    std::vector<Monomial> ws;
    for (const Forest& f : enumerate_forests(g, roots))
        ws.push_back(forest_weight(f));
    return Poly::from_monomials(ws);
}

}  // namespace treelift
