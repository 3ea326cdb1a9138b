#include "treelift/lift.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace treelift {

namespace {

int wrap(int v, int n) { return (v - 1 + n) % n + 1; }  // 1-based mod

bool is_ring_graph(const RateGraph& g) {
    const int n = g.vertex_count();
    if (n < 3 || g.edges().size() != static_cast<std::size_t>(2) * n) return false;
    for (int i = 1; i <= n; ++i)
        if (!g.has_edge(i, wrap(i + 1, n)) || !g.has_edge(i, wrap(i - 1, n)))
            return false;
    return true;
}

}  // namespace

LiftedChain::LiftedChain(RateGraph base) : base_(std::move(base)) {
    if (!base_.irreducible())
        throw std::domain_error("lift needs an irreducible base graph");
    const int n = base_.vertex_count();

    for (int root = 1; root <= n; ++root)
        for (Arborescence& t : enumerate_arborescences(base_, root)) {
            projection_.push_back(root);
            index_[t.to] = static_cast<int>(trees_.size());
            trees_.push_back(std::move(t));
        }

    std::set<std::pair<int, int>> seen;
    const LabeledDigraph d = to_digraph(base_);
    for (int si = 0; si < tree_count(); ++si) {
        const Arborescence& s = trees_[static_cast<std::size_t>(si)];
        const int i = s.root;
        for (int j : base_.out(i)) {
            // edge surgery: j hands its out-edge back, i points to j
            Arborescence t = s;
            t.root = j;
            t.to[static_cast<std::size_t>(i)] = j;
            t.to[static_cast<std::size_t>(j)] = 0;

            auto it = index_.find(t.to);
            if (it == index_.end())
                throw std::logic_error("edge surgery left the set of covering trees");
            // revalidate: the construction promises a tree rooted at j
            std::vector<int> choice(static_cast<std::size_t>(n), -1);
            for (int v = 1; v <= n; ++v) {
                int w = t.to[static_cast<std::size_t>(v)];
                if (w == 0) continue;
                const auto& edges = d.out[static_cast<std::size_t>(v - 1)];
                for (std::size_t e = 0; e < edges.size(); ++e)
                    if (edges[e].to == w - 1)
                        choice[static_cast<std::size_t>(v - 1)] = static_cast<int>(e);
            }
            if (!is_arborescence_choice(d, j - 1, choice))
                throw std::logic_error("edge surgery produced a non-tree");

            if (!seen.insert({si, it->second}).second)
                throw std::logic_error("duplicate transition between trees");
            transitions_.push_back({si, it->second, VarId{i, j}});
        }
    }
}

int LiftedChain::projection(int tree_index) const {
    return projection_[static_cast<std::size_t>(tree_index)];
}

const Arborescence& LiftedChain::tree(int tree_index) const {
    if (tree_index < 0 || tree_index >= tree_count())
        throw std::out_of_range("tree index out of range");
    return trees_[static_cast<std::size_t>(tree_index)];
}

int LiftedChain::index_of(const Arborescence& t) const {
    auto it = index_.find(t.to);
    return it == index_.end() ? -1 : it->second;
}

std::vector<Monomial> LiftedChain::weights() const {
    std::vector<Monomial> ws;
    ws.reserve(trees_.size());
    for (const Arborescence& t : trees_) ws.push_back(tree_weight(t));
    return ws;
}

LabeledDigraph LiftedChain::transition_digraph() const {
    LabeledDigraph d;
    d.vertex_count = tree_count();
    d.out.resize(static_cast<std::size_t>(d.vertex_count));
    for (const Transition& tr : transitions_)
        d.out[static_cast<std::size_t>(tr.from)].push_back({tr.to, tr.label});
    for (auto& edges : d.out)
        std::sort(edges.begin(), edges.end(),
                  [](const LabeledDigraph::Edge& a, const LabeledDigraph::Edge& b) {
                      return a.to < b.to;
                  });
    return d;
}

LiftedChain build_lift(const RateGraph& g) { return LiftedChain(g); }

SymbolicMatrix r_matrix(const LiftedChain& lc) {
    const int m = lc.tree_count();
    SymbolicMatrix r(m);
    for (const Transition& tr : lc.transitions())
        r.at(tr.from, tr.to) = Poly::var(tr.label);
    for (int s = 0; s < m; ++s) {
        Poly diag;
        for (int j : lc.base().out(lc.projection(s)))
            diag -= Poly::var({lc.projection(s), j});
        r.at(s, s) = std::move(diag);
    }
    return r;
}

bool pi_invariance_check(const LiftedChain& lc) {
    const int m = lc.tree_count();
    std::vector<Monomial> pi = lc.weights();
    std::vector<Poly> cols(static_cast<std::size_t>(m));
    for (const Transition& tr : lc.transitions()) {
        cols[static_cast<std::size_t>(tr.to)] +=
            Poly::term(pi[static_cast<std::size_t>(tr.from)] *
                           Monomial::var(tr.label),
                       1);
        // the diagonal of row `from` absorbs the same label with sign -1
        cols[static_cast<std::size_t>(tr.from)] -=
            Poly::term(pi[static_cast<std::size_t>(tr.from)] *
                           Monomial::var(tr.label),
                       1);
    }
    for (const Poly& c : cols)
        if (!c.is_zero()) return false;
    return true;
}

bool lift_irreducibility_check(const LiftedChain& lc) {
    const int m = lc.tree_count();
    if (m == 0) return false;
    std::vector<std::vector<int>> fwd(static_cast<std::size_t>(m)),
        rev(static_cast<std::size_t>(m));
    for (const Transition& tr : lc.transitions()) {
        fwd[static_cast<std::size_t>(tr.from)].push_back(tr.to);
        rev[static_cast<std::size_t>(tr.to)].push_back(tr.from);
    }
    auto reaches_all = [m](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(static_cast<std::size_t>(m), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == m;
    };
    return reaches_all(fwd) && reaches_all(rev);
}

std::map<std::pair<int, int>, int> ring_tree_index(const LiftedChain& lc) {
    const RateGraph& g = lc.base();
    if (!is_ring_graph(g))
        throw std::domain_error("tree indexing [i,j] needs a ring base graph");
    const int n = g.vertex_count();

    std::map<std::pair<int, int>, int> idx;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            int found = -1;
            for (int ti = 0; ti < lc.tree_count(); ++ti) {
                const Arborescence& t = lc.tree(ti);
                if (t.root != i) continue;
                const int jn = wrap(j + 1, n);
                bool gap = t.to[static_cast<std::size_t>(j)] != jn &&
                           t.to[static_cast<std::size_t>(jn)] != j;
                if (!gap) continue;
                if (found >= 0)
                    throw std::logic_error("tree [i,j] is not unique");
                found = ti;
            }
            if (found < 0) throw std::logic_error("tree [i,j] not found");
            idx[{i, j}] = found;
        }
    }
    if (static_cast<int>(idx.size()) != lc.tree_count())
        throw std::logic_error("[i,j] indexing is not a bijection");
    return idx;
}

bool ring_structure_check(const LiftedChain& lc) {
    const int n = lc.base().vertex_count();
    auto idx = ring_tree_index(lc);

    std::set<Transition> expected;
    for (int i = 1; i <= n; ++i) {
        const int up = wrap(i + 1, n), down = wrap(i - 1, n);
        for (int j = 1; j <= n; ++j) {
            int s = idx[{i, j}];
            if (j == i) {
                // forward ring
                expected.insert({s, idx[{up, up}], VarId{i, up}});
            } else {
                expected.insert({s, idx[{up, j}], VarId{i, up}});
            }
            if (j == down) {
                // reverse ring
                expected.insert({s, idx[{down, wrap(i - 2, n)}], VarId{i, down}});
            } else {
                expected.insert({s, idx[{down, j}], VarId{i, down}});
            }
        }
    }
    std::set<Transition> actual(lc.transitions().begin(), lc.transitions().end());
    return actual == expected;
}

InducedSubgraph induced_transition_subgraph(const LiftedChain& lc,
                                            const std::vector<int>& tree_indices) {
    InducedSubgraph sub;
    sub.vertices = tree_indices;
    std::map<int, int> pos;
    for (std::size_t k = 0; k < tree_indices.size(); ++k)
        pos[tree_indices[k]] = static_cast<int>(k);
    sub.graph.vertex_count = static_cast<int>(tree_indices.size());
    sub.graph.out.resize(tree_indices.size());
    for (const Transition& tr : lc.transitions()) {
        auto f = pos.find(tr.from);
        auto t = pos.find(tr.to);
        if (f != pos.end() && t != pos.end())
            sub.graph.out[static_cast<std::size_t>(f->second)].push_back(
                {t->second, tr.label});
    }
    for (auto& edges : sub.graph.out)
        std::sort(edges.begin(), edges.end(),
                  [](const LabeledDigraph::Edge& a, const LabeledDigraph::Edge& b) {
                      return a.to < b.to;
                  });
    return sub;
}

bool lemma_forest_check(const LiftedChain& lc) {
    const RateGraph& g = lc.base();
    if (!is_ring_graph(g))
        throw std::domain_error("forest lemma needs a ring base graph");
    const int n = g.vertex_count();
    auto idx = ring_tree_index(lc);

    const Poly mu1 = symmetric_minor(rate_matrix(g), {1});

    auto check_family = [&](const std::vector<int>& members) {
        InducedSubgraph sub = induced_transition_subgraph(lc, members);
        std::vector<char> is_root(members.size(), 0);
        // roots are [1,n] and [1,1], placed first and last by construction
        is_root.front() = 1;
        is_root.back() = 1;
        std::vector<Monomial> ws;
        for (const auto& choice : enumerate_functional_forests(sub.graph, is_root))
            ws.push_back(choice_weight(sub.graph, choice));
        return Poly::from_monomials(ws) == mu1;
    };

    std::vector<int> family_g{idx[{1, n}]};
    for (int i = 2; i <= n; ++i) family_g.push_back(idx[{i, 1}]);
    family_g.push_back(idx[{1, 1}]);

    std::vector<int> family_h{idx[{1, n}]};
    for (int i = 2; i <= n; ++i) family_h.push_back(idx[{i, n}]);
    family_h.push_back(idx[{1, 1}]);

    return check_family(family_g) && check_family(family_h);
}

}  // namespace treelift
