#include "treelift/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace treelift {

namespace {

const std::vector<std::pair<VarId, char>>& letter_table() {
    static const std::vector<std::pair<VarId, char>> table = {
        {{1, 2}, 'a'}, {{2, 3}, 'b'}, {{3, 1}, 'c'},
        {{2, 1}, 'u'}, {{3, 2}, 'v'}, {{1, 3}, 'w'},
    };
    return table;
}

std::optional<char> letter_of(VarId v) {
    for (const auto& [var, c] : letter_table())
        if (var == v) return c;
    return std::nullopt;
}

std::string monomial_letters(const Monomial& m) {
    if (m.is_unit()) return "1";
    std::vector<std::pair<char, std::uint32_t>> ls;
    for (const auto& [v, e] : m.entries()) {
        auto c = letter_of(v);
        if (!c) return "";  // not representable
        ls.emplace_back(*c, e);
    }
    std::sort(ls.begin(), ls.end());
    std::string out;
    for (const auto& [c, e] : ls) {
        out += c;
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

// log10 of (deg/p)^trials, printed as "10^-347.2"; the plain double value
// underflows long before it stops being meaningful
std::string error_bound_string(int deg, std::uint64_t prime, int trials) {
    if (deg <= 0) return "0";
    double log_bound = trials * (std::log10(static_cast<double>(deg)) -
                                 std::log10(static_cast<double>(prime)));
    char buf[48];
    std::snprintf(buf, sizeof(buf), "10^%.1f", log_bound);
    return buf;
}

std::string family_name(GraphSpec::Family f) {
    switch (f) {
        case GraphSpec::Family::Ring: return "ring";
        case GraphSpec::Family::Complete: return "complete";
        default: return "custom";
    }
}

}  // namespace

RateGraph GraphSpec::build() const {
    switch (family) {
        case Family::Ring: return RateGraph::ring(n);
        case Family::Complete: return RateGraph::complete(n);
        default: return RateGraph::from_edges(n, edges);
    }
}

CheckSelection CheckSelection::all() {
    CheckSelection s;
    s.pi_invariance = s.kirchhoff = s.lemma_covfor = s.distinguished_monomial =
        s.degree_identity = true;
    return s;
}

int VerifyReport::exit_code() const {
    if (infeasible) return 2;
    bool failed = false;
    auto consider = [&failed](const std::optional<bool>& c) {
        if (c && !*c) failed = true;
    };
    consider(claim_verified);
    consider(check_pi_invariance);
    consider(check_kirchhoff);
    consider(check_lemma_covfor);
    consider(check_distinguished_monomial);
    consider(check_degree_identity);
    return failed ? 1 : 0;
}

namespace {

bool is_ring_spec(const RateGraph& g) {
    const int n = g.vertex_count();
    if (n < 3 || g.edges().size() != static_cast<std::size_t>(2) * n) return false;
    for (int i = 1; i <= n; ++i) {
        if (!g.has_edge(i, i % n + 1)) return false;
        if (!g.has_edge(i, (i + n - 2) % n + 1)) return false;
    }
    return true;
}

std::map<int, long long> resolve_claim(const RunConfig& cfg, const RateGraph& g,
                                       bool* has_claim) {
    const int n = g.vertex_count();
    ClaimKind kind = cfg.claim;
    if (kind == ClaimKind::Auto) {
        if (cfg.graph.family == GraphSpec::Family::Ring)
            kind = ClaimKind::Ring;
        else if (cfg.graph.family == GraphSpec::Family::Complete && n >= 3)
            kind = ClaimKind::Chapuy;
        else
            kind = ClaimKind::None;
    }
    *has_claim = kind != ClaimKind::None;
    switch (kind) {
        case ClaimKind::Ring: return {{n - 1, 1}};
        case ClaimKind::Chapuy: return chapuy_claim(n);
        case ClaimKind::Custom: return cfg.custom_claim;
        default: return {};
    }
}

std::vector<std::pair<std::vector<int>, int>> claim_to_subsets(
    const std::map<int, long long>& claim, int n) {
    std::vector<std::pair<std::vector<int>, int>> out;
    for (auto it = claim.rbegin(); it != claim.rend(); ++it) {
        if (it->second == 0) continue;
        for (const auto& kept : subsets_of_size(n, it->first))
            out.emplace_back(kept, static_cast<int>(it->second));
    }
    return out;
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg) {
    VerifyReport report;
    report.graph = cfg.graph;

    RateGraph g = cfg.graph.build();
    report.graph_desc = g.describe();
    report.graph.edges.clear();
    for (const VarId& e : g.edges()) report.graph.edges.emplace_back(e.source, e.target);

    if (!g.irreducible()) {
        report.infeasible = true;
        report.infeasible_reason = "the graph is not irreducible";
        return report;
    }

    LiftedChain lc = build_lift(g);
    const int n = g.vertex_count();
    const int m = lc.tree_count();
    report.tree_count = m;
    report.psi_degree = m - n;
    report.specialized.assign(cfg.set_one.begin(), cfg.set_one.end());

    bool has_claim = false;
    std::map<int, long long> claim = resolve_claim(cfg, g, &has_claim);

    Mode mode = cfg.mode;
    if (mode == Mode::Auto) {
        mode = m <= cfg.symbolic_cutoff ? Mode::Symbolic : Mode::Pit;
        if (mode == Mode::Pit)
            report.notes.push_back("|T| = " + std::to_string(m) +
                                   " exceeds the symbolic cutoff " +
                                   std::to_string(cfg.symbolic_cutoff) +
                                   "; falling back to randomized identity testing");
    }
    if (mode == Mode::Symbolic && m > cfg.symbolic_cutoff) {
        report.infeasible = true;
        report.infeasible_reason =
            "|T| = " + std::to_string(m) + " exceeds the symbolic cutoff " +
            std::to_string(cfg.symbolic_cutoff);
        return report;
    }
    if (mode == Mode::Pit && !has_claim) {
        report.infeasible = true;
        report.infeasible_reason =
            "randomized identity testing needs a claimed factorization "
            "(--claim ring|chapuy|custom)";
        return report;
    }

    if (mode == Mode::Symbolic) {
        report.mode = "symbolic";
        std::vector<int> witnesses;
        if (cfg.witnesses == WitnessPolicy::All)
            for (int t = 0; t < m; ++t) witnesses.push_back(t);
        else
            witnesses.push_back(0);

        Poly psi;
        if (cfg.set_one.empty()) {
            psi = compute_psi(lc, witnesses);
        } else {
            // specialized runs support a factorization but cannot prove it
            std::optional<Poly> acc;
            for (int w : witnesses) {
                Poly r = rho(lc, w, cfg.set_one);
                Poly pi = Poly::term(tree_weight(lc.tree(w)), 1).assign_one(cfg.set_one);
                auto q = r.exact_div(pi);
                if (!q) throw std::logic_error("specialized rho(t) not divisible by pi(t)");
                if (acc && *acc != *q)
                    throw std::logic_error("witness trees disagree about psi");
                acc = std::move(*q);
            }
            psi = std::move(*acc);
            report.notes.push_back(
                "variables were specialized to 1; the factorization is "
                "supporting evidence only");
            report.psi_degree = psi.degree();
        }

        FactorReport fr;
        if (cfg.set_one.empty()) {
            fr = factor_into_minors(psi, g);
        } else {
            // divide by the specialized minors instead
            std::vector<std::vector<int>> order;
            for (int rank = n - 1; rank >= 1; --rank)
                for (auto& kept : subsets_of_size(n, rank))
                    order.push_back(std::move(kept));
            fr.residual = psi;
            fr.psi_degree = psi.degree();
            fr.psi_leading_coeff = psi.is_zero() ? mpz_class(0) : psi.leading_term().coeff;
            SymbolicMatrix q = rate_matrix(g);
            for (const auto& kept : order) {
                std::set<int> removed;
                for (int v = 1; v <= n; ++v) removed.insert(v);
                for (int v : kept) removed.erase(v);
                Poly minor = symmetric_minor(q, removed).assign_one(cfg.set_one);
                if (minor.degree() < 1) continue;
                int mult = 0;
                while (auto quot = fr.residual.exact_div(minor)) {
                    fr.residual = std::move(*quot);
                    ++mult;
                }
                if (mult > 0) fr.multiplicities[kept] = mult;
            }
        }

        report.psi_leading_coeff = fr.psi_leading_coeff.get_str();
        report.residual = format_poly(fr.residual, false);
        for (int rank = n - 1; rank >= 1; --rank)
            for (const auto& kept : subsets_of_size(n, rank)) {
                auto it = fr.multiplicities.find(kept);
                if (it != fr.multiplicities.end())
                    report.multiplicities.emplace_back(kept, it->second);
            }

        if (has_claim) {
            bool ok = fr.clean();
            auto expected = claim_to_subsets(claim, n);
            std::map<std::vector<int>, int> want(expected.begin(), expected.end());
            std::map<std::vector<int>, int> got(fr.multiplicities.begin(),
                                                fr.multiplicities.end());
            report.claim_verified = ok && want == got;
        }
    } else {
        report.mode = "pit";
        PitOptions opts;
        opts.trials = cfg.trials;
        opts.prime = cfg.prime;
        opts.seed = cfg.seed;
        PitResult pr = pit_verify(lc, claim, opts);
        report.claim_verified = pr.verified();
        report.multiplicities = claim_to_subsets(claim, n);
        report.pit = std::move(pr);
    }

    if (cfg.checks.pi_invariance)
        report.check_pi_invariance = pi_invariance_check(lc) &&
                                     lift_irreducibility_check(lc);
    if (cfg.checks.kirchhoff) {
        bool ok = true;
        SymbolicMatrix q = rate_matrix(g);
        for (int i = 1; i <= n && ok; ++i)
            ok = kirchhoff_sum(g, i) == symmetric_minor(q, {i});
        report.check_kirchhoff = ok;
    }
    if (cfg.checks.lemma_covfor && is_ring_spec(g))
        report.check_lemma_covfor = lemma_forest_check(lc);
    if (cfg.checks.distinguished_monomial && is_ring_spec(g) &&
        m <= cfg.symbolic_cutoff)
        report.check_distinguished_monomial = distinguished_monomial_check(lc);
    if (cfg.checks.degree_identity && n >= 3)
        report.check_degree_identity = degree_identity_check(n);

    return report;
}

std::string report_json(const VerifyReport& r) {
    using json = nlohmann::ordered_json;
    json j;
    j["graph"] = {{"family", family_name(r.graph.family)}, {"n", r.graph.n}};
    json edges = json::array();
    for (const auto& [i, k] : r.graph.edges) edges.push_back(json::array({i, k}));
    j["graph"]["edges"] = std::move(edges);

    if (r.infeasible) {
        j["infeasible"] = r.infeasible_reason;
        return j.dump(2) + "\n";
    }

    j["mode"] = r.mode;
    j["psi_degree"] = r.psi_degree;
    j["tree_count"] = r.tree_count;
    json mults = json::array();
    for (const auto& [subset, exp] : r.multiplicities)
        mults.push_back({{"subset", subset}, {"exponent", exp}});
    j["multiplicities"] = std::move(mults);
    j["residual"] = r.residual;
    j["psi_leading_coeff"] =
        r.psi_leading_coeff ? json(*r.psi_leading_coeff) : json(nullptr);
    j["claim_verified"] = r.claim_verified ? json(*r.claim_verified) : json(nullptr);
    json spec = json::array();
    for (const VarId& v : r.specialized) spec.push_back(to_string(v));
    j["specialized"] = std::move(spec);

    if (r.pit) {
        json p;
        p["prime"] = r.pit->prime;
        p["trials"] = r.pit->trials;
        p["seed"] = r.pit->seed;
        p["failures"] = r.pit->failures;
        p["redraws"] = r.pit->redraws;
        p["verdict"] = r.pit->verified() ? "verified" : "refuted";
        p["error_bound"] =
            error_bound_string(r.psi_degree, r.pit->prime, r.pit->trials);
        if (r.pit->failures > 0) {
            json fa = json::object();
            for (const auto& [v, val] : r.pit->failing_assignment)
                fa[to_string(v)] = val;
            p["failing_assignment"] = std::move(fa);
        } else {
            p["failing_assignment"] = nullptr;
        }
        j["pit"] = std::move(p);
    } else {
        j["pit"] = nullptr;
    }

    auto put_check = [](json& dst, const char* name, const std::optional<bool>& v) {
        dst[name] = v ? json(*v) : json(nullptr);
    };
    json checks;
    put_check(checks, "pi_invariance", r.check_pi_invariance);
    put_check(checks, "kirchhoff", r.check_kirchhoff);
    put_check(checks, "lemma_covfor", r.check_lemma_covfor);
    put_check(checks, "distinguished_monomial", r.check_distinguished_monomial);
    put_check(checks, "degree_identity", r.check_degree_identity);
    j["checks"] = std::move(checks);

    json notes = json::array();
    for (const std::string& note : r.notes) notes.push_back(note);
    j["notes"] = std::move(notes);
    return j.dump(2) + "\n";
}

namespace {

std::string subset_str(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[static_cast<std::size_t>(i)]);
    }
    return out + "}";
}

std::string check_str(const std::optional<bool>& v) {
    if (!v) return "n/a";
    return *v ? "pass" : "FAIL";
}

}  // namespace

std::string report_human(const VerifyReport& r) {
    std::ostringstream os;
    os << "graph: " << r.graph_desc << "\n";
    if (r.infeasible) {
        os << "infeasible: " << r.infeasible_reason << "\n";
        return os.str();
    }
    os << "mode: " << r.mode << "\n";
    os << "covering trees: " << r.tree_count << "\n";
    os << "deg psi: " << r.psi_degree;
    if (r.psi_leading_coeff) os << ", leading coefficient " << *r.psi_leading_coeff;
    os << "\n";
    os << (r.mode == "pit" ? "claimed factorization:" : "factorization:");
    if (r.multiplicities.empty()) {
        os << " (no minor divides psi)";
    } else {
        for (const auto& [subset, exp] : r.multiplicities) {
            os << " minor" << subset_str(subset);
            if (exp > 1) os << "^" << exp;
        }
    }
    os << "\n";
    os << "residual: " << r.residual << "\n";
    if (r.pit) {
        os << "pit: prime " << r.pit->prime << ", trials " << r.pit->trials
           << ", seed " << r.pit->seed << ", failures " << r.pit->failures
           << ", redraws " << r.pit->redraws << "\n";
        os << "pit verdict: " << (r.pit->verified() ? "verified" : "refuted")
           << " (error bound "
           << error_bound_string(r.psi_degree, r.pit->prime, r.pit->trials)
           << ")\n";
        if (r.pit->failures > 0) {
            os << "failing assignment:";
            for (const auto& [v, val] : r.pit->failing_assignment)
                os << " " << to_string(v) << "=" << val;
            os << "\n";
        }
    }
    if (r.claim_verified)
        os << "claim: " << (*r.claim_verified ? "verified" : "refuted") << "\n";
    os << "checks: pi_invariance " << check_str(r.check_pi_invariance)
       << ", kirchhoff " << check_str(r.check_kirchhoff) << ", lemma_covfor "
       << check_str(r.check_lemma_covfor) << ", distinguished_monomial "
       << check_str(r.check_distinguished_monomial) << ", degree_identity "
       << check_str(r.check_degree_identity) << "\n";
    for (const std::string& note : r.notes) os << "note: " << note << "\n";
    return os.str();
}

bool letters_available(const RateGraph& g) {
    if (g.vertex_count() != 3) return false;
    for (const auto& [v, c] : letter_table())
        if (!g.has_edge(v.source, v.target)) return false;
    return true;
}

std::string poly_letters(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const Poly::Term& t : p.terms()) {
        const bool neg = t.coeff < 0;
        out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        first = false;
        mpz_class a = abs(t.coeff);
        std::string mono = monomial_letters(t.mono);
        if (mono.empty()) return p.str();  // variable without a letter
        if (a != 1 || t.mono.is_unit()) {
            out += a.get_str();
            if (!t.mono.is_unit()) out += "*";
        }
        if (!t.mono.is_unit()) out += mono;
    }
    return out;
}

std::string format_poly(const Poly& p, bool letters) {
    return letters ? poly_letters(p) : p.str();
}

std::string show_trees(const LiftedChain& lc, std::optional<int> root, bool letters) {
    std::ostringstream os;
    std::map<std::pair<int, int>, int> ring_idx;
    std::map<int, std::pair<int, int>> ring_name;
    try {
        ring_idx = ring_tree_index(lc);
        for (const auto& [ij, t] : ring_idx) ring_name[t] = ij;
    } catch (const std::exception&) {
        // not a ring; plain indices only
    }
    for (int t = 0; t < lc.tree_count(); ++t) {
        const Arborescence& a = lc.tree(t);
        if (root && a.root != *root) continue;
        os << "t" << t;
        if (auto it = ring_name.find(t); it != ring_name.end())
            os << " [" << it->second.first << "," << it->second.second << "]";
        os << "  root " << a.root << "  weight "
           << format_poly(Poly::term(tree_weight(a), 1), letters) << "  edges";
        for (int v = 1; v < static_cast<int>(a.to.size()); ++v)
            if (a.to[static_cast<std::size_t>(v)] != 0)
                os << " " << v << "->" << a.to[static_cast<std::size_t>(v)];
        os << "\n";
    }
    return os.str();
}

std::optional<int> tree_index_by_weight(const LiftedChain& lc,
                                        const std::string& weight) {
    for (int t = 0; t < lc.tree_count(); ++t) {
        Poly w = Poly::term(tree_weight(lc.tree(t)), 1);
        if (w.str() == weight || poly_letters(w) == weight) return t;
    }
    return std::nullopt;
}

std::string show_r_matrix(const LiftedChain& lc, bool letters,
                          const std::vector<std::string>& order) {
    const int m = lc.tree_count();
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
    if (!order.empty()) {
        if (static_cast<int>(order.size()) != m)
            throw std::invalid_argument("order must list every tree weight");
        for (int i = 0; i < m; ++i) {
            auto t = tree_index_by_weight(lc, order[static_cast<std::size_t>(i)]);
            if (!t)
                throw std::invalid_argument("unknown tree weight '" +
                                            order[static_cast<std::size_t>(i)] + "'");
            perm[static_cast<std::size_t>(i)] = *t;
        }
    }
    SymbolicMatrix r = r_matrix(lc);
    std::vector<std::vector<std::string>> cells(
        static_cast<std::size_t>(m) + 1,
        std::vector<std::string>(static_cast<std::size_t>(m) + 1));
    for (int i = 0; i < m; ++i) {
        std::string name = format_poly(
            Poly::term(tree_weight(lc.tree(perm[static_cast<std::size_t>(i)])), 1),
            letters);
        cells[0][static_cast<std::size_t>(i + 1)] = name;
        cells[static_cast<std::size_t>(i + 1)][0] = name;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            cells[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j + 1)] =
                format_poly(r.at(perm[static_cast<std::size_t>(i)],
                                 perm[static_cast<std::size_t>(j)]),
                            letters);
    std::vector<std::size_t> width(static_cast<std::size_t>(m) + 1, 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << std::string(width[c] - row[c].size(), ' ') << row[c];
            os << (c + 1 < row.size() ? "  " : "");
        }
        os << "\n";
    }
    return os.str();
}

std::string lift_dot(const LiftedChain& lc, bool letters) {
    std::ostringstream os;
    std::map<int, std::pair<int, int>> ring_name;
    try {
        for (const auto& [ij, t] : ring_tree_index(lc)) ring_name[t] = ij;
    } catch (const std::exception&) {
    }
    os << "digraph T {\n";
    for (int t = 0; t < lc.tree_count(); ++t) {
        std::string label;
        if (auto it = ring_name.find(t); it != ring_name.end())
            label = "[" + std::to_string(it->second.first) + "," +
                    std::to_string(it->second.second) + "]";
        else
            label = format_poly(Poly::term(tree_weight(lc.tree(t)), 1), letters) +
                    " : " + std::to_string(lc.projection(t));
        os << "  t" << t << " [label=\"" << label << "\"];\n";
    }
    for (const Transition& tr : lc.transitions()) {
        std::string label =
            letters ? format_poly(Poly::var(tr.label), true) : to_string(tr.label);
        os << "  t" << tr.from << " -> t" << tr.to << " [label=\"" << label
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string lift_json(const LiftedChain& lc) {
    using json = nlohmann::ordered_json;
    json j;
    j["tree_count"] = lc.tree_count();
    json trees = json::array();
    for (int t = 0; t < lc.tree_count(); ++t) {
        const Arborescence& a = lc.tree(t);
        json jt;
        jt["index"] = t;
        jt["root"] = a.root;
        json edges = json::array();
        for (int v = 1; v < static_cast<int>(a.to.size()); ++v)
            if (a.to[static_cast<std::size_t>(v)] != 0)
                edges.push_back(json::array({v, a.to[static_cast<std::size_t>(v)]}));
        jt["edges"] = std::move(edges);
        jt["weight"] = Poly::term(tree_weight(a), 1).str();
        trees.push_back(std::move(jt));
    }
    j["trees"] = std::move(trees);
    json transitions = json::array();
    for (const Transition& tr : lc.transitions())
        transitions.push_back(
            {{"from", tr.from}, {"to", tr.to}, {"label", to_string(tr.label)}});
    j["transitions"] = std::move(transitions);
    return j.dump(2) + "\n";
}

}  // namespace treelift
