// treelift: lifts a finite Markov chain to its covering rooted trees,
// computes the tree polynomial psi, and verifies factorizations of psi
// into symmetric minors of the rate matrix.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "treelift/verify.hpp"

namespace {

using namespace treelift;

struct GraphArgs {
    std::string family = "ring";
    int n = 3;
    std::string file;
};

void add_graph_options(CLI::App* cmd, GraphArgs* args) {
    auto* fam = cmd->add_option("--family", args->family, "graph family")
                    ->check(CLI::IsMember({"ring", "complete"}));
    cmd->add_option("--n", args->n, "number of vertices");
    auto* file = cmd->add_option("--graph", args->file,
                                 "graph file: first line n, then one 'i j' per line");
    fam->excludes(file);
}

GraphSpec make_spec(const GraphArgs& args) {
    GraphSpec spec;
    if (!args.file.empty()) {
        std::ifstream in(args.file);
        if (!in) throw CLI::ValidationError("--graph", "cannot open " + args.file);
        RateGraph g = RateGraph::load(in);
        spec.family = GraphSpec::Family::Custom;
        spec.n = g.vertex_count();
        for (const VarId& e : g.edges()) spec.edges.emplace_back(e.source, e.target);
        return spec;
    }
    spec.family = args.family == "complete" ? GraphSpec::Family::Complete
                                            : GraphSpec::Family::Ring;
    spec.n = args.n;
    return spec;
}

std::uint64_t default_prime() {
    if (const char* env = std::getenv("TREELIFT_PRIME")) {
        char* end = nullptr;
        std::uint64_t p = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && modp::is_prime(p) && p > (1ull << 60)) return p;
        std::cerr << "warning: ignoring TREELIFT_PRIME='" << env
                  << "' (need a prime above 2^60)\n";
    }
    return modp::kDefaultPrime;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

CheckSelection parse_checks(const std::string& spec) {
    if (spec == "all") return CheckSelection::all();
    if (spec == "none" || spec.empty()) return CheckSelection::none();
    CheckSelection sel;
    for (const std::string& name : split_csv(spec)) {
        if (name == "pi_invariance")
            sel.pi_invariance = true;
        else if (name == "kirchhoff")
            sel.kirchhoff = true;
        else if (name == "lemma_covfor")
            sel.lemma_covfor = true;
        else if (name == "distinguished_monomial")
            sel.distinguished_monomial = true;
        else if (name == "degree_identity")
            sel.degree_identity = true;
        else
            throw CLI::ValidationError("--checks", "unknown check '" + name + "'");
    }
    return sel;
}

std::map<int, long long> parse_exponents(const std::string& spec) {
    // "2:3,3:2" -> {2: 3, 3: 2}
    std::map<int, long long> claim;
    for (const std::string& part : split_csv(spec)) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--exponents", "expected rank:exponent pairs");
        claim[std::stoi(part.substr(0, colon))] =
            std::stoll(part.substr(colon + 1));
    }
    return claim;
}

std::set<VarId> parse_vars(const std::string& spec) {
    std::set<VarId> vars;
    for (const std::string& part : split_csv(spec)) {
        Poly p = Poly::parse(part);
        auto vs = p.variables();
        if (vs.size() != 1 || p.term_count() != 1)
            throw CLI::ValidationError("--set-one", "expected variables like q1_2");
        vars.insert(*vs.begin());
    }
    return vars;
}

int run_verify_cmd(const GraphArgs& graph_args, const std::string& mode,
                   const std::string& witnesses, int trials, std::uint64_t prime,
                   std::uint64_t seed, int cutoff, const std::string& claim,
                   const std::string& exponents, const std::string& checks,
                   const std::string& set_one, const std::string& format) {
    RunConfig cfg;
    cfg.graph = make_spec(graph_args);
    cfg.mode = mode == "symbolic" ? Mode::Symbolic
               : mode == "pit"    ? Mode::Pit
                                  : Mode::Auto;
    cfg.witnesses =
        witnesses == "all" ? WitnessPolicy::All : WitnessPolicy::First;
    cfg.trials = trials;
    cfg.prime = prime;
    cfg.seed = seed;
    cfg.symbolic_cutoff = cutoff;
    cfg.claim = claim == "ring"      ? ClaimKind::Ring
                : claim == "chapuy"  ? ClaimKind::Chapuy
                : claim == "custom"  ? ClaimKind::Custom
                : claim == "none"    ? ClaimKind::None
                                     : ClaimKind::Auto;
    if (cfg.claim == ClaimKind::Custom) cfg.custom_claim = parse_exponents(exponents);
    cfg.checks = parse_checks(checks);
    cfg.set_one = parse_vars(set_one);

    VerifyReport report = run_verify(cfg);
    for (const std::string& note : report.notes) std::cerr << "note: " << note << "\n";
    if (format == "json")
        std::cout << report_json(report);
    else
        std::cout << report_human(report);
    return report.exit_code();
}

int run_show(const std::string& what, const GraphArgs& graph_args,
             const std::string& emit, int root, bool letters,
             const std::string& order) {
    GraphSpec spec = make_spec(graph_args);
    RateGraph g = spec.build();
    if (!g.irreducible()) {
        std::cerr << "error: the graph is not irreducible\n";
        return 2;
    }
    LiftedChain lc = build_lift(g);
    const bool use_letters = letters && letters_available(g);
    if (letters && !use_letters)
        std::cerr << "note: letter aliases need the 3-state complete graph; "
                     "using canonical names\n";

    if (what == "trees") {
        std::optional<int> r;
        if (root > 0) r = root;
        std::cout << show_trees(lc, r, use_letters);
        return 0;
    }
    if (what == "r-matrix") {
        std::cout << show_r_matrix(lc, use_letters, split_csv(order));
        return 0;
    }
    // lift
    if (emit == "dot")
        std::cout << lift_dot(lc, use_letters);
    else if (emit == "json")
        std::cout << lift_json(lc);
    else {
        std::cout << show_trees(lc, std::nullopt, use_letters);
        for (const Transition& tr : lc.transitions())
            std::cout << "t" << tr.from << " -> t" << tr.to << "  "
                      << (use_letters ? format_poly(Poly::var(tr.label), true)
                                      : to_string(tr.label))
                      << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covering-tree lift of finite Markov chains"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand(
        "verify", "compute psi and verify its factorization into symmetric minors");
    GraphArgs vg;
    add_graph_options(verify, &vg);
    std::string mode = "auto", witnesses = "first", claim = "auto";
    std::string exponents, checks = "none", set_one, format = "human";
    int trials = 20, cutoff = 30;
    std::uint64_t prime = default_prime(), seed = 0;
    verify->add_option("--mode", mode, "symbolic, pit, or auto (by |T|)")
        ->check(CLI::IsMember({"auto", "symbolic", "pit"}));
    verify->add_option("--witnesses", witnesses, "trees used to extract psi")
        ->check(CLI::IsMember({"first", "all"}));
    verify->add_option("--trials", trials, "randomized trials in pit mode")
        ->check(CLI::PositiveNumber);
    verify->add_option("--prime", prime, "modulus for pit mode (prime above 2^60)");
    verify->add_option("--seed", seed, "master seed for pit randomness");
    verify->add_option("--cutoff", cutoff, "largest |T| computed symbolically");
    verify->add_option("--claim", claim,
                       "claimed factorization: ring, chapuy, custom, none, auto")
        ->check(CLI::IsMember({"auto", "none", "ring", "chapuy", "custom"}));
    verify->add_option("--exponents", exponents,
                       "rank:exponent pairs for --claim custom, e.g. 2:3,3:2");
    verify->add_option("--checks", checks,
                       "all, none, or a comma list of pi_invariance, kirchhoff, "
                       "lemma_covfor, distinguished_monomial, degree_identity");
    verify->add_option("--set-one", set_one,
                       "comma list of variables to specialize to 1");
    verify->add_option("--format", format, "human or json")
        ->check(CLI::IsMember({"human", "json"}));

    // show and its aliases
    struct ShowArgs {
        GraphArgs graph;
        std::string emit = "text";
        int root = 0;
        bool letters = false;
        std::string order;
    };
    auto add_show_options = [](CLI::App* cmd, ShowArgs* args, bool with_order) {
        add_graph_options(cmd, &args->graph);
        cmd->add_option("--emit", args->emit, "text, dot, or json")
            ->check(CLI::IsMember({"text", "dot", "json"}));
        cmd->add_option("--root", args->root, "only trees with this root");
        cmd->add_flag("--letters", args->letters,
                      "alias the 3-state edge variables as a,b,c,u,v,w");
        if (with_order)
            cmd->add_option("--order", args->order,
                            "comma list of tree weights fixing the row order");
    };

    auto* show = app.add_subcommand("show", "print trees, the lifted graph, or R");
    show->require_subcommand(1);
    ShowArgs show_trees_args, show_lift_args, show_r_args;
    auto* show_trees_cmd =
        show->add_subcommand("trees", "covering trees and their weights");
    add_show_options(show_trees_cmd, &show_trees_args, false);
    auto* show_lift_cmd =
        show->add_subcommand("lift", "the lifted transition graph");
    add_show_options(show_lift_cmd, &show_lift_args, false);
    auto* show_r_cmd =
        show->add_subcommand("r-matrix", "the symbolic transition matrix R");
    add_show_options(show_r_cmd, &show_r_args, true);

    ShowArgs trees_alias_args, lift_alias_args;
    auto* trees_alias = app.add_subcommand("trees", "alias for 'show trees'");
    add_show_options(trees_alias, &trees_alias_args, false);
    auto* lift_alias = app.add_subcommand("lift", "alias for 'show lift'");
    add_show_options(lift_alias, &lift_alias_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed())
            return run_verify_cmd(vg, mode, witnesses, trials, prime, seed, cutoff,
                                  claim, exponents, checks, set_one, format);
        if (show_trees_cmd->parsed())
            return run_show("trees", show_trees_args.graph, show_trees_args.emit,
                            show_trees_args.root, show_trees_args.letters, "");
        if (show_lift_cmd->parsed())
            return run_show("lift", show_lift_args.graph, show_lift_args.emit,
                            show_lift_args.root, show_lift_args.letters, "");
        if (show_r_cmd->parsed())
            return run_show("r-matrix", show_r_args.graph, show_r_args.emit,
                            show_r_args.root, show_r_args.letters,
                            show_r_args.order);
        if (trees_alias->parsed())
            return run_show("trees", trees_alias_args.graph, trees_alias_args.emit,
                            trees_alias_args.root, trees_alias_args.letters, "");
        if (lift_alias->parsed())
            return run_show("lift", lift_alias_args.graph, lift_alias_args.emit,
                            lift_alias_args.root, lift_alias_args.letters, "");
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
