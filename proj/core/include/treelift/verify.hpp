#pragma once

#include <optional>
#include <string>

#include "treelift/psi.hpp"

namespace treelift {

struct GraphSpec {
    enum class Family { Ring, Complete, Custom };
    Family family = Family::Ring;
    int n = 3;
    std::vector<std::pair<int, int>> edges;  // custom graphs only

    RateGraph build() const;
};

enum class Mode { Auto, Symbolic, Pit };
enum class WitnessPolicy { First, All };
enum class ClaimKind { Auto, None, Ring, Chapuy, Custom };

struct CheckSelection {
    bool pi_invariance = false;
    bool kirchhoff = false;
    bool lemma_covfor = false;
    bool distinguished_monomial = false;
    bool degree_identity = false;

    static CheckSelection all();
    static CheckSelection none() { return {}; }
};

struct RunConfig {
    GraphSpec graph;
    Mode mode = Mode::Auto;
    WitnessPolicy witnesses = WitnessPolicy::First;
    int trials = 20;
    std::uint64_t prime = modp::kDefaultPrime;
    std::uint64_t seed = 0;
    int symbolic_cutoff = 30;  // largest |T| attempted symbolically
    std::set<VarId> set_one;   // variables specialized to 1 (symbolic mode)
    ClaimKind claim = ClaimKind::Auto;
    std::map<int, long long> custom_claim;
    CheckSelection checks;
};

// Everything a verification run reports. JSON serialization is a pure
// function of this struct, so identical configs give identical bytes.
struct VerifyReport {
    GraphSpec graph;
    std::string graph_desc;
    std::string mode;  // "symbolic" or "pit"
    int tree_count = 0;
    int psi_degree = 0;
    std::vector<std::pair<std::vector<int>, int>> multiplicities;
    std::string residual = "1";
    std::optional<std::string> psi_leading_coeff;
    std::optional<bool> claim_verified;
    std::vector<VarId> specialized;
    std::optional<PitResult> pit;
    std::optional<bool> check_pi_invariance;
    std::optional<bool> check_kirchhoff;
    std::optional<bool> check_lemma_covfor;
    std::optional<bool> check_distinguished_monomial;
    std::optional<bool> check_degree_identity;

    bool infeasible = false;
    std::string infeasible_reason;
    std::vector<std::string> notes;

    // 0 = requested checks pass, 1 = a check failed, 2 = infeasible
    int exit_code() const;
};

VerifyReport run_verify(const RunConfig& cfg);

std::string report_json(const VerifyReport& report);
std::string report_human(const VerifyReport& report);

// Rendering helpers behind the `show` command.
// Alias table for the 3-state chain: a=q1_2, b=q2_3, c=q3_1, u=q2_1,
// v=q3_2, w=q1_3. Letter output is available exactly when the graph has
// all six of those edges.
bool letters_available(const RateGraph& g);
std::string poly_letters(const Poly& p);
std::string format_poly(const Poly& p, bool letters);

std::string show_trees(const LiftedChain& lc, std::optional<int> root, bool letters);
// Order, when given, lists tree weights (letter or canonical form) and
// permutes rows/columns accordingly.
std::string show_r_matrix(const LiftedChain& lc, bool letters,
                          const std::vector<std::string>& order = {});
std::string lift_dot(const LiftedChain& lc, bool letters);
std::string lift_json(const LiftedChain& lc);

// Resolves a weight spec like "cu" or "q2_1*q3_1" to a tree index.
std::optional<int> tree_index_by_weight(const LiftedChain& lc, const std::string& weight);

}  // namespace treelift
