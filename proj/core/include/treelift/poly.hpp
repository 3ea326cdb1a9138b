#pragma once

#include <cstdint>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace treelift {

// Edge variable q_{ij} of a rate matrix. Vertices are 1-based; loops are
// not representable (source != target).
struct VarId {
    std::int32_t source = 0;
    std::int32_t target = 0;
    auto operator<=>(const VarId&) const = default;
};

std::string to_string(VarId v);  // "q1_2"

// Power product of edge variables. Entries are sorted by VarId and never
// carry a zero exponent; the empty entry list is the unit monomial.
class Monomial {
public:
    using Entry = std::pair<VarId, std::uint32_t>;

    Monomial() = default;
    static Monomial unit() { return {}; }
    static Monomial var(VarId v, std::uint32_t exp = 1);
    // Sorts, merges duplicates, drops zero exponents.
    static Monomial from_entries(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    bool is_unit() const { return entries_.empty(); }
    std::uint32_t degree() const { return degree_; }
    std::uint32_t exponent_of(VarId v) const;

    Monomial operator*(const Monomial& other) const;
    bool divides(const Monomial& other) const;
    // *this / den when every exponent fits, nullopt otherwise.
    std::optional<Monomial> divide(const Monomial& den) const;

    bool operator==(const Monomial&) const = default;

    // Graded lexicographic order: total degree first, ties broken
    // lexicographically with variables ordered by (source, target).
    // Returns <0, 0, >0 like strcmp.
    static int cmp(const Monomial& a, const Monomial& b);

private:
    std::vector<Entry> entries_;
    std::uint32_t degree_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const;
};

// Sparse multivariate polynomial with exact integer coefficients.
// Canonical form: terms sorted graded-lex descending, no zero coefficients.
// Structural equality is polynomial equality.
class Poly {
public:
    struct Term {
        Monomial mono;
        mpz_class coeff;
    };

    Poly() = default;
    static Poly zero() { return {}; }
    static Poly one() { return constant(1); }
    static Poly constant(long c);
    static Poly constant(mpz_class c);
    static Poly var(VarId v);
    static Poly term(Monomial m, mpz_class c);
    // Sum of unit-coefficient monomials (merges duplicates).
    static Poly from_monomials(const std::vector<Monomial>& monos);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_constant() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    // Total degree; -1 for the zero polynomial.
    int degree() const;
    // Maximal term under graded-lex; throws std::domain_error on zero.
    const Term& leading_term() const;
    mpz_class coefficient_of(const Monomial& m) const;

    Poly operator+(const Poly& other) const;
    Poly operator-(const Poly& other) const;
    Poly operator*(const Poly& other) const;
    Poly operator-() const;
    Poly& operator+=(const Poly& other);
    Poly& operator-=(const Poly& other);
    Poly& operator*=(const Poly& other);

    // Exact quotient q with q * den == *this, nullopt when no polynomial
    // quotient exists. Throws std::domain_error when den is zero.
    std::optional<Poly> exact_div(const Poly& den) const;

    // Value modulo prime at a full assignment of the variables appearing
    // in the polynomial. Throws std::invalid_argument on a missing
    // variable, std::domain_error when prime is out of range (the prime
    // must exceed 2^60 so two-residue products fit in 128 bits).
    std::uint64_t eval_mod(const std::map<VarId, std::uint64_t>& assignment,
                           std::uint64_t prime) const;

    // Substitutes 1 for each listed variable.
    Poly assign_one(const std::set<VarId>& vars) const;

    std::set<VarId> variables() const;

    // Canonical text form, e.g. "q1_2*q2_3 + 2*q3_1"; "0" for zero.
    std::string str() const;
    // Parses the canonical grammar; throws std::invalid_argument on
    // syntax errors.
    static Poly parse(std::string_view text);

    bool operator==(const Poly&) const = default;

private:
    std::vector<Term> terms_;  // graded-lex descending

    static Poly merge(const Poly& a, const Poly& b, bool negate_b);
    friend Poly det2(const Poly&, const Poly&, const Poly&, const Poly&);
};

// Determinant of [[a, b], [c, d]] with a single fused accumulation pass.
Poly det2(const Poly& a, const Poly& b, const Poly& c, const Poly& d);

}  // namespace treelift
