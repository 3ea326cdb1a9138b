#include "treelift/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace treelift {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Constraint from the design: residue products must fit in 128 bits.
constexpr std::uint64_t kMinPrime = 1ull << 60;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t acc = 1 % p;
    while (exp) {
        if (exp & 1) acc = mod_mul(acc, base, p);
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    return acc;
}

}  // namespace

std::string to_string(VarId v) {
    return "q" + std::to_string(v.source) + "_" + std::to_string(v.target);
}

Monomial Monomial::var(VarId v, std::uint32_t exp) {
    if (v.source == v.target)
        throw std::invalid_argument("loop variable q" +
                                    std::to_string(v.source) + "_" +
                                    std::to_string(v.target));
    Monomial m;
    if (exp > 0) {
        m.entries_.emplace_back(v, exp);
        m.degree_ = exp;
    }
    return m;
}

Monomial Monomial::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Monomial m;
    for (const Entry& e : entries) {
        if (e.second == 0) continue;
        if (!m.entries_.empty() && m.entries_.back().first == e.first)
            m.entries_.back().second += e.second;
        else
            m.entries_.push_back(e);
        m.degree_ += e.second;
    }
    return m;
}

std::uint32_t Monomial::exponent_of(VarId v) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), v,
        [](const Entry& e, VarId w) { return e.first < w; });
    return (it != entries_.end() && it->first == v) ? it->second : 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial out;
    out.entries_.reserve(entries_.size() + other.entries_.size());
    auto ia = entries_.begin(), ib = other.entries_.begin();
    while (ia != entries_.end() && ib != other.entries_.end()) {
        if (ia->first < ib->first)
            out.entries_.push_back(*ia++);
        else if (ib->first < ia->first)
            out.entries_.push_back(*ib++);
        else {
            out.entries_.emplace_back(ia->first, ia->second + ib->second);
            ++ia;
            ++ib;
        }
    }
    out.entries_.insert(out.entries_.end(), ia, entries_.end());
    out.entries_.insert(out.entries_.end(), ib, other.entries_.end());
    out.degree_ = degree_ + other.degree_;
    return out;
}

bool Monomial::divides(const Monomial& other) const {
    auto ia = entries_.begin();
    auto ib = other.entries_.begin();
    while (ia != entries_.end()) {
        while (ib != other.entries_.end() && ib->first < ia->first) ++ib;
        if (ib == other.entries_.end() || ib->first != ia->first ||
            ib->second < ia->second)
            return false;
        ++ia;
    }
    return true;
}

std::optional<Monomial> Monomial::divide(const Monomial& den) const {
    Monomial out;
    auto id = den.entries_.begin();
    for (const Entry& e : entries_) {
        if (id != den.entries_.end() && id->first == e.first) {
            if (id->second > e.second) return std::nullopt;
            if (e.second > id->second)
                out.entries_.emplace_back(e.first, e.second - id->second);
            ++id;
        } else {
            if (id != den.entries_.end() && id->first < e.first)
                return std::nullopt;  // den has a variable we lack
            out.entries_.push_back(e);
        }
    }
    if (id != den.entries_.end()) return std::nullopt;
    out.degree_ = degree_ - den.degree_;
    return out;
}

int Monomial::cmp(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    auto ia = a.entries_.begin(), ib = b.entries_.begin();
    while (ia != a.entries_.end() && ib != b.entries_.end()) {
        if (ia->first != ib->first) {
            // the earlier variable carries a positive exponent in exactly
            // one of the two monomials, which makes it lex-greater
            return ia->first < ib->first ? 1 : -1;
        }
        if (ia->second != ib->second)
            return ia->second < ib->second ? -1 : 1;
        ++ia;
        ++ib;
    }
    if (ia != a.entries_.end()) return 1;
    if (ib != b.entries_.end()) return -1;
    return 0;
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull + m.entries().size();
    for (const auto& [v, e] : m.entries()) {
        std::uint64_t k = (static_cast<std::uint64_t>(
                               static_cast<std::uint32_t>(v.source))
                           << 40) ^
                          (static_cast<std::uint64_t>(
                               static_cast<std::uint32_t>(v.target))
                           << 20) ^
                          e;
        h = splitmix64(h ^ k);
    }
    return static_cast<std::size_t>(h);
}

Poly Poly::constant(long c) { return constant(mpz_class(c)); }

Poly Poly::constant(mpz_class c) {
    Poly p;
    if (c != 0) p.terms_.push_back({Monomial::unit(), std::move(c)});
    return p;
}

Poly Poly::var(VarId v) {
    Poly p;
    p.terms_.push_back({Monomial::var(v), mpz_class(1)});
    return p;
}

Poly Poly::term(Monomial m, mpz_class c) {
    Poly p;
    if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
}

Poly Poly::from_monomials(const std::vector<Monomial>& monos) {
    std::vector<Term> ts;
    ts.reserve(monos.size());
    for (const Monomial& m : monos) ts.push_back({m, mpz_class(1)});
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) {
        return Monomial::cmp(a.mono, b.mono) > 0;
    });
    Poly p;
    for (Term& t : ts) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono)
            p.terms_.back().coeff += t.coeff;
        else
            p.terms_.push_back(std::move(t));
    }
    return p;
}

bool Poly::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_unit() &&
           terms_[0].coeff == 1;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_unit());
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(terms_.front().mono.degree());
}

const Poly::Term& Poly::leading_term() const {
    if (terms_.empty())
        throw std::domain_error("leading term of the zero polynomial");
    return terms_.front();
}

mpz_class Poly::coefficient_of(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) {
                                   return Monomial::cmp(t.mono, key) > 0;
                               });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return mpz_class(0);
}

Poly Poly::merge(const Poly& a, const Poly& b, bool negate_b) {
    Poly out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
        int c = Monomial::cmp(ia->mono, ib->mono);
        if (c > 0) {
            out.terms_.push_back(*ia++);
        } else if (c < 0) {
            out.terms_.push_back(*ib);
            if (negate_b) out.terms_.back().coeff = -out.terms_.back().coeff;
            ++ib;
        } else {
            mpz_class s = negate_b ? mpz_class(ia->coeff - ib->coeff)
                                   : mpz_class(ia->coeff + ib->coeff);
            if (s != 0) out.terms_.push_back({ia->mono, std::move(s)});
            ++ia;
            ++ib;
        }
    }
    out.terms_.insert(out.terms_.end(), ia, a.terms_.end());
    while (ib != b.terms_.end()) {
        out.terms_.push_back(*ib);
        if (negate_b) out.terms_.back().coeff = -out.terms_.back().coeff;
        ++ib;
    }
    return out;
}

Poly Poly::operator+(const Poly& other) const {
    return merge(*this, other, false);
}

Poly Poly::operator-(const Poly& other) const {
    return merge(*this, other, true);
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (Term& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

Poly& Poly::operator+=(const Poly& other) {
    *this = *this + other;
    return *this;
}

Poly& Poly::operator-=(const Poly& other) {
    *this = *this - other;
    return *this;
}

Poly& Poly::operator*=(const Poly& other) {
    *this = *this * other;
    return *this;
}

namespace {

// Shared accumulation buffer for products; collected and sorted at the end.
using Accumulator = std::unordered_map<Monomial, mpz_class, MonomialHash>;

void accumulate_product(Accumulator& acc, const Poly& a, const Poly& b,
                        bool negate) {
    for (const Poly::Term& ta : a.terms()) {
        for (const Poly::Term& tb : b.terms()) {
            mpz_class& slot = acc[ta.mono * tb.mono];
            if (negate)
                mpz_submul(slot.get_mpz_t(), ta.coeff.get_mpz_t(),
                           tb.coeff.get_mpz_t());
            else
                mpz_addmul(slot.get_mpz_t(), ta.coeff.get_mpz_t(),
                           tb.coeff.get_mpz_t());
        }
    }
}

}  // namespace

Poly Poly::operator*(const Poly& other) const {
    if (is_zero() || other.is_zero()) return {};
    if (other.terms_.size() == 1) {
        const Term& t = other.terms_[0];
        Poly out;
        out.terms_.reserve(terms_.size());
        for (const Term& tp : terms_)
            out.terms_.push_back({tp.mono * t.mono, mpz_class(tp.coeff * t.coeff)});
        return out;
    }
    if (terms_.size() == 1) return other * *this;
    Accumulator acc;
    acc.reserve(terms_.size() * other.terms_.size() / 2 + 8);
    accumulate_product(acc, *this, other, false);
    std::vector<Term> ts;
    ts.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) ts.push_back({m, std::move(c)});
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) {
        return Monomial::cmp(a.mono, b.mono) > 0;
    });
    Poly out;
    out.terms_ = std::move(ts);
    return out;
}

Poly det2(const Poly& a, const Poly& b, const Poly& c, const Poly& d) {
    // a*d - b*c with one shared accumulator; the Bareiss inner loop lives
    // on this path.
    if ((a.is_zero() || d.is_zero()) && (b.is_zero() || c.is_zero()))
        return {};
    if (b.is_zero() || c.is_zero()) return a * d;
    if (a.is_zero() || d.is_zero()) return -(b * c);
    Accumulator acc;
    acc.reserve((a.term_count() * d.term_count() +
                 b.term_count() * c.term_count()) /
                    2 +
                8);
    accumulate_product(acc, a, d, false);
    accumulate_product(acc, b, c, true);
    std::vector<Poly::Term> ts;
    ts.reserve(acc.size());
    for (auto& [m, coeff] : acc)
        if (coeff != 0) ts.push_back({m, std::move(coeff)});
    std::sort(ts.begin(), ts.end(), [](const Poly::Term& x, const Poly::Term& y) {
        return Monomial::cmp(x.mono, y.mono) > 0;
    });
    Poly out;
    out.terms_ = std::move(ts);
    return out;
}

std::optional<Poly> Poly::exact_div(const Poly& den) const {
    if (den.is_zero())
        throw std::domain_error("polynomial division by zero");
    if (is_zero()) return Poly();

    struct DescLess {
        bool operator()(const Monomial& a, const Monomial& b) const {
            return Monomial::cmp(a, b) > 0;
        }
    };
    std::map<Monomial, mpz_class, DescLess> rem;
    for (const Term& t : terms_) rem.emplace(t.mono, t.coeff);

    const Term& dl = den.terms_.front();
    Poly quot;
    while (!rem.empty()) {
        const auto& [rm, rc] = *rem.begin();
        auto qm = rm.divide(dl.mono);
        if (!qm) return std::nullopt;
        if (!mpz_divisible_p(rc.get_mpz_t(), dl.coeff.get_mpz_t()))
            return std::nullopt;
        mpz_class qc;
        mpz_divexact(qc.get_mpz_t(), rc.get_mpz_t(), dl.coeff.get_mpz_t());
        // quotient terms are produced in strictly decreasing order
        quot.terms_.push_back({*qm, qc});
        for (const Term& dt : den.terms_) {
            Monomial key = dt.mono * *qm;
            mpz_class& slot = rem[key];
            mpz_submul(slot.get_mpz_t(), dt.coeff.get_mpz_t(),
                       qc.get_mpz_t());
            if (slot == 0) rem.erase(key);
        }
    }
    return quot;
}

std::uint64_t Poly::eval_mod(const std::map<VarId, std::uint64_t>& assignment,
                             std::uint64_t prime) const {
    if (prime <= kMinPrime)
        throw std::domain_error("modulus must exceed 2^60");
    std::uint64_t acc = 0;
    for (const Term& t : terms_) {
        std::uint64_t v =
            mpz_fdiv_ui(t.coeff.get_mpz_t(), static_cast<unsigned long>(prime));
        for (const auto& [var, exp] : t.mono.entries()) {
            auto it = assignment.find(var);
            if (it == assignment.end())
                throw std::invalid_argument("unassigned variable " +
                                            to_string(var));
            v = mod_mul(v, mod_pow(it->second % prime, exp, prime), prime);
        }
        acc = (acc + v) % prime;
    }
    return acc;
}

Poly Poly::assign_one(const std::set<VarId>& vars) const {
    std::vector<Monomial> monos;
    Poly out;
    for (const Term& t : terms_) {
        std::vector<Monomial::Entry> kept;
        for (const auto& e : t.mono.entries())
            if (!vars.count(e.first)) kept.push_back(e);
        out += Poly::term(Monomial::from_entries(std::move(kept)), t.coeff);
    }
    return out;
}

std::set<VarId> Poly::variables() const {
    std::set<VarId> vs;
    for (const Term& t : terms_)
        for (const auto& e : t.mono.entries()) vs.insert(e.first);
    return vs;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        const bool neg = t.coeff < 0;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        mpz_class a = abs(t.coeff);
        if (a != 1 || t.mono.is_unit()) {
            os << a.get_str();
            if (!t.mono.is_unit()) os << "*";
        }
        bool firstv = true;
        for (const auto& [v, e] : t.mono.entries()) {
            if (!firstv) os << "*";
            firstv = false;
            os << to_string(v);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("polynomial parse error at offset " +
                                    std::to_string(pos) + ": " + what);
    }

    std::string digits() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start) fail("expected an integer");
        return std::string(s.substr(start, pos - start));
    }

    long small_int() {
        std::string d = digits();
        long v = 0;
        auto [p, ec] = std::from_chars(d.data(), d.data() + d.size(), v);
        if (ec != std::errc() || p != d.data() + d.size())
            fail("integer out of range");
        return v;
    }

    VarId variable() {
        if (!eat('q')) fail("expected a variable");
        long i = small_int();
        if (!eat('_')) fail("expected '_' in variable");
        long j = small_int();
        if (i == j) fail("loop variable");
        return VarId{static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)};
    }

    // term := integer ('*' factor)* | factor ('*' factor)*
    Poly term() {
        mpz_class coeff(1);
        std::vector<Monomial::Entry> entries;
        bool any = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = mpz_class(digits());
            any = true;
            if (!eat('*')) return Poly::term(Monomial::unit(), coeff);
        }
        while (true) {
            VarId v = variable();
            std::uint32_t e = 1;
            if (eat('^')) {
                long raw = small_int();
                if (raw <= 0) fail("exponent must be positive");
                e = static_cast<std::uint32_t>(raw);
            }
            entries.emplace_back(v, e);
            any = true;
            if (!eat('*')) break;
        }
        if (!any) fail("empty term");
        return Poly::term(Monomial::from_entries(std::move(entries)),
                          std::move(coeff));
    }

    Poly poly() {
        Poly acc;
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        while (true) {
            Poly t = term();
            acc = neg ? acc - t : acc + t;
            skip_ws();
            if (pos >= s.size()) break;
            if (eat('+'))
                neg = false;
            else if (eat('-'))
                neg = true;
            else
                fail("expected '+' or '-'");
        }
        return acc;
    }
};

}  // namespace

Poly Poly::parse(std::string_view text) {
    Parser p{text};
    p.skip_ws();
    if (p.pos >= text.size())
        throw std::invalid_argument("polynomial parse error: empty input");
    // "0" (optionally signed) is the zero polynomial
    Poly out = p.poly();
    return out;
}

}  // namespace treelift
