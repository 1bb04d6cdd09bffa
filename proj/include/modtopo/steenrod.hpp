#pragma once

// Steenrod squares Sq^k (p = 2), reduced powers St^k (odd p) and the
// Bockstein on presented graded-commutative F_p algebras.
//
// A presentation lists generators with degrees, homogeneous relations, and
// operation values on generators. Operations on arbitrary elements follow
// from the axioms:
//   Sq^0 = 1,  Sq^k x = 0 for k > |x|,   Sq^|x| x = x^2,
//   St^0 = 1,  St^k x = 0 for 2k > |x|,  St^k x = x^p for 2k = |x|,
//   Cartan:    Sq^k(xy) = sum_{i+j=k} Sq^i(x) Sq^j(y)  (likewise St),
//   Sq^1 = beta for p = 2.
// Elements are kept in normal form: relations are rewriting rules from
// their lex-leading monomial, applied to a fixed point.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modtopo/error.hpp"
#include "modtopo/integer.hpp"

namespace modtopo::steenrod {

/// Exponent of each generator, in generator order.
using Exponents = std::vector<std::uint32_t>;
/// Monomial -> coefficient in [1, p). Missing monomials have coefficient 0.
using Polynomial = std::map<Exponents, std::int64_t>;

struct Generator {
    std::string name;
    std::size_t degree = 1;
};

enum class OpKind { Sq, St, Beta };

struct OpKey {
    OpKind kind = OpKind::Sq;
    /// Unused (zero) for Beta.
    std::size_t k = 0;
    std::size_t generator = 0;
    friend auto operator<=>(const OpKey&, const OpKey&) = default;
};

inline std::string op_name(OpKind kind, std::size_t k) {
    switch (kind) {
    case OpKind::Sq: return "Sq" + std::to_string(k);
    case OpKind::St: return "St" + std::to_string(k);
    case OpKind::Beta: return "beta";
    }
    return "?";
}

class RingElement;

class ModPRingPresentation : public std::enable_shared_from_this<ModPRingPresentation> {
    struct Token {};

public:
    /// Validates the presentation and checks that the relations give unique
    /// normal forms (Groebner condition) in every degree an overlap of two
    /// rules can occur in.
    static std::shared_ptr<const ModPRingPresentation> create(std::int64_t p, std::vector<Generator> generators,
                                                              std::vector<Polynomial> relations,
                                                              std::map<OpKey, Polynomial> ops) {
        auto ring = std::make_shared<ModPRingPresentation>(Token{}, p, std::move(generators));
        ring->install_relations(std::move(relations));
        ring->install_ops(std::move(ops));
        const std::size_t bound = ring->overlap_degree_bound();
        if (auto bad = ring->confluence_failures(bound); !bad.empty())
            throw Error(ErrorCode::NotConfluent, "relations do not give unique normal forms in degree " +
                                                     std::to_string(bad.front()));
        return ring;
    }

    /// Like create(), but op values and relations are given as strings in the
    /// generator names, e.g. "w1*w2 + w3".
    static std::shared_ptr<const ModPRingPresentation>
    create(std::int64_t p, std::vector<Generator> generators, const std::vector<std::string>& relations,
           const std::vector<std::tuple<OpKind, std::size_t, std::string, std::string>>& ops) {
        ModPRingPresentation scratch(Token{}, p, generators);
        std::vector<Polynomial> rels;
        for (const auto& r : relations)
            rels.push_back(scratch.parse_polynomial(r));
        std::map<OpKey, Polynomial> table;
        for (const auto& [kind, k, gen, value] : ops)
            table[{kind, kind == OpKind::Beta ? 0 : k, scratch.generator_index(gen)}] = scratch.parse_polynomial(value);
        return create(p, std::move(generators), std::move(rels), std::move(table));
    }

    ModPRingPresentation(Token, std::int64_t p, std::vector<Generator> generators)
        : p_(p), generators_(std::move(generators)) {
        if (!is_prime(p_))
            throw Error(ErrorCode::InvalidPresentation, "characteristic " + std::to_string(p_) + " is not prime");
        std::set<std::string> names;
        for (const auto& g : generators_) {
            if (g.name.empty() || !names.insert(g.name).second)
                throw Error(ErrorCode::InvalidPresentation, "generator names must be nonempty and distinct");
            if (g.degree < 1)
                throw Error(ErrorCode::InvalidPresentation, "generator " + g.name + " must have positive degree");
        }
    }

    std::int64_t p() const noexcept { return p_; }
    const std::vector<Generator>& generators() const noexcept { return generators_; }
    const std::vector<Polynomial>& relations() const noexcept { return relations_; }
    const std::map<OpKey, Polynomial>& ops() const noexcept { return ops_; }

    std::size_t generator_index(const std::string& name) const {
        for (std::size_t i = 0; i < generators_.size(); ++i)
            if (generators_[i].name == name)
                return i;
        throw Error(ErrorCode::InvalidPresentation, "unknown generator '" + name + "'");
    }

    std::size_t degree(const Exponents& e) const {
        std::size_t d = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            d += e[i] * generators_[i].degree;
        return d;
    }

    /// Degree of a homogeneous polynomial; nullopt for zero or mixed degrees.
    std::optional<std::size_t> homogeneous_degree(const Polynomial& f) const {
        std::optional<std::size_t> d;
        for (const auto& [m, c] : f) {
            const auto dm = degree(m);
            if (d && *d != dm)
                return std::nullopt;
            d = dm;
        }
        return d;
    }

    bool is_homogeneous(const Polynomial& f) const { return f.empty() || homogeneous_degree(f).has_value(); }

    /// Degree shift of an operation.
    std::size_t shift(OpKind kind, std::size_t k) const {
        switch (kind) {
        case OpKind::Sq: return k;
        case OpKind::St: return 2 * k * static_cast<std::size_t>(p_ - 1);
        case OpKind::Beta: return 1;
        }
        return 0;
    }

    // Polynomial arithmetic over F_p (unreduced unless stated).

    std::int64_t normalize(std::int64_t c) const {
        c %= p_;
        return c < 0 ? c + p_ : c;
    }

    void add_term(Polynomial& f, const Exponents& m, std::int64_t c) const {
        c = normalize(c);
        if (c == 0)
            return;
        auto [it, inserted] = f.try_emplace(m, c);
        if (!inserted) {
            it->second = normalize(it->second + c);
            if (it->second == 0)
                f.erase(it);
        }
    }

    Polynomial add(const Polynomial& a, const Polynomial& b) const {
        Polynomial out = a;
        for (const auto& [m, c] : b)
            add_term(out, m, c);
        return out;
    }

    Polynomial scale(const Polynomial& a, std::int64_t s) const {
        Polynomial out;
        for (const auto& [m, c] : a)
            add_term(out, m, c * s);
        return out;
    }

    /// a * b as ordered words, with the graded-commutativity sign. Zero when
    /// an odd-degree generator would appear squared (odd p only).
    std::pair<std::int64_t, Exponents> multiply_monomials(const Exponents& a, const Exponents& b) const {
        Exponents e(generators_.size());
        std::int64_t sign = 1;
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = a[i] + b[i];
            if (p_ != 2 && generators_[i].degree % 2 == 1 && e[i] > 1)
                return {0, {}};
        }
        if (p_ != 2) {
            // Moving each odd factor of b to the left past the odd factors
            // of a with a larger index.
            std::size_t swaps = 0;
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (generators_[j].degree % 2 == 0 || b[j] == 0)
                    continue;
                for (std::size_t i = j + 1; i < e.size(); ++i)
                    if (generators_[i].degree % 2 == 1)
                        swaps += a[i] * b[j];
            }
            if (swaps % 2 == 1)
                sign = -1;
        }
        return {sign, std::move(e)};
    }

    Polynomial multiply_raw(const Polynomial& a, const Polynomial& b) const {
        Polynomial out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) {
                auto [sign, m] = multiply_monomials(ma, mb);
                if (sign != 0)
                    add_term(out, m, sign * ca * cb);
            }
        return out;
    }

    Polynomial multiply(const Polynomial& a, const Polynomial& b) const { return reduce(multiply_raw(a, b)); }

    Polynomial power(const Polynomial& a, std::size_t e) const {
        Polynomial result = one_poly();
        for (std::size_t i = 0; i < e; ++i)
            result = multiply(result, a);
        return result;
    }

    Polynomial one_poly() const { return {{Exponents(generators_.size()), 1}}; }
    Polynomial generator_poly(std::size_t i) const {
        Exponents e(generators_.size());
        e[i] = 1;
        return {{e, 1}};
    }

    /// Normal form: rewrite any monomial divisible by a rule's leading
    /// monomial until none is.
    Polynomial reduce(Polynomial f) const {
        for (;;) {
            bool changed = false;
            for (auto it = f.rbegin(); it != f.rend(); ++it) {
                const Exponents& m = it->first;
                for (const auto& rule : rules_) {
                    auto cofactor = divide(m, rule.lead);
                    if (!cofactor)
                        continue;
                    // m = sign * cofactor * lead  ->  sign * cofactor * tail
                    auto [sign, check] = multiply_monomials(*cofactor, rule.lead);
                    const std::int64_t c = it->second;
                    Polynomial replacement;
                    if (sign != 0)
                        for (const auto& [tm, tc] : rule.tail) {
                            auto [s2, prod] = multiply_monomials(*cofactor, tm);
                            if (s2 != 0)
                                add_term(replacement, prod, sign * s2 * tc * c);
                        }
                    f.erase(m);
                    for (const auto& [rm, rc] : replacement)
                        add_term(f, rm, rc);
                    changed = true;
                    break;
                }
                if (changed)
                    break;
            }
            if (!changed)
                return f;
        }
    }

    bool is_standard(const Exponents& m) const {
        for (const auto& rule : rules_)
            if (divide(m, rule.lead))
                return false;
        return true;
    }

    /// Every nonzero monomial (odd generators at most once for odd p) of
    /// exactly the given degree, in increasing lex order.
    std::vector<Exponents> monomials_of_degree(std::size_t d) const {
        std::vector<Exponents> out;
        Exponents e(generators_.size());
        enumerate(0, d, e, out);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<Exponents> standard_monomials_up_to(std::size_t max_degree) const {
        std::vector<Exponents> out;
        for (std::size_t d = 0; d <= max_degree; ++d)
            for (auto& m : monomials_of_degree(d))
                if (is_standard(m))
                    out.push_back(std::move(m));
        return out;
    }

    /// Degrees <= max_degree in which the rewriting rules fail to span the
    /// ideal, i.e. where normal forms are not unique.
    std::vector<std::size_t> confluence_failures(std::size_t max_degree) const {
        std::vector<std::size_t> bad;
        if (relations_.empty())
            return bad;
        for (std::size_t d = 1; d <= max_degree; ++d) {
            auto monos = monomials_of_degree(d);
            std::size_t reducible = 0;
            for (const auto& m : monos)
                if (!is_standard(m))
                    ++reducible;
            if (ideal_dimension(d, monos) != reducible)
                bad.push_back(d);
        }
        return bad;
    }

    std::size_t overlap_degree_bound() const {
        std::size_t max_rel = 0, max_gen = 0;
        for (const auto& r : relations_)
            max_rel = std::max(max_rel, homogeneous_degree(r).value_or(0));
        for (const auto& g : generators_)
            max_gen = std::max(max_gen, g.degree);
        return std::max(2 * max_rel, max_rel + max_gen);
    }

    Polynomial parse_polynomial(const std::string& text) const {
        Polynomial out;
        std::size_t i = 0;
        auto skip = [&] {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
                ++i;
        };
        auto fail = [&](const std::string& why) -> Error {
            return Error(ErrorCode::InvalidPresentation, "cannot parse polynomial '" + text + "': " + why);
        };
        skip();
        if (i == text.size())
            throw fail("empty");
        while (i < text.size()) {
            std::int64_t sign = 1;
            skip();
            while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
                if (text[i] == '-')
                    sign = -sign;
                ++i;
                skip();
            }
            std::int64_t coeff = 1;
            Exponents e(generators_.size());
            bool any_factor = false;
            for (;;) {
                skip();
                if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    std::int64_t v = 0;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                        v = normalize(v * 10 + (text[i++] - '0'));
                    coeff = normalize(coeff * v);
                } else if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
                    std::size_t start = i;
                    while (i < text.size() &&
                           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                        ++i;
                    const std::size_t g = generator_index(text.substr(start, i - start));
                    std::uint32_t power = 1;
                    skip();
                    if (i < text.size() && text[i] == '^') {
                        ++i;
                        skip();
                        if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                            throw fail("exponent expected");
                        power = 0;
                        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                            power = power * 10 + static_cast<std::uint32_t>(text[i++] - '0');
                    }
                    e[g] += power;
                } else {
                    throw fail("factor expected");
                }
                any_factor = true;
                skip();
                if (i < text.size() && text[i] == '*') {
                    ++i;
                    continue;
                }
                break;
            }
            if (!any_factor)
                throw fail("empty term");
            // Build the term as an ordered product so odd-p signs are right.
            Polynomial term = scale(one_poly(), sign * coeff);
            for (std::size_t g = 0; g < e.size(); ++g)
                for (std::uint32_t k = 0; k < e[g]; ++k)
                    term = multiply_raw(term, generator_poly(g));
            out = add(out, term);
            skip();
            if (i < text.size() && text[i] != '+' && text[i] != '-')
                throw fail("unexpected '" + std::string(1, text[i]) + "'");
        }
        return out;
    }

    std::string format(const Polynomial& f) const {
        if (f.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = f.rbegin(); it != f.rend(); ++it) {
            if (!first)
                os << " + ";
            first = false;
            const auto& [m, c] = *it;
            bool wrote = false;
            if (c != 1) {
                os << c;
                wrote = true;
            }
            for (std::size_t g = 0; g < m.size(); ++g) {
                if (m[g] == 0)
                    continue;
                if (wrote)
                    os << "*";
                os << generators_[g].name;
                if (m[g] > 1)
                    os << "^" << m[g];
                wrote = true;
            }
            if (!wrote)
                os << "1";
        }
        return os.str();
    }

    RingElement element(Polynomial f) const;
    RingElement parse(const std::string& text) const;
    RingElement generator(const std::string& name) const;
    RingElement one() const;
    RingElement zero() const;

private:
    struct Rule {
        Exponents lead;
        /// lead = tail in the quotient.
        Polynomial tail;
    };

    void install_relations(std::vector<Polynomial> relations) {
        for (auto& r : relations) {
            for (const auto& [m, c] : r)
                if (m.size() != generators_.size())
                    throw Error(ErrorCode::InvalidPresentation, "relation monomial has wrong arity");
            Polynomial clean;
            for (const auto& [m, c] : r)
                add_term(clean, m, c);
            if (clean.empty())
                continue;
            if (!homogeneous_degree(clean))
                throw Error(ErrorCode::Inhomogeneous, "relation " + format(clean) + " is not homogeneous");
            relations_.push_back(std::move(clean));
        }
        // Inter-reduce so every rule's tail is standard with respect to the
        // others; a relation that reduces to zero is redundant.
        std::vector<Polynomial> pending = relations_;
        std::sort(pending.begin(), pending.end(), [this](const Polynomial& a, const Polynomial& b) {
            return degree(a.rbegin()->first) < degree(b.rbegin()->first);
        });
        for (auto& r : pending) {
            Polynomial red = reduce(r);
            if (red.empty())
                continue;
            auto lead_it = red.rbegin();
            Exponents lead = lead_it->first;
            const std::int64_t inv = inverse(lead_it->second);
            Polynomial tail;
            for (const auto& [m, c] : red)
                if (m != lead)
                    add_term(tail, m, -c * inv);
            rules_.push_back({std::move(lead), std::move(tail)});
        }
    }

    void install_ops(std::map<OpKey, Polynomial> ops) {
        for (auto& [key, value] : ops) {
            if (key.generator >= generators_.size())
                throw Error(ErrorCode::InvalidPresentation, "operation on unknown generator");
            if (key.kind == OpKind::Sq && p_ != 2)
                throw Error(ErrorCode::InvalidPresentation, "Sq entries require p = 2");
            if (key.kind == OpKind::St && p_ == 2)
                throw Error(ErrorCode::InvalidPresentation, "St entries require an odd prime");
            for (const auto& [m, c] : value)
                if (m.size() != generators_.size())
                    throw Error(ErrorCode::InvalidPresentation, "operation value monomial has wrong arity");
            OpKey k = key;
            if (k.kind == OpKind::Beta)
                k.k = 0;
            Polynomial clean;
            for (const auto& [m, c] : value)
                add_term(clean, m, c);
            ops_[k] = reduce(clean);
        }
    }

    std::int64_t inverse(std::int64_t a) const {
        // Fermat: a^(p-2).
        std::int64_t result = 1, base = normalize(a);
        for (std::int64_t e = p_ - 2; e > 0; e >>= 1) {
            if (e & 1)
                result = result * base % p_;
            base = base * base % p_;
        }
        return result;
    }

    std::optional<Exponents> divide(const Exponents& m, const Exponents& d) const {
        Exponents q(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] < d[i])
                return std::nullopt;
            q[i] = m[i] - d[i];
        }
        return q;
    }

    void enumerate(std::size_t g, std::size_t remaining, Exponents& e, std::vector<Exponents>& out) const {
        if (g == generators_.size()) {
            if (remaining == 0)
                out.push_back(e);
            return;
        }
        const std::size_t deg = generators_[g].degree;
        std::size_t max_power = remaining / deg;
        if (p_ != 2 && deg % 2 == 1)
            max_power = std::min<std::size_t>(max_power, 1);
        for (std::size_t k = 0; k <= max_power; ++k) {
            e[g] = static_cast<std::uint32_t>(k);
            enumerate(g + 1, remaining - k * deg, e, out);
        }
        e[g] = 0;
    }

    // Dimension over F_p of the degree-d part of the ideal, spanned by
    // monomial multiples of the relations.
    std::size_t ideal_dimension(std::size_t d, const std::vector<Exponents>& monos) const {
        std::map<Exponents, std::size_t> column;
        for (std::size_t i = 0; i < monos.size(); ++i)
            column[monos[i]] = i;
        std::vector<std::vector<std::int64_t>> rows;
        for (const auto& r : relations_) {
            const std::size_t dr = degree(r.begin()->first);
            if (dr > d)
                continue;
            for (const auto& c : monomials_of_degree(d - dr)) {
                Polynomial prod = multiply_raw({{c, 1}}, r);
                if (prod.empty())
                    continue;
                std::vector<std::int64_t> row(monos.size());
                for (const auto& [m, coef] : prod)
                    row[column.at(m)] = coef;
                rows.push_back(std::move(row));
            }
        }
        // Gaussian elimination mod p.
        std::size_t rank = 0;
        for (std::size_t col = 0; col < monos.size() && rank < rows.size(); ++col) {
            std::size_t pivot = rank;
            while (pivot < rows.size() && rows[pivot][col] == 0)
                ++pivot;
            if (pivot == rows.size())
                continue;
            std::swap(rows[rank], rows[pivot]);
            const std::int64_t inv = inverse(rows[rank][col]);
            for (auto& x : rows[rank])
                x = normalize(x * inv);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r == rank || rows[r][col] == 0)
                    continue;
                const std::int64_t f = rows[r][col];
                for (std::size_t k = 0; k < monos.size(); ++k)
                    rows[r][k] = normalize(rows[r][k] - f * rows[rank][k]);
            }
            ++rank;
        }
        return rank;
    }

    std::int64_t p_;
    std::vector<Generator> generators_;
    std::vector<Polynomial> relations_;
    std::vector<Rule> rules_;
    std::map<OpKey, Polynomial> ops_;
};

using RingPtr = std::shared_ptr<const ModPRingPresentation>;

/// Element of a presented ring, always in normal form.
class RingElement {
public:
    RingElement(RingPtr ring, Polynomial poly) : ring_(std::move(ring)), poly_(ring_->reduce(std::move(poly))) {}

    const ModPRingPresentation& ring() const { return *ring_; }
    const RingPtr& ring_ptr() const { return ring_; }
    const Polynomial& polynomial() const noexcept { return poly_; }

    bool is_zero() const noexcept { return poly_.empty(); }
    /// nullopt for zero (homogeneous of every degree) and for mixed degrees.
    std::optional<std::size_t> degree() const { return ring_->homogeneous_degree(poly_); }
    bool is_homogeneous() const { return ring_->is_homogeneous(poly_); }

    std::string to_string() const { return ring_->format(poly_); }

    friend RingElement operator+(const RingElement& a, const RingElement& b) {
        same_ring(a, b);
        return {a.ring_, a.ring_->add(a.poly_, b.poly_)};
    }
    friend RingElement operator-(const RingElement& a, const RingElement& b) {
        same_ring(a, b);
        return {a.ring_, a.ring_->add(a.poly_, a.ring_->scale(b.poly_, -1))};
    }
    friend RingElement operator*(const RingElement& a, const RingElement& b) {
        same_ring(a, b);
        return {a.ring_, a.ring_->multiply_raw(a.poly_, b.poly_)};
    }
    friend bool operator==(const RingElement& a, const RingElement& b) {
        return a.ring_ == b.ring_ && a.poly_ == b.poly_;
    }

    RingElement pow(std::size_t e) const { return {ring_, ring_->power(poly_, e)}; }

private:
    static void same_ring(const RingElement& a, const RingElement& b) {
        if (a.ring_ != b.ring_)
            throw Error(ErrorCode::InvalidArgument, "elements belong to different presentations");
    }

    RingPtr ring_;
    Polynomial poly_;
};

inline RingElement ModPRingPresentation::element(Polynomial f) const { return {shared_from_this(), std::move(f)}; }
inline RingElement ModPRingPresentation::parse(const std::string& text) const {
    return element(parse_polynomial(text));
}
inline RingElement ModPRingPresentation::generator(const std::string& name) const {
    return element(generator_poly(generator_index(name)));
}
inline RingElement ModPRingPresentation::one() const { return element(one_poly()); }
inline RingElement ModPRingPresentation::zero() const { return element({}); }

namespace detail {

/// Evaluates operations through the axioms with a per-evaluation cache.
class Evaluator {
public:
    explicit Evaluator(const ModPRingPresentation& ring) : ring_(ring) {}

    /// Axiom-forced value on a generator, if the axioms force one.
    std::optional<Polynomial> forced(OpKind kind, std::size_t k, std::size_t g) const {
        const std::size_t deg = ring_.generators()[g].degree;
        const Polynomial x = ring_.generator_poly(g);
        if (kind == OpKind::Sq) {
            if (k == 0)
                return x;
            if (k > deg)
                return Polynomial{};
            if (k == deg)
                return ring_.multiply(x, x);
        } else if (kind == OpKind::St) {
            if (k == 0)
                return x;
            if (2 * k > deg)
                return Polynomial{};
            if (2 * k == deg)
                return ring_.power(x, static_cast<std::size_t>(ring_.p()));
        }
        return std::nullopt;
    }

    Polynomial on_generator(OpKind kind, std::size_t k, std::size_t g) const {
        if (auto f = forced(kind, k, g))
            return *f;
        const auto& ops = ring_.ops();
        if (auto it = ops.find({kind, kind == OpKind::Beta ? 0 : k, g}); it != ops.end())
            return it->second;
        if (kind == OpKind::Sq && k == 1)
            if (auto it = ops.find({OpKind::Beta, 0, g}); it != ops.end())
                return it->second;
        throw Error(ErrorCode::Undetermined, op_name(kind, k) + "(" + ring_.generators()[g].name +
                                                 ") is neither forced by the axioms nor supplied");
    }

    /// Sq^k or St^k of a (possibly non-standard) monomial via Cartan.
    Polynomial power_op(OpKind kind, std::size_t k, const Exponents& m) {
        auto key = std::make_pair(k, m);
        auto& cache = kind == OpKind::Sq ? sq_cache_ : st_cache_;
        if (auto it = cache.find(key); it != cache.end())
            return it->second;

        Polynomial result;
        std::size_t g = 0;
        while (g < m.size() && m[g] == 0)
            ++g;
        if (g == m.size()) {
            // The unit: Op^0 = 1, higher ones vanish.
            if (k == 0)
                result = ring_.one_poly();
        } else {
            Exponents rest = m;
            --rest[g];
            const std::size_t deg_rest = ring_.degree(rest);
            const std::size_t gdeg = ring_.generators()[g].degree;
            for (std::size_t i = 0; i <= k; ++i) {
                // Instability bounds prune terms that vanish anyway.
                const bool x_dead = kind == OpKind::Sq ? i > gdeg : 2 * i > gdeg;
                const bool rest_dead = kind == OpKind::Sq ? k - i > deg_rest : 2 * (k - i) > deg_rest;
                if (x_dead || rest_dead)
                    continue;
                Polynomial left = on_generator(kind, i, g);
                if (left.empty())
                    continue;
                Polynomial right = power_op(kind, k - i, rest);
                if (right.empty())
                    continue;
                result = ring_.add(result, ring_.multiply(left, right));
            }
        }
        cache.emplace(std::move(key), result);
        return result;
    }

    Polynomial apply(OpKind kind, std::size_t k, const Polynomial& f) {
        Polynomial out;
        for (const auto& [m, c] : f)
            out = ring_.add(out, ring_.scale(power_op(kind, k, m), c));
        return out;
    }

    /// Bockstein of a monomial; odd p uses the derivation rule
    /// beta(xy) = beta(x) y + (-1)^|x| x beta(y).
    Polynomial beta_monomial(const Exponents& m) {
        if (ring_.p() == 2)
            return power_op(OpKind::Sq, 1, m);
        if (auto it = beta_cache_.find(m); it != beta_cache_.end())
            return it->second;
        Polynomial result;
        std::size_t g = 0;
        while (g < m.size() && m[g] == 0)
            ++g;
        if (g < m.size()) {
            Exponents rest = m;
            --rest[g];
            const Polynomial x = ring_.generator_poly(g);
            const std::size_t gdeg = ring_.generators()[g].degree;
            Polynomial bx = on_generator(OpKind::Beta, 0, g);
            result = ring_.multiply(bx, ring_.reduce({{rest, 1}}));
            Polynomial brest = beta_monomial(rest);
            Polynomial second = ring_.multiply(x, brest);
            result = ring_.add(result, ring_.scale(second, gdeg % 2 == 0 ? 1 : -1));
        }
        beta_cache_.emplace(m, result);
        return result;
    }

    Polynomial beta(const Polynomial& f) {
        Polynomial out;
        for (const auto& [m, c] : f)
            out = ring_.add(out, ring_.scale(beta_monomial(m), c));
        return out;
    }

private:
    const ModPRingPresentation& ring_;
    std::map<std::pair<std::size_t, Exponents>, Polynomial> sq_cache_;
    std::map<std::pair<std::size_t, Exponents>, Polynomial> st_cache_;
    std::map<Exponents, Polynomial> beta_cache_;
};

inline void require_homogeneous(const RingElement& x) {
    if (!x.is_homogeneous())
        throw Error(ErrorCode::Inhomogeneous, "element " + x.to_string() + " is not homogeneous");
}

} // namespace detail

inline RingElement sq(std::size_t k, const RingElement& x) {
    if (x.ring().p() != 2)
        throw Error(ErrorCode::NotModTwo, "Sq^k needs p = 2");
    detail::require_homogeneous(x);
    detail::Evaluator ev(x.ring());
    return {x.ring_ptr(), ev.apply(OpKind::Sq, k, x.polynomial())};
}

inline RingElement st(std::size_t k, const RingElement& x) {
    if (x.ring().p() == 2)
        throw Error(ErrorCode::NotOddPrime, "St_p^k needs an odd prime");
    detail::require_homogeneous(x);
    detail::Evaluator ev(x.ring());
    return {x.ring_ptr(), ev.apply(OpKind::St, k, x.polynomial())};
}

inline RingElement bockstein(const RingElement& x) {
    detail::require_homogeneous(x);
    detail::Evaluator ev(x.ring());
    return {x.ring_ptr(), ev.beta(x.polynomial())};
}

/// W3 = beta(w2), reduced mod 2.
inline RingElement w3_from_w2(const RingElement& w2) {
    if (w2.ring().p() != 2)
        throw Error(ErrorCode::NotModTwo, "w2 lives in mod 2 cohomology");
    if (auto d = w2.degree(); (d && *d != 2) || (!d && !w2.is_zero()))
        throw Error(ErrorCode::WrongDegree, "w2 must have degree 2");
    return bockstein(w2);
}

struct Violation {
    std::string kind;
    std::string where;
    std::string lhs;
    std::string rhs;
};

namespace detail {

class AxiomChecker {
public:
    AxiomChecker(const ModPRingPresentation& ring, std::size_t max_degree)
        : ring_(ring), max_degree_(max_degree), ev_(ring), power_kind_(ring.p() == 2 ? OpKind::Sq : OpKind::St) {}

    std::vector<Violation> run() {
        check_degrees();
        if (!out_.empty())
            return out_;
        check_forced_entries();
        for (auto d : ring_.confluence_failures(max_degree_))
            out_.push_back({"CONFLUENCE", "degree " + std::to_string(d), "", ""});
        if (!out_.empty())
            return out_;

        standard_ = ring_.standard_monomials_up_to(max_degree_);
        check_instability_and_squaring();
        check_relations();
        check_cartan();
        check_bockstein_squared();
        return out_;
    }

private:
    std::string gen(std::size_t g) const { return ring_.generators()[g].name; }
    std::string mono(const Exponents& m) const { return ring_.format({{m, 1}}); }

    // Evaluates, turning UNDETERMINED into one violation per message.
    template <typename F>
    std::optional<Polynomial> guarded(F&& f) {
        try {
            return f();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Undetermined)
                throw;
            if (undetermined_.insert(e.what()).second)
                out_.push_back({"UNDETERMINED", e.what(), "", ""});
            return std::nullopt;
        }
    }

    void check_degrees() {
        for (const auto& [key, value] : ring_.ops()) {
            if (value.empty())
                continue;
            const std::size_t want = ring_.generators()[key.generator].degree + ring_.shift(key.kind, key.k);
            auto got = ring_.homogeneous_degree(value);
            if (!got || *got != want)
                out_.push_back({"DEGREE", op_name(key.kind, key.k) + "(" + gen(key.generator) + ")",
                                got ? "degree " + std::to_string(*got) : "inhomogeneous",
                                "degree " + std::to_string(want)});
        }
    }

    void check_forced_entries() {
        for (const auto& [key, value] : ring_.ops()) {
            if (key.kind == OpKind::Beta) {
                if (ring_.p() != 2)
                    continue;
                auto sq1 = guarded([&] { return ev_.on_generator(OpKind::Sq, 1, key.generator); });
                if (sq1 && *sq1 != value)
                    out_.push_back({"AXIOM", "beta(" + gen(key.generator) + ") = Sq1(" + gen(key.generator) + ")",
                                    ring_.format(value), ring_.format(*sq1)});
                continue;
            }
            if (auto f = ev_.forced(key.kind, key.k, key.generator); f && *f != value)
                out_.push_back({"AXIOM", op_name(key.kind, key.k) + "(" + gen(key.generator) + ")",
                                ring_.format(value), ring_.format(*f)});
        }
    }

    std::size_t op_shift(std::size_t k) const { return ring_.shift(power_kind_, k); }

    void check_instability_and_squaring() {
        for (const auto& m : standard_) {
            const std::size_t d = ring_.degree(m);
            const Polynomial x = {{m, 1}};
            if (power_kind_ == OpKind::Sq) {
                for (std::size_t k = d + 1; k <= d + 2; ++k)
                    if (auto v = guarded([&] { return ev_.apply(OpKind::Sq, k, x); }); v && !v->empty())
                        out_.push_back({"INSTABILITY", "Sq" + std::to_string(k) + "(" + mono(m) + ")",
                                        ring_.format(*v), "0"});
                if (auto v = guarded([&] { return ev_.apply(OpKind::Sq, d, x); }); v && *v != ring_.multiply(x, x))
                    out_.push_back({"SQUARING", "Sq" + std::to_string(d) + "(" + mono(m) + ")", ring_.format(*v),
                                    ring_.format(ring_.multiply(x, x))});
            } else {
                for (std::size_t k = d / 2 + 1; k <= d / 2 + 2; ++k)
                    if (auto v = guarded([&] { return ev_.apply(OpKind::St, k, x); }); v && !v->empty())
                        out_.push_back({"INSTABILITY", "St" + std::to_string(k) + "(" + mono(m) + ")",
                                        ring_.format(*v), "0"});
                if (d % 2 == 0) {
                    const auto xp = ring_.power(x, static_cast<std::size_t>(ring_.p()));
                    if (auto v = guarded([&] { return ev_.apply(OpKind::St, d / 2, x); }); v && *v != xp)
                        out_.push_back({"SQUARING", "St" + std::to_string(d / 2) + "(" + mono(m) + ")",
                                        ring_.format(*v), ring_.format(xp)});
                }
            }
        }
    }

    // The operations must kill the ideal: Op^k(c * r) = 0 in the quotient.
    void check_relations() {
        for (const auto& r : ring_.relations()) {
            const std::size_t dr = ring_.degree(r.begin()->first);
            for (std::size_t dc = 0; dr + dc <= max_degree_; ++dc)
                for (const auto& c : ring_.monomials_of_degree(dc)) {
                    const Polynomial cr = ring_.multiply_raw({{c, 1}}, r);
                    if (cr.empty())
                        continue;
                    for (std::size_t k = 1; op_shift(k) <= dr + dc; ++k)
                        if (auto v = guarded([&] { return ev_.apply(power_kind_, k, cr); }); v && !v->empty())
                            out_.push_back({"RELATION", op_name(power_kind_, k) + "(" + ring_.format(cr) + ")",
                                            ring_.format(*v), "0"});
                }
        }
    }

    void check_cartan() {
        for (std::size_t a = 0; a < standard_.size(); ++a)
            for (std::size_t b = a; b < standard_.size(); ++b) {
                const auto& ma = standard_[a];
                const auto& mb = standard_[b];
                const std::size_t da = ring_.degree(ma), db = ring_.degree(mb);
                if (da == 0 || db == 0 || da + db > max_degree_)
                    continue;
                const Polynomial xa = {{ma, 1}}, xb = {{mb, 1}};
                const Polynomial prod = ring_.multiply(xa, xb);
                for (std::size_t k = 1; op_shift(k) <= da + db; ++k) {
                    auto lhs = guarded([&] { return ev_.apply(power_kind_, k, prod); });
                    auto rhs = guarded([&] {
                        Polynomial sum;
                        for (std::size_t i = 0; i <= k; ++i)
                            sum = ring_.add(sum, ring_.multiply(ev_.apply(power_kind_, i, xa),
                                                                ev_.apply(power_kind_, k - i, xb)));
                        return sum;
                    });
                    if (lhs && rhs && *lhs != *rhs)
                        out_.push_back({"CARTAN", op_name(power_kind_, k) + "(" + mono(ma) + " * " + mono(mb) + ")",
                                        ring_.format(*lhs), ring_.format(*rhs)});
                }
            }
    }

    void check_bockstein_squared() {
        if (ring_.p() != 2) {
            for (std::size_t g = 0; g < ring_.generators().size(); ++g)
                if (!ring_.ops().contains({OpKind::Beta, 0, g}))
                    return;
        }
        for (const auto& m : standard_) {
            if (ring_.degree(m) == 0)
                continue;
            auto v = guarded([&] { return ev_.beta(ev_.beta({{m, 1}})); });
            if (v && !v->empty())
                out_.push_back({"BOCKSTEIN_SQUARED", "beta(beta(" + mono(m) + "))", ring_.format(*v), "0"});
        }
    }

    const ModPRingPresentation& ring_;
    std::size_t max_degree_;
    Evaluator ev_;
    OpKind power_kind_;
    std::vector<Exponents> standard_;
    std::vector<Violation> out_;
    std::set<std::string> undetermined_;
};

} // namespace detail

/// Checks the supplied operation table against the axioms on every standard
/// monomial up to max_degree. Empty result means no violation was found.
inline std::vector<Violation> verify_axioms(const ModPRingPresentation& ring, std::size_t max_degree) {
    return detail::AxiomChecker(ring, max_degree).run();
}

} // namespace modtopo::steenrod
