#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modtopo/abgroup.hpp"

namespace modtopo {

/// Degree-indexed family H^0 .. H^top of groups; higher degrees are trivial.
class GradedCohomology {
public:
    GradedCohomology() : groups_(1) {}
    explicit GradedCohomology(std::vector<FgAbGroup> groups, std::string label = {})
        : groups_(std::move(groups)), label_(std::move(label)) {
        if (groups_.empty())
            groups_.emplace_back();
    }

    /// Rank-only value with the given Betti numbers.
    static GradedCohomology from_ranks(std::span<const std::size_t> ranks, std::string label = {}) {
        std::vector<FgAbGroup> groups;
        for (auto r : ranks)
            groups.push_back(FgAbGroup::free(r));
        return GradedCohomology(std::move(groups), std::move(label));
    }

    static GradedCohomology point() { return GradedCohomology({FgAbGroup::free(1)}, "pt"); }

    /// Closed orientable surface of genus g: (Z, Z^2g, Z).
    static GradedCohomology surface(std::size_t genus) {
        return GradedCohomology({FgAbGroup::free(1), FgAbGroup::free(2 * genus), FgAbGroup::free(1)},
                                "Sigma_" + std::to_string(genus));
    }

    std::size_t top_degree() const noexcept { return groups_.size() - 1; }
    const std::vector<FgAbGroup>& groups() const noexcept { return groups_; }
    const std::string& label() const noexcept { return label_; }

    const FgAbGroup& at(std::size_t degree) const {
        static const FgAbGroup zero;
        return degree < groups_.size() ? groups_[degree] : zero;
    }

    /// Equality with implicit trivial groups above the top degree; the label
    /// is not compared.
    friend bool equivalent(const GradedCohomology& a, const GradedCohomology& b) {
        const std::size_t n = std::max(a.groups_.size(), b.groups_.size());
        for (std::size_t m = 0; m < n; ++m)
            if (a.at(m) != b.at(m))
                return false;
        return true;
    }

    friend bool operator==(const GradedCohomology&, const GradedCohomology&) = default;

private:
    std::vector<FgAbGroup> groups_;
    std::string label_;
};

/// Coefficient group G for universal-coefficient changes.
class CoefficientSpec {
public:
    struct Integers {};
    struct ModP {
        std::int64_t p;
    };
    struct Rationals {};

    static CoefficientSpec integers() { return CoefficientSpec(Integers{}); }
    static CoefficientSpec rationals() { return CoefficientSpec(Rationals{}); }
    static CoefficientSpec mod_p(std::int64_t p) {
        if (!is_prime(p))
            throw Error(ErrorCode::InvalidArgument, "coefficient modulus " + std::to_string(p) + " is not prime");
        return CoefficientSpec(ModP{p});
    }

    bool is_integers() const { return std::holds_alternative<Integers>(kind_); }
    bool is_rationals() const { return std::holds_alternative<Rationals>(kind_); }
    bool is_mod_p() const { return std::holds_alternative<ModP>(kind_); }
    std::int64_t prime() const { return std::get<ModP>(kind_).p; }

    /// G as a finitely generated group. Q has no such form; callers handle it
    /// as a rank projection.
    FgAbGroup as_group() const {
        if (is_mod_p())
            return FgAbGroup::cyclic(prime());
        if (is_integers())
            return FgAbGroup::free(1);
        throw Error(ErrorCode::InvalidArgument, "rational coefficients have no finitely generated form");
    }

    std::string to_string() const {
        if (is_integers())
            return "Z";
        if (is_rationals())
            return "Q";
        return "Z/" + std::to_string(prime());
    }

private:
    explicit CoefficientSpec(std::variant<Integers, ModP, Rationals> k) : kind_(k) {}
    std::variant<Integers, ModP, Rationals> kind_;
};

/// Where the Tor term of the Kunneth formula lands.
///   Chain:   H_k = sum_{p+q=k} A_p (x) B_q + sum_{p+q=k-1} Tor(A_p, B_q)
///   Cochain: H^k = sum_{p+q=k} A^p (x) B^q + sum_{p+q=k+1} Tor(A^p, B^q)
enum class KunnethGrading { Chain, Cochain };

inline GradedCohomology kunneth_product(const GradedCohomology& x, const GradedCohomology& y,
                                        KunnethGrading grading = KunnethGrading::Chain) {
    const std::size_t top = x.top_degree() + y.top_degree();
    // One spare degree for Tor of two torsion top groups (not realizable by a
    // chain complex, but accepted as input).
    std::vector<FgAbGroup> out(top + 2);
    for (std::size_t p = 0; p <= x.top_degree(); ++p)
        for (std::size_t q = 0; q <= y.top_degree(); ++q) {
            out[p + q] = direct_sum(out[p + q], tensor(x.at(p), y.at(q)));
            auto t = tor(x.at(p), y.at(q));
            if (t.is_trivial())
                continue;
            if (grading == KunnethGrading::Chain) {
                out[p + q + 1] = direct_sum(out[p + q + 1], t);
            } else if (p + q >= 1) {
                // Tor(H^0, H^0) would sit in degree -1; H^0 of a cochain
                // complex is free, so it is always zero for realizable input.
                out[p + q - 1] = direct_sum(out[p + q - 1], t);
            }
        }
    if (out.back().is_trivial())
        out.pop_back();
    std::string label;
    if (!x.label().empty() || !y.label().empty())
        label = x.label() + " x " + y.label();
    return GradedCohomology(std::move(out), std::move(label));
}

struct BettiTable {
    std::vector<std::size_t> values;
    friend bool operator==(const BettiTable&, const BettiTable&) = default;
};

inline BettiTable betti(const GradedCohomology& x) {
    BettiTable t;
    for (const auto& g : x.groups())
        t.values.push_back(g.rank());
    return t;
}

inline Integer euler_characteristic(const GradedCohomology& x) {
    Integer chi = 0;
    for (std::size_t m = 0; m <= x.top_degree(); ++m) {
        if (m % 2 == 0)
            chi += x.at(m).rank();
        else
            chi -= x.at(m).rank();
    }
    return chi;
}

/// H^m(X; G) = Hom(H_m, G) + Ext(H_{m-1}, G) for m = 0 .. N+1, where
/// homology = (H_0 .. H_N). Rational coefficients keep ranks only.
inline std::vector<FgAbGroup> cohomology_with_coefficients(std::span<const FgAbGroup> homology,
                                                           const CoefficientSpec& g) {
    const std::size_t n = homology.size();
    std::vector<FgAbGroup> out(n + 1);
    if (g.is_rationals()) {
        for (std::size_t m = 0; m < n; ++m)
            out[m] = FgAbGroup::free(homology[m].rank());
        return out;
    }
    const FgAbGroup coeff = g.as_group();
    for (std::size_t m = 0; m <= n; ++m) {
        FgAbGroup h = m < n ? hom(homology[m], coeff) : FgAbGroup{};
        FgAbGroup e = m >= 1 ? ext(homology[m - 1], coeff) : FgAbGroup{};
        out[m] = direct_sum(h, e);
    }
    return out;
}

/// H_m(X; G) = H_m (x) G + Tor(H_{m-1}, G) for m = 0 .. N+1.
inline std::vector<FgAbGroup> homology_with_coefficients(std::span<const FgAbGroup> homology,
                                                         const CoefficientSpec& g) {
    const std::size_t n = homology.size();
    std::vector<FgAbGroup> out(n + 1);
    if (g.is_rationals()) {
        for (std::size_t m = 0; m < n; ++m)
            out[m] = FgAbGroup::free(homology[m].rank());
        return out;
    }
    const FgAbGroup coeff = g.as_group();
    for (std::size_t m = 0; m <= n; ++m) {
        FgAbGroup t = m < n ? tensor(homology[m], coeff) : FgAbGroup{};
        FgAbGroup r = m >= 1 ? tor(homology[m - 1], coeff) : FgAbGroup{};
        out[m] = direct_sum(t, r);
    }
    return out;
}

} // namespace modtopo
