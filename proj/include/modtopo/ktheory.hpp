#pragma once

// K-groups of circle bundles X_3 -> Sigma_g with Chern class j, optionally
// twisted by an H-flux k in H^3(X_3; Z) = Z, and K-theory of products with
// tori.
//
// Two independent routes compute the twisted groups: the closed-form table
// (k_groups) and the first AHSS differential d3 = Sq^3 + H acting on the
// integral cohomology (k_groups_via_d3), evaluated with Smith normal forms.

#include <cstddef>
#include <cstdint>
#include <string>

#include "modtopo/graded.hpp"

namespace modtopo::ktheory {

struct CircleBundleSpec {
    std::int64_t genus = 0;
    std::int64_t chern = 0;
    std::int64_t twist = 0;

    friend bool operator==(const CircleBundleSpec&, const CircleBundleSpec&) = default;
};

inline void validate(const CircleBundleSpec& s) {
    if (s.genus < 0)
        throw Error(ErrorCode::InvalidArgument, "genus must be nonnegative");
    if (s.twist < 0)
        throw Error(ErrorCode::InvalidArgument, "twist must be nonnegative");
}

enum class Path { ClosedForm, D3 };

constexpr std::string_view to_string(Path p) { return p == Path::ClosedForm ? "closed_form" : "d3"; }

/// K^0 and K^1 (equally K_0 and K_1: groups are indexed by parity only).
struct KPair {
    FgAbGroup k0;
    FgAbGroup k1;

    friend bool operator==(const KPair&, const KPair&) = default;
};

/// Result of a circle-bundle computation together with how it was obtained.
struct KReport {
    KPair groups;
    Path path = Path::ClosedForm;
    /// The associated graded was assembled as a direct sum. That is the
    /// answer for these bundles; in general the extension may not split.
    bool split_extension_assumed = false;
};

inline GradedCohomology total_space_cohomology(const CircleBundleSpec& s) {
    validate(s);
    const auto two_g = static_cast<std::size_t>(2 * s.genus);
    const std::string label = "X3(g=" + std::to_string(s.genus) + ",j=" + std::to_string(s.chern) + ")";
    if (s.chern == 0)
        return GradedCohomology(
            {FgAbGroup::free(1), FgAbGroup::free(two_g + 1), FgAbGroup::free(two_g + 1), FgAbGroup::free(1)},
            label);
    return GradedCohomology({FgAbGroup::free(1), FgAbGroup::free(two_g),
                             FgAbGroup(two_g, {Integer(s.chern)}), FgAbGroup::free(1)},
                            label);
}

inline KPair k_groups(const CircleBundleSpec& s) {
    validate(s);
    const auto two_g = static_cast<std::size_t>(2 * s.genus);
    const Integer j = modtopo::abs(Integer(s.chern));
    const Integer k = s.twist;
    if (s.twist == 0) {
        if (s.chern == 0)
            return {FgAbGroup::free(two_g + 2), FgAbGroup::free(two_g + 2)};
        return {FgAbGroup(two_g + 1, {j}), FgAbGroup::free(two_g + 1)};
    }
    if (s.chern == 0)
        return {FgAbGroup::free(two_g + 1), FgAbGroup(two_g + 1, {k})};
    return {FgAbGroup(two_g, {j}), FgAbGroup(two_g, {k})};
}

/// K^0 = ker(d3 : H^even -> H^odd) / d3(H^odd), K^1 likewise, where
/// d3 = Sq^3 + H. On a 3-manifold H-cup is multiplication by k from H^0 to
/// H^3 and lands in degrees >= 4 otherwise. Sq^3 vanishes on H^0..H^2 by
/// instability and its target H^6 is zero for H^3.
inline KPair k_groups_via_d3(const CircleBundleSpec& s) {
    const auto h = total_space_cohomology(s);
    const Presentation p0 = presentation_of(h.at(0));
    const Presentation p1 = presentation_of(h.at(1));
    const Presentation p2 = presentation_of(h.at(2));
    const Presentation p3 = presentation_of(h.at(3));
    const Presentation even = direct_sum(p0, p2);
    const Presentation odd = direct_sum(p1, p3);

    // even generators: [H^0 | H^2], odd generators: [H^1 | H^3].
    IntMatrix even_to_odd(odd.generators, even.generators);
    even_to_odd(p1.generators, 0) = s.twist;
    const IntMatrix odd_to_even(even.generators, odd.generators);

    return {subquotient(even, odd_to_even, even_to_odd, odd),
            subquotient(odd, even_to_odd, odd_to_even, even)};
}

inline KReport compute(const CircleBundleSpec& s, Path path) {
    if (path == Path::ClosedForm)
        return {k_groups(s), path, false};
    return {k_groups_via_d3(s), path, true};
}

/// Exchanging j and k swaps K^0 and K^1.
inline bool t_duality_check(const CircleBundleSpec& s) {
    validate(s);
    const auto here = k_groups(s);
    const CircleBundleSpec dual{s.genus, s.twist, s.chern < 0 ? -s.chern : s.chern};
    const auto there = k_groups(dual);
    return is_isomorphic(here.k0, there.k1) && is_isomorphic(here.k1, there.k0);
}

/// K(Sigma_g): the Chern character is integral in dimension two.
inline KPair surface_k_groups(std::int64_t genus) {
    if (genus < 0)
        throw Error(ErrorCode::InvalidArgument, "genus must be nonnegative");
    return {FgAbGroup::free(2), FgAbGroup::free(static_cast<std::size_t>(2 * genus))};
}

/// K(X) = Z + K~(X): drops the summand coming from a point.
inline FgAbGroup reduced_k(const FgAbGroup& g) {
    if (g.rank() == 0)
        throw Error(ErrorCode::NoUnitSummand, "group " + g.to_string() + " has no free summand to split off");
    return FgAbGroup(g.rank() - 1, g.invariant_factors());
}

namespace detail {

inline std::size_t torus_multiplicity(std::int64_t k) {
    if (k < 1)
        throw Error(ErrorCode::InvalidDimension, "torus dimension must be at least 1");
    if (k > 62)
        throw Error(ErrorCode::ValueTooLarge, "torus dimension too large");
    return std::size_t{1} << (k - 1);
}

} // namespace detail

inline KPair torus_k_groups(std::int64_t k) {
    const auto copies = detail::torus_multiplicity(k);
    return {FgAbGroup::free(copies), FgAbGroup::free(copies)};
}

/// K_0, K_1 of B x T^k:
///   K_0 = (K~_0(B) + K_1(B) + Z)^(2^(k-1)),  K_1 = (K_1(B) + K~_0(B) + Z)^(2^(k-1)).
inline KPair product_with_torus(const KPair& base, std::int64_t k) {
    const auto copies = detail::torus_multiplicity(k);
    const FgAbGroup reduced = reduced_k(base.k0);
    const FgAbGroup unit = FgAbGroup::free(1);
    return {direct_power(direct_sum(direct_sum(reduced, base.k1), unit), copies),
            direct_power(direct_sum(direct_sum(base.k1, reduced), unit), copies)};
}

} // namespace modtopo::ktheory
