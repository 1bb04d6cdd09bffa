#pragma once

// Betti numbers, Hodge numbers and Hodge filtration dimensions of Hilbert
// modular varieties H^n / Gamma, parametric in the dimensions of spaces of
// weight (2, ..., 2) Hilbert modular (cusp) forms, which are inputs here.
//
// Conventions:
//   * C(a, b) is the binomial coefficient, zero outside 0 <= b <= a.
//   * A subset b of {1..n} is a bitmask; #b is its popcount.
//   * Universal classes sit at Hodge type (m/2, m/2), Eisenstein classes at
//     (n, n), cuspidal classes at (n - #b, #b) in the middle degree m = n.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "modtopo/graded.hpp"

namespace modtopo::hilbert {

/// Largest n accepted; cusp data is indexed by all 2^n subsets.
inline constexpr std::size_t max_factors = 24;

struct CompactSpec {
    std::size_t n = 1;
    /// dim [Gamma, (2, ..., 2)]
    Integer dim_weight2 = 0;
};

struct CuspidalSpec {
    std::size_t n = 1;
    /// Number of cusps h.
    Integer cusps = 1;
    /// dim [Gamma^b, (2, ..., 2)]_0 indexed by subset bitmask, 2^n entries.
    std::vector<Integer> cusp_dims;

    /// Fills every subset b with by_cardinality[#b].
    static CuspidalSpec uniform_by_cardinality(std::size_t n, Integer cusps,
                                               const std::vector<Integer>& by_cardinality) {
        if (by_cardinality.size() != n + 1)
            throw Error(ErrorCode::InvalidArgument, "need one cusp dimension per cardinality 0..n");
        CuspidalSpec s{n, std::move(cusps), {}};
        s.cusp_dims.resize(std::size_t{1} << n);
        for (std::size_t b = 0; b < s.cusp_dims.size(); ++b)
            s.cusp_dims[b] = by_cardinality[static_cast<std::size_t>(std::popcount(b))];
        return s;
    }

    static CuspidalSpec uniform(std::size_t n, Integer cusps, const Integer& dim) {
        return uniform_by_cardinality(n, std::move(cusps), std::vector<Integer>(n + 1, dim));
    }
};

using Spec = std::variant<CompactSpec, CuspidalSpec>;

inline void validate(const CompactSpec& s) {
    if (s.n < 1 || s.n > max_factors)
        throw Error(ErrorCode::InvalidArgument, "n must lie in 1.." + std::to_string(max_factors));
    if (s.dim_weight2 < 0)
        throw Error(ErrorCode::InvalidArgument, "dim_weight2 must be nonnegative");
}

inline void validate(const CuspidalSpec& s) {
    if (s.n < 1 || s.n > max_factors)
        throw Error(ErrorCode::InvalidArgument, "n must lie in 1.." + std::to_string(max_factors));
    if (s.cusps < 1)
        throw Error(ErrorCode::InvalidArgument, "number of cusps must be positive");
    if (s.cusp_dims.size() != (std::size_t{1} << s.n))
        throw Error(ErrorCode::InvalidArgument, "cusp_dims needs an entry for each of the 2^n subsets");
    for (const auto& d : s.cusp_dims)
        if (d < 0)
            throw Error(ErrorCode::InvalidArgument, "cusp dimensions must be nonnegative");
}

inline void validate(const Spec& s) {
    std::visit([](const auto& v) { validate(v); }, s);
}

inline std::size_t factors(const Spec& s) {
    return std::visit([](const auto& v) { return v.n; }, s);
}

namespace detail {

inline void check_degree(std::size_t n, std::size_t m) {
    if (m > 2 * n)
        throw Error(ErrorCode::DegreeOutOfRange,
                    "degree " + std::to_string(m) + " outside 0.." + std::to_string(2 * n));
}

inline Integer universal(std::size_t n, std::size_t m) {
    return m % 2 == 0 ? binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(m / 2)) : Integer(0);
}

/// Sum of cusp dimensions over subsets of the given cardinality.
inline Integer cusp_dims_of_cardinality(const Spec& s, std::size_t card) {
    if (const auto* c = std::get_if<CompactSpec>(&s))
        return binomial(static_cast<std::int64_t>(c->n), static_cast<std::int64_t>(card)) * c->dim_weight2;
    const auto& cs = std::get<CuspidalSpec>(s);
    Integer total = 0;
    for (std::size_t b = 0; b < cs.cusp_dims.size(); ++b)
        if (static_cast<std::size_t>(std::popcount(b)) == card)
            total += cs.cusp_dims[b];
    return total;
}

inline Integer eisenstein(const CuspidalSpec& s, std::size_t m) {
    const std::size_t n = s.n;
    if (m == 0 || m == 2 * n)
        return 0;
    if (m == 2 * n - 1)
        return s.cusps - 1;
    if (m >= n)
        return s.cusps * binomial(static_cast<std::int64_t>(n - 1), static_cast<std::int64_t>(m - n));
    return 0;
}

} // namespace detail

inline Integer compact_betti(const CompactSpec& s, std::size_t m) {
    validate(s);
    detail::check_degree(s.n, m);
    Integer b = detail::universal(s.n, m);
    if (m == s.n)
        b += pow2(s.n) * s.dim_weight2;
    return b;
}

inline Integer compact_euler_characteristic(const CompactSpec& s) {
    Integer chi = 0;
    for (std::size_t m = 0; m <= 2 * s.n; ++m) {
        if (m % 2 == 0)
            chi += compact_betti(s, m);
        else
            chi -= compact_betti(s, m);
    }
    return chi;
}

/// chi / (-2)^n. No normalization of the volume beyond this identity.
inline Rational compact_implied_volume(const CompactSpec& s) {
    Integer denom = pow2(s.n);
    if (s.n % 2 == 1)
        denom = -denom;
    return Rational(compact_euler_characteristic(s)) / Rational(denom);
}

struct CuspidalBetti {
    Integer univ;
    Integer eis;
    Integer cusp;
    /// Sum of the parts, after the b^0 = b^2n = 0 boundary override.
    Integer total;
    /// True when the override replaced a nonzero parts-sum.
    bool boundary_override = false;
    /// The parts-sum the override discarded (zero otherwise).
    Integer suppressed;
};

inline CuspidalBetti cuspidal_betti(const CuspidalSpec& s, std::size_t m) {
    validate(s);
    detail::check_degree(s.n, m);
    CuspidalBetti b;
    b.univ = detail::universal(s.n, m);
    b.eis = detail::eisenstein(s, m);
    b.cusp = 0;
    if (m == s.n)
        for (const auto& d : s.cusp_dims)
            b.cusp += d;
    Integer raw = b.univ + b.eis + b.cusp;
    if (m == 0 || m == 2 * s.n) {
        b.total = 0;
        b.boundary_override = raw != 0;
        b.suppressed = raw;
    } else {
        b.total = raw;
    }
    return b;
}

/// Total Betti number in degree m for either kind of spec.
inline Integer betti_number(const Spec& s, std::size_t m) {
    if (const auto* c = std::get_if<CompactSpec>(&s))
        return compact_betti(*c, m);
    return cuspidal_betti(std::get<CuspidalSpec>(s), m).total;
}

enum class HodgePart { Univ, Eis, Cusp };

constexpr std::string_view to_string(HodgePart part) {
    switch (part) {
    case HodgePart::Univ: return "univ";
    case HodgePart::Eis: return "eis";
    case HodgePart::Cusp: return "cusp";
    }
    return "?";
}

struct HodgeEntry {
    std::size_t p = 0;
    std::size_t q = 0;
    HodgePart part = HodgePart::Univ;
    Integer value;
    friend bool operator==(const HodgeEntry&, const HodgeEntry&) = default;
};

struct HodgeSlice {
    std::size_t m = 0;
    /// Nonzero entries ordered by (p, q, part).
    std::vector<HodgeEntry> entries;
    /// Cuspidal spec, m in {0, 2n}: entries zeroed to agree with b^0 = b^2n = 0.
    bool boundary_override = false;
    std::vector<HodgeEntry> suppressed;
    /// Cuspidal spec, m = n >= 2: the Eisenstein entry at (n, n) uses the
    /// Betti range n <= m, which the Hodge table starts at n < m.
    bool eis_middle_degree = false;

    Integer sum() const {
        Integer total = 0;
        for (const auto& e : entries)
            total += e.value;
        return total;
    }

    Integer value(std::size_t p, std::size_t q) const {
        Integer total = 0;
        for (const auto& e : entries)
            if (e.p == p && e.q == q)
                total += e.value;
        return total;
    }

    Integer value(std::size_t p, std::size_t q, HodgePart part) const {
        for (const auto& e : entries)
            if (e.p == p && e.q == q && e.part == part)
                return e.value;
        return 0;
    }
};

inline HodgeSlice hodge_slice(const Spec& s, std::size_t m) {
    validate(s);
    const std::size_t n = factors(s);
    detail::check_degree(n, m);

    std::vector<HodgeEntry> entries;
    auto add = [&entries](std::size_t p, std::size_t q, HodgePart part, Integer v) {
        if (v != 0)
            entries.push_back({p, q, part, std::move(v)});
    };
    if (m % 2 == 0)
        add(m / 2, m / 2, HodgePart::Univ, detail::universal(n, m));
    if (m == n)
        for (std::size_t card = 0; card <= n; ++card)
            add(n - card, card, HodgePart::Cusp, detail::cusp_dims_of_cardinality(s, card));

    HodgeSlice slice;
    slice.m = m;
    if (const auto* cs = std::get_if<CuspidalSpec>(&s)) {
        Integer eis = detail::eisenstein(*cs, m);
        if (m == n && n >= 2 && eis != 0)
            slice.eis_middle_degree = true;
        add(n, n, HodgePart::Eis, std::move(eis));
    }
    std::sort(entries.begin(), entries.end(), [](const HodgeEntry& a, const HodgeEntry& b) {
        return std::tie(a.p, a.q, a.part) < std::tie(b.p, b.q, b.part);
    });

    if (std::holds_alternative<CuspidalSpec>(s) && (m == 0 || m == 2 * n)) {
        slice.boundary_override = !entries.empty();
        slice.suppressed = std::move(entries);
    } else {
        slice.entries = std::move(entries);
    }
    return slice;
}

struct FiltrationDims {
    Integer univ_dim;
    Integer cusp_dim;
    friend bool operator==(const FiltrationDims&, const FiltrationDims&) = default;
};

/// Dimensions of F^p on the square-integrable part (universal + cuspidal).
inline FiltrationDims hodge_filtration_dims(const Spec& s, std::size_t m, std::size_t p) {
    validate(s);
    const std::size_t n = factors(s);
    detail::check_degree(n, m);
    FiltrationDims f;
    f.univ_dim = 2 * p <= m ? detail::universal(n, m) : Integer(0);
    f.cusp_dim = 0;
    if (m == n)
        for (std::size_t level = p; level <= n; ++level)
            f.cusp_dim += detail::cusp_dims_of_cardinality(s, n - level);
    return f;
}

/// Rank-only graded value with the Betti numbers above; torsion is not
/// determined by these formulas and is reported as absent.
inline GradedCohomology variety_cohomology(const Spec& s) {
    validate(s);
    const std::size_t n = factors(s);
    std::vector<FgAbGroup> groups;
    for (std::size_t m = 0; m <= 2 * n; ++m)
        groups.push_back(FgAbGroup::free(to_count(betti_number(s, m), "Betti number")));
    const bool compact = std::holds_alternative<CompactSpec>(s);
    return GradedCohomology(std::move(groups),
                            (compact ? "H^" : "(H^") + std::to_string(n) + (compact ? "/Gamma" : ")*/Gamma"));
}

} // namespace modtopo::hilbert
