#pragma once

// Freed-Witten and MMS conditions on classes in H^3, the d3 differential
// with user-supplied cup and Sq^3 maps, flux quantization integrality, and
// the degree-3 report for Hilbert modular varieties.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modtopo/abgroup.hpp"
#include "modtopo/hilbert.hpp"

namespace modtopo::anomaly {

/// Element of a finitely generated abelian group given by coordinates in its
/// canonical generators. Torsion coordinates are kept in [0, d_i).
class CohomologyElement {
public:
    CohomologyElement() = default;
    CohomologyElement(FgAbGroup ambient, std::vector<Integer> free_coords, std::vector<Integer> torsion_coords)
        : ambient_(std::move(ambient)), free_(std::move(free_coords)), torsion_(std::move(torsion_coords)) {
        if (free_.size() != ambient_.rank() || torsion_.size() != ambient_.invariant_factors().size())
            throw Error(ErrorCode::ShapeMismatch, "coordinates do not match ambient group " + ambient_.to_string());
        for (std::size_t i = 0; i < torsion_.size(); ++i)
            torsion_[i] = mod_floor(torsion_[i], ambient_.invariant_factors()[i]);
    }

    static CohomologyElement zero(const FgAbGroup& ambient) {
        return {ambient, std::vector<Integer>(ambient.rank()),
                std::vector<Integer>(ambient.invariant_factors().size())};
    }

    /// Free coordinates followed by torsion coordinates.
    static CohomologyElement from_coordinates(const FgAbGroup& ambient, std::span<const Integer> coords) {
        if (coords.size() != ambient.generator_count())
            throw Error(ErrorCode::ShapeMismatch, "coordinate count does not match ambient group " + ambient.to_string());
        auto split = coords.begin() + static_cast<std::ptrdiff_t>(ambient.rank());
        return {ambient, std::vector<Integer>(coords.begin(), split), std::vector<Integer>(split, coords.end())};
    }

    const FgAbGroup& ambient() const noexcept { return ambient_; }
    const std::vector<Integer>& free_coords() const noexcept { return free_; }
    const std::vector<Integer>& torsion_coords() const noexcept { return torsion_; }

    std::vector<Integer> coordinates() const {
        std::vector<Integer> all = free_;
        all.insert(all.end(), torsion_.begin(), torsion_.end());
        return all;
    }

    bool is_zero() const {
        auto zero = [](const Integer& x) { return x == 0; };
        return std::all_of(free_.begin(), free_.end(), zero) && std::all_of(torsion_.begin(), torsion_.end(), zero);
    }

    friend CohomologyElement operator+(const CohomologyElement& a, const CohomologyElement& b) {
        require_same_ambient(a, b);
        auto f = a.free_;
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] += b.free_[i];
        auto t = a.torsion_;
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] += b.torsion_[i];
        return {a.ambient_, std::move(f), std::move(t)};
    }

    friend CohomologyElement operator-(const CohomologyElement& a) {
        auto f = a.free_;
        for (auto& x : f)
            x = -x;
        auto t = a.torsion_;
        for (auto& x : t)
            x = -x;
        return {a.ambient_, std::move(f), std::move(t)};
    }

    friend CohomologyElement operator-(const CohomologyElement& a, const CohomologyElement& b) { return a + (-b); }

    friend bool operator==(const CohomologyElement&, const CohomologyElement&) = default;

    static void require_same_ambient(const CohomologyElement& a, const CohomologyElement& b) {
        if (a.ambient_ != b.ambient_)
            throw Error(ErrorCode::AmbientMismatch,
                        "elements live in " + a.ambient_.to_string() + " and " + b.ambient_.to_string());
    }

private:
    FgAbGroup ambient_;
    std::vector<Integer> free_;
    std::vector<Integer> torsion_;
};

/// Coordinates of a rational cohomology class over a chosen basis of the
/// integral lattice.
struct RationalClass {
    std::vector<Rational> coords;
    friend bool operator==(const RationalClass&, const RationalClass&) = default;
};

struct FreedWittenVerdict {
    bool anomaly_free = false;
    /// W3 + [H]|_X
    CohomologyElement obstruction;
};

inline FreedWittenVerdict freed_witten_check(const CohomologyElement& w3, const CohomologyElement& h) {
    CohomologyElement::require_same_ambient(w3, h);
    auto sum = w3 + h;
    return {sum.is_zero(), std::move(sum)};
}

struct MmsVerdict {
    bool unstable = false;
    /// PD(Y in Y') - (W3 + H); zero exactly when unstable.
    CohomologyElement difference;
};

inline MmsVerdict mms_instability_check(const CohomologyElement& pd, const CohomologyElement& w3,
                                        const CohomologyElement& h) {
    CohomologyElement::require_same_ambient(pd, w3);
    CohomologyElement::require_same_ambient(pd, h);
    auto diff = pd - (w3 + h);
    return {diff.is_zero(), std::move(diff)};
}

/// Applies a map given on canonical generators (target gens x source gens).
/// Throws NOT_A_HOMOMORPHISM when the matrix does not respect the torsion
/// relations of the source.
inline CohomologyElement apply_map(const IntMatrix& map, const CohomologyElement& x, const FgAbGroup& target) {
    const FgAbGroup& source = x.ambient();
    if (map.rows() != target.generator_count() || map.cols() != source.generator_count())
        throw Error(ErrorCode::ShapeMismatch, "map of shape " + map.shape() + " does not go from " +
                                                  source.to_string() + " to " + target.to_string());
    for (std::size_t i = 0; i < source.invariant_factors().size(); ++i) {
        const Integer& d = source.invariant_factors()[i];
        const std::size_t c = source.rank() + i;
        for (std::size_t r = 0; r < map.rows(); ++r) {
            Integer image = map(r, c) * d;
            const bool killed = r < target.rank() ? image == 0
                                                  : image % target.invariant_factors()[r - target.rank()] == 0;
            if (!killed)
                throw Error(ErrorCode::NotAHomomorphism,
                            "map sends the order-" + d.str() + " generator " + std::to_string(c) +
                                " to an element of different order");
        }
    }
    return CohomologyElement::from_coordinates(target, map.apply(x.coordinates()));
}

/// The pieces of d3 = Sq^3 + [H] on one degree.
struct D3Maps {
    /// H^{deg + 3}
    FgAbGroup target;
    std::optional<CohomologyElement> h;
    /// Cup product with [H] on generators.
    std::optional<IntMatrix> cup_by_h;
    std::optional<IntMatrix> sq3;
};

inline CohomologyElement d3_action(const CohomologyElement& x, std::size_t degree_x, const D3Maps& maps) {
    if (maps.h && maps.h->ambient() != maps.target)
        throw Error(ErrorCode::ShapeMismatch, "[H] must live in the target degree");
    CohomologyElement result = CohomologyElement::zero(maps.target);

    if (maps.cup_by_h) {
        result = result + apply_map(*maps.cup_by_h, x, maps.target);
    } else if (maps.h) {
        // Without an explicit cup map only degree 0 is determined: there
        // x is a multiple of the unit and H-cup-x = x * H.
        if (degree_x != 0 || x.ambient() != FgAbGroup::free(1))
            throw Error(ErrorCode::ShapeMismatch, "cup_by_h is required outside degree 0");
        IntMatrix scale(maps.target.generator_count(), 1);
        const auto hc = maps.h->coordinates();
        for (std::size_t r = 0; r < hc.size(); ++r)
            scale(r, 0) = hc[r];
        result = result + apply_map(scale, x, maps.target);
    }

    // Sq^3 vanishes below degree 3 and only reaches 2-torsion.
    const bool sq3_forced_zero = degree_x < 3 || !maps.target.has_two_torsion();
    if (maps.sq3 && !sq3_forced_zero)
        result = result + apply_map(*maps.sq3, x, maps.target);
    else if (maps.sq3 && !maps.sq3->is_zero() && !apply_map(*maps.sq3, x, maps.target).is_zero())
        throw Error(ErrorCode::InvalidArgument, "supplied Sq^3 is nonzero where it must vanish");
    return result;
}

struct FluxVerdict {
    bool quantized = false;
    /// [G4]/(2 pi)^3 - p1/4
    RationalClass defect;
};

inline FluxVerdict flux_quantization_check(const RationalClass& g4_over_2pi3, std::span<const Integer> p1) {
    if (g4_over_2pi3.coords.size() != p1.size())
        throw Error(ErrorCode::LengthMismatch, "flux and p1 coordinate lists differ in length");
    FluxVerdict v;
    v.quantized = true;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        Rational d = g4_over_2pi3.coords[i] - Rational(p1[i], 4);
        if (denominator(d) != 1)
            v.quantized = false;
        v.defect.coords.push_back(std::move(d));
    }
    return v;
}

struct HodgeCell {
    std::size_t p = 0;
    std::size_t q = 0;
    Integer value;
    friend bool operator==(const HodgeCell&, const HodgeCell&) = default;
};

struct HilbertAnomalyReport {
    Integer free_h3_rank;
    /// Cuspidal Hodge numbers h^{p,q} with p + q = 3, present only for the
    /// cuspidal n = 3 case. Ordered by (p, q).
    std::optional<std::vector<HodgeCell>> cusp_h3_dims;
    /// The tables are rank-only, so torsion in H^3(X; Z) is never decided.
    bool torsion_undetermined = true;
    std::string verdict;
};

inline HilbertAnomalyReport hilbert_anomaly_report(const hilbert::Spec& spec) {
    hilbert::validate(spec);
    const std::size_t n = hilbert::factors(spec);
    HilbertAnomalyReport r;
    r.free_h3_rank = 2 * n >= 3 ? hilbert::betti_number(spec, 3) : Integer(0);

    const bool cuspidal = std::holds_alternative<hilbert::CuspidalSpec>(spec);
    if (cuspidal && n == 3) {
        std::vector<HodgeCell> cells;
        Integer total = 0;
        for (std::size_t p = 0; p <= 3; ++p) {
            Integer v = hilbert::detail::cusp_dims_of_cardinality(spec, 3 - p);
            total += v;
            cells.push_back({p, 3 - p, std::move(v)});
        }
        r.cusp_h3_dims = std::move(cells);
        r.verdict = total != 0
                        ? "cuspidal contribution may enter the global anomaly condition (H^3_cusp of dimension " +
                              total.str() + "); no definite criterion; torsion of H^3(X; Z) undetermined"
                        : "no cuspidal forms in degree 3; free part of H^3 has rank " + r.free_h3_rank.str() +
                              "; torsion of H^3(X; Z) undetermined";
        return r;
    }
    if (r.free_h3_rank == 0)
        r.verdict = "free part of [H]|_X trivial: H^3(X; C) = 0, so H^3(X; Z) is pure torsion; "
                    "torsion undetermined";
    else
        r.verdict = "H^3(X; Z) has free rank " + r.free_h3_rank.str() +
                    "; the free part of [H]|_X may be nontrivial; torsion undetermined";
    return r;
}

} // namespace modtopo::anomaly
