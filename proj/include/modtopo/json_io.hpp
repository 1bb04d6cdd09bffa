#pragma once

// JSON encodings of the library's value types (nlohmann::json).
//
// Integers that fit in 53 bits are plain JSON numbers; larger ones are
// decimal strings. Rationals are always strings ("3/4", "-2"). Objects use
// nlohmann's sorted keys, so dump() is canonical.
//
// Decoding errors throw SchemaError; callers treat them as usage errors.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "modtopo/abgroup.hpp"
#include "modtopo/anomaly.hpp"
#include "modtopo/graded.hpp"
#include "modtopo/hilbert.hpp"
#include "modtopo/ktheory.hpp"
#include "modtopo/steenrod.hpp"

namespace modtopo::json_io {

using json = nlohmann::json;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scalars ------------------------------------------------------------------

inline json encode_integer(const Integer& x) {
    static const Integer limit = Integer(1) << 53;
    if (modtopo::abs(x) < limit)
        return static_cast<std::int64_t>(x);
    return x.str();
}

inline Integer decode_integer(const json& j, const std::string& what) {
    if (j.is_number_integer())
        return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        std::size_t start = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
            throw SchemaError(what + ": '" + s + "' is not a decimal integer");
        return Integer(s[0] == '+' ? s.substr(1) : s);
    }
    throw SchemaError(what + " must be an integer or a decimal string");
}

inline std::size_t decode_count(const json& j, const std::string& what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw SchemaError(what + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

inline json encode_rational(const Rational& q) {
    if (denominator(q) == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational decode_rational(const json& j, const std::string& what) {
    if (j.is_number_integer())
        return Rational(decode_integer(j, what));
    if (!j.is_string())
        throw SchemaError(what + " must be an integer or a string like \"3/4\"");
    const auto s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational(decode_integer(json(s), what));
    const Integer num = decode_integer(json(s.substr(0, slash)), what);
    const Integer den = decode_integer(json(s.substr(slash + 1)), what);
    if (den == 0)
        throw SchemaError(what + ": zero denominator");
    return Rational(num) / Rational(den);
}

inline const json& field(const json& j, const char* key, const std::string& what) {
    if (!j.is_object())
        throw SchemaError(what + " must be an object");
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(what + " is missing field '" + key + "'");
    return *it;
}

inline const json& array_field(const json& j, const char* key, const std::string& what) {
    const json& a = field(j, key, what);
    if (!a.is_array())
        throw SchemaError(what + "." + key + " must be an array");
    return a;
}

inline std::vector<Integer> decode_integer_list(const json& j, const std::string& what) {
    if (!j.is_array())
        throw SchemaError(what + " must be an array");
    std::vector<Integer> out;
    for (const auto& x : j)
        out.push_back(decode_integer(x, what));
    return out;
}

inline json encode_integer_list(const std::vector<Integer>& xs) {
    json a = json::array();
    for (const auto& x : xs)
        a.push_back(encode_integer(x));
    return a;
}

// abgroup --------------------------------------------------------------------

inline json to_json(const FgAbGroup& g) {
    return {{"rank", g.rank()}, {"torsion", encode_integer_list(g.invariant_factors())}};
}

inline FgAbGroup group_from_json(const json& j) {
    const std::size_t rank = decode_count(field(j, "rank", "group"), "group.rank");
    auto torsion = decode_integer_list(field(j, "torsion", "group"), "group.torsion");
    for (const auto& d : torsion)
        if (d < 0)
            throw SchemaError("group.torsion entries must be nonnegative");
    return FgAbGroup(rank, std::move(torsion));
}

inline json to_json(const std::vector<FgAbGroup>& groups) {
    json a = json::array();
    for (const auto& g : groups)
        a.push_back(to_json(g));
    return a;
}

inline std::vector<FgAbGroup> groups_from_json(const json& j, const std::string& what) {
    if (!j.is_array())
        throw SchemaError(what + " must be an array of groups");
    std::vector<FgAbGroup> out;
    for (const auto& g : j)
        out.push_back(group_from_json(g));
    return out;
}

/// A matrix is an array of rows; an empty matrix needs explicit
/// {"rows": r, "cols": c, "entries": [...]} to carry its shape.
inline IntMatrix matrix_from_json(const json& j, const std::string& what) {
    if (j.is_object()) {
        const std::size_t rows = decode_count(field(j, "rows", what), what + ".rows");
        const std::size_t cols = decode_count(field(j, "cols", what), what + ".cols");
        IntMatrix m(rows, cols);
        if (auto it = j.find("entries"); it != j.end()) {
            auto flat = decode_integer_list(*it, what + ".entries");
            if (flat.size() != rows * cols)
                throw SchemaError(what + ".entries must hold rows*cols values");
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    m(r, c) = flat[r * cols + c];
        }
        return m;
    }
    if (!j.is_array())
        throw SchemaError(what + " must be an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = decode_integer_list(j[r], what + " row");
        if (row.size() != cols)
            throw SchemaError(what + " rows have different lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = row[c];
    }
    return m;
}

inline json to_json(const IntMatrix& m) {
    json flat = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            flat.push_back(encode_integer(m(r, c)));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", flat}};
}

// graded ---------------------------------------------------------------------

inline json to_json(const GradedCohomology& x) {
    json j = {{"top_degree", x.top_degree()}, {"groups", to_json(x.groups())}};
    if (!x.label().empty())
        j["label"] = x.label();
    return j;
}

inline GradedCohomology graded_from_json(const json& j) {
    auto groups = groups_from_json(field(j, "groups", "graded"), "graded.groups");
    if (auto it = j.find("top_degree"); it != j.end() && !groups.empty() &&
                                        decode_count(*it, "graded.top_degree") != groups.size() - 1)
        throw SchemaError("graded.top_degree disagrees with the number of groups");
    std::string label;
    if (auto it = j.find("label"); it != j.end()) {
        if (!it->is_string())
            throw SchemaError("graded.label must be a string");
        label = it->get<std::string>();
    }
    return GradedCohomology(std::move(groups), std::move(label));
}

inline json to_json(const BettiTable& t) { return t.values; }

inline CoefficientSpec coefficients_from_string(const std::string& s) {
    if (s == "Z")
        return CoefficientSpec::integers();
    if (s == "Q")
        return CoefficientSpec::rationals();
    if (s.rfind("Z/", 0) == 0) {
        const Integer p = decode_integer(json(s.substr(2)), "coefficients");
        if (p > 1000000007)
            throw SchemaError("coefficient modulus too large");
        return CoefficientSpec::mod_p(static_cast<std::int64_t>(p));
    }
    throw SchemaError("coefficients must be \"Z\", \"Q\" or \"Z/p\"");
}

// hilbert --------------------------------------------------------------------

inline json to_json(const hilbert::Spec& spec) {
    if (const auto* c = std::get_if<hilbert::CompactSpec>(&spec))
        return {{"n", c->n}, {"compact", true}, {"dim_weight2", encode_integer(c->dim_weight2)}};
    const auto& cs = std::get<hilbert::CuspidalSpec>(spec);
    json dims = json::object();
    for (std::size_t b = 0; b < cs.cusp_dims.size(); ++b)
        if (cs.cusp_dims[b] != 0)
            dims[std::to_string(b)] = encode_integer(cs.cusp_dims[b]);
    return {{"n", cs.n}, {"h", encode_integer(cs.cusps)}, {"cusp_dims", dims}};
}

/// cusp_dims is either an array of 2^n values indexed by bitmask, or an
/// object keyed by decimal bitmask strings (missing subsets count as 0).
inline std::vector<Integer> cusp_dims_from_json(const json& j, std::size_t n) {
    if (n < 1 || n > hilbert::max_factors)
        throw SchemaError("n must lie in 1.." + std::to_string(hilbert::max_factors));
    const std::size_t subsets = std::size_t{1} << n;
    if (j.is_array()) {
        auto dims = decode_integer_list(j, "cusp_dims");
        if (dims.size() != subsets)
            throw SchemaError("cusp_dims array needs 2^n = " + std::to_string(subsets) + " entries");
        return dims;
    }
    if (!j.is_object())
        throw SchemaError("cusp_dims must be an array or an object keyed by bitmask");
    std::vector<Integer> dims(subsets);
    for (const auto& [key, value] : j.items()) {
        const Integer b = decode_integer(json(key), "cusp_dims key");
        if (b < 0 || b >= Integer(subsets))
            throw SchemaError("cusp_dims key " + key + " is not a subset of {1..n}");
        dims[static_cast<std::size_t>(b)] = decode_integer(value, "cusp_dims value");
    }
    return dims;
}

inline hilbert::Spec hilbert_spec_from_json(const json& j) {
    const std::size_t n = decode_count(field(j, "n", "hilbert spec"), "n");
    const bool compact = j.contains("compact") && j["compact"].is_boolean() && j["compact"].get<bool>();
    if (compact)
        return hilbert::CompactSpec{n, decode_integer(field(j, "dim_weight2", "hilbert spec"), "dim_weight2")};
    hilbert::CuspidalSpec cs;
    cs.n = n;
    cs.cusps = decode_integer(field(j, "h", "hilbert spec"), "h");
    cs.cusp_dims = cusp_dims_from_json(field(j, "cusp_dims", "hilbert spec"), n);
    return cs;
}

inline json to_json(const std::vector<hilbert::HodgeEntry>& entries) {
    json a = json::array();
    for (const auto& e : entries)
        a.push_back({{"p", e.p}, {"q", e.q}, {"part", std::string(hilbert::to_string(e.part))},
                     {"value", encode_integer(e.value)}});
    return a;
}

inline hilbert::HodgePart hodge_part_from_string(const std::string& s) {
    if (s == "univ")
        return hilbert::HodgePart::Univ;
    if (s == "eis")
        return hilbert::HodgePart::Eis;
    if (s == "cusp")
        return hilbert::HodgePart::Cusp;
    throw SchemaError("hodge part must be univ, eis or cusp");
}

inline std::vector<hilbert::HodgeEntry> hodge_entries_from_json(const json& j) {
    if (!j.is_array())
        throw SchemaError("hodge entries must be an array");
    std::vector<hilbert::HodgeEntry> out;
    for (const auto& e : j)
        out.push_back({decode_count(field(e, "p", "hodge entry"), "p"), decode_count(field(e, "q", "hodge entry"), "q"),
                       hodge_part_from_string(field(e, "part", "hodge entry").get<std::string>()),
                       decode_integer(field(e, "value", "hodge entry"), "value")});
    return out;
}

inline json to_json(const hilbert::HodgeSlice& s) {
    json j = {{"m", s.m}, {"entries", to_json(s.entries)}, {"sum", encode_integer(s.sum())}};
    if (s.boundary_override) {
        j["boundary_override"] = true;
        j["suppressed"] = to_json(s.suppressed);
    }
    if (s.eis_middle_degree)
        j["eis_middle_degree"] = true;
    return j;
}

inline hilbert::HodgeSlice hodge_slice_from_json(const json& j) {
    hilbert::HodgeSlice s;
    s.m = decode_count(field(j, "m", "hodge slice"), "m");
    s.entries = hodge_entries_from_json(field(j, "entries", "hodge slice"));
    if (auto it = j.find("boundary_override"); it != j.end())
        s.boundary_override = it->get<bool>();
    if (auto it = j.find("suppressed"); it != j.end())
        s.suppressed = hodge_entries_from_json(*it);
    if (auto it = j.find("eis_middle_degree"); it != j.end())
        s.eis_middle_degree = it->get<bool>();
    return s;
}

// ktheory --------------------------------------------------------------------

inline ktheory::CircleBundleSpec circle_bundle_from_json(const json& j) {
    auto small = [&](const char* key) {
        const Integer v = decode_integer(field(j, key, "circle bundle"), key);
        if (modtopo::abs(v) > Integer(1) << 40)
            throw SchemaError(std::string(key) + " is too large");
        return static_cast<std::int64_t>(v);
    };
    return {small("genus"), small("chern"), small("twist")};
}

inline json to_json(const ktheory::CircleBundleSpec& s) {
    return {{"genus", s.genus}, {"chern", s.chern}, {"twist", s.twist}};
}

inline json to_json(const ktheory::KReport& r) {
    return {{"K0", to_json(r.groups.k0)},
            {"K1", to_json(r.groups.k1)},
            {"path", std::string(ktheory::to_string(r.path))},
            {"split_extension_assumed", r.split_extension_assumed}};
}

inline ktheory::KReport k_report_from_json(const json& j) {
    ktheory::KReport r;
    r.groups.k0 = group_from_json(field(j, "K0", "k report"));
    r.groups.k1 = group_from_json(field(j, "K1", "k report"));
    const auto path = field(j, "path", "k report").get<std::string>();
    if (path != "closed_form" && path != "d3")
        throw SchemaError("path must be closed_form or d3");
    r.path = path == "d3" ? ktheory::Path::D3 : ktheory::Path::ClosedForm;
    if (auto it = j.find("split_extension_assumed"); it != j.end())
        r.split_extension_assumed = it->get<bool>();
    return r;
}

// anomaly --------------------------------------------------------------------

inline anomaly::CohomologyElement element_from_json(const FgAbGroup& ambient, const json& j, const std::string& what) {
    const auto coords = decode_integer_list(j, what);
    if (coords.size() != ambient.generator_count())
        throw SchemaError(what + " needs " + std::to_string(ambient.generator_count()) + " coordinates");
    return anomaly::CohomologyElement::from_coordinates(ambient, coords);
}

inline json to_json(const anomaly::CohomologyElement& x) { return encode_integer_list(x.coordinates()); }

inline json to_json(const anomaly::FreedWittenVerdict& v) {
    return {{"check", "freed_witten"},
            {"anomaly_free", v.anomaly_free},
            {"ambient", to_json(v.obstruction.ambient())},
            {"obstruction", to_json(v.obstruction)},
            {"verdict", v.anomaly_free ? "W3 + [H] vanishes: no Freed-Witten anomaly"
                                       : "W3 + [H] is nonzero: the wrapped brane is anomalous"}};
}

inline json to_json(const anomaly::MmsVerdict& v) {
    return {{"check", "mms"},
            {"unstable", v.unstable},
            {"ambient", to_json(v.difference.ambient())},
            {"difference", to_json(v.difference)},
            {"verdict", v.unstable ? "PD(Y) = W3 + [H]: the brane on Y is unstable"
                                   : "PD(Y) differs from W3 + [H]: no instability of this kind"}};
}

inline json to_json(const anomaly::FluxVerdict& v) {
    json defect = json::array();
    for (const auto& q : v.defect.coords)
        defect.push_back(encode_rational(q));
    return {{"check", "flux"},
            {"quantized", v.quantized},
            {"defect", defect},
            {"verdict", v.quantized ? "G4/(2 pi)^3 - p1/4 is integral" : "G4/(2 pi)^3 - p1/4 is not integral"}};
}

inline json to_json(const anomaly::HilbertAnomalyReport& r) {
    json j = {{"check", "hilbert"},
              {"free_h3_rank", encode_integer(r.free_h3_rank)},
              {"torsion_undetermined", r.torsion_undetermined},
              {"verdict", r.verdict}};
    if (r.cusp_h3_dims) {
        json cells = json::array();
        for (const auto& c : *r.cusp_h3_dims)
            cells.push_back({{"p", c.p}, {"q", c.q}, {"value", encode_integer(c.value)}});
        j["cusp_h3_dims"] = cells;
    } else {
        j["cusp_h3_dims"] = nullptr;
    }
    return j;
}

// steenrod -------------------------------------------------------------------

inline json to_json(const steenrod::ModPRingPresentation& ring, const steenrod::Polynomial& f) {
    json terms = json::array();
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        json mono = json::object();
        for (std::size_t g = 0; g < it->first.size(); ++g)
            if (it->first[g] != 0)
                mono[ring.generators()[g].name] = it->first[g];
        terms.push_back({{"coeff", it->second}, {"monomial", mono}});
    }
    return terms;
}

/// A polynomial is a list of {"coeff", "monomial": {name: exponent}} terms
/// or a string such as "x^2*y + y^3".
inline steenrod::Polynomial polynomial_from_json(const steenrod::ModPRingPresentation& ring, const json& j) {
    if (j.is_string())
        return ring.parse_polynomial(j.get<std::string>());
    if (!j.is_array())
        throw SchemaError("polynomial must be a string or a list of terms");
    std::string text;
    for (const auto& term : j) {
        const Integer c = decode_integer(field(term, "coeff", "polynomial term"), "coeff");
        std::string t = mod_floor(c, Integer(ring.p())).str();
        const json& mono = field(term, "monomial", "polynomial term");
        if (!mono.is_object())
            throw SchemaError("monomial must be an object of exponents");
        for (const auto& [name, e] : mono.items())
            t += "*" + name + "^" + std::to_string(decode_count(e, "exponent"));
        text += (text.empty() ? "" : " + ") + t;
    }
    return ring.parse_polynomial(text.empty() ? "0" : text);
}

inline std::pair<steenrod::OpKind, std::size_t> op_from_string(const std::string& s) {
    if (s == "beta")
        return {steenrod::OpKind::Beta, 0};
    for (auto [prefix, kind] : {std::pair{"Sq", steenrod::OpKind::Sq}, std::pair{"St", steenrod::OpKind::St}}) {
        const std::string pre = prefix;
        if (s.rfind(pre, 0) != 0)
            continue;
        std::string digits = s.substr(pre.size());
        if (!digits.empty() && digits[0] == '^')
            digits.erase(0, 1);
        if (digits.empty() || digits.size() > 6 || digits.find_first_not_of("0123456789") != std::string::npos)
            break;
        return {kind, static_cast<std::size_t>(std::stoul(digits))};
    }
    throw SchemaError("operation must be SqK, StK or beta, got '" + s + "'");
}

/// Generators are parsed first so relation and op strings can name them.
inline steenrod::RingPtr presentation_from_json(const json& j) {
    const Integer p = decode_integer(field(j, "p", "presentation"), "p");
    if (p < 2 || p > 1000003)
        throw SchemaError("p out of range");
    std::vector<steenrod::Generator> gens;
    for (const auto& g : array_field(j, "generators", "presentation")) {
        const json& name = field(g, "name", "generator");
        if (!name.is_string())
            throw SchemaError("generator name must be a string");
        gens.push_back({name.get<std::string>(), decode_count(field(g, "degree", "generator"), "degree")});
    }
    auto scratch = steenrod::ModPRingPresentation::create(static_cast<std::int64_t>(p), gens,
                                                         std::vector<steenrod::Polynomial>{}, {});
    std::vector<steenrod::Polynomial> relations;
    if (auto it = j.find("relations"); it != j.end())
        for (const auto& r : *it)
            relations.push_back(polynomial_from_json(*scratch, r));
    std::map<steenrod::OpKey, steenrod::Polynomial> ops;
    if (auto it = j.find("ops"); it != j.end())
        for (const auto& o : *it) {
            auto [kind, k] = op_from_string(field(o, "op", "op entry").get<std::string>());
            const std::size_t g = scratch->generator_index(field(o, "gen", "op entry").get<std::string>());
            ops[{kind, k, g}] = polynomial_from_json(*scratch, field(o, "value", "op entry"));
        }
    return steenrod::ModPRingPresentation::create(static_cast<std::int64_t>(p), std::move(gens),
                                                  std::move(relations), std::move(ops));
}

inline json to_json(const steenrod::ModPRingPresentation& ring) {
    json gens = json::array();
    for (const auto& g : ring.generators())
        gens.push_back({{"name", g.name}, {"degree", g.degree}});
    json rels = json::array();
    for (const auto& r : ring.relations())
        rels.push_back(to_json(ring, r));
    json ops = json::array();
    for (const auto& [key, value] : ring.ops())
        ops.push_back({{"op", steenrod::op_name(key.kind, key.k)},
                       {"gen", ring.generators()[key.generator].name},
                       {"value", to_json(ring, value)}});
    return {{"p", ring.p()}, {"generators", gens}, {"relations", rels}, {"ops", ops}};
}

inline json to_json(const std::vector<steenrod::Violation>& vs) {
    json a = json::array();
    for (const auto& v : vs)
        a.push_back({{"kind", v.kind}, {"where", v.where}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    return a;
}

} // namespace modtopo::json_io
