#pragma once

// Command-line front end. run() parses argv (without the program name),
// dispatches to one calculator and writes a single JSON document.
//
// Exit codes: 0 success, 1 domain error, 2 usage error. Nothing is written
// to `out` on a nonzero exit unless --partial was given, in which case a
// domain error is reported as {"error": {"code", "message"}}.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "modtopo/json_io.hpp"

namespace modtopo::cli {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SelfTestOptions {
    std::int64_t max_genus = 4;
    /// Test hook: corrupts one closed-form result so the sweep must fail.
    bool inject_fault = false;
};

namespace detail {

inline json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError("invalid JSON in " + source + ": " + e.what());
    }
}

inline json read_json(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_json_text(ss.str(), "standard input");
    }
    std::ifstream f(path);
    if (!f)
        throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline Integer parse_integer_flag(const std::string& flag, const std::string& text) {
    try {
        return json_io::decode_integer(json(text), flag);
    } catch (const json_io::SchemaError&) {
        throw UsageError(flag + " expects an integer, got '" + text + "'");
    }
}

inline json group_command(const json& in) {
    using namespace json_io;
    if (in.contains("boundaries")) {
        const json& bs = in["boundaries"];
        if (!bs.is_array())
            throw json_io::SchemaError("boundaries must be an array of matrices");
        std::vector<IntMatrix> mats;
        for (const auto& m : bs)
            mats.push_back(matrix_from_json(m, "boundary"));
        json out = {{"homology", to_json(homology_of_complex(mats))},
                    {"cohomology", to_json(cohomology_of_complex(mats))}};
        if (in.contains("coefficients")) {
            const auto coeff = coefficients_from_string(in["coefficients"].get<std::string>());
            const auto h = homology_of_complex(mats);
            out["coefficients"] = coeff.to_string();
            out["homology_with_coefficients"] = to_json(homology_with_coefficients(h, coeff));
            out["cohomology_with_coefficients"] = to_json(cohomology_with_coefficients(h, coeff));
        }
        return out;
    }
    if (in.contains("matrix")) {
        const IntMatrix m = matrix_from_json(in["matrix"], "matrix");
        const auto snf = smith_normal_form(m);
        return {{"smith_diagonal", encode_integer_list(snf.diagonal)},
                {"rank", snf.rank()},
                {"cokernel", to_json(cokernel(m))}};
    }
    if (in.contains("op")) {
        const auto op = in["op"].get<std::string>();
        const FgAbGroup a = group_from_json(field(in, "a", "group op"));
        const FgAbGroup b = group_from_json(field(in, "b", "group op"));
        FgAbGroup r;
        if (op == "sum")
            r = direct_sum(a, b);
        else if (op == "tensor")
            r = tensor(a, b);
        else if (op == "tor")
            r = tor(a, b);
        else if (op == "hom")
            r = hom(a, b);
        else if (op == "ext")
            r = ext(a, b);
        else
            throw json_io::SchemaError("op must be sum, tensor, tor, hom or ext");
        return {{"result", to_json(r)}};
    }
    if (in.contains("group")) {
        const FgAbGroup g = group_from_json(in["group"]);
        return {{"group", to_json(g)}, {"primary", encode_integer_list(g.primary_decomposition())},
                {"text", g.to_string()}};
    }
    throw json_io::SchemaError("group input needs one of boundaries, matrix, op or group");
}

inline json kunneth_command(const json& in) {
    using namespace json_io;
    const auto x = graded_from_json(field(in, "x", "kunneth input"));
    const auto y = graded_from_json(field(in, "y", "kunneth input"));
    auto grading = KunnethGrading::Chain;
    if (auto it = in.find("grading"); it != in.end()) {
        const auto g = it->get<std::string>();
        if (g == "cochain")
            grading = KunnethGrading::Cochain;
        else if (g != "chain")
            throw SchemaError("grading must be chain or cochain");
    }
    const auto product = kunneth_product(x, y, grading);
    return {{"product", to_json(product)},
            {"betti", to_json(betti(product))},
            {"euler_characteristic", encode_integer(euler_characteristic(product))}};
}

struct HilbertArgs {
    std::optional<std::size_t> n;
    bool compact = false;
    std::optional<std::string> h;
    std::optional<std::string> dim_weight2;
    std::optional<std::string> cusp_dims_file;
    std::optional<std::string> json_file;
    bool betti = false;
    bool hodge = false;
};

inline hilbert::Spec hilbert_spec(const HilbertArgs& a, std::istream& in) {
    if (a.json_file) {
        if (a.n || a.compact || a.h || a.dim_weight2 || a.cusp_dims_file)
            throw UsageError("--json replaces --n/--compact/--h/--dim-weight2/--cusp-dims");
        return json_io::hilbert_spec_from_json(read_json(*a.json_file, in));
    }
    if (!a.n)
        throw UsageError("--n is required");
    if (a.compact) {
        if (a.h || a.cusp_dims_file)
            throw UsageError("--h and --cusp-dims apply to the cuspidal case only");
        if (!a.dim_weight2)
            throw UsageError("--compact needs --dim-weight2");
        const Integer d = parse_integer_flag("--dim-weight2", *a.dim_weight2);
        if (d < 0)
            throw UsageError("--dim-weight2 must be nonnegative");
        return hilbert::CompactSpec{*a.n, d};
    }
    if (a.dim_weight2)
        throw UsageError("--dim-weight2 applies to the compact case only");
    if (!a.h || !a.cusp_dims_file)
        throw UsageError("the cuspidal case needs --h and --cusp-dims");
    hilbert::CuspidalSpec cs;
    cs.n = *a.n;
    cs.cusps = parse_integer_flag("--h", *a.h);
    if (cs.cusps < 1)
        throw UsageError("--h must be positive");
    cs.cusp_dims = json_io::cusp_dims_from_json(read_json(*a.cusp_dims_file, in), cs.n);
    for (const auto& d : cs.cusp_dims)
        if (d < 0)
            throw UsageError("cusp dimensions must be nonnegative");
    return cs;
}

inline json hilbert_command(const hilbert::Spec& spec, bool want_betti, bool want_hodge) {
    using namespace json_io;
    hilbert::validate(spec);
    const std::size_t n = hilbert::factors(spec);
    json betti_list = json::array();
    json slices = json::array();
    for (std::size_t m = 0; m <= 2 * n; ++m) {
        betti_list.push_back(encode_integer(hilbert::betti_number(spec, m)));
        slices.push_back(to_json(hilbert::hodge_slice(spec, m)));
    }
    if (want_betti && !want_hodge)
        return betti_list;
    if (want_hodge && !want_betti)
        return slices;
    json out = {{"spec", to_json(spec)}, {"betti", betti_list}, {"hodge", slices}};
    if (want_betti && want_hodge)
        return out;
    if (const auto* c = std::get_if<hilbert::CompactSpec>(&spec)) {
        out["euler_characteristic"] = encode_integer(hilbert::compact_euler_characteristic(*c));
        out["implied_volume"] = encode_rational(hilbert::compact_implied_volume(*c));
    } else {
        json overrides = json::array();
        for (std::size_t m : {std::size_t{0}, 2 * n}) {
            const auto b = hilbert::cuspidal_betti(std::get<hilbert::CuspidalSpec>(spec), m);
            if (b.boundary_override)
                overrides.push_back({{"m", m}, {"suppressed", encode_integer(b.suppressed)}});
        }
        out["boundary_overrides"] = overrides;
    }
    return out;
}

inline json anomaly_command(const json& in) {
    using namespace json_io;
    const auto check = field(in, "check", "anomaly input").get<std::string>();
    if (check == "freed_witten") {
        const FgAbGroup amb = group_from_json(field(in, "ambient", "anomaly input"));
        return to_json(anomaly::freed_witten_check(element_from_json(amb, field(in, "w3", "anomaly input"), "w3"),
                                                   element_from_json(amb, field(in, "h", "anomaly input"), "h")));
    }
    if (check == "mms") {
        const FgAbGroup amb = group_from_json(field(in, "ambient", "anomaly input"));
        return to_json(anomaly::mms_instability_check(element_from_json(amb, field(in, "pd", "anomaly input"), "pd"),
                                                      element_from_json(amb, field(in, "w3", "anomaly input"), "w3"),
                                                      element_from_json(amb, field(in, "h", "anomaly input"), "h")));
    }
    if (check == "flux") {
        anomaly::RationalClass g4;
        for (const auto& q : array_field(in, "g4", "anomaly input"))
            g4.coords.push_back(decode_rational(q, "g4"));
        const auto p1 = decode_integer_list(field(in, "p1", "anomaly input"), "p1");
        return to_json(anomaly::flux_quantization_check(g4, p1));
    }
    if (check == "d3") {
        const FgAbGroup source = group_from_json(field(in, "source", "anomaly input"));
        anomaly::D3Maps maps{group_from_json(field(in, "target", "anomaly input")), {}, {}, {}};
        if (auto it = in.find("h"); it != in.end())
            maps.h = element_from_json(maps.target, *it, "h");
        if (auto it = in.find("cup_by_h"); it != in.end())
            maps.cup_by_h = matrix_from_json(*it, "cup_by_h");
        if (auto it = in.find("sq3"); it != in.end())
            maps.sq3 = matrix_from_json(*it, "sq3");
        const auto x = element_from_json(source, field(in, "x", "anomaly input"), "x");
        const auto image = anomaly::d3_action(x, decode_count(field(in, "degree", "anomaly input"), "degree"), maps);
        return {{"check", "d3"}, {"target", to_json(maps.target)}, {"image", to_json(image)},
                {"vanishes", image.is_zero()}};
    }
    if (check == "hilbert")
        return to_json(anomaly::hilbert_anomaly_report(hilbert_spec_from_json(field(in, "spec", "anomaly input"))));
    throw SchemaError("check must be freed_witten, mms, flux, d3 or hilbert");
}

inline json steenrod_command(const json& in, std::optional<std::size_t> max_degree) {
    using namespace json_io;
    const json& pres = in.contains("presentation") ? in["presentation"] : in;
    const auto ring = presentation_from_json(pres);
    json out = {{"presentation", to_json(*ring)}};

    if (auto it = in.find("evaluate"); it != in.end()) {
        json evals = json::array();
        for (const auto& e : *it) {
            const auto op_text = field(e, "op", "evaluation").get<std::string>();
            const auto [kind, k] = op_from_string(op_text);
            const auto x = ring->element(polynomial_from_json(*ring, field(e, "arg", "evaluation")));
            steenrod::RingElement v = kind == steenrod::OpKind::Sq   ? steenrod::sq(k, x)
                                      : kind == steenrod::OpKind::St ? steenrod::st(k, x)
                                                                     : steenrod::bockstein(x);
            evals.push_back({{"op", op_text},
                             {"arg", to_json(*ring, x.polynomial())},
                             {"value", to_json(*ring, v.polynomial())},
                             {"text", v.to_string()}});
        }
        out["evaluations"] = evals;
    }
    if (auto it = in.find("w2"); it != in.end()) {
        const auto w3 = steenrod::w3_from_w2(ring->element(polynomial_from_json(*ring, *it)));
        out["w3"] = to_json(*ring, w3.polynomial());
    }
    if (!max_degree)
        if (auto it = in.find("verify_degree"); it != in.end())
            max_degree = decode_count(*it, "verify_degree");
    if (max_degree)
        out["violations"] = to_json(steenrod::verify_axioms(*ring, *max_degree));
    return out;
}

inline bool use_color(const std::ostream& err) {
    return std::getenv("MODTOPO_NO_COLOR") == nullptr && &err == &std::cerr && ::isatty(STDERR_FILENO);
}

inline void diagnose(std::ostream& err, const std::string& what) {
    if (use_color(err))
        err << "\033[1;31merror:\033[0m " << what << "\n";
    else
        err << "error: " << what << "\n";
}

} // namespace detail

/// Closed form vs d3 and T-duality over g <= max_genus, |j| <= 5, k <= 5,
/// then Hodge sums vs Betti totals over n <= 4, h <= 3, cusp dimensions
/// (by subset size) <= 3. One summary line per suite.
inline int self_test(const SelfTestOptions& opt, std::ostream& out, std::ostream& err) {
    std::size_t k_cases = 0, k_fail = 0;
    for (std::int64_t g = 0; g <= opt.max_genus; ++g)
        for (std::int64_t j = -5; j <= 5; ++j)
            for (std::int64_t k = 0; k <= 5; ++k) {
                const ktheory::CircleBundleSpec s{g, j, k};
                auto closed = ktheory::k_groups(s);
                if (opt.inject_fault && k_cases == 0)
                    closed.k0 = direct_sum(closed.k0, FgAbGroup::cyclic(2));
                const auto via_d3 = ktheory::k_groups_via_d3(s);
                ++k_cases;
                if (closed != via_d3 || !ktheory::t_duality_check(s)) {
                    if (k_fail++ == 0)
                        err << "kgroups mismatch at (genus=" << g << ", chern=" << j << ", twist=" << k
                            << "): closed form K0=" << closed.k0.to_string() << " K1=" << closed.k1.to_string()
                            << ", d3 K0=" << via_d3.k0.to_string() << " K1=" << via_d3.k1.to_string() << "\n";
                }
            }
    out << "kgroups: " << (k_cases - k_fail) << "/" << k_cases << " cases agree (closed form vs d3, T-duality)\n";

    std::size_t h_cases = 0, h_fail = 0;
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::int64_t h = 1; h <= 3; ++h) {
            std::vector<Integer> by_card(n + 1);
            for (;;) {
                const hilbert::Spec spec = hilbert::CuspidalSpec::uniform_by_cardinality(n, h, by_card);
                for (std::size_t m = 0; m <= 2 * n; ++m) {
                    ++h_cases;
                    const auto slice = hilbert::hodge_slice(spec, m);
                    const auto b = hilbert::cuspidal_betti(std::get<hilbert::CuspidalSpec>(spec), m);
                    if (slice.sum() != b.total || slice.boundary_override != b.boundary_override) {
                        if (h_fail++ == 0)
                            err << "hodge mismatch at (n=" << n << ", h=" << h << ", m=" << m
                                << "): sum=" << slice.sum() << " betti=" << b.total << "\n";
                    }
                }
                std::size_t i = 0;
                while (i <= n && by_card[i] == 3)
                    by_card[i++] = 0;
                if (i > n)
                    break;
                ++by_card[i];
            }
        }
    out << "hodge: " << (h_cases - h_fail) << "/" << h_cases << " slices sum to the Betti total\n";
    return k_fail == 0 && h_fail == 0 ? 0 : 1;
}

inline int self_test(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact calculators for cohomology, twisted K-theory and Steenrod operations", "modtopo"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    bool partial = false;
    app.add_flag("--partial", partial, "On a domain error, print {\"error\": ...} to stdout");

    auto* group_cmd = app.add_subcommand("group", "Homology of chain complexes, SNF, group operations (JSON input)");
    auto* kunneth_cmd = app.add_subcommand("kunneth", "Kunneth product of two graded groups (JSON input)");
    auto* hilbert_cmd = app.add_subcommand("hilbert", "Betti and Hodge numbers of Hilbert modular varieties");
    auto* kcircle_cmd = app.add_subcommand("kcircle", "Twisted K-groups of a circle bundle over a surface");
    auto* anomaly_cmd = app.add_subcommand("anomaly", "Freed-Witten, MMS, flux and d3 checks (JSON input)");
    auto* steenrod_cmd = app.add_subcommand("steenrod", "Steenrod operations on a presented ring (JSON input)");
    auto* self_cmd = app.add_subcommand("self-test", "Cross-check closed forms against generic computations");

    std::string json_file;
    for (auto* sub : {group_cmd, kunneth_cmd, anomaly_cmd, steenrod_cmd})
        sub->add_option("--json", json_file, "Input document (default: standard input)");

    detail::HilbertArgs ha;
    // --h is the cusp count here, so help is --help only.
    hilbert_cmd->set_help_flag("--help", "Print this help message and exit");
    hilbert_cmd->add_option("--n", ha.n, "Number of upper half-plane factors")
        ->check(CLI::Range(std::size_t{1}, hilbert::max_factors));
    hilbert_cmd->add_flag("--compact", ha.compact, "Compact quotient");
    hilbert_cmd->add_option("--h", ha.h, "Number of cusps");
    hilbert_cmd->add_option("--dim-weight2", ha.dim_weight2, "dim of weight (2,...,2) forms (compact case)");
    hilbert_cmd->add_option("--cusp-dims", ha.cusp_dims_file, "JSON file of cusp form dimensions by subset");
    hilbert_cmd->add_option("--json", ha.json_file, "Spec document instead of flags");
    hilbert_cmd->add_flag("--betti", ha.betti, "Print only the Betti numbers");
    hilbert_cmd->add_flag("--hodge", ha.hodge, "Print only the Hodge slices");

    std::int64_t genus = 0, chern = 0, twist = 0;
    std::string path = "closed";
    std::string kc_json;
    auto* genus_opt = kcircle_cmd->add_option("--genus", genus, "Genus of the base surface")
                          ->check(CLI::Range(std::int64_t{0}, std::int64_t{1} << 30));
    kcircle_cmd->add_option("--chern", chern, "Chern class j of the bundle")
        ->check(CLI::Range(-(std::int64_t{1} << 40), std::int64_t{1} << 40));
    kcircle_cmd->add_option("--twist", twist, "H-flux k")->check(CLI::Range(std::int64_t{0}, std::int64_t{1} << 40));
    kcircle_cmd->add_option("--path", path, "closed or d3")->check(CLI::IsMember({"closed", "d3"}));
    kcircle_cmd->add_option("--json", kc_json, "Spec document {genus, chern, twist}")->excludes(genus_opt);

    std::optional<std::size_t> max_degree;
    steenrod_cmd->add_option("--max-degree", max_degree, "Run verify_axioms up to this degree")
        ->check(CLI::Range(std::size_t{0}, std::size_t{64}));

    SelfTestOptions st;
    self_cmd->add_option("--max-genus", st.max_genus, "Largest genus in the K-group sweep")
        ->check(CLI::Range(std::int64_t{0}, std::int64_t{64}));
    self_cmd->add_flag("--inject-fault", st.inject_fault, "Corrupt one closed-form value (test hook)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        detail::diagnose(err, e.what());
        return 2;
    }

    if (self_cmd->parsed())
        return self_test(st, out, err);

    try {
        json result;
        if (group_cmd->parsed())
            result = detail::group_command(detail::read_json(json_file, in));
        else if (kunneth_cmd->parsed())
            result = detail::kunneth_command(detail::read_json(json_file, in));
        else if (hilbert_cmd->parsed())
            result = detail::hilbert_command(detail::hilbert_spec(ha, in), ha.betti, ha.hodge);
        else if (kcircle_cmd->parsed()) {
            ktheory::CircleBundleSpec spec{genus, chern, twist};
            if (!kc_json.empty()) {
                if (kcircle_cmd->count("--chern") + kcircle_cmd->count("--twist") > 0)
                    throw UsageError("--json replaces --genus/--chern/--twist");
                spec = json_io::circle_bundle_from_json(detail::read_json(kc_json, in));
                if (spec.genus < 0 || spec.twist < 0)
                    throw UsageError("genus and twist must be nonnegative");
            }
            result = json_io::to_json(ktheory::compute(spec, path == "d3" ? ktheory::Path::D3
                                                                          : ktheory::Path::ClosedForm));
        } else if (anomaly_cmd->parsed())
            result = detail::anomaly_command(detail::read_json(json_file, in));
        else if (steenrod_cmd->parsed())
            result = detail::steenrod_command(detail::read_json(json_file, in), max_degree);
        out << result.dump() << "\n";
        return 0;
    } catch (const UsageError& e) {
        detail::diagnose(err, e.what());
        return 2;
    } catch (const json_io::SchemaError& e) {
        detail::diagnose(err, e.what());
        return 2;
    } catch (const json::exception& e) {
        // Wrong JSON value types surface here.
        detail::diagnose(err, std::string("malformed input: ") + e.what());
        return 2;
    } catch (const Error& e) {
        detail::diagnose(err, e.what());
        if (partial) {
            const std::string msg = e.what();
            const std::string code(to_string(e.code()));
            const auto sep = msg.find(": ");
            out << json{{"error", {{"code", code}, {"message", sep == std::string::npos ? msg : msg.substr(sep + 2)}}}}
                       .dump()
                << "\n";
        }
        return 1;
    }
}

inline int self_test(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> full{"self-test"};
    full.insert(full.end(), args.begin(), args.end());
    std::istringstream none;
    return run(full, none, out, err);
}

} // namespace modtopo::cli
