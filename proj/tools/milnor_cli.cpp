// Command-line front end for the arrangement toolkit: reads and generates
// arrangement files, runs the combinatorial vanishing checkers, computes
// monodromy eigenspace dimensions with independent cross-checks, cuts plane
// sections, verifies certificates, and evaluates exact root-of-unity sums.
//
// Structured output is JSON on standard output (or --output); a short human
// summary goes to standard error. Exit codes: 0 success, 2 bad input,
// 3 inconclusive result under --strict, 4 method disagreement or failed
// certificate verification.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <milnor/arrangement.hpp>
#include <milnor/criteria.hpp>
#include <milnor/cyclotomic.hpp>
#include <milnor/families.hpp>
#include <milnor/fox.hpp>
#include <milnor/monodromy.hpp>
#include <milnor/section.hpp>
#include <milnor/wiring.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kToolName = "milnor";
constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitDisagreement = 4;

// Thrown for every user-input problem; main maps it to kExitBadInput.
struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using nlohmann::ordered_json;

milnor::Arrangement load_arrangement(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput(path + ": cannot open for reading");
    try {
        return milnor::read_arrangement(in);
    } catch (const std::exception& e) {
        throw BadInput(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw BadInput(path + ": cannot open for writing");
    out << text;
}

ordered_json base_report(const std::string& command, std::uint64_t seed) {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

void emit_report(const ordered_json& report, const std::string& out_path) {
    write_text(out_path, report.dump(2) + "\n");
}

std::vector<std::uint64_t> divisor_orders(std::uint64_t d) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 2; m <= d; ++m)
        if (d % m == 0) out.push_back(m);
    return out;
}

ordered_json arrangement_summary(const milnor::Arrangement& arr) {
    ordered_json j;
    j["line_count"] = arr.size();
    j["ambient_dim"] = arr.ambient_dim();
    j["field_order"] = arr.field_order();
    j["hash"] = milnor::arrangement_hash(arr);
    return j;
}

ordered_json census_json(const std::vector<milnor::Flat2>& flats) {
    ordered_json j = ordered_json::object();
    for (const auto& [mult, count] : milnor::flat_census(flats))
        j[std::to_string(mult)] = count;
    return j;
}

// Builds a braided wiring diagram the same way the monodromy layer does:
// real sweep for rational data, certified numeric tracking otherwise.
milnor::BraidedWiringDiagram diagram_for(const milnor::Arrangement& arr, std::size_t removed,
                                         std::uint64_t seed) {
    auto center = milnor::find_projection_center(arr, removed, seed);
    bool rational = true;
    for (std::size_t i = 0; i < arr.size() && rational; ++i)
        for (const milnor::CycloNum& c : arr[i].normal)
            if (!c.is_rational()) rational = false;
    for (const milnor::CycloNum& c : center)
        if (!c.is_rational()) rational = false;
    return rational ? milnor::sweep_real(arr, removed, center)
                    : milnor::track_complex(arr, removed, center);
}

// ---------------------------------------------------------------------------
// analyze: vanishing certificates plus the combinatorial context they live in.
// ---------------------------------------------------------------------------

struct AnalyzeConfig {
    std::string input;
    std::string output;
    std::vector<std::uint64_t> orders;
    std::uint64_t seed = 0;
    bool lattice_only = false;
    bool strict = false;
};

int cmd_analyze(const AnalyzeConfig& cfg) {
    milnor::Arrangement arr = load_arrangement(cfg.input);
    const std::uint64_t d = arr.size();
    const auto flats = milnor::rank2_flats(arr);

    std::vector<milnor::Certificate> certs;
    if (cfg.orders.empty()) {
        certs = milnor::analyze_all(arr, cfg.lattice_only);
    } else {
        for (std::uint64_t m : cfg.orders) {
            if (m < 2) throw BadInput("--m values must be at least 2");
            certs.push_back(d % m == 0
                                ? milnor::analyze_order(arr, m, cfg.lattice_only)
                                : milnor::detail::trivial_order_certificate(arr, m));
        }
    }

    ordered_json report = base_report("analyze", cfg.seed);
    report["input"] = cfg.input;
    report["arrangement"] = arrangement_summary(arr);
    report["essential"] = milnor::is_essential(arr);
    report["flat_census"] = census_json(flats);

    // Component counts of the dual graph per divisor: without removal (r)
    // and with the last line removed (r_prime_default). Certificates may
    // still pick a different removal; their removed_index records it.
    ordered_json table = ordered_json::array();
    for (std::uint64_t m : divisor_orders(d)) {
        auto full = milnor::components(milnor::dual_m_graph(arr, m, std::nullopt, flats));
        auto pruned = milnor::components(milnor::dual_m_graph(arr, m, d - 1, flats));
        ordered_json row;
        row["m"] = m;
        row["r"] = full.size();
        row["r_prime_default"] = pruned.size();
        row["components"] = full;
        row["components_without_last"] = pruned;
        table.push_back(std::move(row));
    }
    report["graph_table"] = std::move(table);

    std::size_t inconclusive = 0;
    ordered_json jcerts = ordered_json::array();
    for (const auto& cert : certs) {
        if (cert.status == "Inconclusive") ++inconclusive;
        jcerts.push_back(milnor::certificate_to_json(cert));
    }
    report["certificates"] = std::move(jcerts);
    report["inconclusive_count"] = inconclusive;

    emit_report(report, cfg.output);
    std::ostringstream human;
    human << "analyze " << cfg.input << ": d=" << d << ", " << certs.size() << " orders";
    for (const auto& cert : certs)
        human << "; m=" << cert.m << " " << cert.status
              << (cert.theorem == "none" ? "" : " (" + cert.theorem + ")");
    std::cerr << human.str() << "\n";

    if (cfg.strict && inconclusive > 0) return kExitInconclusive;
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dim: eigenspace dimensions by one or several methods.
// ---------------------------------------------------------------------------

struct DimConfig {
    std::string input;
    std::string output;
    std::string presentation_out;
    std::vector<std::uint64_t> orders;
    std::string method = "monodromy";
    std::optional<std::size_t> removed;
    std::uint64_t seed = 0;
    bool lattice_only = false;
};

int cmd_dim(const DimConfig& cfg) {
    milnor::Arrangement arr = load_arrangement(cfg.input);
    const std::uint64_t d = arr.size();
    if (cfg.removed && *cfg.removed >= arr.size())
        throw BadInput("--removed index out of range");

    std::vector<std::uint64_t> orders = cfg.orders.empty() ? divisor_orders(d) : cfg.orders;
    for (std::uint64_t m : orders)
        if (m < 2) throw BadInput("--m values must be at least 2");

    const bool want_criteria = cfg.method == "criteria" || cfg.method == "all";
    const bool want_monodromy =
        cfg.method == "monodromy" || cfg.method == "both" || cfg.method == "all";
    const bool want_fox = cfg.method == "fox" || cfg.method == "both" || cfg.method == "all";

    // One presentation serves every order; it only depends on the diagram.
    std::optional<milnor::Presentation> pres;
    if (want_fox) {
        std::size_t removed = cfg.removed.value_or(arr.size() - 1);
        pres = milnor::presentation_from_diagram(diagram_for(arr, removed, cfg.seed));
        if (!cfg.presentation_out.empty())
            write_text(cfg.presentation_out, milnor::presentation_to_text(*pres));
    }

    milnor::MonodromyOptions mono_opts;
    mono_opts.seed = cfg.seed;
    mono_opts.removed = cfg.removed;

    ordered_json report = base_report("dim", cfg.seed);
    report["input"] = cfg.input;
    report["method"] = cfg.method;
    report["arrangement"] = arrangement_summary(arr);

    bool disagreement = false;
    ordered_json rows = ordered_json::array();
    std::ostringstream human;
    human << "dim " << cfg.input << " [" << cfg.method << "]";
    for (std::uint64_t m : orders) {
        ordered_json row;
        row["m"] = m;
        std::optional<std::size_t> mono_dim, fox_dim;
        if (want_monodromy) {
            mono_dim = milnor::milnor_dim(arr, m, mono_opts);
            row["monodromy"] = *mono_dim;
        }
        if (want_fox) {
            fox_dim = d % m == 0 ? milnor::fox_h1(*pres, m, d / m) : 0;
            row["fox"] = *fox_dim;
        }
        if (want_criteria) {
            auto cert = milnor::analyze_order(arr, m, cfg.lattice_only);
            row["criteria_status"] = cert.status;
            row["certificate"] = milnor::certificate_to_json(cert);
            if (cert.status == "Vanishes") {
                std::size_t computed = mono_dim ? *mono_dim : fox_dim.value_or(0);
                if (computed != 0) {
                    disagreement = true;
                    row["error"] = "certificate claims vanishing but the dimension is " +
                                   std::to_string(computed);
                }
            }
        }
        if (mono_dim && fox_dim && *mono_dim != *fox_dim) {
            disagreement = true;
            row["error"] = "monodromy and fox dimensions disagree";
        }
        std::size_t dim = mono_dim ? *mono_dim : fox_dim.value_or(0);
        if (want_monodromy || want_fox) row["dimension"] = dim;
        human << " m=" << m << ":";
        if (want_monodromy || want_fox)
            human << dim;
        else
            human << row["criteria_status"].get<std::string>();
        rows.push_back(std::move(row));
    }
    report["results"] = std::move(rows);
    report["agreement"] = !disagreement;

    emit_report(report, cfg.output);
    std::cerr << human.str() << (disagreement ? "  ** METHOD DISAGREEMENT **" : "") << "\n";
    return disagreement ? kExitDisagreement : kExitOk;
}

// ---------------------------------------------------------------------------
// generate: named families to arrangement files.
// ---------------------------------------------------------------------------

struct GenerateConfig {
    std::string family;
    std::string output;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> b, m, a, d;
};

int cmd_generate(const GenerateConfig& cfg) {
    std::vector<std::uint64_t> params;
    if (cfg.family == "hessian") {
        if (!cfg.b) throw BadInput("generate hessian requires --b");
        params = {*cfg.b};
    } else if (cfg.family == "remark26i") {
        if (!cfg.m || !cfg.a) throw BadInput("generate remark26i requires --m and --a");
        params = {*cfg.m, *cfg.a};
    } else if (cfg.family == "generic" || cfg.family == "random_real") {
        if (!cfg.d) throw BadInput("generate " + cfg.family + " requires --d");
        params = {*cfg.d};
    } else if (cfg.family != "remark26ii" && cfg.family != "remark26iii") {
        throw BadInput("unknown family: " + cfg.family);
    }

    milnor::Arrangement arr = [&] {
        try {
            return milnor::make_family(cfg.family, params, cfg.seed);
        } catch (const std::exception& e) {
            throw BadInput(e.what());
        }
    }();

    std::ostringstream text;
    text << "# family: " << cfg.family;
    for (std::uint64_t p : params) text << " " << p;
    text << " (seed " << cfg.seed << ")\n";
    milnor::write_arrangement(arr, text);
    write_text(cfg.output, text.str());
    std::cerr << "generate " << cfg.family << ": d=" << arr.size()
              << ", hash=" << milnor::arrangement_hash(arr) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// section: generic plane section of a higher-dimensional arrangement.
// ---------------------------------------------------------------------------

struct SectionConfig {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
};

int cmd_section(const SectionConfig& cfg) {
    milnor::Arrangement arr = load_arrangement(cfg.input);
    milnor::SectionResult result = [&] {
        try {
            return milnor::generic_section(arr, cfg.seed);
        } catch (const std::invalid_argument& e) {
            throw BadInput(e.what());
        }
    }();
    std::ostringstream text;
    text << "# plane section of " << cfg.input << " (seed " << cfg.seed << ")\n";
    milnor::write_arrangement(result.section, text);
    write_text(cfg.output, text.str());
    std::cerr << "section " << cfg.input << ": d=" << result.section.size() << ", "
              << result.flat_map.size() << " rank-2 flats preserved, hash="
              << milnor::arrangement_hash(result.section) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sum-roots: exact sums of roots of unity.
// ---------------------------------------------------------------------------

struct SumRootsConfig {
    std::string output;
    std::uint64_t m = 0;
    std::vector<std::int64_t> residues;
    std::uint64_t seed = 0;
};

int cmd_sum_roots(const SumRootsConfig& cfg) {
    milnor::CycloNum value = [&] {
        try {
            return milnor::sum_roots(cfg.m, cfg.residues);
        } catch (const std::exception& e) {
            throw BadInput(e.what());
        }
    }();
    ordered_json report = base_report("sum-roots", cfg.seed);
    report["m"] = cfg.m;
    report["residues"] = cfg.residues;
    report["value"] = value.to_string();
    report["is_zero"] = value.is_zero();
    report["nonvanishing_guaranteed_for_size"] =
        milnor::nonvanishing_guaranteed(cfg.m, cfg.residues.size());
    emit_report(report, cfg.output);
    std::cerr << "sum-roots m=" << cfg.m << ": " << value.to_string()
              << (value.is_zero() ? " (zero)" : " (nonzero)") << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify-cert: replay a stored certificate against an arrangement.
// ---------------------------------------------------------------------------

struct VerifyConfig {
    std::string input;
    std::string cert_path;
    std::string output;
    std::uint64_t seed = 0;
};

int cmd_verify_cert(const VerifyConfig& cfg) {
    milnor::Arrangement arr = load_arrangement(cfg.input);
    std::ifstream in(cfg.cert_path);
    if (!in) throw BadInput(cfg.cert_path + ": cannot open for reading");

    // Accept a bare certificate object, a JSON array of certificates, or a
    // full analyze report (replaying every certificate it contains).
    std::vector<milnor::Certificate> certs;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        const nlohmann::json* list = nullptr;
        if (doc.is_object() && doc.contains("certificates")) list = &doc["certificates"];
        else if (doc.is_array()) list = &doc;
        if (list) {
            for (const auto& entry : *list) certs.push_back(milnor::certificate_from_json(entry));
        } else {
            certs.push_back(milnor::certificate_from_json(doc));
        }
    } catch (const std::exception& e) {
        throw BadInput(cfg.cert_path + ": " + e.what());
    }
    if (certs.empty()) throw BadInput(cfg.cert_path + ": no certificates found");

    bool all_ok = true;
    ordered_json results = ordered_json::array();
    for (const auto& cert : certs) {
        bool ok = [&] {
            try {
                return milnor::verify_certificate(arr, cert);
            } catch (const std::invalid_argument& e) {
                throw BadInput(e.what());  // issued for a different arrangement
            }
        }();
        all_ok = all_ok && ok;
        ordered_json row;
        row["m"] = cert.m;
        row["status"] = cert.status;
        row["theorem"] = cert.theorem;
        row["verified"] = ok;
        results.push_back(std::move(row));
    }

    ordered_json report = base_report("verify-cert", cfg.seed);
    report["input"] = cfg.input;
    report["certificate_path"] = cfg.cert_path;
    report["arrangement"] = arrangement_summary(arr);
    report["certificate_count"] = certs.size();
    report["results"] = std::move(results);
    report["verified"] = all_ok;
    emit_report(report, cfg.output);
    std::cerr << "verify-cert " << cfg.cert_path << ": " << certs.size()
              << " certificate(s) " << (all_ok ? "verified" : "FAILED REPLAY") << "\n";
    return all_ok ? kExitOk : kExitDisagreement;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Milnor fiber monodromy eigenspaces of line arrangements"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    AnalyzeConfig analyze_cfg;
    auto* analyze = app.add_subcommand("analyze", "Run the vanishing checkers per order");
    analyze->add_option("input", analyze_cfg.input, "arrangement file")->required();
    analyze->add_option("--m", analyze_cfg.orders, "orders to analyze (default: all, plus small non-divisors)");
    analyze->add_option("-o,--output", analyze_cfg.output, "write the JSON report here");
    analyze->add_option("--seed", analyze_cfg.seed, "seed recorded in the report");
    analyze->add_flag("--lattice-only", analyze_cfg.lattice_only,
                      "accept non-planar input, use rank-2 lattice data as is");
    analyze->add_flag("--strict", analyze_cfg.strict, "exit 3 if any order is inconclusive");

    DimConfig dim_cfg;
    auto* dim = app.add_subcommand("dim", "Compute eigenspace dimensions");
    dim->add_option("input", dim_cfg.input, "arrangement file")->required();
    dim->add_option("--m", dim_cfg.orders, "eigenvalue orders (default: all divisors of d)");
    dim->add_option("--method", dim_cfg.method, "criteria, monodromy, fox, both, or all")
        ->check(CLI::IsMember({"criteria", "monodromy", "fox", "both", "all"}));
    std::int64_t removed_flag = -1;
    dim->add_option("--removed", removed_flag, "projection line index, 0-based (default: last)");
    dim->add_option("--seed", dim_cfg.seed, "seed for projection center search");
    dim->add_option("-o,--output", dim_cfg.output, "write the JSON report here");
    dim->add_option("--presentation", dim_cfg.presentation_out,
                    "also dump the group presentation used by the fox method");
    dim->add_flag("--lattice-only", dim_cfg.lattice_only,
                  "pass non-planar input to the criteria method as is");

    GenerateConfig gen_cfg;
    auto* gen = app.add_subcommand("generate", "Produce an arrangement file for a named family");
    gen->add_option("family", gen_cfg.family,
                    "hessian, remark26i, remark26ii, remark26iii, generic, or random_real")
        ->required();
    std::int64_t b_flag = -1, m_flag = -1, a_flag = -1, d_flag = -1;
    gen->add_option("--b", b_flag, "hessian: pencil parameter (d = b*b + 3)");
    gen->add_option("--m", m_flag, "remark26i: point multiplicity on the base lines");
    gen->add_option("--a", a_flag, "remark26i: groups of points per base line");
    gen->add_option("--d", d_flag, "generic/random_real: number of lines");
    gen->add_option("--seed", gen_cfg.seed, "seed for randomized families");
    gen->add_option("-o,--output", gen_cfg.output, "write the arrangement here (default stdout)");

    SectionConfig sec_cfg;
    auto* sec = app.add_subcommand("section", "Cut a generic plane section, preserving the lattice");
    sec->add_option("input", sec_cfg.input, "arrangement file with ambient_dim > 3")->required();
    sec->add_option("--seed", sec_cfg.seed, "seed for the random section plane");
    sec->add_option("-o,--output", sec_cfg.output, "write the section here (default stdout)");

    SumRootsConfig sum_cfg;
    auto* sum = app.add_subcommand("sum-roots", "Exact sum of m-th roots of unity");
    sum->add_option("--m", sum_cfg.m, "root order")->required();
    sum->add_option("--j", sum_cfg.residues, "exponent residues (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    sum->add_option("-o,--output", sum_cfg.output, "write the JSON report here");

    VerifyConfig ver_cfg;
    auto* ver = app.add_subcommand("verify-cert", "Replay a certificate against an arrangement");
    ver->add_option("input", ver_cfg.input, "arrangement file")->required();
    ver->add_option("certificate", ver_cfg.cert_path, "certificate JSON file")->required();
    ver->add_option("-o,--output", ver_cfg.output, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_cfg);
        if (*dim) {
            if (removed_flag >= 0) dim_cfg.removed = static_cast<std::size_t>(removed_flag);
            return cmd_dim(dim_cfg);
        }
        if (*gen) {
            if (b_flag >= 0) gen_cfg.b = static_cast<std::uint64_t>(b_flag);
            if (m_flag >= 0) gen_cfg.m = static_cast<std::uint64_t>(m_flag);
            if (a_flag >= 0) gen_cfg.a = static_cast<std::uint64_t>(a_flag);
            if (d_flag >= 0) gen_cfg.d = static_cast<std::uint64_t>(d_flag);
            return cmd_generate(gen_cfg);
        }
        if (*sec) return cmd_section(sec_cfg);
        if (*sum) return cmd_sum_roots(sum_cfg);
        if (*ver) return cmd_verify_cert(ver_cfg);
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitOk;
}
