// picm: exact invariant measures of the p-adic map S_p(x) = p x mod 1,
// computed through their distribution functions.
//
// Exit codes: 0 success, 2 mathematical verification failure, 1 usage or
// resource error.

#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "picm/atoms.hpp"
#include "picm/cycles.hpp"
#include "picm/io.hpp"
#include "picm/maps.hpp"
#include "picm/sampling.hpp"
#include "picm/singular.hpp"
#include "picm/transfer.hpp"

using namespace picm;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerificationFailed = 2;

// ---- built-in phi registry -------------------------------------------------

std::vector<Rat> parse_weights(const std::string& csv) {
    std::vector<Rat> weights;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) weights.push_back(rat_from_string(item));
    return weights;
}

Cdf make_phi(const std::string& spec, int p) {
    if (spec == "identity") return Cdf::identity();
    if (spec == "square") return Cdf::poly({Rat(0), Rat(0), Rat(1)});
    if (spec == "cubic") return Cdf::poly({Rat(0), Rat(1, 2), Rat(0), Rat(1, 2)});
    if (spec == "ramp")
        return Cdf::piecewise_linear({{Rat01::from_string("0/1"), Rat(0)},
                                      {Rat01::from_string("1/5"), Rat(1, 10)},
                                      {Rat01::from_string("1/2"), Rat(1, 2)},
                                      {Rat01::from_string("4/5"), Rat(9, 10)},
                                      {Rat01::from_string("1/1"), Rat(1)}});
    if (spec.rfind("jump:", 0) == 0) {
        const auto rest = spec.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--phi", "expected jump:<level>:<label>");
        const std::uint64_t level = std::stoull(rest.substr(0, colon));
        const BigInt label(rest.substr(colon + 1));
        return jump_from_cycle(cycle_from_label(p, level, label));
    }
    if (spec.rfind("bernoulli:", 0) == 0) {
        auto weights = parse_weights(spec.substr(10));
        const int p = static_cast<int>(weights.size());
        return Cdf::bernoulli(p, std::move(weights));
    }
    if (spec.rfind("json:", 0) == 0) return cdf_from_json(load_json_file(spec.substr(5)));
    throw CLI::ValidationError(
        "--phi", "unknown CDF '" + spec +
                     "' (try identity | square | cubic | ramp | jump:m:l | "
                     "bernoulli:w0,w1,... | json:<path>)");
}

// ---- output plumbing -------------------------------------------------------

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

std::string value_cell(const EvalValue& v) {
    return v.exact ? rat_to_string(v.value) : double_to_string(rat_to_double(v.value));
}

std::string rat_cell(const Rat& r, bool exact) {
    return exact ? rat_to_string(r) : double_to_string(rat_to_double(r));
}

// ---- subcommand bodies -----------------------------------------------------

struct CommonOpts {
    int p = 2;
    std::string out;
    std::uint64_t budget = 0;  // 0 = PICM_BUDGET or built-in default
};

std::uint64_t effective_budget(const CommonOpts& c) {
    return c.budget != 0 ? c.budget : default_term_budget();
}

int run_cycles(const CommonOpts& c, std::uint64_t level, std::uint64_t max_level,
               const std::string& format) {
    std::vector<CycleSet> cycles;
    const std::uint64_t lo = level != 0 ? level : 1;
    const std::uint64_t hi = level != 0 ? level : max_level;
    for (std::uint64_t m = lo; m <= hi; ++m)
        for (auto& cyc : enumerate_levels(c.p, m, effective_budget(c)))
            cycles.push_back(std::move(cyc));

    std::ostringstream os;
    if (format == "json") {
        json arr = json::array();
        for (const auto& cyc : cycles) {
            json points = json::array();
            for (const auto& pt : cyc.points) points.push_back(pt.str());
            arr.push_back(json{{"level", cyc.level}, {"label", cyc.label.str()},
                               {"points", points}});
        }
        os << json{{"schema", "picm.cycles/1"}, {"p", c.p}, {"cycles", arr}}.dump(2) << '\n';
    } else {
        os << "level,label,point_index,point\n";
        for (const auto& cyc : cycles)
            for (size_t i = 0; i < cyc.points.size(); ++i)
                os << cyc.level << ',' << cyc.label.str() << ',' << i << ','
                   << cyc.points[i].str() << '\n';
    }
    emit(os.str(), c.out);
    return kExitOk;
}

int run_fixed_points(const CommonOpts& c, const std::string& format) {
    const auto points = dirac_fixed_points(c.p);
    std::ostringstream os;
    if (format == "json") {
        json arr = json::array();
        for (const auto& pt : points) arr.push_back(pt.str());
        os << json{{"schema", "picm.fixed_points/1"}, {"p", c.p}, {"points", arr}}.dump(2)
           << '\n';
    } else {
        os << "k,point,invariant\n";
        const PadicMap map(c.p);
        for (size_t k = 0; k < points.size(); ++k)
            os << k << ',' << points[k].str() << ','
               << (dirac_invariant(map, points[k]) ? "true" : "false") << '\n';
    }
    emit(os.str(), c.out);
    return kExitOk;
}

int run_jump(const CommonOpts& c, const std::string& coeffs_path, const std::string& format) {
    JumpCoefficients coeffs = coefficients_from_json(load_json_file(coeffs_path));
    if (coeffs.p == 0) coeffs.p = c.p;
    const Cdf cdf = synthesize_jump(coeffs);
    std::ostringstream os;
    if (format == "json") {
        os << cdf_to_json(cdf).dump(2) << '\n';
    } else {
        os << "location,mass\n";
        for (const auto& atom : cdf.as_jump().atoms)
            os << atom.location.str() << ',' << rat_to_string(atom.mass) << '\n';
    }
    emit(os.str(), c.out);
    return kExitOk;
}

int run_decompose(const CommonOpts& c, const std::string& atoms_path) {
    const AtomicMeasure measure = measure_from_json(load_json_file(atoms_path));
    const JumpCoefficients coeffs = decompose_jump(c.p, cdf_from_measure(measure));
    std::ostringstream os;
    os << coefficients_to_json(coeffs).dump(2) << '\n';
    emit(os.str(), c.out);
    return kExitOk;
}

int run_verify(const CommonOpts& c, const std::string& phi_spec, std::uint64_t n_points,
               std::uint64_t max_den, std::uint64_t seed, const std::string& tol,
               unsigned digits) {
    const Cdf phi = make_phi(phi_spec, c.p);
    Rng rng(seed);
    const auto points = random_points(rng, n_points, max_den);
    EvalOptions eo;
    eo.bernoulli_digits = digits;
    const ResidualReport report = verify_invariance(c.p, phi, points, rat_from_string(tol), eo);

    std::ostringstream os;
    os << "point,residual\n";
    for (size_t i = 0; i < report.points.size(); ++i)
        os << report.points[i].str() << ','
           << rat_cell(report.residuals[i], report.exact) << '\n';
    emit(os.str(), c.out);

    std::cout << (report.pass ? "pass" : "FAIL") << ": " << n_points
              << " points, max residual "
              << rat_cell(report.max_residual, report.exact)
              << (report.exact ? " (exact)" : " (approximate)") << '\n';
    return report.pass ? kExitOk : kExitVerificationFailed;
}

int run_iterate(const CommonOpts& c, const std::string& phi_spec, std::uint64_t m,
                std::uint64_t grid_n, bool profile, std::uint64_t window_lo,
                std::uint64_t window_hi, unsigned digits) {
    const Cdf phi = make_phi(phi_spec, c.p);
    const auto grid = uniform_grid(grid_n);
    TransferOptions topts;
    topts.term_budget = c.budget;
    topts.bernoulli_digits = digits;

    std::ostringstream os;
    if (window_lo != 0 || window_hi != 0) {
        if (window_lo == 0 || window_hi < window_lo)
            throw CLI::ValidationError("--window-lo/--window-hi",
                                       "need 1 <= lo <= hi for the Cesaro window");
        // proxy rows: values are windowed Cesaro means, not single powers
        os << "m_lo,m_hi,x,value,abs_err\n";
        for (const auto& x : grid) {
            const EvalValue v = cesaro_proxy(c.p, phi, x, window_lo, window_hi, topts);
            Rat err = v.value - x.value();
            if (err < 0) err = -err;
            os << window_lo << ',' << window_hi << ',' << x.str() << ',' << value_cell(v)
               << ',' << rat_cell(err, v.exact) << '\n';
        }
        emit(os.str(), c.out);
        std::cout << "proxy: windowed Cesaro mean over m in [" << window_lo << ","
                  << window_hi << "]\n";
        return kExitOk;
    }

    os << "m,x,value,abs_err\n";
    const std::uint64_t m_first = profile ? 1 : m;
    for (std::uint64_t mm = m_first; mm <= m; ++mm) {
        for (const auto& x : grid) {
            const EvalValue v = transfer_power_padic(c.p, phi, mm, x, topts);
            Rat err = v.value - x.value();
            if (err < 0) err = -err;
            os << mm << ',' << x.str() << ',' << value_cell(v) << ','
               << rat_cell(err, v.exact) << '\n';
        }
    }
    emit(os.str(), c.out);
    return kExitOk;
}

int run_table(const CommonOpts& c, const std::string& phi_spec, std::uint64_t grid_n,
              unsigned digits) {
    const Cdf phi = make_phi(phi_spec, c.p);
    EvalOptions eo;
    eo.bernoulli_digits = digits;
    std::ostringstream os;
    os << "x,value,exact\n";
    for (const auto& x : uniform_grid(grid_n)) {
        const EvalValue v = eval(phi, x, eo);
        os << x.str() << ',' << value_cell(v) << ',' << (v.exact ? "true" : "false") << '\n';
    }
    emit(os.str(), c.out);
    return kExitOk;
}

int run_bernoulli(const CommonOpts& c, const std::string& weights_csv, unsigned digits,
                  std::uint64_t grid_n) {
    auto weights = parse_weights(weights_csv);
    const int wp = static_cast<int>(weights.size());
    const BernoulliWeights bw = BernoulliWeights::make(wp, std::move(weights));
    std::ostringstream os;
    os << "x,value,exact\n";
    for (const auto& x : uniform_grid(grid_n)) {
        const EvalValue v = bernoulli_eval(bw, x, digits);
        os << x.str() << ',' << value_cell(v) << ',' << (v.exact ? "true" : "false") << '\n';
    }
    emit(os.str(), c.out);
    return kExitOk;
}

int run_extract(const CommonOpts& c, const std::string& phi_spec, std::uint64_t max_level,
                std::uint64_t grid_n, unsigned scale, unsigned digits) {
    const Cdf phi = make_phi(phi_spec, c.p);
    ExtractOptions opts;
    opts.quotient_scale = scale;
    opts.bernoulli_digits = digits;
    opts.level_budget = c.budget;
    const PartsReport parts = extract_parts(c.p, phi, max_level, grid_n, opts);
    std::ostringstream os;
    os << parts_to_json(parts).dump(2) << '\n';
    emit(os.str(), c.out);
    return parts.decomposition_ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariant measures of the p-adic map, via distribution functions"};
    app.require_subcommand(1);

    CommonOpts common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", common.p, "modulus of the map S_p")->check(CLI::Range(2, 1000));
        sub->add_option("--out", common.out, "write the main artifact to this file");
        sub->add_option("--budget", common.budget,
                        "term budget for literal summations (overrides PICM_BUDGET)");
    };

    // cycles
    std::uint64_t level = 0, max_level = 1;
    std::string format = "csv";
    auto* cycles_cmd = app.add_subcommand("cycles", "enumerate discontinuity cycles by level");
    add_common(cycles_cmd);
    cycles_cmd->add_option("--level", level, "exact level to enumerate");
    cycles_cmd->add_option("--max-level", max_level, "enumerate all levels up to this");
    cycles_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // fixed-points
    auto* fixed_cmd = app.add_subcommand("fixed-points", "Dirac fixed points k/(p-1)");
    add_common(fixed_cmd);
    fixed_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // jump
    std::string coeffs_path;
    auto* jump_cmd =
        app.add_subcommand("jump", "synthesize a jump CDF from coefficient JSON");
    add_common(jump_cmd);
    jump_cmd->add_option("--coeffs", coeffs_path, "coefficients JSON file")->required();
    jump_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    // decompose
    std::string atoms_path;
    auto* dec_cmd =
        app.add_subcommand("decompose", "decompose an atomic measure into cycle coefficients");
    add_common(dec_cmd);
    dec_cmd->add_option("--atoms", atoms_path, "atomic measure JSON file")->required();

    // verify
    std::string phi_spec = "identity", tol = "0";
    std::uint64_t n_points = 1000, max_den = 10000, seed = 1;
    unsigned digits = 64;
    auto* verify_cmd =
        app.add_subcommand("verify", "check the invariance equation at random points");
    add_common(verify_cmd);
    verify_cmd->add_option("--phi", phi_spec, "CDF under test (see --help-all)")->required();
    verify_cmd->add_option("--points", n_points, "number of sample points");
    verify_cmd->add_option("--max-den", max_den, "denominator bound for sample points");
    verify_cmd->add_option("--seed", seed, "RNG seed");
    verify_cmd->add_option("--tol", tol, "residual tolerance, rational or decimal");
    verify_cmd->add_option("--digits", digits, "Bernoulli evaluation depth");

    // iterate
    std::uint64_t m = 1, grid_n = 101, window_lo = 0, window_hi = 0;
    bool profile = false;
    std::string csv_out;
    auto* iter_cmd = app.add_subcommand("iterate", "transfer powers T^m phi on a grid");
    add_common(iter_cmd);
    iter_cmd->add_option("--phi", phi_spec)->required();
    iter_cmd->add_option("--m", m, "power of the operator");
    iter_cmd->add_option("--grid", grid_n, "number of grid points");
    iter_cmd->add_flag("--profile", profile, "emit every power 1..m");
    iter_cmd->add_option("--window-lo", window_lo, "Cesaro window start (proxy mode)");
    iter_cmd->add_option("--window-hi", window_hi, "Cesaro window end (proxy mode)");
    iter_cmd->add_option("--digits", digits, "Bernoulli evaluation depth");
    iter_cmd->add_option("--csv", csv_out, "write the CSV to this file");

    // table
    auto* table_cmd = app.add_subcommand("table", "tabulate a CDF as (x, value) rows");
    add_common(table_cmd);
    table_cmd->add_option("--phi", phi_spec)->required();
    table_cmd->add_option("--grid", grid_n, "number of grid points");
    table_cmd->add_option("--digits", digits, "Bernoulli evaluation depth");

    // bernoulli
    std::string weights_csv;
    auto* bern_cmd = app.add_subcommand("bernoulli", "tabulate a Bernoulli digit CDF");
    add_common(bern_cmd);
    bern_cmd->add_option("--weights", weights_csv, "comma-separated digit weights")->required();
    bern_cmd->add_option("--digits", digits, "digit truncation depth");
    bern_cmd->add_option("--grid", grid_n, "number of grid points");
    bern_cmd->add_option("--csv", csv_out, "write the CSV to this file");

    // extract
    std::uint64_t ext_max_level = 8, ext_grid = 512;
    unsigned scale = 60;
    auto* ext_cmd =
        app.add_subcommand("extract", "split a CDF into identity, jump and singular parts");
    add_common(ext_cmd);
    ext_cmd->add_option("--phi", phi_spec)->required();
    ext_cmd->add_option("--max-level", ext_max_level, "scan cycles up to this level");
    ext_cmd->add_option("--grid", ext_grid, "probe and report grid size");
    ext_cmd->add_option("--scale", scale, "difference-quotient step is p^-scale");
    ext_cmd->add_option("--digits", digits, "Bernoulli evaluation depth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cycles_cmd->parsed()) {
            if (level == 0 && cycles_cmd->count("--max-level") == 0)
                throw CLI::ValidationError("cycles", "need --level or --max-level");
            return run_cycles(common, level, max_level, format);
        }
        if (fixed_cmd->parsed()) return run_fixed_points(common, format);
        if (jump_cmd->parsed()) return run_jump(common, coeffs_path, format);
        if (dec_cmd->parsed()) return run_decompose(common, atoms_path);
        if (verify_cmd->parsed())
            return run_verify(common, phi_spec, n_points, max_den, seed, tol, digits);
        if (iter_cmd->parsed()) {
            if (!csv_out.empty()) common.out = csv_out;
            return run_iterate(common, phi_spec, m, grid_n, profile, window_lo, window_hi,
                               digits);
        }
        if (table_cmd->parsed()) return run_table(common, phi_spec, grid_n, digits);
        if (bern_cmd->parsed()) {
            if (!csv_out.empty()) common.out = csv_out;
            return run_bernoulli(common, weights_csv, digits, grid_n);
        }
        if (ext_cmd->parsed())
            return run_extract(common, phi_spec, ext_max_level, ext_grid, scale, digits);
    } catch (const not_invariant_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerificationFailed;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
