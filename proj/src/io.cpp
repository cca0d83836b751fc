#include "picm/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace picm {

using nlohmann::json;

namespace {

constexpr const char* kCdfSchema = "picm.cdf/1";
constexpr const char* kMeasureSchema = "picm.measure/1";
constexpr const char* kCoefficientsSchema = "picm.jump_coefficients/1";
constexpr const char* kMapSchema = "picm.map/1";
constexpr const char* kPartsSchema = "picm.parts/1";

json rat_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long long>(j.get<long long>()));
    if (!j.is_string()) throw validation_error("expected a rational as \"num/den\"");
    return rat_from_string(j.get<std::string>());
}

Rat01 rat01_from_json(const json& j) { return Rat01::from_rat(rat_from_json(j)); }

json cdf_body(const Cdf& cdf) {
    switch (cdf.kind()) {
        case Cdf::Kind::identity:
            return json{{"type", "identity"}};
        case Cdf::Kind::poly: {
            json coeffs = json::array();
            for (const auto& c : cdf.as_poly().coeffs) coeffs.push_back(rat_json(c));
            return json{{"type", "poly"}, {"coeffs", coeffs}};
        }
        case Cdf::Kind::piecewise_linear: {
            json knots = json::array();
            for (const auto& k : cdf.as_piecewise_linear().knots)
                knots.push_back(json::array({k.x.str(), rat_json(k.value)}));
            return json{{"type", "piecewise_linear"}, {"knots", knots}};
        }
        case Cdf::Kind::jump: {
            json atoms = json::array();
            for (const auto& a : cdf.as_jump().atoms)
                atoms.push_back(json::array({a.location.str(), rat_json(a.mass)}));
            return json{{"type", "jump"}, {"atoms", atoms}};
        }
        case Cdf::Kind::bernoulli: {
            json weights = json::array();
            for (const auto& w : cdf.as_bernoulli().weights) weights.push_back(rat_json(w));
            return json{{"type", "bernoulli"},
                        {"p", cdf.as_bernoulli().weights.size()},
                        {"weights", weights}};
        }
        case Cdf::Kind::mixture: {
            json parts = json::array();
            for (const auto& [w, part] : cdf.as_mixture().parts)
                parts.push_back(json::array({rat_json(w), cdf_body(part)}));
            return json{{"type", "mixture"}, {"components", parts}};
        }
        case Cdf::Kind::sampled: {
            json grid = json::array();
            for (const auto& gp : cdf.as_sampled().grid)
                grid.push_back(json::array({gp.x.str(), rat_json(gp.value)}));
            return json{{"type", "sampled"}, {"grid", grid}};
        }
    }
    throw std::logic_error("unreachable CDF kind");
}

Cdf cdf_from_body(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "identity") return Cdf::identity();
    if (type == "poly") {
        std::vector<Rat> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(rat_from_json(c));
        return Cdf::poly(std::move(coeffs));
    }
    if (type == "piecewise_linear") {
        std::vector<GridPoint> knots;
        for (const auto& k : j.at("knots"))
            knots.push_back({rat01_from_json(k.at(0)), rat_from_json(k.at(1))});
        return Cdf::piecewise_linear(std::move(knots));
    }
    if (type == "jump") {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms"))
            atoms.push_back({rat01_from_json(a.at(0)), rat_from_json(a.at(1))});
        return Cdf::jump(std::move(atoms));
    }
    if (type == "bernoulli") {
        std::vector<Rat> weights;
        for (const auto& w : j.at("weights")) weights.push_back(rat_from_json(w));
        const int p = static_cast<int>(weights.size());
        return Cdf::bernoulli(p, std::move(weights));
    }
    if (type == "mixture") {
        std::vector<std::pair<Rat, Cdf>> parts;
        for (const auto& c : j.at("components"))
            parts.emplace_back(rat_from_json(c.at(0)), cdf_from_body(c.at(1)));
        return Cdf::mixture(std::move(parts));
    }
    if (type == "sampled") {
        std::vector<GridPoint> grid;
        for (const auto& gp : j.at("grid"))
            grid.push_back({rat01_from_json(gp.at(0)), rat_from_json(gp.at(1))});
        return Cdf::sampled(std::move(grid));
    }
    throw validation_error("unknown CDF type '" + type + "'");
}

}  // namespace

json cdf_to_json(const Cdf& cdf) {
    json j = cdf_body(cdf);
    j["schema"] = kCdfSchema;
    return j;
}

Cdf cdf_from_json(const json& j) { return cdf_from_body(j); }

json measure_to_json(const AtomicMeasure& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms)
        atoms.push_back(json::array({a.location.str(), rat_json(a.mass)}));
    return json{{"schema", kMeasureSchema}, {"atoms", atoms}};
}

AtomicMeasure measure_from_json(const json& j) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({rat01_from_json(a.at(0)), rat_from_json(a.at(1))});
    return AtomicMeasure::from_atoms(std::move(atoms));
}

json coefficients_to_json(const JumpCoefficients& c) {
    json entries = json::array();
    for (const auto& [key, alpha] : c.entries) {
        entries.push_back(json{{"level", key.first},
                               {"label", key.second.str()},
                               {"alpha", rat_json(alpha)}});
    }
    return json{{"schema", kCoefficientsSchema}, {"p", c.p}, {"entries", entries}};
}

JumpCoefficients coefficients_from_json(const json& j) {
    JumpCoefficients out;
    out.p = j.at("p").get<int>();
    for (const auto& e : j.at("entries")) {
        const std::uint64_t level = e.at("level").get<std::uint64_t>();
        const json& lbl = e.at("label");
        const BigInt label = lbl.is_string() ? bigint_from_decimal(lbl.get<std::string>())
                                             : BigInt(lbl.get<long long>());
        out.entries[{level, label}] = rat_from_json(e.at("alpha"));
    }
    return out;
}

json map_to_json(const PiecewiseMap& m) {
    json breakpoints = json::array();
    for (const auto& b : m.breakpoints()) breakpoints.push_back(b.str());
    json branches = json::array();
    for (int k = 1; k <= m.branch_count(); ++k)
        branches.push_back(json{{"slope", rat_json(m.slope(k))},
                                {"intercept", rat_json(m.intercept(k))}});
    return json{{"schema", kMapSchema}, {"breakpoints", breakpoints}, {"branches", branches}};
}

PiecewiseMap map_from_json(const json& j) {
    std::vector<Rat01> breakpoints;
    for (const auto& b : j.at("breakpoints")) breakpoints.push_back(rat01_from_json(b));
    PiecewiseMap map = PiecewiseMap::from_breakpoints(std::move(breakpoints));
    if (j.contains("branches")) {
        const auto& branches = j.at("branches");
        if (static_cast<int>(branches.size()) != map.branch_count())
            throw validation_error("branch count does not match breakpoints");
        for (int k = 1; k <= map.branch_count(); ++k) {
            if (rat_from_json(branches[k - 1].at("slope")) != map.slope(k) ||
                rat_from_json(branches[k - 1].at("intercept")) != map.intercept(k))
                throw validation_error("branch " + std::to_string(k) +
                                       " is not the affine bijection of its interval");
        }
    }
    return map;
}

json parts_to_json(const PartsReport& r) {
    json grid = json::array();
    for (const auto& [x, v] : r.residual_grid)
        grid.push_back(json::array({x.str(), v}));
    return json{{"schema", kPartsSchema},
                {"ac_slope", r.ac_slope},
                {"jump", coefficients_to_json(r.jump)},
                {"singular_mass", r.singular_mass},
                {"mass_balance", r.mass_balance},
                {"decomposition_ok", r.decomposition_ok},
                {"min_remainder", r.min_remainder},
                {"residual_grid", grid}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open " + path + " for writing");
    out << content;
}

}  // namespace picm
