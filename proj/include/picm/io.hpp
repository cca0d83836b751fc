#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "picm/atoms.hpp"
#include "picm/cdf.hpp"
#include "picm/maps.hpp"
#include "picm/singular.hpp"

// JSON forms of the exchange types. Every top-level document carries a
// versioned "schema" field; rationals travel as "num/den" strings.

namespace picm {

nlohmann::json cdf_to_json(const Cdf& cdf);
Cdf cdf_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const AtomicMeasure& m);
AtomicMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json coefficients_to_json(const JumpCoefficients& c);
JumpCoefficients coefficients_from_json(const nlohmann::json& j);

nlohmann::json map_to_json(const PiecewiseMap& m);
PiecewiseMap map_from_json(const nlohmann::json& j);

nlohmann::json parts_to_json(const PartsReport& r);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace picm
