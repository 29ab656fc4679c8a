#pragma once

#include <string>

#include <json.hpp>

#include "spectra/aem.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/simulator.hpp"

namespace spectra {

/// Writes through a temporary sibling file and renames it into place.
/// An empty path or "-" writes to stdout.
void write_output(const std::string& path, const std::string& content);

/// Shortest round-trip decimal form; "nan" for NaN.
std::string format_number(double v);

std::string to_csv(const MomentSequence& m);
std::string to_csv(const FreeCumulantSequence& c);
std::string to_csv(const Histogram& h);
std::string to_csv(const TrialReport& report);
std::string to_csv(const QuadratureRule& rule);

nlohmann::json to_json(const MomentSequence& m);
nlohmann::json to_json(const FreeCumulantSequence& c);
nlohmann::json to_json(const SystemConfig& config);
nlohmann::json to_json(const TrialReport& report);
nlohmann::json to_json(const QuadratureRule& rule);

}  // namespace spectra
