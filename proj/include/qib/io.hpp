#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qib/fisher.hpp"

namespace qib::io {

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest-of-17-significant-digits rendering ("%.17g"), C locale.
std::string format_double(double value);

/// nlohmann dump with every number rendered by format_double, so files
/// round-trip doubles exactly and rewrites are byte-identical.
std::string dump_json(const nlohmann::json& value, int indent = 2);

nlohmann::json to_json(const Generator& gen);
nlohmann::json to_json(const ProbeState& state);
nlohmann::json to_json(const MeasurementBasis& basis);
nlohmann::json to_json(const SaturationReport& report);

Generator generator_from_json(const nlohmann::json& value);
ProbeState state_from_json(const nlohmann::json& value);
MeasurementBasis basis_from_json(const nlohmann::json& value);

/// Parse a JSON file, mapping parse failures to input_error with the file
/// name and byte position.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// CSV with the fixed header epsilon,cfi,qfi,im_residual,lambda_imag_max,
/// '.' decimal separator, LF line endings.
std::string to_csv(const SaturationReport& report);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace qib::io
