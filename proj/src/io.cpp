#include "qib/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qib::io {

namespace {

using nlohmann::json;

const json& require_field(const json& value, const char* key, const char* context) {
  if (!value.is_object() || !value.contains(key)) {
    throw input_error(std::string(context) + ": missing field \"" + key + "\"");
  }
  return value.at(key);
}

double number_at(const json& value, const char* context) {
  if (!value.is_number()) {
    throw input_error(std::string(context) + ": expected a number, got " +
                      std::string(value.type_name()));
  }
  return value.get<double>();
}

Complex complex_at(const json& value, const char* context) {
  if (!value.is_array() || value.size() != 2) {
    throw input_error(std::string(context) + ": expected a [re, im] pair");
  }
  return {number_at(value[0], context), number_at(value[1], context)};
}

void dump_impl(const json& value, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string padIn(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += padIn + json(it.key()).dump() + ": ";
        dump_impl(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out += ",\n";
        out += padIn;
        dump_impl(value[i], out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string dump_json(const json& value, int indent) {
  std::string out;
  dump_impl(value, out, indent, 0);
  out += "\n";
  return out;
}

json to_json(const Generator& gen) {
  json eig = json::array();
  for (double a : gen.eigenvalues()) eig.push_back(a);
  json labels = json::array();
  for (long k : gen.labels()) labels.push_back(k);
  return json{{"eigenvalues", eig}, {"labels", labels}};
}

json to_json(const ProbeState& state) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    const Complex c = state.amplitudes()[i];
    amps.push_back(json::array({c.real(), c.imag()}));
  }
  return json{{"amplitudes", amps}};
}

json to_json(const MeasurementBasis& basis) {
  json rows = json::array();
  for (int j = 0; j < basis.dim(); ++j) {
    json row = json::array();
    for (int l = 0; l < basis.dim(); ++l) {
      const Complex c = basis.coefficients()(j, l);
      row.push_back(json::array({c.real(), c.imag()}));
    }
    rows.push_back(std::move(row));
  }
  return json{{"rows", rows}};
}

json to_json(const SaturationReport& report) {
  json points = json::array();
  for (Eigen::Index i = 0; i < report.epsilons.size(); ++i) {
    points.push_back(json{{"epsilon", report.epsilons[i]},
                          {"cfi", report.cfi[i]},
                          {"im_residual", report.imResidual[i]},
                          {"lambda_imag_max", report.lambdaImagMax[i]},
                          {"flagged", static_cast<bool>(report.flagged[i])}});
  }
  return json{{"qfi", report.qfi},
              {"saturated", report.saturated},
              {"max_relative_gap", report.maxRelativeGap()},
              {"points", points}};
}

Generator generator_from_json(const json& value) {
  const json& eig = require_field(value, "eigenvalues", "generator");
  if (!eig.is_array() || eig.size() < 2) {
    throw input_error("generator: \"eigenvalues\" must be an array of >= 2 numbers");
  }
  RealVector eigenvalues(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) {
    eigenvalues[static_cast<Eigen::Index>(i)] = number_at(eig[i], "generator.eigenvalues");
  }
  std::vector<long> labels;
  if (value.contains("labels")) {
    for (const auto& k : value.at("labels")) {
      if (!k.is_number_integer()) throw input_error("generator.labels: expected integers");
      labels.push_back(k.get<long>());
    }
  }
  try {
    return Generator(std::move(eigenvalues), std::move(labels));
  } catch (const std::exception& e) {
    throw input_error(std::string("generator: ") + e.what());
  }
}

ProbeState state_from_json(const json& value) {
  const json& amps = require_field(value, "amplitudes", "state");
  if (!amps.is_array() || amps.empty()) {
    throw input_error("state: \"amplitudes\" must be a non-empty array");
  }
  Vector amplitudes(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amplitudes[static_cast<Eigen::Index>(i)] = complex_at(amps[i], "state.amplitudes");
  }
  try {
    return ProbeState(std::move(amplitudes));
  } catch (const std::exception& e) {
    throw input_error(std::string("state: ") + e.what());
  }
}

MeasurementBasis basis_from_json(const json& value) {
  const json& rows = require_field(value, "rows", "basis");
  if (!rows.is_array() || rows.empty()) {
    throw input_error("basis: \"rows\" must be a non-empty array");
  }
  const std::size_t m = rows.size();
  Matrix coeff(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!rows[j].is_array() || rows[j].size() != m) {
      throw input_error("basis: row " + std::to_string(j + 1) + " must have " +
                        std::to_string(m) + " entries");
    }
    for (std::size_t l = 0; l < m; ++l) {
      coeff(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) =
          complex_at(rows[j][l], "basis.rows");
    }
  }
  try {
    return MeasurementBasis(std::move(coeff));
  } catch (const std::exception& e) {
    throw input_error(std::string("basis: ") + e.what());
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(path.string() + ": " + e.what());
  }
}

std::string to_csv(const SaturationReport& report) {
  std::string out = "epsilon,cfi,qfi,im_residual,lambda_imag_max\n";
  for (Eigen::Index i = 0; i < report.epsilons.size(); ++i) {
    out += format_double(report.epsilons[i]) + "," + format_double(report.cfi[i]) + "," +
           format_double(report.qfi) + "," + format_double(report.imResidual[i]) + "," +
           format_double(report.lambdaImagMax[i]) + "\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path.string());
  out << content;
}

}  // namespace qib::io
