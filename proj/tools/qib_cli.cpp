#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qib/io.hpp"
#include "qib/scenarios.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit-code contract: 0 all assertions pass, 1 assertion/saturation
// failure, 2 input error
constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitInput = 2;

struct OutputContext {
  fs::path dir;
  std::string command;
  json parameters = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  fs::path place(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }

  void write_manifest(std::uint64_t seed, const std::string& configNote) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    json manifest{{"command", command},
                  {"version", kVersion},
                  {"config", configNote},
                  {"parameters", parameters},
                  {"seed", seed},
                  {"outputs", outputs},
                  {"duration_ms", elapsed.count()}};
    qib::io::write_file(dir / (command + ".manifest.json"), qib::io::dump_json(manifest));
  }
};

fs::path default_output_dir() {
  if (const char* env = std::getenv("QIB_OUTPUT_DIR")) return fs::path(env);
  return fs::current_path();
}

json load_inline_or_file(const json& config, const std::string& key, const fs::path& base) {
  if (config.contains(key)) return config.at(key);
  const std::string fileKey = key + "_file";
  if (config.contains(fileKey)) {
    const fs::path p = base / config.at(fileKey).get<std::string>();
    return qib::io::load_json_file(p);
  }
  throw qib::io::input_error("config: need \"" + key + "\" or \"" + fileKey + "\"");
}

qib::GridSpec grid_from_config(const json& config, std::optional<int> gridOverride) {
  qib::GridSpec spec;
  if (config.contains("grid")) {
    const json& g = config.at("grid");
    if (g.contains("count")) spec.count = g.at("count").get<int>();
    if (g.contains("min") != g.contains("max")) {
      throw qib::io::input_error("config.grid: min and max must come together");
    }
    if (g.contains("min")) {
      spec.range = std::make_pair(g.at("min").get<double>(), g.at("max").get<double>());
    }
  }
  if (gridOverride) spec.count = *gridOverride;
  if (spec.count < 1) throw qib::io::input_error("config.grid: count must be >= 1");
  return spec;
}

qib::SweepOptions sweep_options_from_config(const json& config) {
  qib::SweepOptions options;
  if (config.contains("tolerances")) {
    const json& t = config.at("tolerances");
    if (t.contains("saturation_rel")) options.saturationRelTol = t.at("saturation_rel").get<double>();
    if (t.contains("residual")) options.residualTol = t.at("residual").get<double>();
  }
  return options;
}

qib::MeasurementBasis basis_for_family(const std::string& family, const json& config,
                                       const fs::path& base, const qib::ProbeState& state) {
  if (family == "fourier") {
    qib::FourierBasisSpec spec = qib::FourierBasisSpec::matched_to(state);
    if (config.contains("beta")) spec.beta = config.at("beta").get<double>();
    if (config.contains("eta_phases")) {
      const auto phases = config.at("eta_phases").get<std::vector<double>>();
      if (static_cast<int>(phases.size()) != state.dim()) {
        throw qib::io::input_error("config.eta_phases: need one phase per level");
      }
      spec.etaPhases = Eigen::Map<const qib::RealVector>(
          phases.data(), static_cast<Eigen::Index>(phases.size()));
    }
    return qib::fourier_basis(spec);
  }
  if (family == "wigner") {
    qib::WignerBasisSpec spec{state.dim(), 0.0};
    if (config.contains("vartheta")) spec.vartheta = config.at("vartheta").get<double>();
    return qib::wigner_basis(spec);
  }
  if (family == "explicit") {
    return qib::io::basis_from_json(load_inline_or_file(config, "basis", base));
  }
  throw qib::io::input_error("unknown family \"" + family + "\" (fourier|wigner|explicit)");
}

int run_qfi(const std::string& statePath, const std::string& genPath,
            const std::string& jsonOut) {
  const qib::ProbeState state = qib::io::state_from_json(qib::io::load_json_file(statePath));
  const qib::Generator gen =
      qib::io::generator_from_json(qib::io::load_json_file(genPath));
  if (gen.dim() != state.dim()) {
    throw qib::io::input_error("state and generator dimensions differ");
  }
  const double fq = qib::qfi(state, gen);
  const double mean = qib::mean_A(state, gen);
  const qib::SymmetryCertificate cert = qib::certify(state, gen);
  std::optional<double> skew;
  if (fq > qib::tol::qfi_floor) skew = qib::skewness(state, gen);

  std::printf("qfi              %s\n", qib::io::format_double(fq).c_str());
  std::printf("mean_A           %s\n", qib::io::format_double(mean).c_str());
  std::printf("skewness         %s\n",
              skew ? qib::io::format_double(*skew).c_str() : "undefined (F_Q = 0)");
  std::printf("admissible       %s\n", cert.admissible ? "true" : "false");
  std::printf("spectrum_residual %s\n", qib::io::format_double(cert.spectrumResidual).c_str());
  std::printf("moduli_residual  %s\n", qib::io::format_double(cert.moduliResidual).c_str());

  if (!jsonOut.empty()) {
    json out{{"qfi", fq},
             {"mean_A", mean},
             {"admissible", cert.admissible},
             {"spectrum_residual", cert.spectrumResidual},
             {"moduli_residual", cert.moduliResidual}};
    if (skew) out["skewness"] = *skew;
    qib::io::write_file(jsonOut, qib::io::dump_json(out));
  }
  return kExitPass;
}

int run_sweep(const std::string& configPath, const std::string& format,
              std::string outputName, std::optional<int> gridOverride,
              std::optional<std::string> familyOverride, std::uint64_t seed,
              OutputContext& ctx) {
  const json config = qib::io::load_json_file(configPath);
  const fs::path base = fs::path(configPath).parent_path();

  const qib::ProbeState state =
      qib::io::state_from_json(load_inline_or_file(config, "state", base));
  const qib::Generator gen =
      qib::io::generator_from_json(load_inline_or_file(config, "generator", base));
  if (gen.dim() != state.dim()) {
    throw qib::io::input_error("state and generator dimensions differ");
  }
  std::string family = config.value("family", std::string("fourier"));
  if (familyOverride) family = *familyOverride;
  const qib::MeasurementBasis basis = basis_for_family(family, config, base, state);
  const qib::GridSpec gridSpec = grid_from_config(config, gridOverride);
  const qib::SweepOptions options = sweep_options_from_config(config);

  const qib::RealVector grid =
      gridSpec.materialize(gen.eigenvalues(), state.amplitudes());
  const qib::SaturationReport report =
      qib::saturation_sweep(state, gen, basis, grid, options);

  if (outputName.empty()) outputName = "sweep." + format;
  const fs::path out = ctx.place(outputName);
  if (format == "csv") {
    qib::io::write_file(out, qib::io::to_csv(report));
  } else if (format == "json") {
    qib::io::write_file(out, qib::io::dump_json(qib::io::to_json(report)));
  } else {
    throw qib::io::input_error("unknown output format \"" + format + "\" (csv|json)");
  }
  ctx.parameters = json{{"family", family},
                        {"grid_points", static_cast<int>(grid.size())},
                        {"saturation_rel_tol", options.saturationRelTol}};
  ctx.write_manifest(seed, configPath);

  std::printf("qfi      %s\n", qib::io::format_double(report.qfi).c_str());
  std::printf("max_gap  %s\n", qib::io::format_double(report.maxRelativeGap()).c_str());
  std::printf("max_res  %s\n", qib::io::format_double(report.maxImResidual()).c_str());
  std::printf("saturated %s\n", report.saturated ? "true" : "false");
  std::printf("wrote %s\n", out.string().c_str());
  return report.saturated ? kExitPass : kExitAssertion;
}

void write_report_csv(OutputContext& ctx, const std::string& name,
                      const qib::SaturationReport& report) {
  qib::io::write_file(ctx.place(name), qib::io::to_csv(report));
}

int run_scenario(const std::string& kind, const std::string& configPath,
                 const json& overrides, std::uint64_t seed, OutputContext& ctx) {
  json config = json::object();
  if (!configPath.empty()) config = qib::io::load_json_file(configPath);
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    config[it.key()] = it.value();
  }
  ctx.parameters = config;

  if (kind == "interferometer") {
    qib::InterferometerConfig cfg;
    if (config.contains("j")) cfg.twoJplus1 = static_cast<int>(std::lround(2.0 * config.at("j").get<double>() + 1.0));
    if (config.contains("two_j_plus_1")) cfg.twoJplus1 = config.at("two_j_plus_1").get<int>();
    if (config.contains("vartheta")) cfg.vartheta = config.at("vartheta").get<double>();
    if (config.contains("rotation_angles")) {
      cfg.rotationAngles = config.at("rotation_angles").get<std::vector<double>>();
    }
    if (config.contains("amplitudes")) {
      cfg.amplitudes =
          qib::io::state_from_json(json{{"amplitudes", config.at("amplitudes")}}).amplitudes();
    }
    cfg.grid = grid_from_config(config, std::nullopt);
    const qib::InterferometerResult result = qib::interferometer_scenario(cfg);
    write_report_csv(ctx, "interferometer.csv", result.report);
    ctx.write_manifest(seed, configPath.empty() ? "inline" : configPath);
    std::printf("scenario          interferometer (M = %d)\n", cfg.twoJplus1);
    std::printf("qfi               %s\n", qib::io::format_double(result.qfi).c_str());
    std::printf("mean_Jz           %s\n", qib::io::format_double(result.meanJz).c_str());
    std::printf("saturated         %s\n", result.report.saturated ? "true" : "false");
    std::printf("rotation_max_dev  %s\n",
                qib::io::format_double(result.maxCfiRotationDeviation).c_str());
    std::printf("passed            %s\n", result.passed ? "true" : "false");
    return result.passed ? kExitPass : kExitAssertion;
  }

  if (kind == "block-diagonal") {
    qib::BlockDiagonalConfig cfg;
    if (config.contains("vartheta")) cfg.vartheta = config.at("vartheta").get<double>();
    cfg.grid = grid_from_config(config, std::nullopt);
    if (!config.contains("blocks")) {
      // two-block default: j = 1/2 and j = 1 with weights 0.6/0.4
      qib::BlockSpec b1;
      b1.twoJplus1 = 2;
      b1.weight = 0.6;
      b1.amplitudes = qib::Vector::Constant(2, qib::Complex(1.0 / std::sqrt(2.0), 0.0));
      qib::BlockSpec b2;
      b2.twoJplus1 = 3;
      b2.weight = 0.4;
      b2.amplitudes = qib::Vector::Constant(3, qib::Complex(1.0 / std::sqrt(3.0), 0.0));
      cfg.blocks = {b1, b2};
    } else {
      for (const json& b : config.at("blocks")) {
        qib::BlockSpec spec;
        if (b.contains("j")) spec.twoJplus1 = static_cast<int>(std::lround(2.0 * b.at("j").get<double>() + 1.0));
        if (b.contains("two_j_plus_1")) spec.twoJplus1 = b.at("two_j_plus_1").get<int>();
        spec.weight = b.at("weight").get<double>();
        spec.amplitudes =
            qib::io::state_from_json(json{{"amplitudes", b.at("amplitudes")}}).amplitudes();
        cfg.blocks.push_back(std::move(spec));
      }
    }
    const qib::BlockDiagonalResult result = qib::block_diagonal_scenario(cfg);
    write_report_csv(ctx, "block_diagonal.csv", result.report);
    ctx.write_manifest(seed, configPath.empty() ? "inline" : configPath);
    std::printf("scenario       block-diagonal (%zu blocks)\n", cfg.blocks.size());
    std::printf("qfi            %s\n", qib::io::format_double(result.report.qfi).c_str());
    std::printf("blockwise_qfi  %s\n", qib::io::format_double(result.blockwiseQfi).c_str());
    std::printf("saturated      %s\n", result.report.saturated ? "true" : "false");
    std::printf("passed         %s\n", result.passed ? "true" : "false");
    return result.passed ? kExitPass : kExitAssertion;
  }

  if (kind == "bosonic") {
    qib::BosonicConfig cfg;
    if (config.contains("nbar")) cfg.nbar = config.at("nbar").get<int>();
    if (config.contains("theta")) cfg.theta = config.at("theta").get<double>();
    if (config.contains("generic_slope")) cfg.genericSlope = config.at("generic_slope").get<double>();
    cfg.grid = grid_from_config(config, std::nullopt);
    const qib::BosonicResult result = qib::bosonic_scenario(cfg);
    write_report_csv(ctx, "bosonic_symmetrized.csv", result.symmetrized);
    write_report_csv(ctx, "bosonic_poisson.csv", result.poisson);
    ctx.write_manifest(seed, configPath.empty() ? "inline" : configPath);
    std::printf("scenario             bosonic (nbar = %d)\n", cfg.nbar);
    std::printf("symmetrized_qfi      %s\n",
                qib::io::format_double(result.symmetrized.qfi).c_str());
    std::printf("symmetrized_saturated %s\n",
                result.symmetrized.saturated ? "true" : "false");
    std::printf("coherent_fidelity    %s\n", qib::io::format_double(result.fidelity).c_str());
    std::printf("poisson_saturated    %s (expected false)\n",
                result.poisson.saturated ? "true" : "false");
    std::printf("poisson_max_residual %s\n",
                qib::io::format_double(result.poissonMaxResidual).c_str());
    std::printf("wigner_phase_ok      %s (expected false)\n",
                result.wignerPhaseCheck.satisfied ? "true" : "false");
    std::printf("passed               %s\n", result.passed ? "true" : "false");
    return result.passed ? kExitPass : kExitAssertion;
  }

  if (kind == "heisenberg-comparison") {
    qib::HeisenbergComparisonConfig cfg;
    cfg.seed = seed;
    if (config.contains("eigenvalues")) {
      const auto eig = config.at("eigenvalues").get<std::vector<double>>();
      cfg.eigenvalues = Eigen::Map<const qib::RealVector>(
          eig.data(), static_cast<Eigen::Index>(eig.size()));
    }
    if (config.contains("mean_a")) cfg.meanA = config.at("mean_a").get<double>();
    if (config.contains("samples")) cfg.samples = config.at("samples").get<int>();
    const qib::HeisenbergComparisonResult result = qib::heisenberg_comparison(cfg);
    json record{{"bound", result.bound},
                {"analytic_qfi", result.analyticQfi},
                {"max_sampled_qfi", result.maxSampledQfi},
                {"samples", result.samples},
                {"passed", result.passed}};
    if (result.bestSample) {
      record["best_sample"] = json{{"generator", qib::io::to_json(result.bestSample->generator)},
                                   {"state", qib::io::to_json(result.bestSample->state)}};
    }
    qib::io::write_file(ctx.place("heisenberg_comparison.json"),
                        qib::io::dump_json(record));
    ctx.write_manifest(seed, configPath.empty() ? "inline" : configPath);
    std::printf("scenario         heisenberg-comparison\n");
    std::printf("bound            %s\n", qib::io::format_double(result.bound).c_str());
    std::printf("analytic_qfi     %s\n", qib::io::format_double(result.analyticQfi).c_str());
    std::printf("max_sampled_qfi  %s (%d samples)\n",
                qib::io::format_double(result.maxSampledQfi).c_str(), result.samples);
    std::printf("passed           %s\n", result.passed ? "true" : "false");
    return result.passed ? kExitPass : kExitAssertion;
  }

  throw qib::io::input_error(
      "unknown scenario \"" + kind +
      "\" (interferometer|block-diagonal|bosonic|heisenberg-comparison)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal projective measurements and global saturation of the "
               "quantum information bound"};
  app.set_version_flag("--version", kVersion);
  std::string outputDir = default_output_dir().string();
  app.add_option("--output-dir", outputDir, "Directory for generated files");

  app.fallthrough();

  auto* qfiCmd = app.add_subcommand("qfi", "QFI, mean, skewness and symmetry certificate");
  qfiCmd->fallthrough();
  std::string statePath, genPath, qfiJson;
  qfiCmd->add_option("state", statePath, "Probe state JSON file")->required();
  qfiCmd->add_option("generator", genPath, "Generator JSON file")->required();
  qfiCmd->add_option("--json", qfiJson, "Also write the results as JSON");

  auto* sweepCmd = app.add_subcommand("sweep", "Saturation sweep over the epsilon grid");
  sweepCmd->fallthrough();
  std::string sweepConfig, sweepFormat = "csv", sweepOutput;
  std::optional<int> gridOverride;
  std::optional<std::string> familyOverride;
  std::uint64_t seed = 1;
  sweepCmd->add_option("config", sweepConfig, "Sweep config JSON file")->required();
  sweepCmd->add_option("--out", sweepFormat, "Output format: csv|json");
  sweepCmd->add_option("--output", sweepOutput, "Output file name");
  sweepCmd->add_option("--grid", gridOverride, "Number of grid points");
  sweepCmd->add_option("--family", familyOverride, "fourier|wigner|explicit");
  sweepCmd->add_option("--seed", seed, "Seed recorded in the manifest");

  auto* scenarioCmd = app.add_subcommand("scenario", "Run a bundled scenario");
  scenarioCmd->fallthrough();
  std::string kind, scenarioConfig;
  std::optional<int> nbar, samples, twoJplus1;
  std::optional<double> jSpin, vartheta, theta;
  scenarioCmd->add_option("kind", kind,
                          "interferometer|block-diagonal|bosonic|heisenberg-comparison")
      ->required();
  scenarioCmd->add_option("config", scenarioConfig, "Scenario config JSON file");
  scenarioCmd->add_option("--nbar", nbar, "Mean photon number (bosonic)");
  scenarioCmd->add_option("--j", jSpin, "Spin j (interferometer)");
  scenarioCmd->add_option("--samples", samples, "Sample count (heisenberg-comparison)");
  scenarioCmd->add_option("--vartheta", vartheta, "Wigner-family free angle");
  scenarioCmd->add_option("--theta", theta, "Phase slope (bosonic)");
  scenarioCmd->add_option("--seed", seed, "Random seed");

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*qfiCmd) return run_qfi(statePath, genPath, qfiJson);

    OutputContext ctx;
    ctx.dir = fs::path(outputDir);
    fs::create_directories(ctx.dir);
    if (*sweepCmd) {
      ctx.command = "sweep";
      return run_sweep(sweepConfig, sweepFormat, sweepOutput, gridOverride,
                       familyOverride, seed, ctx);
    }
    ctx.command = "scenario_" + kind;
    json overrides = json::object();
    if (nbar) overrides["nbar"] = *nbar;
    if (jSpin) overrides["j"] = *jSpin;
    if (samples) overrides["samples"] = *samples;
    if (vartheta) overrides["vartheta"] = *vartheta;
    if (theta) overrides["theta"] = *theta;
    return run_scenario(kind, scenarioConfig, overrides, seed, ctx);
  } catch (const qib::io::input_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
}
