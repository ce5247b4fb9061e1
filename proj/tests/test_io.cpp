#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "qib/io.hpp"
#include "qib/measurements.hpp"

using namespace qib;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "qib_io_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QIB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("doubles round-trip through the JSON writer") {
  oracles::Rng rng(151);
  for (int trial = 0; trial < 500; ++trial) {
    const double x = (rng.unit() - 0.5) * std::pow(10.0, rng.range(-12.0, 12.0));
    const std::string text = io::format_double(x);
    CHECK(std::stod(text) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("model values survive a JSON round trip bit-exactly") {
  oracles::Rng rng(157);
  const auto sample = oracles::random_certified_state(5, 0.9, rng);
  const MeasurementBasis basis =
      fourier_basis(FourierBasisSpec::matched_to(sample.state));

  const auto genBack = io::generator_from_json(
      nlohmann::json::parse(io::dump_json(io::to_json(sample.gen))));
  CHECK((genBack.eigenvalues() - sample.gen.eigenvalues()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(genBack.labels() == sample.gen.labels());

  const auto stateBack = io::state_from_json(
      nlohmann::json::parse(io::dump_json(io::to_json(sample.state))));
  CHECK((stateBack.amplitudes() - sample.state.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  const auto basisBack = io::basis_from_json(
      nlohmann::json::parse(io::dump_json(io::to_json(basis))));
  CHECK((basisBack.coefficients() - basis.coefficients()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parse diagnostics carry the failing field") {
  CHECK_THROWS_WITH_AS(io::generator_from_json(nlohmann::json::object()),
                       doctest::Contains("eigenvalues"), io::input_error);
  CHECK_THROWS_WITH_AS(
      io::state_from_json(nlohmann::json::parse(R"({"amplitudes": [[1.0]]})")),
      doctest::Contains("re, im"), io::input_error);
  CHECK_THROWS_AS(
      io::basis_from_json(nlohmann::json::parse(R"({"rows": [[[1,0]],[[0,1]]]})")),
      io::input_error);
}

TEST_CASE("CSV format: header, separators, line endings") {
  RealVector e(2);
  e << 0.0, 2.0;
  Vector c(2);
  c << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0);
  Matrix b(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  b << Complex(r, 0), Complex(r, 0), Complex(r, 0), Complex(-r, 0);
  const SaturationReport report = saturation_sweep(
      ProbeState(c), Generator(e), MeasurementBasis(b), uniform_grid(0.0, 1.0, 3));
  const std::string csv = io::to_csv(report);
  CHECK(csv.rfind("epsilon,cfi,qfi,im_residual,lambda_imag_max\n", 0) == 0);
  CHECK(csv.find("\r") == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("cli qfi reports the closed-form values") {
  const fs::path dir = scratch_dir();
  io::write_file(dir / "state.json",
                 R"({"amplitudes": [[0.70710678118654746, 0], [0, 0], [0, 0], [0, 0], [0.70710678118654746, 0]]})");
  io::write_file(dir / "gen.json", R"({"eigenvalues": [0, 1, 2, 3, 4]})");
  CHECK(run_cli("qfi " + (dir / "state.json").string() + " " + (dir / "gen.json").string() +
                " --json " + (dir / "qfi.json").string()) == 0);
  const auto out = nlohmann::json::parse(slurp(dir / "qfi.json"));
  CHECK(out.at("qfi").get<double>() == doctest::Approx(16.0));
  CHECK(out.at("skewness").get<double>() == doctest::Approx(0.0));
  CHECK_FALSE(out.at("admissible").get<bool>());  // interior zeros
}

TEST_CASE("cli qfi: Heisenberg pair on its own two-level support is admissible") {
  const fs::path dir = scratch_dir();
  io::write_file(dir / "hl_state.json",
                 R"({"amplitudes": [[0.70710678118654746, 0], [0.70710678118654746, 0]]})");
  io::write_file(dir / "hl_gen.json", R"({"eigenvalues": [0, 4]})");
  CHECK(run_cli("qfi " + (dir / "hl_state.json").string() + " " +
                (dir / "hl_gen.json").string() + " --json " +
                (dir / "hl.json").string()) == 0);
  const auto out = nlohmann::json::parse(slurp(dir / "hl.json"));
  CHECK(out.at("qfi").get<double>() == doctest::Approx(16.0));
  CHECK(out.at("skewness").get<double>() == doctest::Approx(0.0));
  CHECK(out.at("admissible").get<bool>());
}

TEST_CASE("cli qfi rejects malformed input with exit code 2") {
  const fs::path dir = scratch_dir();
  io::write_file(dir / "broken.json", "{\"amplitudes\": [[1.0,");
  io::write_file(dir / "gen2.json", R"({"eigenvalues": [0, 1]})");
  CHECK(run_cli("qfi " + (dir / "broken.json").string() + " " +
                (dir / "gen2.json").string()) == 2);

  io::write_file(dir / "state2.json", R"({"amplitudes": [[1.0, 0], [0, 0]]})");
  io::write_file(dir / "gen3.json", R"({"eigenvalues": [0, 1, 2]})");
  CHECK(run_cli("qfi " + (dir / "state2.json").string() + " " +
                (dir / "gen3.json").string()) == 2);
}

TEST_CASE("cli sweep: exit codes and deterministic CSV") {
  const fs::path dir = scratch_dir();
  const fs::path config = dir / "sweep_config.json";
  io::write_file(config, R"({
    "generator": {"eigenvalues": [0, 2]},
    "state": {"amplitudes": [[0.70710678118654746, 0], [0.70710678118654746, 0]]},
    "family": "fourier"
  })");

  const std::string outDir1 = (dir / "run1").string();
  const std::string outDir2 = (dir / "run2").string();
  CHECK(run_cli("sweep " + config.string() + " --out csv --seed 7 --output-dir " + outDir1) == 0);
  CHECK(run_cli("sweep " + config.string() + " --out csv --seed 7 --output-dir " + outDir2) == 0);
  const std::string csv1 = slurp(fs::path(outDir1) / "sweep.csv");
  const std::string csv2 = slurp(fs::path(outDir2) / "sweep.csv");
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("epsilon,cfi,qfi,im_residual,lambda_imag_max\n", 0) == 0);
  CHECK(fs::exists(fs::path(outDir1) / "sweep.manifest.json"));

  // single-point grid at eps = 0 stays saturated
  io::write_file(dir / "single.json", R"({
    "generator": {"eigenvalues": [0, 2]},
    "state": {"amplitudes": [[0.70710678118654746, 0], [0.70710678118654746, 0]]},
    "grid": {"count": 1, "min": 0.0, "max": 0.0}
  })");
  CHECK(run_cli("sweep " + (dir / "single.json").string() + " --output-dir " +
                (dir / "single_run").string()) == 0);

  // wigner family on a conjugate-symmetric spin-1 state
  io::write_file(dir / "wigner.json", R"({
    "generator": {"eigenvalues": [-1, 0, 1]},
    "state": {"amplitudes": [[0.35355339059327379, 0.35355339059327379],
                             [0.70710678118654746, 0],
                             [0.35355339059327379, -0.35355339059327379]]},
    "family": "wigner",
    "vartheta": 0.25
  })");
  CHECK(run_cli("sweep " + (dir / "wigner.json").string() + " --output-dir " +
                (dir / "wigner_run").string()) == 0);

  // json output carries the same report
  CHECK(run_cli("sweep " + config.string() + " --out json --output-dir " +
                (dir / "jsonrun").string()) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "jsonrun" / "sweep.json"));
  CHECK(report.at("saturated").get<bool>());
  CHECK(report.at("qfi").get<double>() == doctest::Approx(4.0));
  CHECK(report.at("points").size() == 101);

  io::write_file(dir / "truncated.json", "{\"generator\": {\"eigenvalues\": [0, 2");
  CHECK(run_cli("sweep " + (dir / "truncated.json").string()) == 2);

  CHECK(run_cli("sweep " + config.string() + " --family nosuch --output-dir " +
                (dir / "bad_family").string()) == 2);
}

TEST_CASE("cli sweep flags a broken-phase state with exit code 1") {
  oracles::Rng rng(163);
  const auto sample = oracles::random_certified_state(4, 1.0, rng);
  Vector kicked = sample.state.amplitudes();
  kicked[0] *= std::polar(1.0, 0.3);
  const RealVector phases = sample.state.phases();

  nlohmann::json config{
      {"generator", io::to_json(sample.gen)},
      {"state", io::to_json(ProbeState(kicked))},
      {"family", "fourier"},
      {"eta_phases", std::vector<double>(phases.data(), phases.data() + 4)}};
  const fs::path dir = scratch_dir();
  io::write_file(dir / "kicked.json", io::dump_json(config));
  CHECK(run_cli("sweep " + (dir / "kicked.json").string() + " --output-dir " +
                (dir / "kicked_run").string()) == 1);
}

TEST_CASE("cli scenario commands run their default configs") {
  const fs::path dir = scratch_dir();
  CHECK(run_cli("scenario interferometer --j 1 --output-dir " +
                (dir / "interf").string()) == 0);
  CHECK(run_cli("scenario heisenberg-comparison --samples 300 --output-dir " +
                (dir / "heis").string()) == 0);
  CHECK(run_cli("scenario bosonic --nbar 6 --output-dir " + (dir / "bos").string()) == 0);
  CHECK(run_cli("scenario block-diagonal --output-dir " + (dir / "blk").string()) == 0);
  CHECK(run_cli("scenario nosuch") == 2);

  CHECK(fs::exists(dir / "interf" / "interferometer.csv"));
  CHECK(fs::exists(dir / "interf" / "scenario_interferometer.manifest.json"));
  CHECK(fs::exists(dir / "blk" / "block_diagonal.csv"));
  const auto record =
      nlohmann::json::parse(slurp(dir / "heis" / "heisenberg_comparison.json"));
  CHECK(record.at("bound").get<double>() == doctest::Approx(16.0));
}

TEST_CASE("cli scenario accepts a config file, flags override it") {
  const fs::path dir = scratch_dir();
  io::write_file(dir / "blocks.json", R"({
    "vartheta": 0.2,
    "blocks": [
      {"j": 0.5, "weight": 0.6,
       "amplitudes": [[0.70710678118654746, 0], [0.70710678118654746, 0]]},
      {"j": 1.0, "weight": 0.4,
       "amplitudes": [[0.5, 0], [0.70710678118654746, 0], [0.5, 0]]}
    ]
  })");
  CHECK(run_cli("scenario block-diagonal " + (dir / "blocks.json").string() +
                " --output-dir " + (dir / "blk_cfg").string()) == 0);

  io::write_file(dir / "bosonic.json", R"({"nbar": 3})");
  CHECK(run_cli("scenario bosonic " + (dir / "bosonic.json").string() +
                " --nbar 5 --output-dir " + (dir / "bos_cfg").string()) == 0);
  const auto manifest = nlohmann::json::parse(
      slurp(dir / "bos_cfg" / "scenario_bosonic.manifest.json"));
  CHECK(manifest.at("parameters").at("nbar").get<int>() == 5);
}
