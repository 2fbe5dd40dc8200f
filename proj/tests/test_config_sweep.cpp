#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chancert/config.hpp"
#include "chancert/errors.hpp"
#include "chancert/sweep.hpp"
#include "test_helpers.hpp"

using namespace chancert;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Drop the wall_time_ms column (the only non-deterministic field).
std::string strip_wall_time(const std::string& csv) {
  std::stringstream in(csv), out;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    out << line.substr(0, cut) << '\n';
  }
  return out.str();
}

}  // namespace

TEST_SUITE("config_sweep") {

TEST_CASE("presets resolve to the reference parameters") {
  const RunConfig config = RunConfig::from_json_text(R"({
    "schema_version": 1,
    "fiber": "paper-5m",
    "noise": "paper-5m"
  })");
  CHECK(config.fiber.length_m == 5.0);
  CHECK(config.fiber.core_radius_m == 25e-6);
  CHECK(config.fiber.n_core == 1.444);
  CHECK(config.fiber.numerical_aperture == 0.22);
  CHECK(config.fiber.center_wavelength_m == 810e-9);
  CHECK(config.fiber.bandwidth_m == 3e-9);
  CHECK(config.fiber.num_wavelengths == 201);
  CHECK(config.noise.kind == NoiseKind::quadratic_p);
  CHECK(config.noise.a == 6.167e-6);
  CHECK(config.noise.b == -2.549e-3);
  CHECK(config.noise.c == 8.769e-1);
}

TEST_CASE("unknown keys are hard errors") {
  CHECK_THROWS_WITH_AS(RunConfig::from_json_text(R"({"schema_version": 1, "dimz": [4]})"),
                       doctest::Contains("dimz"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"schema_version": 1, "fiber": {"preset": "paper-2m", "radius": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"schema_version": 1, "noise": {"kind": "none", "q": 2}})"),
      ConfigError);
}

TEST_CASE("schema version is mandatory and checked") {
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"dims": [4]})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"schema_version": 2})"), ConfigError);
}

TEST_CASE("malformed values are reported as config errors") {
  CHECK_THROWS_AS(RunConfig::from_json_text("{nope"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"schema_version": 1, "dims": [1]})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"schema_version": 1, "dims": []})"), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"schema_version": 1, "mub_m": ["d+2"]})"), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(R"({"schema_version": 1, "witnesses": ["ft"]})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"schema_version": 1, "noise": {"kind": "fixed_p", "p": 2.0}})"),
                  ConfigError);
}

TEST_CASE("mub_m accepts the d+1 sentinel") {
  const RunConfig config = RunConfig::from_json_text(
      R"({"schema_version": 1, "mub_m": [2, 3, "d+1"]})");
  REQUIRE(config.mub_m.size() == 3);
  CHECK(config.mub_m[2] == kFullMubSet);
}

TEST_CASE("inline fiber requires the full parameter set") {
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      R"({"schema_version": 1, "fiber": {"length_m": 2.0}})"),
                  ConfigError);
}

TEST_CASE("monochromatic reference sweep certifies d = 4 for the steering witness") {
  RunConfig config = RunConfig::from_json_text(R"({
    "schema_version": 1,
    "fiber": {"preset": "paper-2m", "num_wavelengths": 1, "bandwidth_m": 0.0},
    "witnesses": ["pt_steering"],
    "dims": [4],
    "noise": "none"
  })");
  config.output_dir = scratch_dir("chancert_sweep_mono");
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].certified_n == 4);
  CHECK(rows[0].d == 4);
  CHECK(rows[0].m == 2);
  CHECK(rows[0].p_used == 1.0);
  std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("sweep rows are ordered and composite dimensions skipped for m > 2") {
  RunConfig config;
  config.fiber = testing::small_fiber(5.0);
  config.fiber_name = "small";
  config.witnesses = {WitnessKind::ft_morelli, WitnessKind::pt_steering};
  config.mub_m = {2, 3};
  config.dims = {4, 5};
  config.noise = NoiseModel::paper_5m();
  config.output_dir = scratch_dir("chancert_sweep_order");

  const auto rows = run_sweep(config);
  // d=4: pt m=2, morelli m=2 (m=3 skipped, composite); d=5: pt m=2,
  // morelli m=2, morelli m=3.
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].d == 4);
  CHECK(rows[0].witness == "pt_steering");
  CHECK(rows[1].d == 4);
  CHECK(rows[1].witness == "ft_morelli");
  CHECK(rows[1].m == 2);
  CHECK(rows[2].d == 5);
  CHECK(rows[2].witness == "pt_steering");
  CHECK(rows[3].witness == "ft_morelli");
  CHECK(rows[3].m == 2);
  CHECK(rows[4].witness == "ft_morelli");
  CHECK(rows[4].m == 3);
  for (const SweepRow& row : rows)
    CHECK(row.p_used == doctest::Approx(NoiseModel::paper_5m().mixing_at(row.d)));
  std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("sweep output is deterministic apart from wall time") {
  RunConfig config;
  config.fiber = testing::small_fiber(5.0, 8e-6, 21);
  config.witnesses = {WitnessKind::ft_bavaresco, WitnessKind::pt_steering};
  config.dims = {4, 9};
  config.noise = NoiseModel::fixed(0.9);
  config.output_dir = scratch_dir("chancert_sweep_det");

  const auto first = run_sweep(config);
  const auto csv_a = config.output_dir / "a.csv";
  write_sweep_csv(first, csv_a);
  const auto second = run_sweep(config);  // second run hits the MSTM cache
  const auto csv_b = config.output_dir / "b.csv";
  write_sweep_csv(second, csv_b);
  CHECK(strip_wall_time(read_file(csv_a)) == strip_wall_time(read_file(csv_b)));

  const std::string header = read_file(csv_a).substr(0, read_file(csv_a).find('\n'));
  CHECK(header == "fiber_length_m,d,witness,m,p_used,lhs,certified_n,wall_time_ms");
  std::filesystem::remove_all(config.output_dir);
}

TEST_CASE("unwritable output directory is a config error") {
  RunConfig config;
  config.fiber = testing::small_fiber(2.0).monochromatic();
  config.dims = {4};
  config.output_dir = "/proc/chancert_forbidden";
  CHECK_THROWS_AS(run_sweep(config), ConfigError);
}

TEST_CASE("corrupt cache entries are rebuilt") {
  const auto dir = scratch_dir("chancert_cache_corrupt");
  const FiberSpec spec = testing::small_fiber(2.0, 8e-6, 11);
  const Mstm built = cached_mstm(spec, dir);
  // Overwrite the cache file with junk; the loader must fall back to rebuild.
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ofstream out(entry.path(), std::ios::trunc);
    out << "garbage";
  }
  const Mstm rebuilt = cached_mstm(spec, dir);
  CHECK(rebuilt.dim() == built.dim());
  CHECK(max_abs(rebuilt.diagonals[0] - built.diagonals[0]) == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("plots are emitted per figure") {
  std::vector<SweepRow> rows;
  for (int d : {4, 8, 13}) {
    rows.push_back({2.0, d, "pt_steering", 2, 1.0, 2.0 * d, d, 0});
    rows.push_back({2.0, d, "ft_morelli", 3, 1.0, 3.0 * d, d, 0});
    rows.push_back({2.0, d, "ft_morelli", 5, 1.0, 5.0 * d, d, 0});
  }
  const auto dir = scratch_dir("chancert_plots");
  emit_plots(rows, dir);
  const std::string two_basis = read_file(dir / "certified_vs_dimension.svg");
  const std::string multi = read_file(dir / "mub_enhancement.svg");
  CHECK(two_basis.find("<svg") != std::string::npos);
  CHECK(two_basis.find("certified dimension") != std::string::npos);
  CHECK(multi.find("polyline") != std::string::npos);

  // A single row must not crash.
  emit_plots({{5.0, 13, "pt_steering", 2, 0.8, 20.0, 4, 1}}, dir);
  CHECK_THROWS_AS(emit_plots({}, dir), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("certify path: exported tensor certifies identically after reload") {
  const Mstm mstm = build_mstm(testing::small_fiber(5.0));
  const ApproxTm approx = spectral_mean_tm(mstm);
  const CorrelationTensor tensor =
      apply_noise(mub_correlations(mstm, leading_subspace(approx, 5), fourier_pair(5)), 0.92);
  const auto dir = scratch_dir("chancert_certify");
  const auto csv = dir / "tensor.csv";
  save_correlations_csv(tensor, csv);
  const CorrelationTensor loaded = load_correlations_csv(csv);
  for (WitnessKind kind : {WitnessKind::ft_bavaresco, WitnessKind::pt_steering}) {
    CHECK(certify(loaded, kind).certified_n == certify(tensor, kind).certified_n);
    CHECK(certify(loaded, kind).lhs == certify(tensor, kind).lhs);
  }
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
