#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aoi/experiment.hpp"

using namespace aoi;
namespace fs = std::filesystem;

namespace {

std::string read_all(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("default horizon heuristic") {
    CHECK(default_horizon(1, 1.0) == doctest::Approx(200.0));
    CHECK(default_horizon(64, 1.0) == doctest::Approx(1600.0));
    CHECK(default_horizon(64, 2.0) == doctest::Approx(800.0));
}

TEST_CASE("nine significant digit formatting is stable") {
    CHECK(format_sig9(0.1) == "0.1");
    CHECK(format_sig9(123456789.0) == "123456789");
    CHECK(format_sig9(1.23456789012) == "1.23456789");
    CHECK(format_sig9(0.0) == "0");
    CHECK(format_sig9(-2.5e-7) == "-2.5e-07");
}

TEST_CASE("csv write/read round trip") {
    TempDir dir("aoi_test_csv");
    const std::string path = (dir.path / "t.csv").string();
    Csv csv;
    csv.header = {"a", "b"};
    csv.rows = {{"1", "x"}, {"2", "y"}};
    write_csv(csv, path);
    const Csv back = read_csv(path);
    CHECK(back.header == csv.header);
    CHECK(back.rows == csv.rows);
    CHECK_THROWS_AS(read_csv((dir.path / "missing.csv").string()), std::runtime_error);
}

TEST_CASE("experiment config json round trip and validation") {
    ExperimentConfig c;
    c.kind = "scaling";
    c.params = {{"n", {8, 16, 32}}};
    c.replications = 4;
    c.base_seed = 99;
    c.out_dir = "/tmp/x";
    c.jobs = 2;
    const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.kind == c.kind);
    CHECK(back.params == c.params);
    CHECK(back.replications == c.replications);
    CHECK(back.base_seed == c.base_seed);
    CHECK(back.out_dir == c.out_dir);
    CHECK(back.jobs == c.jobs);

    nlohmann::json bad = c.to_json();
    bad["kind"] = "nonsense";
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
    bad["kind"] = "scaling";
    bad["replications"] = 0;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
}

TEST_CASE("scaling experiment writes the fixed column layout and a manifest") {
    TempDir dir("aoi_test_scaling");
    ExperimentConfig cfg;
    cfg.kind = "scaling";
    cfg.params = {{"topologies", {"disconnected"}}, {"n", {4, 8}}, {"horizon", 50.0}};
    cfg.replications = 2;
    cfg.base_seed = 7;
    cfg.out_dir = dir.path.string();
    const ExperimentOutput out = run_experiment(cfg);

    const std::vector<std::string> header = {"topology", "n", "replication", "metric", "value"};
    CHECK(out.csv.header == header);
    // 1 topology x 2 sizes x 2 replications x 2 metrics
    CHECK(out.csv.rows.size() == 8);

    const auto manifest = nlohmann::json::parse(read_all(out.manifest_path));
    CHECK(manifest.at("code_version").get<std::string>() == "aoi-lab 0.1.0");
    CHECK(manifest.at("config").at("kind") == "scaling");
    // resolved parameter defaults are echoed back
    CHECK(manifest.at("config").at("params").at("lambda") == 1.0);
    CHECK(manifest.at("defaults").contains("warmup_fraction"));
    CHECK(manifest.at("wall_time_seconds").is_number());
}

TEST_CASE("identical configs produce byte-identical result files") {
    TempDir a("aoi_test_det_a");
    TempDir b("aoi_test_det_b");
    ExperimentConfig cfg;
    cfg.kind = "mutation";
    cfg.params = {{"n", {8}}, {"lambda", {0.5, 2.0}}, {"horizon", 80.0}};
    cfg.replications = 2;
    cfg.base_seed = 5;
    cfg.jobs = 4;
    cfg.out_dir = a.path.string();
    const std::string first = read_all(run_experiment(cfg).csv_path);
    cfg.out_dir = b.path.string();
    const std::string second = read_all(run_experiment(cfg).csv_path);
    CHECK(first == second);
    CHECK_FALSE(first.empty());
}

TEST_CASE("game experiment covers the default sweep with all three solution kinds") {
    TempDir dir("aoi_test_game");
    ExperimentConfig cfg;
    cfg.kind = "game";
    cfg.out_dir = dir.path.string();
    const ExperimentOutput out = run_experiment(cfg);
    CHECK(out.csv.rows.size() == 27 * 3);
    int se_tx_rows = 0;
    for (const auto& row : out.csv.rows)
        if (row[5] == "SE_transmitter_leader") {
            ++se_tx_rows;
            CHECK(row[6] == "0");  // never exists under the linear model
        }
    CHECK(se_tx_rows == 27);
}

TEST_CASE("slotted experiment evaluates the requested plan") {
    TempDir dir("aoi_test_slotted");
    ExperimentConfig cfg;
    cfg.kind = "slotted";
    cfg.params = {{"T", 8}, {"N", 2}, {"alpha", 0.25}, {"plan", "central"}, {"victim", 0}};
    cfg.out_dir = dir.path.string();
    const ExperimentOutput out = run_experiment(cfg);
    REQUIRE(out.csv.rows.size() == 1);
    CHECK(out.csv.rows[0][0] == "-1;-1;-1;0;0;-1;-1;-1");
    // the CSV carries 9 significant digits
    CHECK(std::stod(out.csv.rows[0][1]) == doctest::Approx(8837.0 / 4096.0).epsilon(1e-8));
}

TEST_CASE("plot emission renders an svg and rejects unusable input") {
    TempDir dir("aoi_test_plot");
    ExperimentConfig cfg;
    cfg.kind = "scaling";
    cfg.params = {{"topologies", {"disconnected", "bi_ring"}}, {"n", {4, 8, 16}},
                  {"horizon", 50.0}};
    cfg.replications = 2;
    cfg.out_dir = dir.path.string();
    const ExperimentOutput out = run_experiment(cfg);

    const std::string svg_path = (dir.path / "plot.svg").string();
    emit_plot(out.csv_path, "age_vs_n", svg_path);
    const std::string svg = read_all(svg_path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);

    CHECK_THROWS_AS(emit_plot(out.csv_path, "no_such_plot", svg_path), std::invalid_argument);
    const std::string empty_path = (dir.path / "empty.csv").string();
    write_csv(Csv{{"topology", "n", "replication", "metric", "value"}, {}}, empty_path);
    CHECK_THROWS_AS(emit_plot(empty_path, "age_vs_n", svg_path), std::invalid_argument);
    CHECK_THROWS_AS(emit_plot((dir.path / "nope.csv").string(), "age_vs_n", svg_path),
                    std::runtime_error);
}
