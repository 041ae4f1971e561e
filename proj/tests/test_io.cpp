#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dhsic/config.hpp"
#include "dhsic/csv.hpp"
#include "dhsic/error.hpp"
#include "dhsic/report.hpp"

using namespace dhsic;

TEST_CASE("csv parsing") {
  SUBCASE("grid header is detected") {
    const auto c = csv::parse_component("0,0.5,1\n1,2,3\n4,5,6\n");
    REQUIRE(c.grid().has_value());
    CHECK(c.grid()->points()[1] == 0.5);
    CHECK(c.rows() == 2);
    CHECK(c.values()(1, 2) == 6.0);
  }
  SUBCASE("non-increasing first row is data") {
    const auto c = csv::parse_component("3, 2, 1\r\n 1,2,3 \n\n");
    CHECK_FALSE(c.grid().has_value());
    CHECK(c.rows() == 2);
    CHECK(c.values()(0, 0) == 3.0);
  }
  SUBCASE("header override") {
    CHECK_FALSE(csv::parse_component("1,2\n3,4\n", csv::HeaderMode::No).grid().has_value());
    CHECK(csv::parse_component("1,2\n3,4\n", csv::HeaderMode::Auto).grid().has_value());
    CHECK_THROWS_AS(csv::parse_component("2,1\n3,4\n", csv::HeaderMode::Yes), InvalidInput);
    CHECK_FALSE(csv::parse_component("1,2\n", csv::HeaderMode::Auto).grid().has_value());
  }
  SUBCASE("errors name the location") {
    CHECK_THROWS_WITH_AS(csv::parse_component("1,2\n3,x\n", csv::HeaderMode::No, "f.csv"),
                         doctest::Contains("f.csv: non-numeric cell 'x' at line 2, column 2"),
                         InvalidInput);
    CHECK_THROWS_WITH_AS(csv::parse_component("1,2\n3\n"), doctest::Contains("columns"),
                         InvalidInput);
    CHECK_THROWS_AS(csv::parse_component("\n\n"), InvalidInput);
    CHECK_THROWS_AS(csv::parse_component("1,,2\n"), InvalidInput);
    CHECK_THROWS_AS(csv::parse_component("1,2\n3,4,\n", csv::HeaderMode::No), InvalidInput);
  }
  CHECK(csv::parse_header_mode("yes") == csv::HeaderMode::Yes);
  CHECK_THROWS_AS(csv::parse_header_mode("maybe"), ConfigurationError);
}

TEST_CASE("csv writes round-trip every double exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Matrix m(20, 7);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = u(rng) * std::pow(10.0, (i % 9) - 4);
  }
  m(0, 0) = 0.1;
  m(0, 1) = -0.0;
  m(0, 2) = 1e-310;
  const ComponentData original(m, FunctionalGrid::uniform(7));
  std::ostringstream out;
  csv::write_component(out, original);
  const auto back = csv::parse_component(out.str());
  REQUIRE(back.grid().has_value());
  CHECK(*back.grid() == *original.grid());
  CHECK(back.values() == original.values());

  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::format_double(150.0) == "150");
}

TEST_CASE("kernel spec strings") {
  const auto g = parse_kernel_spec("gaussian:150", Quadrature::Trapezoid);
  CHECK(std::get<Gaussian>(g.kind).eta_sq == 150.0);
  CHECK(g.quadrature == Quadrature::Trapezoid);
  CHECK(format_kernel_spec(g) == "gaussian:150");
  CHECK(std::holds_alternative<Linear>(parse_kernel_spec("linear").kind));
  CHECK_THROWS_AS(parse_kernel_spec("gaussian:"), ConfigurationError);
  CHECK_THROWS_AS(parse_kernel_spec("gaussian:-2"), ConfigurationError);
  CHECK_THROWS_AS(parse_kernel_spec("gaussian:1x"), ConfigurationError);
  CHECK_THROWS_AS(parse_kernel_spec("polynomial:2"), ConfigurationError);
  CHECK_THROWS_AS(parse_kernel_spec("linear", Quadrature::Trapezoid), ConfigurationError);
}

TEST_CASE("study config from json") {
  const auto cfg = study_config_from_json(nlohmann::json::parse(R"({
    "model": {"f": "cube", "lambda": 0.25, "n": 60, "grid_points": 21, "num_terms": 10},
    "methods": ["t1", "t2"], "scheme": "sinusoidal", "gamma": 0.5,
    "kernels": ["gaussian:1", "linear", "gaussian:2"], "quadrature": ["trapezoid", "none", "none"],
    "alpha": 0.1, "permutations": 30, "replicates": 7, "seed": 11, "threads": 2
  })"));
  CHECK(cfg.model.f == sim::Dependence::Cube);
  CHECK(cfg.model.lambda == 0.25);
  CHECK(cfg.model.n == 60);
  CHECK(cfg.model.grid.size() == 21);
  CHECK(cfg.model.num_terms == 10);
  CHECK(cfg.methods.size() == 2);
  CHECK(cfg.scheme.kind == WeightKind::Sinusoidal);
  CHECK(cfg.scheme.gamma == 0.5);
  CHECK(cfg.kernels[0].quadrature == Quadrature::Trapezoid);
  CHECK(std::holds_alternative<Linear>(cfg.kernels[1].kind));
  CHECK(cfg.alpha == 0.1);
  CHECK(cfg.permutations == 30);
  CHECK(cfg.replicates == 7);
  CHECK(cfg.seed == 11);
  CHECK(cfg.threads == 2);

  // Echo and re-read gives the same config.
  const auto again = study_config_from_json(to_json(cfg));
  CHECK(to_json(again) == to_json(cfg));

  const auto defaults = study_config_from_json(nlohmann::json::object());
  CHECK(defaults.replicates == 200);
  CHECK(defaults.model.grid.size() == 51);
  CHECK(std::get<Gaussian>(defaults.kernels[2].kind).eta_sq == 150.0);
  CHECK(defaults.kernels[2].quadrature == Quadrature::Trapezoid);

  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"replicates": 0})")),
                  ConfigurationError);
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"bogus": 1})")),
                  ConfigurationError);
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"model": {"f": "nosuch"}})")),
                  ConfigurationError);
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"kernels": ["linear", "linear"]})")),
                  ConfigurationError);
}

TEST_CASE("study config from toml") {
  const auto j = toml_to_json(R"(
methods = ["t2"]
replicates = 5
seed = 3
kernels = "gaussian:0.5"
quadrature = "trapezoid"

[model]
f = "sin"
lambda = 1.0
n = 30
)");
  const auto cfg = study_config_from_json(j);
  CHECK(cfg.model.f == sim::Dependence::Sin);
  CHECK(cfg.model.lambda == 1.0);
  CHECK(cfg.model.n == 30);
  CHECK(cfg.replicates == 5);
  CHECK(cfg.methods.front() == sim::Method::T2);
  CHECK(std::get<Gaussian>(cfg.kernels[0].kind).eta_sq == 0.5);
  CHECK_THROWS_AS(toml_to_json("x = = 1"), ConfigurationError);

  const auto dir = std::filesystem::temp_directory_path() / "dhsic_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "study.toml") << "replicates = 9\n[model]\nlambda = 0.5\n";
    std::ofstream(dir / "study.json") << R"({"replicates": 4})";
  }
  CHECK(load_study_config(dir / "study.toml").replicates == 9);
  CHECK(load_study_config(dir / "study.toml").model.lambda == 0.5);
  CHECK(load_study_config(dir / "study.json").replicates == 4);
  CHECK_THROWS_AS(load_study_config(dir / "missing.json"), ConfigurationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("test result json has the contract fields") {
  TestResult r;
  r.statistic = 0.25;
  r.scale = 0.5;
  r.z_score = 1.5;
  r.p_value = 0.13;
  r.n = 10;
  r.d = 3;
  r.gamma = 0.32;
  r.scheme = WeightKind::Alternating;
  const auto j = to_json(r);
  for (const char* key : {"method", "statistic", "scale", "z_score", "p_value", "alpha", "reject",
                          "n", "d", "gamma", "scheme", "num_permutations", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["method"] == "asymptotic");
  CHECK(j["num_permutations"].is_null());
  CHECK(j["scheme"] == "alternating");
}

TEST_CASE("sha256 of a file") {
  const auto path = std::filesystem::temp_directory_path() / "dhsic_sha_test.txt";
  std::ofstream(path) << "abc";
  CHECK(sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(path);
}
