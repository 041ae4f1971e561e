#include "dhsic/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "dhsic/config.hpp"
#include "dhsic/csv.hpp"
#include "dhsic/error.hpp"
#include "dhsic/independence_test.hpp"
#include "dhsic/parallel.hpp"
#include "dhsic/report.hpp"
#include "dhsic/sim.hpp"

namespace dhsic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TestArgs {
  std::vector<std::string> data;
  std::vector<std::string> kernels{"gaussian:150"};
  std::string quadrature = "auto";
  std::string header = "auto";
  std::string method = "asymptotic";
  double gamma = 0.32;
  std::string scheme = "alternating";
  double alpha = 0.05;
  std::size_t permutations = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool no_manifest = false;
};

struct SimulateArgs {
  std::string config;
  std::optional<double> lambda;
  std::optional<std::string> f;
  std::optional<long long> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> permutations;
  std::vector<std::string> methods;
  unsigned threads = 1;
  std::string out_prefix = "dhsic_study";
  std::string dump_data;
  bool no_manifest = false;
};

struct BenchmarkArgs {
  std::vector<std::string> sizes;
  std::vector<std::string> methods{"t1", "t2"};
  int repeats = 3;
  std::size_t permutations = 100;
  std::uint64_t seed = 1;
  bool json_output = false;
};

json manifest(std::string_view subcommand, json config, json inputs, std::uint64_t seed) {
  return json{{"subcommand", subcommand},
              {"config", std::move(config)},
              {"inputs", std::move(inputs)},
              {"seed", seed},
              {"version", kVersion},
              {"created_at", utc_timestamp()}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

int cmd_test(const TestArgs& a, std::ostream& out) {
  if (a.data.size() < 2) {
    throw InvalidInput("need at least 2 --data files (one per component), got " +
                       std::to_string(a.data.size()));
  }
  const auto header = csv::parse_header_mode(a.header);
  std::vector<ComponentData> components;
  json inputs = json::array();
  for (const auto& path : a.data) {
    components.push_back(csv::read_component(path, header));
    const auto& c = components.back();
    inputs.push_back({{"path", path},
                      {"sha256", sha256_file(path)},
                      {"rows", c.rows()},
                      {"cols", c.dim()},
                      {"grid", c.grid().has_value()}});
  }
  for (std::size_t l = 1; l < components.size(); ++l) {
    if (components[l].rows() != components[0].rows()) {
      throw InvalidInput(a.data[0] + " has " + std::to_string(components[0].rows()) +
                         " rows but " + a.data[l] + " has " +
                         std::to_string(components[l].rows()) + " rows");
    }
  }
  const auto d = components.size();
  if (a.kernels.size() != 1 && a.kernels.size() != d) {
    throw ConfigurationError("give one --kernel (broadcast) or one per --data file; got " +
                             std::to_string(a.kernels.size()) + " for " + std::to_string(d) +
                             " files");
  }
  std::vector<KernelSpec> specs;
  for (std::size_t l = 0; l < d; ++l) {
    const auto& text = a.kernels[a.kernels.size() == 1 ? 0 : l];
    Quadrature q = Quadrature::None;
    if (a.quadrature == "auto") {
      q = components[l].grid() && text != "linear" ? Quadrature::Trapezoid : Quadrature::None;
    } else {
      q = parse_quadrature(a.quadrature);
      if (q == Quadrature::Trapezoid && !components[l].grid()) {
        throw ConfigurationError(a.data[l] + " has no grid header; trapezoid quadrature needs one");
      }
    }
    specs.push_back(parse_kernel_spec(text, q));
  }
  const Sample sample(std::move(components));

  TestResult result;
  json config{{"method", a.method}, {"alpha", a.alpha}, {"header", a.header}};
  json kernel_names = json::array();
  json quadratures = json::array();
  for (const auto& s : specs) {
    kernel_names.push_back(format_kernel_spec(s));
    quadratures.push_back(std::string(to_string(s.quadrature)));
  }
  config["kernels"] = kernel_names;
  config["quadrature"] = quadratures;
  if (a.method == "asymptotic") {
    WeightScheme scheme{parse_weight_kind(a.scheme), a.gamma};
    if (scheme.kind == WeightKind::ConstantOne) {
      throw ConfigurationError("the asymptotic test needs --scheme alternating or sinusoidal");
    }
    config["scheme"] = a.scheme;
    config["gamma"] = a.gamma;
    result = asymptotic_test(sample, specs, scheme, a.alpha, a.threads);
  } else {
    PermutationOptions options{a.permutations, a.alpha, a.seed, a.threads};
    config["permutations"] = a.permutations;
    config["seed"] = a.seed;
    result = permutation_test(sample, specs, options);
  }
  auto report = to_json(result);
  if (!a.no_manifest) report["manifest"] = manifest("test", config, inputs, a.seed);
  out << report.dump(2) << '\n';
  return kOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  sim::StudyConfig cfg;
  json inputs = json::array();
  if (!a.config.empty()) {
    cfg = load_study_config(a.config);
    inputs.push_back({{"path", a.config}, {"sha256", sha256_file(a.config)}});
  }
  if (a.lambda) cfg.model.lambda = *a.lambda;
  if (a.f) cfg.model.f = sim::parse_dependence(*a.f);
  if (a.replicates) {
    if (*a.replicates < 1) throw ConfigurationError("--replicates must be >= 1");
    cfg.replicates = static_cast<std::size_t>(*a.replicates);
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.permutations) cfg.permutations = *a.permutations;
  if (!a.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : a.methods) cfg.methods.push_back(sim::parse_method(m));
  }
  cfg.threads = a.threads;
  cfg.validate();

  const auto report = sim::run_study(cfg);
  auto report_json = to_json(report, !a.no_manifest);
  if (!a.no_manifest) report_json["manifest"] = manifest("simulate", to_json(cfg), inputs, cfg.seed);
  write_text(a.out_prefix + ".json", report_json.dump(2) + "\n");
  write_text(a.out_prefix + ".csv", study_csv(report));

  if (!a.dump_data.empty()) {
    fs::create_directories(a.dump_data);
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      auto model = cfg.model;
      model.seed = sim::replicate_model_seed(cfg.seed, r);
      const auto sample = sim::generate_sample(model);
      for (std::size_t l = 0; l < sample.d(); ++l) {
        char name[64];
        std::snprintf(name, sizeof name, "replicate_%04zu_component_%zu.csv", r, l + 1);
        csv::write_component(fs::path(a.dump_data) / name, sample[l]);
      }
    }
  }
  out << table_row(report) << '\n';
  return kOk;
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
  if (a.sizes.empty()) throw ConfigurationError("--n needs at least one sample size");
  if (a.repeats < 1) throw ConfigurationError("--repeats must be >= 1");
  std::vector<std::size_t> sizes;
  for (const auto& s : a.sizes) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || value < 2) {
      throw ConfigurationError("invalid sample size '" + s + "' (need an integer >= 2)");
    }
    sizes.push_back(value);
  }
  std::vector<sim::Method> methods;
  for (const auto& m : a.methods) methods.push_back(sim::parse_method(m));
  if (methods.empty()) throw ConfigurationError("--method needs at least one of t1, t2");

  const auto kernels = sim::StudyConfig::default_kernels();
  const auto scheme = WeightScheme::alternating(0.32);
  json rows = json::array();
  std::ostringstream table;
  table << "n\tmethod\tmin_s\tmedian_s\tmax_s\n";
  for (auto n : sizes) {
    sim::ModelConfig model;
    model.n = n;
    model.seed = a.seed;
    const auto sample = sim::generate_sample(model);
    std::map<sim::Method, double> medians;
    for (auto method : methods) {
      std::vector<double> seconds;
      for (int rep = 0; rep < a.repeats; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        const auto grams = build_gram_stack(sample, kernels);
        if (method == sim::Method::T1) {
          volatile double sink = estimate(grams, scheme).d_hat;
          (void)sink;
        } else {
          PermutationOptions options;
          options.num_permutations = a.permutations;
          options.seed = a.seed;
          volatile double sink = permutation_test(grams, options).p_value;
          (void)sink;
        }
        seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
      std::sort(seconds.begin(), seconds.end());
      const double median =
          seconds.size() % 2 == 1
              ? seconds[seconds.size() / 2]
              : 0.5 * (seconds[seconds.size() / 2 - 1] + seconds[seconds.size() / 2]);
      medians[method] = median;
      rows.push_back({{"n", n},
                      {"method", std::string(sim::to_string(method))},
                      {"repeats", a.repeats},
                      {"min_seconds", seconds.front()},
                      {"median_seconds", median},
                      {"max_seconds", seconds.back()}});
      char line[160];
      std::snprintf(line, sizeof line, "%zu\t%s\t%.6f\t%.6f\t%.6f\n", n,
                    std::string(sim::to_string(method)).c_str(), seconds.front(), median,
                    seconds.back());
      table << line;
    }
    if (medians.contains(sim::Method::T1) && medians.contains(sim::Method::T2)) {
      char line[128];
      std::snprintf(line, sizeof line, "# n=%zu t2/t1 median ratio %.1f\n", n,
                    medians[sim::Method::T2] / medians[sim::Method::T1]);
      table << line;
    }
  }
  if (a.json_output) {
    out << json{{"permutations", a.permutations}, {"rows", rows}}.dump(2) << '\n';
  } else {
    out << table.str();
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint independence tests based on the d-variable HSIC", "dhsic"};
  app.require_subcommand(1);
  const unsigned env_threads = default_thread_count();

  TestArgs test_args;
  test_args.threads = env_threads;
  auto* test = app.add_subcommand("test", "Test joint independence of d components (CSV files)");
  test->add_option("--data", test_args.data, "Component CSV file, repeated once per component")
      ->required();
  test->add_option("--kernel", test_args.kernels, "gaussian:<eta_sq> or linear, once or per file");
  test->add_option("--quadrature", test_args.quadrature, "auto, trapezoid or none")
      ->check(CLI::IsMember({"auto", "trapezoid", "none"}));
  test->add_option("--header", test_args.header, "Grid header row: auto, yes or no")
      ->check(CLI::IsMember({"auto", "yes", "no"}));
  test->add_option("--method", test_args.method, "asymptotic or permutation")
      ->check(CLI::IsMember({"asymptotic", "permutation"}));
  test->add_option("--gamma", test_args.gamma, "Weight parameter in (0, 1]");
  test->add_option("--scheme", test_args.scheme, "alternating or sinusoidal")
      ->check(CLI::IsMember({"alternating", "sinusoidal"}));
  test->add_option("--alpha", test_args.alpha, "Significance level");
  test->add_option("--permutations", test_args.permutations, "Permutations for the permutation test");
  test->add_option("--seed", test_args.seed, "Seed for the permutation test");
  test->add_option("--threads", test_args.threads, "Worker threads (default: $DHSIC_THREADS or 1)");
  test->add_flag("--no-manifest", test_args.no_manifest, "Omit the run manifest");

  SimulateArgs sim_args;
  sim_args.threads = env_threads;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo size/power study on the functional models");
  simulate->add_option("--config", sim_args.config, "Study config (.json or .toml)");
  simulate->add_option("--lambda", sim_args.lambda, "Dependence level");
  simulate->add_option("--f", sim_args.f, "square, cube, square_cos, sin or identity");
  simulate->add_option("--replicates", sim_args.replicates, "Number of replicates");
  simulate->add_option("--seed", sim_args.seed, "Study seed");
  simulate->add_option("--permutations", sim_args.permutations, "Permutations for t2");
  simulate->add_option("--methods", sim_args.methods, "Comma separated: t1,t2")->delimiter(',');
  simulate->add_option("--threads", sim_args.threads, "Worker threads (default: $DHSIC_THREADS or 1)");
  simulate->add_option("--out-prefix", sim_args.out_prefix, "Writes <prefix>.json and <prefix>.csv");
  simulate->add_option("--dump-data", sim_args.dump_data, "Directory for per-replicate component CSVs");
  simulate->add_flag("--no-manifest", sim_args.no_manifest, "Omit manifest and wall time");

  BenchmarkArgs bench_args;
  auto* benchmark = app.add_subcommand("benchmark", "Time t1 against t2");
  benchmark->add_option("--n", bench_args.sizes, "Comma separated sample sizes")
      ->required()
      ->delimiter(',');
  benchmark->add_option("--method", bench_args.methods, "Comma separated: t1,t2")->delimiter(',');
  benchmark->add_option("--repeats", bench_args.repeats, "Timed repeats per cell");
  benchmark->add_option("--permutations", bench_args.permutations, "Permutations for t2");
  benchmark->add_option("--seed", bench_args.seed, "Seed of the benchmark sample");
  benchmark->add_flag("--json", bench_args.json_output, "Emit JSON instead of a table");

  std::vector<std::string> argv_storage{"dhsic"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*test) return cmd_test(test_args, out);
    if (*simulate) return cmd_simulate(sim_args, out);
    if (*benchmark) return cmd_benchmark(bench_args, out);
  } catch (const DegenerateVariance& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace dhsic::cli
