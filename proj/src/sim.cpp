#include "dhsic/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "dhsic/error.hpp"
#include "dhsic/parallel.hpp"
#include "dhsic/rng.hpp"

namespace dhsic::sim {

std::string_view to_string(Dependence f) noexcept {
  switch (f) {
    case Dependence::Square: return "square";
    case Dependence::Cube: return "cube";
    case Dependence::SquareCos: return "square_cos";
    case Dependence::Sin: return "sin";
    case Dependence::Identity: return "identity";
  }
  return "unknown";
}

Dependence parse_dependence(std::string_view name) {
  if (name == "square" || name == "x2") return Dependence::Square;
  if (name == "cube" || name == "x3") return Dependence::Cube;
  if (name == "square_cos" || name == "x2cos") return Dependence::SquareCos;
  if (name == "sin") return Dependence::Sin;
  if (name == "identity" || name == "x") return Dependence::Identity;
  throw ConfigurationError("unknown dependence function '" + std::string(name) +
                           "'; valid identifiers: square (x2), cube (x3), square_cos (x2cos), "
                           "sin, identity (x)");
}

double apply(Dependence f, double x) noexcept {
  switch (f) {
    case Dependence::Square: return x * x;
    case Dependence::Cube: return x * x * x;
    case Dependence::SquareCos: return x * x * std::cos(x);
    case Dependence::Sin: return std::sin(x);
    case Dependence::Identity: return x;
  }
  return x;
}

void ModelConfig::validate() const {
  if (n < 1) throw ConfigurationError("model needs n >= 1");
  if (num_terms < 1) throw ConfigurationError("model needs at least one cosine term");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigurationError("lambda must be a finite nonnegative number");
  }
}

std::uint64_t coefficient_stream_key(std::uint64_t seed, std::size_t component,
                                     std::size_t observation) noexcept {
  return derive_key(seed, {component, observation});
}

ModelCoefficients draw_coefficients(const ModelConfig& cfg) {
  cfg.validate();
  ModelCoefficients out;
  for (std::size_t c = 0; c < kModelComponents; ++c) {
    auto& m = out.values[c];
    m.resize(static_cast<Eigen::Index>(cfg.n), static_cast<Eigen::Index>(cfg.num_terms));
    for (std::size_t i = 0; i < cfg.n; ++i) {
      CounterRng rng(coefficient_stream_key(cfg.seed, c, i));
      for (std::size_t k = 0; k < cfg.num_terms; ++k) m(i, k) = rng.uniform();
    }
  }
  return out;
}

Matrix cosine_basis(const FunctionalGrid& grid, std::size_t num_terms) {
  const auto t = grid.points();
  Matrix basis(num_terms, t.size());
  for (std::size_t k = 0; k < num_terms; ++k) {
    for (std::size_t m = 0; m < t.size(); ++m) {
      basis(k, m) =
          std::numbers::sqrt2 * std::cos(static_cast<double>(k + 1) * std::numbers::pi * t[m]);
    }
  }
  return basis;
}

Sample synthesize(const ModelConfig& cfg, const ModelCoefficients& coeffs) {
  cfg.validate();
  for (const auto& m : coeffs.values) {
    if (static_cast<std::size_t>(m.rows()) != cfg.n ||
        static_cast<std::size_t>(m.cols()) != cfg.num_terms) {
      throw InvalidInput("coefficient matrix does not match the model's n and num_terms");
    }
  }
  const Matrix basis = cosine_basis(cfg.grid, cfg.num_terms);
  Matrix x1 = coeffs.values[0] * basis;
  Matrix x2 = coeffs.values[1] * basis;
  Matrix x3 = coeffs.values[2] * basis;
  if (cfg.lambda != 0.0) {
    for (Eigen::Index i = 0; i < x1.rows(); ++i) {
      for (Eigen::Index m = 0; m < x1.cols(); ++m) {
        const double f1 = cfg.lambda * apply(cfg.f, x1(i, m));
        x2(i, m) += f1;
        x3(i, m) += f1 + cfg.lambda * apply(cfg.f, x2(i, m));
      }
    }
  }
  std::vector<ComponentData> components;
  components.emplace_back(std::move(x1), cfg.grid);
  components.emplace_back(std::move(x2), cfg.grid);
  components.emplace_back(std::move(x3), cfg.grid);
  return Sample(std::move(components));
}

Sample generate_sample(const ModelConfig& cfg) { return synthesize(cfg, draw_coefficients(cfg)); }

std::string_view to_string(Method m) noexcept { return m == Method::T1 ? "t1" : "t2"; }

Method parse_method(std::string_view name) {
  if (name == "t1" || name == "T1" || name == "asymptotic") return Method::T1;
  if (name == "t2" || name == "T2" || name == "permutation") return Method::T2;
  throw ConfigurationError("unknown method '" + std::string(name) + "' (expected t1 or t2)");
}

std::vector<KernelSpec> StudyConfig::default_kernels() {
  return std::vector<KernelSpec>(kModelComponents,
                                 KernelSpec::gaussian(150.0, Quadrature::Trapezoid));
}

void StudyConfig::validate() const {
  model.validate();
  if (methods.empty()) throw ConfigurationError("study needs at least one method");
  if (replicates < 1) throw ConfigurationError("replicates must be >= 1");
  if (kernels.size() != kModelComponents) {
    throw ConfigurationError("study needs exactly " + std::to_string(kModelComponents) +
                             " kernel specs, got " + std::to_string(kernels.size()));
  }
  for (const auto& k : kernels) k.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigurationError("alpha must lie in (0, 1)");
  for (auto m : methods) {
    if (m == Method::T1) {
      scheme.validate();
      if (scheme.kind == WeightKind::ConstantOne) {
        throw ConfigurationError("T1 needs the alternating or sinusoidal scheme");
      }
    }
    if (m == Method::T2 && permutations < 1) {
      throw ConfigurationError("T2 needs at least one permutation");
    }
  }
}

std::uint64_t replicate_model_seed(std::uint64_t study_seed, std::size_t replicate) noexcept {
  return derive_key(study_seed, {replicate, 0});
}

std::uint64_t replicate_permutation_seed(std::uint64_t study_seed, std::size_t replicate) noexcept {
  return derive_key(study_seed, {replicate, 1});
}

const MethodRate& StudyReport::rate_of(Method m) const {
  for (const auto& r : rates) {
    if (r.method == m) return r;
  }
  throw MisuseError("method " + std::string(to_string(m)) + " was not part of the study");
}

namespace {

[[noreturn]] void rethrow_for_replicate(std::exception_ptr error, std::size_t replicate) {
  const std::string prefix = "replicate " + std::to_string(replicate) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const DegenerateVariance& e) {
    throw DegenerateVariance(prefix + e.what());
  } catch (const DegenerateScheme& e) {
    throw DegenerateScheme(prefix + e.what());
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(prefix + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(prefix + e.what());
  } catch (const MisuseError& e) {
    throw MisuseError(prefix + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
}

// Runs body(r) for every replicate; the lowest failing index is rethrown.
// Replicates above a known failure are skipped, those below always run, so
// the reported index does not depend on the thread count.
template <class Body>
void for_each_replicate(std::size_t replicates, unsigned threads, Body&& body) {
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};
  std::vector<std::exception_ptr> errors(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    if (r > first_failure.load()) return;
    try {
      body(r);
    } catch (...) {
      errors[r] = std::current_exception();
      auto seen = first_failure.load();
      while (r < seen && !first_failure.compare_exchange_weak(seen, r)) {
      }
    }
  });
  const auto failed = first_failure.load();
  if (failed < replicates) rethrow_for_replicate(errors[failed], failed);
}

ModelConfig replicate_model(const StudyConfig& cfg, std::size_t r) {
  ModelConfig model = cfg.model;
  model.seed = replicate_model_seed(cfg.seed, r);
  return model;
}

}  // namespace

StudyReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t num_methods = cfg.methods.size();
  std::vector<char> rejected(cfg.replicates * num_methods, 0);

  for_each_replicate(cfg.replicates, cfg.threads, [&](std::size_t r) {
    const Sample sample = generate_sample(replicate_model(cfg, r));
    const GramStack grams = build_gram_stack(sample, cfg.kernels);
    for (std::size_t k = 0; k < num_methods; ++k) {
      TestResult result;
      if (cfg.methods[k] == Method::T1) {
        result = asymptotic_test(grams, cfg.scheme, cfg.alpha);
      } else {
        PermutationOptions options;
        options.num_permutations = cfg.permutations;
        options.alpha = cfg.alpha;
        options.seed = replicate_permutation_seed(cfg.seed, r);
        result = permutation_test(grams, options);
      }
      rejected[r * num_methods + k] = result.reject ? 1 : 0;
    }
  });

  StudyReport report;
  report.config = cfg;
  report.replicates = cfg.replicates;
  for (std::size_t k = 0; k < num_methods; ++k) {
    MethodRate rate{cfg.methods[k]};
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      rate.rejections += static_cast<std::size_t>(rejected[r * num_methods + k]);
    }
    rate.rate = static_cast<double>(rate.rejections) / static_cast<double>(cfg.replicates);
    report.rates.push_back(rate);
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<double> null_distribution_probe(const StudyConfig& cfg) {
  if (cfg.model.lambda != 0.0) {
    throw MisuseError("the null distribution probe needs lambda = 0, got " +
                      std::to_string(cfg.model.lambda));
  }
  StudyConfig t1 = cfg;
  t1.methods = {Method::T1};
  t1.validate();
  std::vector<double> z(cfg.replicates);
  for_each_replicate(cfg.replicates, cfg.threads, [&](std::size_t r) {
    const Sample sample = generate_sample(replicate_model(t1, r));
    const GramStack grams = build_gram_stack(sample, t1.kernels);
    z[r] = *asymptotic_test(grams, t1.scheme, t1.alpha).z_score;
  });
  return z;
}

}  // namespace dhsic::sim
