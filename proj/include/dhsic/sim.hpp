#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dhsic/estimator.hpp"
#include "dhsic/independence_test.hpp"
#include "dhsic/kernel.hpp"

namespace dhsic::sim {

/// f in the dependence models, applied pointwise in t.
enum class Dependence { Square, Cube, SquareCos, Sin, Identity };

std::string_view to_string(Dependence f) noexcept;
/// Accepts the canonical names (square, cube, square_cos, sin, identity)
/// and the spellings x2, x3, x2cos. Throws ConfigurationError listing them.
Dependence parse_dependence(std::string_view name);
double apply(Dependence f, double x) noexcept;

/// Three functional variables built from cosine series with Uniform[0,1]
/// coefficients:
///   X1(t) = sqrt2 sum_k a_k cos(k pi t)
///   X2(t) = sqrt2 sum_k b_k cos(k pi t) + lambda f(X1(t))
///   X3(t) = sqrt2 sum_k c_k cos(k pi t) + lambda f(X1(t)) + lambda f(X2(t))
/// lambda = 0 gives joint independence.
struct ModelConfig {
  Dependence f = Dependence::Square;
  double lambda = 0.0;
  std::size_t n = 100;
  FunctionalGrid grid = FunctionalGrid::uniform(51);
  std::size_t num_terms = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr std::size_t kModelComponents = 3;

/// n x num_terms coefficient draws per component.
struct ModelCoefficients {
  std::array<Matrix, kModelComponents> values;
};

/// Stream key for the coefficients of one observation of one component.
/// Each stream supplies exactly num_terms draws.
std::uint64_t coefficient_stream_key(std::uint64_t seed, std::size_t component,
                                     std::size_t observation) noexcept;

ModelCoefficients draw_coefficients(const ModelConfig& cfg);

/// sqrt2 cos(k pi t_m), num_terms x grid size.
Matrix cosine_basis(const FunctionalGrid& grid, std::size_t num_terms);

/// Evaluates the model for given coefficients.
Sample synthesize(const ModelConfig& cfg, const ModelCoefficients& coeffs);

Sample generate_sample(const ModelConfig& cfg);

/// T1 = asymptotic modified test, T2 = permutation test.
enum class Method { T1, T2 };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct StudyConfig {
  ModelConfig model;
  std::vector<Method> methods{Method::T1};
  WeightScheme scheme = WeightScheme::alternating(0.32);
  std::vector<KernelSpec> kernels = default_kernels();
  double alpha = 0.05;
  std::size_t permutations = 100;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  /// Gaussian eta^2 = 150 with trapezoid quadrature on all three components.
  static std::vector<KernelSpec> default_kernels();

  void validate() const;
};

/// Model seed of replicate r; model.seed in a StudyConfig is ignored.
std::uint64_t replicate_model_seed(std::uint64_t study_seed, std::size_t replicate) noexcept;
std::uint64_t replicate_permutation_seed(std::uint64_t study_seed, std::size_t replicate) noexcept;

struct MethodRate {
  Method method;
  std::size_t rejections = 0;
  double rate = 0.0;
};

struct StudyReport {
  StudyConfig config;
  std::vector<MethodRate> rates;
  std::size_t replicates = 0;
  double wall_time_seconds = 0.0;

  const MethodRate& rate_of(Method m) const;
};

/// Runs cfg.replicates independent replicates, possibly in parallel. The first
/// failing replicate (lowest index) aborts the study; its error is rethrown
/// with the same type and a "replicate <r>: " prefix.
StudyReport run_study(const StudyConfig& cfg);

/// z-scores sqrt(n) D_hat / sigma_hat of every replicate. lambda must be 0.
std::vector<double> null_distribution_probe(const StudyConfig& cfg);

}  // namespace dhsic::sim
