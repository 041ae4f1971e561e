#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dhsic/kernel.hpp"

namespace dhsic {

enum class WeightKind { Alternating, Sinusoidal, ConstantOne };

std::string_view to_string(WeightKind kind) noexcept;
/// Parses "alternating", "sinusoidal" or "constant"; throws ConfigurationError.
WeightKind parse_weight_kind(std::string_view name);

/// Observation weights w_{i,n}(gamma) for the cross term.
///
///   Alternating   1 + (-1)^i gamma     limit 1 + gamma^2   C = 2, any tau > 0
///   Sinusoidal    1 + sin(i pi gamma)  limit 3/2           C = 2, tau = 1/|sin(pi gamma/2)|
///   ConstantOne   1                    limit 1             (naive estimator only)
///
/// Indices are 1-based. gamma must lie in (0, 1]; ConstantOne ignores it.
struct WeightScheme {
  WeightKind kind = WeightKind::Alternating;
  double gamma = 0.32;

  static WeightScheme alternating(double gamma) { return {WeightKind::Alternating, gamma}; }
  static WeightScheme sinusoidal(double gamma) { return {WeightKind::Sinusoidal, gamma}; }
  static WeightScheme constant_one() { return {WeightKind::ConstantOne, 1.0}; }

  /// Throws ConfigurationError when gamma is outside (0, 1].
  void validate() const;
};

double weight_at(const WeightScheme& scheme, std::size_t i, std::size_t n);

/// w_{1,n}, ..., w_{n,n}.
std::vector<double> weights(const WeightScheme& scheme, std::size_t n);

/// lim (1/n) sum_i w_{i,n}^2.
double w_squared_limit(const WeightScheme& scheme);

/// Explicit user weights with an asserted squared-mean limit.
class CustomWeights {
 public:
  /// Throws InvalidInput on nonpositive or non-finite weights.
  CustomWeights(std::vector<double> weights, double w_squared_limit);

  std::span<const double> values() const noexcept { return weights_; }
  double w_squared_limit() const noexcept { return limit_; }

  /// n |mean(w) - 1| <= tau.
  bool satisfies_mean_bound(double tau) const;

 private:
  std::vector<double> weights_;
  double limit_;
};

/// Three terms of the V-statistic, cross term already scaled by 2/n^{d+1}.
struct DhsicTerms {
  double joint = 0.0;     ///< (1/n^2) sum_ij prod_l G_l(i,j)
  double marginal = 0.0;  ///< (1/n^{2d}) prod_l sum_ij G_l(i,j)
  double cross = 0.0;     ///< (2/n^{d+1}) sum_i w_i prod_l sum_j G_l(i,j)

  double value() const noexcept { return joint + marginal - cross; }
  double magnitude() const noexcept;
};

/// Tree summation; stable for long vectors.
double pairwise_sum(std::span<const double> values) noexcept;

/// Per-row summaries of a stack, shared by all estimators. O(d n^2).
struct GramSummaries {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> joint_row_sums;          ///< sum_j prod_l G_l(i,j)
  std::vector<double> marginal_row_product;    ///< prod_l (1/n) sum_j G_l(i,j)
  double marginal_product = 1.0;               ///< prod_l (1/n^2) sum_ij G_l(i,j)

  explicit GramSummaries(const GramStack& grams);
};

DhsicTerms dhsic_terms(const GramSummaries& s, std::span<const double> weights);

double dhsic_naive(const GramStack& grams);
double dhsic_modified(const GramStack& grams, const WeightScheme& scheme);
double dhsic_modified(const GramStack& grams, const CustomWeights& weights);

/// Empirical variance of r_i = (1/n) sum_j prod_l G_l(i,j).
double alpha_hat_sq(const GramStack& grams);
double alpha_hat_sq(const GramSummaries& s);

/// 4 (w^2 - 1) alpha_sq; throws DegenerateScheme for ConstantOne.
double sigma_hat_sq(double alpha_sq, const WeightScheme& scheme);
double sigma_hat_sq(double alpha_sq, double w_squared_limit);

struct EstimateBundle {
  double d_hat = 0.0;
  double alpha_hat_sq = 0.0;
  double sigma_hat_sq = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  WeightScheme scheme;
  DhsicTerms terms;
};

/// Modified statistic and its null variance estimate in one pass.
EstimateBundle estimate(const GramStack& grams, const WeightScheme& scheme);

}  // namespace dhsic
