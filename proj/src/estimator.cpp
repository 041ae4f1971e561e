#include "dhsic/estimator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dhsic/error.hpp"

namespace dhsic {

std::string_view to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::Alternating: return "alternating";
    case WeightKind::Sinusoidal: return "sinusoidal";
    case WeightKind::ConstantOne: return "constant";
  }
  return "unknown";
}

WeightKind parse_weight_kind(std::string_view name) {
  if (name == "alternating") return WeightKind::Alternating;
  if (name == "sinusoidal") return WeightKind::Sinusoidal;
  if (name == "constant" || name == "constant_one") return WeightKind::ConstantOne;
  throw ConfigurationError("unknown weight scheme '" + std::string(name) +
                           "' (expected alternating, sinusoidal or constant)");
}

void WeightScheme::validate() const {
  if (kind == WeightKind::ConstantOne) return;
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ConfigurationError("gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
}

double weight_at(const WeightScheme& scheme, std::size_t i, std::size_t /*n*/) {
  switch (scheme.kind) {
    case WeightKind::Alternating: return i % 2 == 0 ? 1.0 + scheme.gamma : 1.0 - scheme.gamma;
    case WeightKind::Sinusoidal:
      return 1.0 + std::sin(static_cast<double>(i) * std::numbers::pi * scheme.gamma);
    case WeightKind::ConstantOne: return 1.0;
  }
  return 1.0;
}

std::vector<double> weights(const WeightScheme& scheme, std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = weight_at(scheme, i + 1, n);
  return w;
}

double w_squared_limit(const WeightScheme& scheme) {
  switch (scheme.kind) {
    case WeightKind::Alternating: return 1.0 + scheme.gamma * scheme.gamma;
    case WeightKind::Sinusoidal: return 1.5;
    case WeightKind::ConstantOne: return 1.0;
  }
  return 1.0;
}

CustomWeights::CustomWeights(std::vector<double> weights, double w_squared_limit)
    : weights_(std::move(weights)), limit_(w_squared_limit) {
  if (weights_.empty()) throw InvalidInput("custom weights are empty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidInput("custom weight " + std::to_string(i + 1) + " is not positive");
    }
  }
  if (!std::isfinite(limit_)) throw InvalidInput("custom weight limit is not finite");
}

bool CustomWeights::satisfies_mean_bound(double tau) const {
  const auto n = static_cast<double>(weights_.size());
  return n * std::abs(pairwise_sum(weights_) / n - 1.0) <= tau;
}

double DhsicTerms::magnitude() const noexcept {
  return std::abs(joint) + std::abs(marginal) + std::abs(cross);
}

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

GramSummaries::GramSummaries(const GramStack& grams)
    : n(grams.n()), d(grams.d()), joint_row_sums(n), marginal_row_product(n, 1.0) {
  const auto nd = static_cast<double>(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double product = 1.0;
      for (const auto& g : grams.grams()) product *= g(i, j);
      row[j] = product;
    }
    joint_row_sums[i] = pairwise_sum(row);
  }
  std::vector<double> component_row_sums(n);
  for (const auto& g : grams.grams()) {
    for (std::size_t i = 0; i < n; ++i) {
      component_row_sums[i] = pairwise_sum({g.data() + i * n, n});
      marginal_row_product[i] *= component_row_sums[i] / nd;
    }
    marginal_product *= pairwise_sum(component_row_sums) / (nd * nd);
  }
}

DhsicTerms dhsic_terms(const GramSummaries& s, std::span<const double> weights) {
  if (weights.size() != s.n) {
    throw InvalidInput("expected " + std::to_string(s.n) + " weights, got " +
                       std::to_string(weights.size()));
  }
  const auto nd = static_cast<double>(s.n);
  std::vector<double> weighted(s.n);
  for (std::size_t i = 0; i < s.n; ++i) weighted[i] = weights[i] * s.marginal_row_product[i];
  DhsicTerms t;
  t.joint = pairwise_sum(s.joint_row_sums) / (nd * nd);
  t.marginal = s.marginal_product;
  t.cross = 2.0 * pairwise_sum(weighted) / nd;
  return t;
}

double dhsic_naive(const GramStack& grams) {
  const GramSummaries s(grams);
  const std::vector<double> ones(s.n, 1.0);
  return dhsic_terms(s, ones).value();
}

double dhsic_modified(const GramStack& grams, const WeightScheme& scheme) {
  scheme.validate();
  const GramSummaries s(grams);
  return dhsic_terms(s, weights(scheme, s.n)).value();
}

double dhsic_modified(const GramStack& grams, const CustomWeights& w) {
  const GramSummaries s(grams);
  return dhsic_terms(s, w.values()).value();
}

double alpha_hat_sq(const GramSummaries& s) {
  const auto nd = static_cast<double>(s.n);
  std::vector<double> r(s.n);
  for (std::size_t i = 0; i < s.n; ++i) r[i] = s.joint_row_sums[i] / nd;
  const double mean = pairwise_sum(r) / nd;
  for (auto& v : r) v = (v - mean) * (v - mean);
  return pairwise_sum(r) / nd;
}

double alpha_hat_sq(const GramStack& grams) { return alpha_hat_sq(GramSummaries(grams)); }

double sigma_hat_sq(double alpha_sq, double limit) {
  if (!(limit > 1.0)) {
    throw DegenerateScheme("weight scheme has w^2 limit " + std::to_string(limit) +
                           " <= 1; the null variance would vanish");
  }
  if (!(alpha_sq >= 0.0)) throw InvalidInput("alpha_hat^2 must be nonnegative");
  return 4.0 * (limit - 1.0) * alpha_sq;
}

double sigma_hat_sq(double alpha_sq, const WeightScheme& scheme) {
  if (scheme.kind == WeightKind::ConstantOne) {
    throw DegenerateScheme("the constant-one scheme gives a zero null variance");
  }
  scheme.validate();
  return sigma_hat_sq(alpha_sq, w_squared_limit(scheme));
}

EstimateBundle estimate(const GramStack& grams, const WeightScheme& scheme) {
  scheme.validate();
  const GramSummaries s(grams);
  EstimateBundle out;
  out.terms = dhsic_terms(s, weights(scheme, s.n));
  out.d_hat = out.terms.value();
  out.alpha_hat_sq = alpha_hat_sq(s);
  out.sigma_hat_sq = sigma_hat_sq(out.alpha_hat_sq, scheme);
  out.n = s.n;
  out.d = s.d;
  out.scheme = scheme;
  return out;
}

}  // namespace dhsic
