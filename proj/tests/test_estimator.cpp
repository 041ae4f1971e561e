#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dhsic/error.hpp"
#include "dhsic/estimator.hpp"
#include "oracle.hpp"

using namespace dhsic;
using dhsic::testing::alpha_hat_sq_oracle;
using dhsic::testing::constant_stack;
using dhsic::testing::dhsic_oracle;

namespace {

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::abs(b)); }

GramStack scaled(const GramStack& g, const std::vector<double>& c) {
  std::vector<Matrix> out;
  for (std::size_t l = 0; l < g.d(); ++l) out.push_back(c[l] * g[l]);
  return GramStack(std::move(out));
}

}  // namespace

TEST_CASE("weights") {
  const auto alt = WeightScheme::alternating(0.32);
  CHECK(weight_at(alt, 1, 10) == doctest::Approx(0.68).epsilon(1e-15));
  CHECK(weight_at(alt, 2, 10) == doctest::Approx(1.32).epsilon(1e-15));
  CHECK(weight_at(WeightScheme::constant_one(), 7, 10) == 1.0);
  CHECK(weight_at(WeightScheme::sinusoidal(0.5), 1, 10) == 2.0);
  CHECK(weights(alt, 4).size() == 4);

  CHECK(w_squared_limit(alt) == doctest::Approx(1.1024).epsilon(1e-15));
  CHECK(w_squared_limit(WeightScheme::sinusoidal(0.1)) == 1.5);
  CHECK(w_squared_limit(WeightScheme::sinusoidal(0.9)) == 1.5);
  CHECK(w_squared_limit(WeightScheme::constant_one()) == 1.0);

  CHECK_THROWS_AS(WeightScheme::alternating(0.0).validate(), ConfigurationError);
  CHECK_THROWS_AS(WeightScheme::alternating(1.5).validate(), ConfigurationError);
  CHECK_NOTHROW(WeightScheme::alternating(1.0).validate());
  CHECK(parse_weight_kind("sinusoidal") == WeightKind::Sinusoidal);
  CHECK_THROWS_AS(parse_weight_kind("cosine"), ConfigurationError);
}

TEST_CASE("squared weight means approach their limits") {
  for (auto scheme : {WeightScheme::alternating(0.32), WeightScheme::sinusoidal(0.37)}) {
    const auto w = weights(scheme, 200000);
    double sq = 0.0;
    for (double v : w) sq += v * v;
    CHECK(sq / static_cast<double>(w.size()) == doctest::Approx(w_squared_limit(scheme)).epsilon(1e-3));
  }
}

TEST_CASE("weight schemes respect their documented mean bound") {
  // Alternating: |sum w - n| <= gamma; sinusoidal: <= 1/|sin(pi gamma / 2)|.
  for (std::size_t n : {1, 2, 7, 100, 1001}) {
    CustomWeights alt(weights(WeightScheme::alternating(0.32), n), 1.1024);
    CHECK(alt.satisfies_mean_bound(0.32 + 1e-12));
    const double gamma = 0.3141;
    CustomWeights sinus(weights(WeightScheme::sinusoidal(gamma), n), 1.5);
    CHECK(sinus.satisfies_mean_bound(1.0 / std::abs(std::sin(M_PI * gamma / 2.0)) + 1e-9));
    for (double w : sinus.values()) CHECK(w < 2.0 + 1e-12);
  }
}

TEST_CASE("custom weights") {
  CHECK_THROWS_AS(CustomWeights({1.0, 0.0}, 1.2), InvalidInput);
  CHECK_THROWS_AS(CustomWeights({1.0, -0.5}, 1.2), InvalidInput);
  CustomWeights w({0.5, 1.5, 0.5, 1.5}, 1.25);
  CHECK(w.satisfies_mean_bound(1e-12));
  CustomWeights off({2.0, 2.0}, 4.0);
  CHECK_FALSE(off.satisfies_mean_bound(1.0));
  CHECK(off.satisfies_mean_bound(2.0));

  std::mt19937_64 rng(17);
  const auto g = testing::random_stack(6, 2, rng);
  const CustomWeights alt(weights(WeightScheme::alternating(0.4), 6), 1.16);
  CHECK(dhsic_modified(g, alt) == dhsic_modified(g, WeightScheme::alternating(0.4)));
  CHECK(sigma_hat_sq(0.5, alt.w_squared_limit()) == doctest::Approx(4 * 0.16 * 0.5));
  CHECK_THROWS_AS(sigma_hat_sq(0.5, 1.0), DegenerateScheme);
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("naive estimator examples") {
  CHECK(dhsic_naive(constant_stack(5, 3)) == 0.0);

  const GramStack identity({Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
  const double oracle = dhsic_oracle(identity);
  CHECK(oracle == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(dhsic_naive(identity) == doctest::Approx(oracle).epsilon(1e-15));

  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = testing::random_stack(5, 3, rng);
    CHECK(close(dhsic_naive(g), dhsic_oracle(g), 1e-10));
  }
}

TEST_CASE("oracle guards and degenerate sizes") {
  CHECK(dhsic_oracle(constant_stack(4, 3)) == doctest::Approx(0.0).epsilon(1e-15));
  std::mt19937_64 rng(1);
  const auto single = testing::random_stack(1, 3, rng);
  CHECK(dhsic_oracle(single) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(dhsic_naive(single) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(dhsic_oracle(constant_stack(7, 2)), std::length_error);
  CHECK_THROWS_AS(dhsic_oracle(constant_stack(3, 4)), std::length_error);
}

TEST_CASE("oracle equivalence on random stacks") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = 1 + rep % 5;
    const std::size_t d = 2 + rep % 2;
    const auto g = testing::random_stack(n, d, rng);
    CHECK(close(dhsic_naive(g), dhsic_oracle(g), 1e-10));
  }
}

TEST_CASE("modified estimator examples") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = testing::random_stack(3 + rep % 6, 2 + rep % 3, rng);
    CHECK(dhsic_modified(g, WeightScheme::constant_one()) == dhsic_naive(g));
  }
  const double gamma = 0.32;
  for (std::size_t n : {2, 4, 10, 100}) {
    CHECK(std::abs(dhsic_modified(constant_stack(n, 3), WeightScheme::alternating(gamma))) < 1e-14);
  }
  for (std::size_t n : {1, 3, 11, 101}) {
    const double expected = 2.0 * gamma / static_cast<double>(n);
    CHECK(dhsic_modified(constant_stack(n, 3), WeightScheme::alternating(gamma)) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("alpha_hat_sq examples") {
  CHECK(alpha_hat_sq(constant_stack(6, 3)) == 0.0);
  std::mt19937_64 rng(12);
  CHECK(alpha_hat_sq(testing::random_stack(1, 2, rng)) == 0.0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = testing::random_stack(4, 2, rng);
    CHECK(std::abs(alpha_hat_sq(g) - alpha_hat_sq_oracle(g)) <= 1e-12);
  }
}

TEST_CASE("sigma_hat_sq examples") {
  CHECK(sigma_hat_sq(1.0, WeightScheme::alternating(0.32)) == doctest::Approx(0.4096).epsilon(1e-14));
  CHECK(sigma_hat_sq(0.5, WeightScheme::sinusoidal(0.3)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigma_hat_sq(0.0, WeightScheme::alternating(0.7)) == 0.0);
  CHECK_THROWS_AS(sigma_hat_sq(1.0, WeightScheme::constant_one()), DegenerateScheme);
  CHECK_THROWS_AS(sigma_hat_sq(-1.0, WeightScheme::alternating(0.5)), InvalidInput);
}

TEST_CASE("estimate bundle") {
  std::mt19937_64 rng(31);
  const auto g = testing::random_kernel_stack(30, 3, rng);
  const auto scheme = WeightScheme::alternating(0.32);
  const auto e = estimate(g, scheme);
  CHECK(e.d_hat == dhsic_modified(g, scheme));
  CHECK(e.alpha_hat_sq == alpha_hat_sq(g));
  CHECK(e.sigma_hat_sq == 4.0 * (w_squared_limit(scheme) - 1.0) * e.alpha_hat_sq);
  CHECK(e.terms.value() == e.d_hat);
  CHECK(e.n == 30);
  CHECK(e.d == 3);
}

TEST_CASE("estimator invariants") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  const auto alt = WeightScheme::alternating(0.32);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 3 + rep % 12;
    const std::size_t d = 2 + rep % 3;
    const auto g = testing::random_kernel_stack(n, d, rng);

    CHECK(dhsic_naive(g) >= -1e-12);
    CHECK(alpha_hat_sq(g) >= 0.0);

    std::vector<double> c(d);
    double prod = 1.0;
    for (auto& v : c) {
      v = scale(rng);
      prod *= v;
    }
    const auto gs = scaled(g, c);
    CHECK(close(dhsic_naive(gs), prod * dhsic_naive(g), 1e-10));
    CHECK(close(dhsic_modified(gs, alt), prod * dhsic_modified(g, alt), 1e-10));
    CHECK(close(alpha_hat_sq(gs), prod * prod * alpha_hat_sq(g), 1e-10));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Matrix> permuted;
    for (const auto& m : g.grams()) permuted.push_back(permute_gram(m, perm));
    const GramStack gp(std::move(permuted));
    CHECK(std::abs(dhsic_naive(gp) - dhsic_naive(g)) <= 1e-12);
    CHECK(std::abs(alpha_hat_sq(gp) - alpha_hat_sq(g)) <= 1e-12);

    const double a = alpha_hat_sq(g);
    const double k = scale(rng);
    CHECK(sigma_hat_sq(k * a, alt) == doctest::Approx(k * sigma_hat_sq(a, alt)).epsilon(1e-14));
  }
}

TEST_CASE("independent categorical components give a small statistic") {
  std::mt19937_64 rng(200);
  const std::size_t n = 200;
  const std::size_t categories = 4;
  std::uniform_int_distribution<std::size_t> pick(0, categories - 1);
  auto one_hot = [&] {
    Matrix x = Matrix::Zero(n, categories);
    for (std::size_t i = 0; i < n; ++i) x(i, pick(rng)) = 1.0;
    return ComponentData(x);
  };
  const auto a = one_hot();
  const auto b = one_hot();
  const GramStack g({linear_gram(a), linear_gram(b)});
  CHECK(dhsic_naive(g) < 5.0 / static_cast<double>(n));
}
