#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace dhsic {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Strictly increasing abscissae t_1 < ... < t_r, r >= 2.
class FunctionalGrid {
 public:
  explicit FunctionalGrid(std::vector<double> points);

  /// r equispaced points on [lo, hi].
  static FunctionalGrid uniform(std::size_t r, double lo = 0.0, double hi = 1.0);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  friend bool operator==(const FunctionalGrid&, const FunctionalGrid&) = default;

 private:
  std::vector<double> points_;
};

/// One component of a sample: row i is observation i. A grid marks the
/// component as functional, in which case columns are grid points.
class ComponentData {
 public:
  explicit ComponentData(Matrix values, std::optional<FunctionalGrid> grid = std::nullopt);

  const Matrix& values() const noexcept { return values_; }
  const std::optional<FunctionalGrid>& grid() const noexcept { return grid_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * dim(), dim()};
  }

 private:
  Matrix values_;
  std::optional<FunctionalGrid> grid_;
};

/// d >= 2 components observed jointly on the same n units.
class Sample {
 public:
  explicit Sample(std::vector<ComponentData> components);

  const std::vector<ComponentData>& components() const noexcept { return components_; }
  const ComponentData& operator[](std::size_t l) const { return components_.at(l); }
  std::size_t n() const noexcept { return components_.front().rows(); }
  std::size_t d() const noexcept { return components_.size(); }

 private:
  std::vector<ComponentData> components_;
};

/// K(x, y) = exp(-eta_sq * ||x - y||^2).
struct Gaussian {
  double eta_sq = 150.0;
};

/// K(x, y) = <x, y>.
struct Linear {};

/// How ||x - y||^2 is computed for functional components.
enum class Quadrature { None, Trapezoid };

struct KernelSpec {
  std::variant<Gaussian, Linear> kind = Gaussian{};
  Quadrature quadrature = Quadrature::None;

  static KernelSpec gaussian(double eta_sq, Quadrature q = Quadrature::None) {
    return {Gaussian{eta_sq}, q};
  }
  static KernelSpec linear() { return {Linear{}, Quadrature::None}; }

  /// Throws ConfigurationError when eta_sq is not a positive finite number.
  void validate() const;
};

/// d symmetric n x n Gram matrices, the sole input of every estimator.
class GramStack {
 public:
  explicit GramStack(std::vector<Matrix> grams);

  const std::vector<Matrix>& grams() const noexcept { return grams_; }
  const Matrix& operator[](std::size_t l) const { return grams_.at(l); }
  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return grams_.size(); }

 private:
  std::vector<Matrix> grams_;
  std::size_t n_ = 0;
};

/// Trapezoid-rule approximation of the squared L2 distance between two
/// curves sampled on `grid`.
double squared_l2_distance_trapezoid(std::span<const double> f, std::span<const double> g,
                                     const FunctionalGrid& grid);

double squared_euclidean_distance(std::span<const double> x, std::span<const double> y);

/// Gaussian Gram. Only entries with i <= j are evaluated and mirrored, so the
/// result is exactly symmetric; rows may be split across `threads`.
Matrix gaussian_gram(const ComponentData& data, const KernelSpec& spec, unsigned threads = 1);

Matrix linear_gram(const ComponentData& data, unsigned threads = 1);

/// One Gram per component, dispatched on each component's spec.
GramStack build_gram_stack(const Sample& sample, std::span<const KernelSpec> specs,
                           unsigned threads = 1);

/// G'(i, j) = G(perm[i], perm[j]).
Matrix permute_gram(const Matrix& gram, std::span<const std::size_t> perm);

}  // namespace dhsic
