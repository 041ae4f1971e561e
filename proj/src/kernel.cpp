#include "dhsic/kernel.hpp"

#include <cmath>
#include <string>

#include "dhsic/error.hpp"
#include "dhsic/parallel.hpp"

namespace dhsic {

FunctionalGrid::FunctionalGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidInput("functional grid needs at least 2 points");
  for (std::size_t m = 0; m < points_.size(); ++m) {
    if (!std::isfinite(points_[m])) throw InvalidInput("functional grid has a non-finite point");
    if (m > 0 && !(points_[m] > points_[m - 1])) {
      throw InvalidInput("functional grid must be strictly increasing (point " +
                         std::to_string(m + 1) + ")");
    }
  }
}

FunctionalGrid FunctionalGrid::uniform(std::size_t r, double lo, double hi) {
  if (r < 2) throw InvalidInput("functional grid needs at least 2 points");
  std::vector<double> t(r);
  const auto intervals = static_cast<double>(r - 1);
  for (std::size_t m = 0; m < r; ++m) {
    t[m] = lo + (hi - lo) * (static_cast<double>(m) / intervals);
  }
  t.back() = hi;
  return FunctionalGrid(std::move(t));
}

ComponentData::ComponentData(Matrix values, std::optional<FunctionalGrid> grid)
    : values_(std::move(values)), grid_(std::move(grid)) {
  if (values_.rows() < 1) throw InvalidInput("component has no observations");
  if (values_.cols() < 1) throw InvalidInput("component has no columns");
  if (!values_.allFinite()) throw InvalidInput("component contains non-finite values");
  if (grid_ && grid_->size() != dim()) {
    throw InvalidInput("grid has " + std::to_string(grid_->size()) + " points but data has " +
                       std::to_string(dim()) + " columns");
  }
}

Sample::Sample(std::vector<ComponentData> components) : components_(std::move(components)) {
  if (components_.size() < 2) throw InvalidInput("a sample needs at least 2 components");
  const auto n = components_.front().rows();
  for (std::size_t l = 1; l < components_.size(); ++l) {
    if (components_[l].rows() != n) {
      throw InvalidInput("component " + std::to_string(l + 1) + " has " +
                         std::to_string(components_[l].rows()) + " observations, component 1 has " +
                         std::to_string(n));
    }
  }
}

void KernelSpec::validate() const {
  if (const auto* g = std::get_if<Gaussian>(&kind)) {
    if (!(g->eta_sq > 0.0) || !std::isfinite(g->eta_sq)) {
      throw ConfigurationError("gaussian eta^2 must be positive and finite");
    }
  }
}

GramStack::GramStack(std::vector<Matrix> grams) : grams_(std::move(grams)) {
  if (grams_.empty()) throw InvalidInput("empty gram stack");
  n_ = static_cast<std::size_t>(grams_.front().rows());
  if (n_ == 0) throw InvalidInput("gram matrices are empty");
  for (std::size_t l = 0; l < grams_.size(); ++l) {
    const auto& g = grams_[l];
    if (static_cast<std::size_t>(g.rows()) != n_ || static_cast<std::size_t>(g.cols()) != n_) {
      throw InvalidInput("gram " + std::to_string(l + 1) + " is not " + std::to_string(n_) + "x" +
                         std::to_string(n_));
    }
    if (!g.allFinite()) throw InvalidInput("gram " + std::to_string(l + 1) + " is not finite");
    const double scale = g.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (std::abs(g(i, j) - g(j, i)) > 1e-12 * scale) {
          throw InvalidInput("gram " + std::to_string(l + 1) + " is not symmetric");
        }
      }
    }
  }
}

double squared_l2_distance_trapezoid(std::span<const double> f, std::span<const double> g,
                                     const FunctionalGrid& grid) {
  const auto t = grid.points();
  if (f.size() != t.size() || g.size() != t.size()) {
    throw InvalidInput("trapezoid distance: curves have " + std::to_string(f.size()) + " and " +
                       std::to_string(g.size()) + " points, grid has " +
                       std::to_string(t.size()));
  }
  double total = 0.0;
  double prev = (f[0] - g[0]) * (f[0] - g[0]);
  for (std::size_t m = 0; m + 1 < t.size(); ++m) {
    const double diff = f[m + 1] - g[m + 1];
    const double next = diff * diff;
    total += 0.5 * (t[m + 1] - t[m]) * (prev + next);
    prev = next;
  }
  return total;
}

double squared_euclidean_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("vectors differ in length");
  double total = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    total += diff * diff;
  }
  return total;
}

namespace {

template <class Entry>
Matrix symmetric_matrix(std::size_t n, unsigned threads, Entry&& entry) {
  Matrix out(n, n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) out(i, j) = entry(i, j);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  }
  return out;
}

}  // namespace

Matrix gaussian_gram(const ComponentData& data, const KernelSpec& spec, unsigned threads) {
  const auto* gauss = std::get_if<Gaussian>(&spec.kind);
  if (gauss == nullptr) throw ConfigurationError("gaussian_gram called with a non-gaussian spec");
  spec.validate();
  const double eta_sq = gauss->eta_sq;
  if (spec.quadrature == Quadrature::Trapezoid) {
    if (!data.grid()) {
      throw ConfigurationError("trapezoid quadrature requires a functional grid on the component");
    }
    const auto& grid = *data.grid();
    return symmetric_matrix(data.rows(), threads, [&](std::size_t i, std::size_t j) {
      return std::exp(-eta_sq * squared_l2_distance_trapezoid(data.row(i), data.row(j), grid));
    });
  }
  return symmetric_matrix(data.rows(), threads, [&](std::size_t i, std::size_t j) {
    return std::exp(-eta_sq * squared_euclidean_distance(data.row(i), data.row(j)));
  });
}

Matrix linear_gram(const ComponentData& data, unsigned threads) {
  return symmetric_matrix(data.rows(), threads, [&](std::size_t i, std::size_t j) {
    const auto x = data.row(i);
    const auto y = data.row(j);
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) total += x[k] * y[k];
    return total;
  });
}

GramStack build_gram_stack(const Sample& sample, std::span<const KernelSpec> specs,
                           unsigned threads) {
  if (specs.size() != sample.d()) {
    throw ConfigurationError("got " + std::to_string(specs.size()) + " kernel specs for " +
                             std::to_string(sample.d()) + " components");
  }
  std::vector<Matrix> grams;
  grams.reserve(sample.d());
  for (std::size_t l = 0; l < sample.d(); ++l) {
    const auto& spec = specs[l];
    if (std::holds_alternative<Linear>(spec.kind)) {
      if (spec.quadrature == Quadrature::Trapezoid) {
        throw ConfigurationError("linear kernel does not support trapezoid quadrature");
      }
      grams.push_back(linear_gram(sample[l], threads));
    } else {
      grams.push_back(gaussian_gram(sample[l], spec, threads));
    }
  }
  return GramStack(std::move(grams));
}

Matrix permute_gram(const Matrix& gram, std::span<const std::size_t> perm) {
  const auto n = static_cast<std::size_t>(gram.rows());
  if (perm.size() != n) throw InvalidInput("permutation length does not match gram size");
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = gram(perm[i], perm[j]);
  }
  return out;
}

}  // namespace dhsic
