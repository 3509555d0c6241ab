#include "sotune/surrogate.hpp"

#include <cmath>
#include <numeric>

namespace sotune {

namespace {

constexpr double kDuplicateSqDistance = 1e-20;  // (1e-10)^2 on the unit cube
constexpr double kNegativeVarianceTolerance = 1e-8;
constexpr int kJitterEscalations = 3;

}  // namespace

void KernelConfig::validate() const {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) throw ConfigError("lengthscale must be positive");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ConfigError("amplitude must be positive");
  if (!(jitter >= 1e-12)) throw ConfigError("jitter must be at least 1e-12");
}

double matern_correlation(double r, MaternNu nu) {
  switch (nu) {
    case MaternNu::half: return std::exp(-r);
    case MaternNu::three_halves: {
      const double s = std::sqrt(3.0) * r;
      return (1.0 + s) * std::exp(-s);
    }
    case MaternNu::five_halves: {
      const double s = std::sqrt(5.0) * r;
      return (1.0 + s + s * s / 3.0) * std::exp(-s);
    }
  }
  return 0.0;
}

double kernel_value(std::span<const double> x, std::span<const double> x2, const KernelConfig& config) {
  config.validate();
  if (x.size() != x2.size()) throw DomainError("kernel arguments differ in dimension");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - x2[i];
    sq += diff * diff;
  }
  return config.amplitude * matern_correlation(std::sqrt(sq) / config.lengthscale, config.nu);
}

GpModel fit_gp(const Archive& archive, const KernelConfig& config) {
  config.validate();
  if (archive.size() < 2) throw DomainError("GP fit needs at least two evaluated points");

  const Bounds& bounds = archive.bounds();
  const std::size_t dim = bounds.dim();

  // Normalize and collapse duplicates, keeping the lower objective value.
  std::vector<Point> unit;
  std::vector<double> values;
  unit.reserve(archive.size());
  values.reserve(archive.size());
  for (std::size_t i = 0; i < archive.size(); ++i) {
    Point u = bounds.to_unit(archive.point(i));
    bool duplicate = false;
    for (std::size_t j = 0; j < unit.size(); ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < dim; ++k) sq += (u[k] - unit[j][k]) * (u[k] - unit[j][k]);
      if (sq < kDuplicateSqDistance) {
        values[j] = std::min(values[j], archive.value(i));
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      unit.push_back(std::move(u));
      values.push_back(archive.value(i));
    }
  }

  GpModel model(bounds);
  model.kernel_ = config;
  model.inputs_ = simd::PointColumns(unit, dim);
  const auto n = static_cast<Eigen::Index>(unit.size());

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double scale = std::sqrt(var);
  model.target_mean_ = mean;
  model.target_scale_ = scale > 0.0 && std::isfinite(scale) ? scale : 1.0;

  model.targets_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    model.targets_(i) = (values[static_cast<std::size_t>(i)] - mean) / model.target_scale_;
  }

  Eigen::MatrixXd gram(n, n);
  std::vector<double> row(unit.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    model.cross_covariance(unit[static_cast<std::size_t>(i)], row);
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = row[static_cast<std::size_t>(j)];
  }
  // Symmetrize exactly; the row-wise evaluation is already symmetric up to rounding.
  gram = 0.5 * (gram + gram.transpose()).eval();

  double jitter = config.jitter;
  for (int attempt = 0; attempt <= kJitterEscalations; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd shifted = gram;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd lower = llt.matrixL();
    if ((lower.diagonal().array() <= 0.0).any() || !lower.allFinite()) continue;
    model.chol_ = std::move(lower);
    model.weights_ = llt.solve(model.targets_);
    model.jitter_ = jitter;
    return model;
  }
  throw IllConditionedKernel("kernel matrix is not positive definite after jitter escalation to " +
                             std::to_string(jitter / 10.0));
}

void GpModel::cross_covariance(std::span<const double> unit_x, std::span<double> out) const {
  simd::squared_distances(unit_x, inputs_.view(), out);
  const double inv_len = 1.0 / kernel_.lengthscale;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    out[i] = kernel_.amplitude * matern_correlation(std::sqrt(out[i]) * inv_len, kernel_.nu);
  }
}

double GpModel::posterior_sigma(double variance) const {
  if (variance < 0.0) {
    if (variance < -kNegativeVarianceTolerance * kernel_.amplitude) {
      throw IllConditionedKernel("posterior variance is negative beyond tolerance");
    }
    variance = 0.0;
  }
  return target_scale_ * std::sqrt(variance);
}

double GpModel::weight_residual() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd gram(n, n);
  std::vector<double> row(size());
  std::vector<double> x(dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim(); ++k) x[k] = inputs_.at(static_cast<std::size_t>(i), k);
    cross_covariance(x, row);
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = row[static_cast<std::size_t>(j)];
  }
  gram = 0.5 * (gram + gram.transpose()).eval();
  gram.diagonal().array() += jitter_;
  const double denom = targets_.norm();
  const double res = (gram * weights_ - targets_).norm();
  return denom > 0.0 ? res / denom : res;
}

Prediction GpModel::predict(std::span<const double> x) const {
  if (x.size() != dim()) throw DomainError("prediction point dimension does not match the model");
  const Point u = bounds_.to_unit(x);
  Eigen::VectorXd k(static_cast<Eigen::Index>(size()));
  cross_covariance(u, std::span<double>(k.data(), size()));
  const double mu = target_mean_ + target_scale_ * k.dot(weights_);
  chol_.triangularView<Eigen::Lower>().solveInPlace(k);
  return {mu, posterior_sigma(kernel_.amplitude - k.squaredNorm())};
}

void GpModel::predict_batch(std::span<const Point> xs, std::span<double> mu, std::span<double> sigma) const {
  const auto n = static_cast<Eigen::Index>(size());
  const auto m = static_cast<Eigen::Index>(xs.size());
  if (mu.size() != xs.size() || (!sigma.empty() && sigma.size() != xs.size())) {
    throw DomainError("prediction output spans do not match the number of points");
  }

  Eigen::MatrixXd cross(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Point& x = xs[static_cast<std::size_t>(c)];
    if (x.size() != dim()) throw DomainError("prediction point dimension does not match the model");
    cross_covariance(bounds_.to_unit(x), std::span<double>(cross.col(c).data(), size()));
  }

  const Eigen::VectorXd means = cross.transpose() * weights_;
  for (Eigen::Index c = 0; c < m; ++c) mu[static_cast<std::size_t>(c)] = target_mean_ + target_scale_ * means(c);

  if (sigma.empty()) return;
  chol_.triangularView<Eigen::Lower>().solveInPlace(cross);
  const Eigen::RowVectorXd explained = cross.colwise().squaredNorm();
  for (Eigen::Index c = 0; c < m; ++c) {
    sigma[static_cast<std::size_t>(c)] = posterior_sigma(kernel_.amplitude - explained(c));
  }
}

}  // namespace sotune
