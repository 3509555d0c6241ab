#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sotune/core.hpp"
#include "sotune/simd.hpp"

namespace sotune {

enum class MaternNu { half, three_halves, five_halves };

struct KernelConfig {
  double lengthscale = 0.5;  // isotropic, on inputs normalized to [0,1]^d
  double amplitude = 1.0;    // prior variance on the standardized target scale
  MaternNu nu = MaternNu::five_halves;
  double jitter = 1e-8;

  // Throws ConfigError for non-positive lengthscale/amplitude or jitter below 1e-12.
  void validate() const;
};

// Matern correlation as a function of the scaled distance r = ||x - x'|| / lengthscale.
double matern_correlation(double r, MaternNu nu);

double kernel_value(std::span<const double> x, std::span<const double> x2, const KernelConfig& config);

struct Prediction {
  double mu;
  double sigma;
};

// Exact GP regression on min-max normalized inputs and standardized targets.
class GpModel {
 public:
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  std::size_t dim() const noexcept { return bounds_.dim(); }
  const KernelConfig& kernel() const noexcept { return kernel_; }
  const Bounds& bounds() const noexcept { return bounds_; }

  // Jitter that finally made the factorization succeed.
  double jitter_used() const noexcept { return jitter_; }
  double target_mean() const noexcept { return target_mean_; }
  double target_scale() const noexcept { return target_scale_; }

  const Eigen::MatrixXd& cholesky_factor() const noexcept { return chol_; }
  // (K + jitter I)^{-1} f on the standardized targets.
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& standardized_targets() const noexcept { return targets_; }
  const simd::PointColumns& training_inputs() const noexcept { return inputs_; }

  // ||(K + jitter I) w - f|| / ||f||, recomputed from the kernel.
  double weight_residual() const;

  // mu and sigma in original target units. Throws DomainError on a dimension mismatch.
  Prediction predict(std::span<const double> x) const;

  // Vectorized prediction for many points. sigma may be empty to skip the variance.
  void predict_batch(std::span<const Point> xs, std::span<double> mu, std::span<double> sigma) const;

 private:
  friend GpModel fit_gp(const Archive&, const KernelConfig&);

  explicit GpModel(Bounds bounds) : bounds_(std::move(bounds)) {}

  void cross_covariance(std::span<const double> unit_x, std::span<double> out) const;
  double posterior_sigma(double variance) const;

  Bounds bounds_;
  KernelConfig kernel_;
  double jitter_ = 0.0;
  simd::PointColumns inputs_;
  Eigen::VectorXd targets_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd weights_;
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
};

// Fits from scratch. Duplicate inputs (normalized distance < 1e-10) are collapsed onto the
// better objective value. Throws DomainError for fewer than two points and
// IllConditionedKernel when Cholesky still fails after three x10 jitter escalations.
GpModel fit_gp(const Archive& archive, const KernelConfig& config);

inline Prediction predict(const GpModel& model, std::span<const double> x) { return model.predict(x); }

}  // namespace sotune
