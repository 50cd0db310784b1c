#include "pairrank/ranker.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace pairrank {
namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kArmijoC = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 60;
constexpr double kLossPrecision = 1e-12;

void CheckHistoryDim(std::span<const PairwiseObservation> history, int dim) {
  for (const auto& obs : history) {
    if (obs.diff.size() != dim) {
      throw InvalidArgument("observation dimension " +
                            std::to_string(obs.diff.size()) + " != " +
                            std::to_string(dim));
    }
  }
}

// History as a dense design: one row per pair. The fit touches every pair
// several times per call, so it works on this form instead of the list.
struct PackedHistory {
  Matrix x;
  Vector y;
  double lambda;

  PackedHistory(std::span<const PairwiseObservation> history, int dim,
                double lambda)
      : x(static_cast<Eigen::Index>(history.size()), dim),
        y(static_cast<Eigen::Index>(history.size())),
        lambda(lambda) {
    for (size_t k = 0; k < history.size(); ++k) {
      x.row(static_cast<Eigen::Index>(k)) = history[k].diff.transpose();
      y[static_cast<Eigen::Index>(k)] = history[k].label;
    }
  }

  double Loss(const Vector& theta) const {
    const Vector z = x * theta;
    double total = 0.0;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const double p = std::clamp(Sigmoid(z[k]), kLogClamp, 1.0 - kLogClamp);
      total -= y[k] == 1.0 ? std::log(p) : std::log1p(-p);
    }
    return total + 0.5 * lambda * theta.squaredNorm();
  }

  // Gradient and Hessian at theta in one pass over the pairs.
  void Derivatives(const Vector& theta, Vector& grad, Matrix& hess) const {
    const Vector z = x * theta;
    Vector residual(z.size());
    Vector weight(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const double s = Sigmoid(z[k]);
      residual[k] = s - y[k];
      weight[k] = s * (1.0 - s);
    }
    grad = x.transpose() * residual + lambda * theta;
    hess = x.transpose() * weight.asDiagonal() * x;
    hess.diagonal().array() += lambda;
  }
};

}  // namespace

double RankerConfig::CMu() const {
  return SigmoidDerivative(2.0 * feature_bound * param_bound);
}

void RankerConfig::Validate() const {
  if (dim <= 0) throw InvalidArgument("ranker.dim must be positive");
  if (!(lambda > 0.0)) throw InvalidArgument("ranker.lambda must be > 0");
  if (!(delta1 > 0.0 && delta1 < 0.5)) {
    throw InvalidArgument("ranker.delta1 must lie in (0, 1/2)");
  }
  if (!(param_bound > 0.0)) {
    throw InvalidArgument("ranker.param_bound must be > 0");
  }
  if (!(feature_bound > 0.0)) {
    throw InvalidArgument("ranker.feature_bound must be > 0");
  }
  if (!(noise_param > 0.0)) {
    throw InvalidArgument("ranker.noise_param must be > 0");
  }
  if (!(fit_tolerance > 0.0)) {
    throw InvalidArgument("ranker.fit_tolerance must be > 0");
  }
  if (fit_max_iters <= 0) {
    throw InvalidArgument("ranker.fit_max_iters must be positive");
  }
  if (!(CMu() > 0.0)) {
    throw InvalidArgument(
        "2 * feature_bound * param_bound too large: c_mu underflows");
  }
}

double Sigmoid(double z) {
  z = std::clamp(z, -500.0, 500.0);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double SigmoidDerivative(double z) {
  const double s = Sigmoid(z);
  return s * (1.0 - s);
}

double Loss(const Vector& theta, std::span<const PairwiseObservation> history,
            double lambda) {
  CheckHistoryDim(history, static_cast<int>(theta.size()));
  double total = 0.0;
  for (const auto& obs : history) {
    const double p =
        std::clamp(Sigmoid(obs.diff.dot(theta)), kLogClamp, 1.0 - kLogClamp);
    total -= obs.label == 1 ? std::log(p) : std::log1p(-p);
  }
  return total + 0.5 * lambda * theta.squaredNorm();
}

Vector Gradient(const Vector& theta,
                std::span<const PairwiseObservation> history, double lambda) {
  CheckHistoryDim(history, static_cast<int>(theta.size()));
  Vector g = lambda * theta;
  for (const auto& obs : history) {
    g += (Sigmoid(obs.diff.dot(theta)) - obs.label) * obs.diff;
  }
  return g;
}

FitResult FitParameters(const Vector& start,
                        std::span<const PairwiseObservation> history,
                        const RankerConfig& config) {
  if (start.size() != config.dim) {
    throw InvalidArgument("warm start has wrong dimension");
  }
  CheckHistoryDim(history, config.dim);
  const PackedHistory packed(history, config.dim, config.lambda);
  FitResult result;
  result.theta = start;
  double loss = packed.Loss(result.theta);
  Vector grad;
  Matrix hess;
  packed.Derivatives(result.theta, grad, hess);
  result.gradient_norm = grad.norm();

  while (result.gradient_norm > config.fit_tolerance &&
         result.iterations < config.fit_max_iters) {
    ++result.iterations;
    Vector step;
    const Eigen::LLT<Matrix> llt(hess);
    if (llt.info() == Eigen::Success) {
      step = -llt.solve(grad);
    } else {
      step = -grad;
    }
    double slope = grad.dot(step);
    if (!(slope < 0.0)) {
      step = -grad;
      slope = -grad.squaredNorm();
    }

    // Near the optimum the predicted decrease drops below the rounding
    // error of the loss and the Armijo test becomes noise. Newton is in its
    // quadratic phase there, so take the full step and judge by the gradient.
    if (-0.5 * slope <= kLossPrecision * std::max(1.0, std::abs(loss))) {
      const Vector candidate = result.theta + step;
      Vector candidate_grad;
      Matrix candidate_hess;
      packed.Derivatives(candidate, candidate_grad, candidate_hess);
      if (!(candidate_grad.norm() < result.gradient_norm)) break;
      result.theta = candidate;
      loss = packed.Loss(candidate);
      grad = std::move(candidate_grad);
      hess = std::move(candidate_hess);
      result.gradient_norm = grad.norm();
      continue;
    }

    double t = 1.0;
    Vector candidate = result.theta + step;
    double candidate_loss = packed.Loss(candidate);
    int backtracks = 0;
    while (candidate_loss > loss + kArmijoC * t * slope &&
           backtracks < kMaxBacktracks) {
      t *= kBacktrack;
      candidate = result.theta + t * step;
      candidate_loss = packed.Loss(candidate);
      ++backtracks;
    }
    if (candidate_loss > loss) break;  // No descent possible at this precision.
    result.theta = std::move(candidate);
    loss = candidate_loss;
    packed.Derivatives(result.theta, grad, hess);
    result.gradient_norm = grad.norm();
  }
  result.converged = result.gradient_norm <= config.fit_tolerance;
  result.unprojected = result.theta;

  const double norm = result.theta.norm();
  if (norm > config.param_bound) {
    result.theta *= config.param_bound / norm;
    result.projected = true;
  }
  return result;
}

Ranker::Ranker(const RankerConfig& config) : config_(config) {
  config_.Validate();
  const int d = config_.dim;
  theta_ = Vector::Zero(d);
  warm_start_ = theta_;
  design_ = config_.lambda * Matrix::Identity(d, d);
  design_inverse_ = Matrix::Identity(d, d) / config_.lambda;
  log_det_ = d * std::log(config_.lambda);
  last_fit_.theta = theta_;
  last_fit_.converged = true;
}

void Ranker::CheckDim(const Vector& v) const {
  if (v.size() != config_.dim) {
    throw InvalidArgument("vector dimension " + std::to_string(v.size()) +
                          " != ranker dimension " +
                          std::to_string(config_.dim));
  }
}

double Ranker::PairwiseProb(const Vector& x_i, const Vector& x_j) const {
  CheckDim(x_i);
  CheckDim(x_j);
  return Sigmoid((x_i - x_j).dot(theta_));
}

double Ranker::Alpha() const {
  const double log_det_ratio =
      log_det_ - config_.dim * std::log(config_.lambda) -
      2.0 * std::log(config_.delta1);
  const double r = config_.noise_param;
  return (2.0 * RankerConfig::kMu / config_.CMu()) *
         (std::sqrt(r * r * std::max(0.0, log_det_ratio)) +
          std::sqrt(config_.lambda) * config_.param_bound);
}

double Ranker::ConfidenceWidth(const Vector& diff, double alpha) const {
  CheckDim(diff);
  const double quad = diff.dot(design_inverse_ * diff);
  return alpha * std::sqrt(std::max(0.0, quad));
}

PairClass Ranker::ClassifyPair(const Vector& x_i, const Vector& x_j,
                               double alpha) const {
  CheckDim(x_i);
  CheckDim(x_j);
  const Vector diff = x_i - x_j;
  const double p = Sigmoid(diff.dot(theta_));
  const double width = ConfidenceWidth(diff, alpha);
  // sigma(-z) = 1 - sigma(z), so the reverse test is p + width < 1/2.
  if (p - width > 0.5) return PairClass::kCertainFirst;
  if ((1.0 - p) - width > 0.5) return PairClass::kCertainSecond;
  return PairClass::kUncertain;
}

void Ranker::AbsorbPairs(std::span<const PairwiseObservation> pairs) {
  for (const auto& obs : pairs) {
    CheckDim(obs.diff);
    if (obs.label != 0 && obs.label != 1) {
      throw InvalidArgument("pair label must be 0 or 1");
    }
  }
  for (const auto& obs : pairs) {
    const Vector& x = obs.diff;
    design_.noalias() += x * x.transpose();
    const Vector mx = design_inverse_ * x;
    const double denom = 1.0 + x.dot(mx);
    design_inverse_.noalias() -= (mx * mx.transpose()) / denom;
    log_det_ += std::log(denom);
    history_.push_back(obs);
    ++n_pairs_;
    if (++updates_since_refresh_ >= kReinvertEvery) RefreshInverse();
  }
}

void Ranker::RefreshInverse() {
  const Eigen::LLT<Matrix> llt(design_);
  if (llt.info() != Eigen::Success) {
    throw InternalConsistencyError("design matrix lost positive definiteness");
  }
  design_inverse_ = llt.solve(Matrix::Identity(config_.dim, config_.dim));
  design_inverse_ = 0.5 * (design_inverse_ + design_inverse_.transpose()).eval();
  log_det_ = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  updates_since_refresh_ = 0;
}

const FitResult& Ranker::Fit() {
  last_fit_ = FitParameters(warm_start_, history_, config_);
  theta_ = last_fit_.theta;
  warm_start_ = last_fit_.unprojected;
  if (last_fit_.projected) ++projection_count_;
  last_fit_converged_ = last_fit_.converged;
  if (!last_fit_.converged) ++nonconverged_fits_;
  return last_fit_;
}

void Ranker::SetTheta(const Vector& theta) {
  CheckDim(theta);
  if (theta.norm() > config_.param_bound + 1e-9) {
    throw InvalidArgument("theta exceeds the parameter bound");
  }
  theta_ = theta;
  warm_start_ = theta;
}

Ranker Ranker::Restore(const RankerConfig& config, const Vector& theta,
                       std::vector<PairwiseObservation> history,
                       int64_t projection_count, int64_t nonconverged_fits,
                       std::optional<Vector> warm_start) {
  Ranker ranker(config);
  ranker.AbsorbPairs(history);
  ranker.SetTheta(theta);
  if (warm_start) {
    ranker.CheckDim(*warm_start);
    ranker.warm_start_ = std::move(*warm_start);
  }
  ranker.projection_count_ = projection_count;
  ranker.nonconverged_fits_ = nonconverged_fits;
  return ranker;
}

double Ranker::InverseDrift() const {
  const Matrix residual =
      design_ * design_inverse_ - Matrix::Identity(config_.dim, config_.dim);
  return residual.cwiseAbs().maxCoeff();
}

}  // namespace pairrank
