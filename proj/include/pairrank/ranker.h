#ifndef PAIRRANK_RANKER_H_
#define PAIRRANK_RANKER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pairrank/types.h"

namespace pairrank {

// Hyperparameters of the confidence-bounded pairwise RankNet.
struct RankerConfig {
  // Lipschitz constant of the logistic link.
  static constexpr double kMu = 0.25;

  int dim = 1;
  double lambda = 1.0;          // L2 coefficient; M_0 = lambda * I.
  double delta1 = 0.1;          // Failure probability of the confidence set.
  double param_bound = 1.0;     // Q: ||theta|| <= Q.
  double feature_bound = 1.0;   // u: ||x|| <= u.
  double noise_param = 0.70710678118654752;  // R, sub-Gaussian pair noise.
  double fit_tolerance = 1e-6;  // Gradient-norm stopping rule.
  int fit_max_iters = 1000;

  // c_mu = sigma'(2 u Q): the infimum of the link slope over ||x_ij|| <= 2u
  // and ||theta|| <= Q.
  double CMu() const;

  // Throws InvalidArgument when a field is out of range.
  void Validate() const;
};

struct PairwiseObservation {
  Vector diff;  // x_i - x_j, i presented above j.
  int label = 0;  // 1 if i was preferred.
};

enum class PairClass { kCertainFirst, kCertainSecond, kUncertain };

// Logistic function, clamped to stay finite for |z| > 500.
double Sigmoid(double z);
// sigma(z) (1 - sigma(z)).
double SigmoidDerivative(double z);

// Regularized cross-entropy over the observed pairs at parameter theta.
double Loss(const Vector& theta, std::span<const PairwiseObservation> history,
            double lambda);
// Exact gradient of Loss.
Vector Gradient(const Vector& theta,
                std::span<const PairwiseObservation> history, double lambda);

struct FitResult {
  Vector theta;
  Vector unprojected;  // Minimizer before the Q-ball rescale.
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  bool projected = false;  // Rescaled back onto ||theta|| = Q.
};

// Minimizes Loss by damped Newton iterations with Armijo backtracking, warm
// started at `start`, then rescales onto the Q-ball if needed.
FitResult FitParameters(const Vector& start,
                        std::span<const PairwiseObservation> history,
                        const RankerConfig& config);

// Online PairRank model state: parameter estimate, design matrix with its
// cached inverse and log-determinant, and the append-only pair history.
//
// Single writer. Const members are safe for concurrent readers between
// updates.
class Ranker {
 public:
  explicit Ranker(const RankerConfig& config);

  const RankerConfig& config() const { return config_; }
  int dim() const { return config_.dim; }
  const Vector& theta() const { return theta_; }
  // Where the next Fit starts: the last unprojected minimizer.
  const Vector& warm_start() const { return warm_start_; }
  const Matrix& design_matrix() const { return design_; }
  const Matrix& design_inverse() const { return design_inverse_; }
  double log_det() const { return log_det_; }
  int64_t n_pairs() const { return n_pairs_; }
  std::span<const PairwiseObservation> history() const { return history_; }

  // Diagnostics accumulated over Fit calls.
  int64_t projection_count() const { return projection_count_; }
  int64_t nonconverged_fits() const { return nonconverged_fits_; }
  bool last_fit_converged() const { return last_fit_converged_; }
  const FitResult& last_fit() const { return last_fit_; }

  double PairwiseProb(const Vector& x_i, const Vector& x_j) const;

  // Confidence radius alpha_t for the current design matrix.
  double Alpha() const;
  // alpha * ||diff||_{M^-1}.
  double ConfidenceWidth(const Vector& diff, double alpha) const;
  PairClass ClassifyPair(const Vector& x_i, const Vector& x_j,
                         double alpha) const;

  // Adds the pairs to the history and to the design matrix. Does not refit.
  void AbsorbPairs(std::span<const PairwiseObservation> pairs);

  // Refits theta on the full history, warm started from the previous
  // unprojected minimizer.
  const FitResult& Fit();

  // Replaces theta (and the warm start). Must satisfy the Q bound.
  void SetTheta(const Vector& theta);

  // Checkpoint support. Restores from a previously saved history + theta,
  // rebuilding M, its inverse and log det by the same update sequence.
  static Ranker Restore(const RankerConfig& config, const Vector& theta,
                        std::vector<PairwiseObservation> history,
                        int64_t projection_count, int64_t nonconverged_fits,
                        std::optional<Vector> warm_start = std::nullopt);

  // max |M M^-1 - I|.
  double InverseDrift() const;

 private:
  void RefreshInverse();
  void CheckDim(const Vector& v) const;

  static constexpr int kReinvertEvery = 500;

  RankerConfig config_;
  Vector theta_;
  Vector warm_start_;
  Matrix design_;
  Matrix design_inverse_;
  double log_det_ = 0.0;
  int64_t n_pairs_ = 0;
  int updates_since_refresh_ = 0;
  std::vector<PairwiseObservation> history_;
  FitResult last_fit_;
  int64_t projection_count_ = 0;
  int64_t nonconverged_fits_ = 0;
  bool last_fit_converged_ = true;
};

}  // namespace pairrank

#endif  // PAIRRANK_RANKER_H_
