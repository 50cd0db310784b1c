#include "pairrank/ranker.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "mathcheck.h"
#include "pairrank/rng.h"

namespace pairrank {
namespace {

Vector Vec(std::initializer_list<double> values) {
  Vector v(values.size());
  int k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

Vector RandomVector(int dim, double scale, Rng& rng) {
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v[k] = scale * (2.0 * rng.Uniform() - 1.0);
  return v;
}

RankerConfig Config(int dim) {
  RankerConfig config;
  config.dim = dim;
  return config;
}

TEST(SigmoidTest, KnownValues) {
  EXPECT_DOUBLE_EQ(Sigmoid(0.0), 0.5);
  EXPECT_NEAR(Sigmoid(std::log(3.0)), 0.75, 1e-15);
  EXPECT_NEAR(Sigmoid(-std::log(3.0)), 0.25, 1e-15);
}

TEST(SigmoidTest, StableAtExtremes) {
  for (double z : {-1e4, -500.0, -50.0, 50.0, 500.0, 1e4}) {
    const double s = Sigmoid(z);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(Sigmoid(-z), 1.0 - s, 1e-15);
  }
}

TEST(RankerConfigTest, CMuIsSlopeAtTwiceUQ) {
  RankerConfig config = Config(2);
  config.feature_bound = 1.0;
  config.param_bound = 1.0;
  EXPECT_NEAR(config.CMu(), 0.10499358540350652, 1e-15);
  EXPECT_LE(config.CMu(), 0.25);
}

TEST(RankerConfigTest, RejectsInvalidFields) {
  RankerConfig config = Config(2);
  config.delta1 = 0.5;
  EXPECT_THROW(config.Validate(), InvalidArgument);
  config = Config(2);
  config.lambda = 0.0;
  EXPECT_THROW(config.Validate(), InvalidArgument);
  config = Config(0);
  EXPECT_THROW(config.Validate(), InvalidArgument);
  config = Config(2);
  config.param_bound = 1e3;  // sigma'(2000) underflows.
  EXPECT_THROW(config.Validate(), InvalidArgument);
}

TEST(RankerTest, FreshStateMatchesInitialization) {
  Ranker ranker(Config(3));
  EXPECT_EQ(ranker.theta(), Vector::Zero(3));
  EXPECT_EQ(ranker.design_matrix(), Matrix::Identity(3, 3));
  EXPECT_EQ(ranker.n_pairs(), 0);
  EXPECT_DOUBLE_EQ(ranker.log_det(), 0.0);
}

TEST(RankerTest, PairwiseProb) {
  Ranker ranker(Config(2));
  EXPECT_DOUBLE_EQ(ranker.PairwiseProb(Vec({1, 2}), Vec({1, 2})), 0.5);
  EXPECT_DOUBLE_EQ(ranker.PairwiseProb(Vec({3, -1}), Vec({0, 4})), 0.5);
  ranker.SetTheta(Vec({1, 0}));
  EXPECT_NEAR(ranker.PairwiseProb(Vec({1, 0}), Vec({0, 0})),
              0.7310585786300049, 1e-15);
  EXPECT_THROW(ranker.PairwiseProb(Vec({1, 0, 0}), Vec({0, 0})),
               InvalidArgument);
}

TEST(LossTest, Examples) {
  EXPECT_DOUBLE_EQ(Loss(Vector::Zero(2), {}, 1.0), 0.0);
  const std::vector<PairwiseObservation> one = {{Vec({0.3, -2.0}), 0}};
  EXPECT_NEAR(Loss(Vector::Zero(2), one, 0.0), std::log(2.0), 1e-15);
  const std::vector<PairwiseObservation> hand = {{Vec({1, 0}), 1}};
  EXPECT_NEAR(Loss(Vec({1, 0}), hand, 2.0), 1.3132616875182228, 1e-14);
}

TEST(LossTest, ClampKeepsSaturatedLossFinite) {
  const std::vector<PairwiseObservation> wrong = {{Vec({1.0}), 0}};
  const double loss = Loss(Vec({400.0}), wrong, 0.0);
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_NEAR(loss, -std::log(1e-12), 1e-3);
}

TEST(GradientTest, Examples) {
  const Vector theta = Vec({0.4, -0.2, 1.0});
  EXPECT_TRUE(Gradient(theta, {}, 0.7).isApprox(0.7 * theta));
  const std::vector<PairwiseObservation> one = {{Vec({1, 0, 0}), 1}};
  EXPECT_TRUE(Gradient(Vector::Zero(3), one, 0.0).isApprox(Vec({-0.5, 0, 0})));
}

TEST(GradientTest, MatchesCentralDifferences) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + static_cast<int>(rng.UniformInt(20));
    std::vector<PairwiseObservation> history;
    const int n = 20 + static_cast<int>(rng.UniformInt(180));
    for (int k = 0; k < n; ++k) {
      history.push_back({RandomVector(dim, 1.0, rng), rng.Bernoulli(0.5)});
    }
    const Vector theta = RandomVector(dim, 2.0, rng);
    const double lambda = rng.Uniform();
    const Vector analytic = Gradient(theta, history, lambda);
    const Vector numeric = mathcheck::FdGradient(theta, history, lambda, 1e-5);
    EXPECT_LT((analytic - numeric).norm() / analytic.norm(), 1e-6)
        << "trial " << trial;
  }
}

TEST(GradientTest, DimensionMismatchThrows) {
  const std::vector<PairwiseObservation> bad = {{Vec({1, 0}), 1}};
  EXPECT_THROW(Gradient(Vector::Zero(3), bad, 1.0), InvalidArgument);
  EXPECT_THROW(Loss(Vector::Zero(3), bad, 1.0), InvalidArgument);
}

TEST(FitTest, EmptyHistoryGivesOrigin) {
  Ranker ranker(Config(4));
  ranker.SetTheta(Vec({0.1, 0.2, 0.3, 0.4}));
  ranker.Fit();
  EXPECT_LT(ranker.theta().norm(), 1e-12);
}

TEST(FitTest, ScalarProblemMatchesBisection) {
  RankerConfig config = Config(2);
  config.lambda = 0.1;
  config.param_bound = 10.0;
  std::vector<PairwiseObservation> history(100, {Vec({1, 0}), 1});
  const FitResult fit = FitParameters(Vector::Zero(2), history, config);
  ASSERT_TRUE(fit.converged);
  const std::vector<double> x(100, 1.0);
  const std::vector<int> y(100, 1);
  const double root = mathcheck::BisectScalarMle(x, y, 0.1);
  EXPECT_NEAR(root, 5.245185651860719, 1e-9);
  EXPECT_NEAR(fit.theta[0], root, 1e-7);
  EXPECT_NEAR(fit.theta[1], 0.0, 1e-12);
  EXPECT_GT(Sigmoid(fit.theta[0]), 0.9);
}

TEST(FitTest, FlippedLabelsNegateTheFit) {
  Rng rng(5);
  RankerConfig config = Config(3);
  config.lambda = 0.5;
  config.param_bound = 5.0;
  config.feature_bound = 0.2;
  std::vector<PairwiseObservation> history, flipped;
  for (int k = 0; k < 40; ++k) {
    const Vector x = RandomVector(3, 1.0, rng);
    const int y = rng.Bernoulli(0.6) ? 1 : 0;
    history.push_back({x, y});
    flipped.push_back({x, 1 - y});
  }
  const FitResult a = FitParameters(Vector::Zero(3), history, config);
  const FitResult b = FitParameters(Vector::Zero(3), flipped, config);
  EXPECT_TRUE(a.theta.isApprox(-b.theta, 1e-8));
}

TEST(FitTest, ProjectsOntoParameterBall) {
  RankerConfig config = Config(2);
  config.lambda = 0.1;
  config.param_bound = 1.0;
  std::vector<PairwiseObservation> history(100, {Vec({1, 0}), 1});
  Ranker ranker(config);
  ranker.AbsorbPairs(history);
  const FitResult& fit = ranker.Fit();
  EXPECT_TRUE(fit.projected);
  EXPECT_NEAR(ranker.theta().norm(), 1.0, 1e-12);
  EXPECT_EQ(ranker.projection_count(), 1);
}

TEST(FitTest, NonConvergenceIsFlaggedNotFatal) {
  RankerConfig config = Config(2);
  config.lambda = 1e-3;
  config.fit_max_iters = 1;
  config.fit_tolerance = 1e-14;
  config.param_bound = 100.0;
  config.feature_bound = 0.01;
  Ranker ranker(config);
  std::vector<PairwiseObservation> history(50, {Vec({1, 0.5}), 1});
  ranker.AbsorbPairs(history);
  ranker.Fit();
  EXPECT_FALSE(ranker.last_fit_converged());
  EXPECT_EQ(ranker.nonconverged_fits(), 1);
  EXPECT_LT(Loss(ranker.theta(), ranker.history(), config.lambda),
            Loss(Vector::Zero(2), ranker.history(), config.lambda));
}

TEST(FitTest, FitIsAGlobalMinimumInsideTheBall) {
  Rng rng(17);
  RankerConfig config = Config(4);
  config.lambda = 1.0;
  std::vector<PairwiseObservation> history;
  for (int k = 0; k < 60; ++k) {
    history.push_back({RandomVector(4, 0.5, rng), rng.Bernoulli(0.5)});
  }
  const FitResult fit = FitParameters(Vector::Zero(4), history, config);
  ASSERT_FALSE(fit.projected);
  const double best = Loss(fit.theta, history, config.lambda);
  for (int trial = 0; trial < 50; ++trial) {
    Vector theta = RandomVector(4, 1.0, rng);
    if (theta.norm() > 1.0) theta.normalize();
    EXPECT_LE(best, Loss(theta, history, config.lambda) + 1e-9);
  }
}

TEST(FitTest, DeterministicGivenInputs) {
  Rng rng(3);
  std::vector<PairwiseObservation> history;
  for (int k = 0; k < 30; ++k) {
    history.push_back({RandomVector(3, 1.0, rng), rng.Bernoulli(0.5)});
  }
  const FitResult a = FitParameters(Vector::Zero(3), history, Config(3));
  const FitResult b = FitParameters(Vector::Zero(3), history, Config(3));
  EXPECT_EQ(a.theta, b.theta);
}

TEST(AlphaTest, FreshStateClosedForm) {
  RankerConfig config = Config(2);
  config.lambda = 1.0;
  config.param_bound = 1.0;
  config.feature_bound = 1.0;
  config.noise_param = 0.5;
  config.delta1 = 0.1;
  Ranker ranker(config);
  EXPECT_NEAR(ranker.Alpha(), 9.871950772887128, 1e-12);
}

TEST(AlphaTest, MonotoneInDeltaAndDesign) {
  RankerConfig config = Config(3);
  double previous = std::numeric_limits<double>::infinity();
  for (double delta : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    config.delta1 = delta;
    const double alpha = Ranker(config).Alpha();
    EXPECT_LT(alpha, previous);
    previous = alpha;
  }
  Ranker ranker(Config(3));
  Rng rng(2);
  double last = ranker.Alpha();
  for (int k = 0; k < 20; ++k) {
    const std::vector<PairwiseObservation> pair = {
        {RandomVector(3, 1.0, rng), 1}};
    ranker.AbsorbPairs(pair);
    EXPECT_GE(ranker.Alpha(), last);
    last = ranker.Alpha();
  }
}

TEST(ConfidenceWidthTest, Examples) {
  Ranker identity(Config(2));
  EXPECT_DOUBLE_EQ(identity.ConfidenceWidth(Vector::Zero(2), 3.0), 0.0);
  EXPECT_NEAR(identity.ConfidenceWidth(Vec({3, 4}), 1.0), 5.0, 1e-14);

  Ranker ranker(Config(2));
  const std::vector<PairwiseObservation> pair = {{Vec({1, 0}), 1}};
  ranker.AbsorbPairs(pair);  // M = diag(2, 1).
  EXPECT_NEAR(ranker.ConfidenceWidth(Vec({1, 1}), 2.0), 2.449489742783178,
              1e-14);
}

TEST(ClassifyPairTest, DefinitionArithmetic) {
  // Build a state where sigma_hat = 0.9 and CB = 0.1 for diff = (1, 0):
  // theta_1 = logit(0.9), and alpha chosen so alpha * ||e1||_{M^-1} = 0.1.
  Ranker ranker(Config(2));
  ranker.SetTheta(Vec({std::log(9.0) * 0.45, 0}));
  const Vector x_i = Vec({1.0 / 0.45, 0});
  const Vector x_j = Vec({0, 0});
  ASSERT_NEAR(ranker.PairwiseProb(x_i, x_j), 0.9, 1e-12);
  const double unit = ranker.ConfidenceWidth(x_i - x_j, 1.0);
  EXPECT_EQ(ranker.ClassifyPair(x_i, x_j, 0.1 / unit), PairClass::kCertainFirst);
  EXPECT_EQ(ranker.ClassifyPair(x_j, x_i, 0.1 / unit),
            PairClass::kCertainSecond);

  // sigma_hat = 0.6, CB = 0.2 -> uncertain both ways.
  ranker.SetTheta(Vec({std::log(1.5) * 0.45, 0}));
  ASSERT_NEAR(ranker.PairwiseProb(x_i, x_j), 0.6, 1e-12);
  EXPECT_EQ(ranker.ClassifyPair(x_i, x_j, 0.2 / unit), PairClass::kUncertain);
  EXPECT_EQ(ranker.ClassifyPair(x_j, x_i, 0.2 / unit), PairClass::kUncertain);
}

TEST(ClassifyPairTest, LowerBoundAboveHalfIsCertain) {
  // A pair whose lower confidence bound clears 1/2 is certain; one whose
  // lower bound falls below 1/2 is not, even with the same point estimate
  // direction.
  Ranker ranker(Config(1));
  ranker.SetTheta(Vec({1.0}));
  const Vector m = Vec({2.0}), n = Vec({0.0});  // sigma_hat ~ 0.881
  const Vector i = Vec({0.4}), j = Vec({0.0});  // sigma_hat ~ 0.599
  const double alpha = 0.15;  // CB_mn = 0.3, CB_ij = 0.06
  EXPECT_GT(ranker.PairwiseProb(m, n) - ranker.ConfidenceWidth(m - n, alpha),
            0.5);
  EXPECT_EQ(ranker.ClassifyPair(m, n, alpha), PairClass::kCertainFirst);
  const double alpha_wide = 2.0;  // CB_ij = 0.8
  EXPECT_LT(ranker.PairwiseProb(i, j) - ranker.ConfidenceWidth(i - j, alpha_wide),
            0.5);
  EXPECT_EQ(ranker.ClassifyPair(i, j, alpha_wide), PairClass::kUncertain);
}

TEST(ClassifyPairTest, BoundaryEqualityIsUncertain) {
  Ranker ranker(Config(2));
  // Identical documents: sigma_hat = 1/2, CB = 0.
  EXPECT_EQ(ranker.ClassifyPair(Vec({1, 1}), Vec({1, 1}), 5.0),
            PairClass::kUncertain);
  // Fresh model, distinct documents: sigma_hat = 1/2, CB > 0.
  EXPECT_EQ(ranker.ClassifyPair(Vec({1, 0}), Vec({0, 1}), 0.1),
            PairClass::kUncertain);
  EXPECT_THROW(ranker.ClassifyPair(Vec({1}), Vec({0, 1}), 0.1),
               InvalidArgument);
}

TEST(ClassifyPairTest, MirrorConsistencyAndMonotoneCertainty) {
  Rng rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 1 + static_cast<int>(rng.UniformInt(6));
    Ranker ranker(Config(dim));
    std::vector<PairwiseObservation> pairs;
    const int n = static_cast<int>(rng.UniformInt(40));
    for (int k = 0; k < n; ++k) {
      pairs.push_back({RandomVector(dim, 1.0, rng), rng.Bernoulli(0.5)});
    }
    ranker.AbsorbPairs(pairs);
    Vector theta = RandomVector(dim, 1.0, rng);
    if (theta.norm() > 1.0) theta.normalize();
    ranker.SetTheta(theta);
    const Vector x_i = RandomVector(dim, 1.0, rng);
    const Vector x_j = RandomVector(dim, 1.0, rng);
    const double alpha = 0.5 * rng.Uniform();
    const PairClass forward = ranker.ClassifyPair(x_i, x_j, alpha);
    const PairClass backward = ranker.ClassifyPair(x_j, x_i, alpha);
    switch (forward) {
      case PairClass::kCertainFirst:
        EXPECT_EQ(backward, PairClass::kCertainSecond);
        break;
      case PairClass::kCertainSecond:
        EXPECT_EQ(backward, PairClass::kCertainFirst);
        break;
      case PairClass::kUncertain:
        EXPECT_EQ(backward, PairClass::kUncertain);
        for (double grow : {1.5, 3.0, 10.0}) {
          EXPECT_EQ(ranker.ClassifyPair(x_i, x_j, alpha * grow),
                    PairClass::kUncertain);
        }
        break;
    }
  }
}

TEST(AbsorbPairsTest, Examples) {
  Ranker ranker(Config(2));
  ranker.AbsorbPairs({});
  EXPECT_EQ(ranker.design_matrix(), Matrix::Identity(2, 2));
  EXPECT_EQ(ranker.n_pairs(), 0);

  const std::vector<PairwiseObservation> pair = {{Vec({1, 0}), 1}};
  ranker.AbsorbPairs(pair);
  Matrix expected(2, 2);
  expected << 2, 0, 0, 1;
  EXPECT_TRUE(ranker.design_matrix().isApprox(expected));
  EXPECT_NEAR(ranker.log_det(), std::log(2.0), 1e-15);
  EXPECT_EQ(ranker.n_pairs(), 1);
  EXPECT_EQ(ranker.theta(), Vector::Zero(2));  // No refit.
}

TEST(AbsorbPairsTest, RankOneUpdatesMatchFullRecompute) {
  Rng rng(29);
  RankerConfig config = Config(5);
  config.lambda = 0.3;
  Ranker ranker(config);
  std::vector<PairwiseObservation> all;
  for (int k = 0; k < 50; ++k) {
    const std::vector<PairwiseObservation> one = {
        {RandomVector(5, 1.0, rng), rng.Bernoulli(0.5)}};
    ranker.AbsorbPairs(one);
    all.push_back(one.front());
  }
  const auto oracle = mathcheck::RecomputeDesign(all, config.lambda, 5);
  EXPECT_LT((ranker.design_inverse() - oracle.inverse).cwiseAbs().maxCoeff(),
            1e-8);
  EXPECT_NEAR(ranker.log_det(), oracle.log_det, 1e-8);
  EXPECT_LT(ranker.InverseDrift(), 1e-8);
}

TEST(AbsorbPairsTest, LongRunDriftStaysBounded) {
  Rng rng(31);
  RankerConfig config = Config(10);
  config.lambda = 0.01;
  Ranker ranker(config);
  for (int k = 0; k < 3000; ++k) {
    const std::vector<PairwiseObservation> one = {
        {RandomVector(10, 0.3, rng), 1}};
    ranker.AbsorbPairs(one);
  }
  EXPECT_LE(ranker.InverseDrift(), 1e-6);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(ranker.design_matrix());
  EXPECT_GE(eig.eigenvalues().minCoeff(), config.lambda - 1e-12);
}

TEST(AbsorbPairsTest, RejectsBadLabelsAndDimensions) {
  Ranker ranker(Config(2));
  const std::vector<PairwiseObservation> bad_label = {{Vec({1, 0}), 2}};
  EXPECT_THROW(ranker.AbsorbPairs(bad_label), InvalidArgument);
  const std::vector<PairwiseObservation> bad_dim = {{Vec({1, 0, 0}), 1}};
  EXPECT_THROW(ranker.AbsorbPairs(bad_dim), InvalidArgument);
  EXPECT_EQ(ranker.n_pairs(), 0);
}

TEST(RankerTest, RestoreReproducesState) {
  Rng rng(37);
  Ranker original(Config(3));
  for (int round = 0; round < 5; ++round) {
    std::vector<PairwiseObservation> pairs;
    for (int k = 0; k < 3; ++k) {
      pairs.push_back({RandomVector(3, 1.0, rng), rng.Bernoulli(0.5)});
    }
    original.AbsorbPairs(pairs);
    original.Fit();
  }
  const Ranker restored = Ranker::Restore(
      original.config(), original.theta(),
      {original.history().begin(), original.history().end()},
      original.projection_count(), original.nonconverged_fits(),
      original.warm_start());
  EXPECT_EQ(restored.theta(), original.theta());
  EXPECT_EQ(restored.warm_start(), original.warm_start());
  EXPECT_EQ(restored.design_matrix(), original.design_matrix());
  EXPECT_EQ(restored.design_inverse(), original.design_inverse());
  EXPECT_EQ(restored.log_det(), original.log_det());
}

TEST(RankerTest, WarmStartKeepsUnprojectedMinimizer) {
  RankerConfig config = Config(1);
  config.param_bound = 0.5;
  Ranker ranker(config);
  const std::vector<PairwiseObservation> pairs(50, {Vec({1.0}), 1});
  ranker.AbsorbPairs(pairs);
  ranker.Fit();
  EXPECT_NEAR(ranker.theta().norm(), 0.5, 1e-12);
  EXPECT_GT(ranker.warm_start()[0], 0.5);
  EXPECT_EQ(ranker.warm_start(), ranker.last_fit().unprojected);
  // Refitting on the same data starts at the optimum.
  ranker.Fit();
  EXPECT_EQ(ranker.last_fit().iterations, 0);
}

}  // namespace
}  // namespace pairrank
