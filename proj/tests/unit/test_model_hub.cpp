#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/model_hub/boosting.hpp"
#include "fakewatch/model_hub/forest.hpp"
#include "fakewatch/model_hub/hub.hpp"
#include "fakewatch/model_hub/kernel_svc.hpp"
#include "fakewatch/model_hub/knn.hpp"
#include "fakewatch/model_hub/linear.hpp"
#include "fakewatch/model_hub/naive_bayes.hpp"
#include "fakewatch/model_hub/registry.hpp"
#include "fakewatch/model_hub/serialization.hpp"
#include "fakewatch/model_hub/tree.hpp"
#include "test_util.hpp"

namespace fakewatch::model_hub {
namespace {

using fakewatch::testing::dense;
using fakewatch::testing::make_set;
using fakewatch::testing::plane_set;
using fakewatch::testing::xor_set;

ModelSpec spec_with(Algorithm a, std::map<std::string, ParamValue> params) {
  ModelSpec spec = default_spec(a);
  for (auto& [k, v] : params) spec.hyperparameters[k] = v;
  return spec;
}

double accuracy(const Classifier& c, const TrainingSet& data) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < data.size(); ++i) ok += c.predict(data.x[i]) == data.y[i] ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

// Positive vectors in 6 dimensions; fake rows lean on the first three axes.
TrainingSet random_set(std::uint64_t seed, std::size_t n, double fake_share = 0.5) {
  Rng rng(seed);
  TrainingSet set;
  set.dimension = 6;
  for (std::size_t i = 0; i < n; ++i) {
    int label = rng.uniform01() < fake_share ? 1 : 0;
    FeatureVector v;
    for (std::uint32_t j = 0; j < 6; ++j) {
      double base = ((j < 3) == (label == 1)) ? 1.0 : 0.3;
      double value = base * rng.uniform01();
      if (value > 0.05) v.push_back(j, value);
    }
    set.x.push_back(v);
    set.y.push_back(label);
  }
  return set;
}

std::vector<FeatureVector> random_queries(std::uint64_t seed, std::size_t n, std::size_t dim) {
  Rng rng(seed);
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector v;
    for (std::uint32_t j = 0; j < dim; ++j) {
      if (rng.uniform01() < 0.6) v.push_back(j, rng.uniform01());
    }
    out.push_back(v);
  }
  return out;
}

// --- specs -----------------------------------------------------------------

TEST(ModelSpec, EveryAlgorithmRoundTripsByName) {
  EXPECT_EQ(all_algorithms().size(), 11u);
  for (Algorithm a : all_algorithms()) EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_THROW(parse_algorithm("roberta"), Error);
}

TEST(ModelSpec, DefaultsValidate) {
  for (Algorithm a : all_algorithms()) EXPECT_NO_THROW(validate_spec(default_spec(a)));
  EXPECT_EQ(default_spec(Algorithm::kAdaBoost).get_int("n_estimators", 0), 50);
  EXPECT_EQ(default_spec(Algorithm::kRandomForest).get_int("n_estimators", 0), 100);
  EXPECT_DOUBLE_EQ(default_spec(Algorithm::kGradientBoosting).get_double("learning_rate", 0), 0.1);
  EXPECT_EQ(default_spec(Algorithm::kGradientBoosting).get_int("max_depth", 0), 3);
  EXPECT_DOUBLE_EQ(default_spec(Algorithm::kSgdHinge).get_double("learning_rate", 0), 0.01);
  EXPECT_EQ(default_spec(Algorithm::kKnn).get_int("k", 0), 5);
}

TEST(ModelSpec, RejectsBadValues) {
  auto expect_bad = [](ModelSpec spec) {
    try {
      validate_spec(spec);
      ADD_FAILURE() << "accepted invalid spec";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    }
  };
  expect_bad(spec_with(Algorithm::kMultinomialNb, {{"alpha", 0.0}}));
  expect_bad(spec_with(Algorithm::kRandomForest, {{"n_estimators", std::int64_t{0}}}));
  expect_bad(spec_with(Algorithm::kGradientBoosting, {{"learning_rate", -0.1}}));
  expect_bad(spec_with(Algorithm::kLogisticRegression, {{"solver", std::string("lbfgs")}}));
  expect_bad(spec_with(Algorithm::kKernelSvcRbf, {{"kernel", std::string("poly")}}));
  expect_bad(spec_with(Algorithm::kBernoulliNb, {{"fit_prior", std::int64_t{1}}}));
}

// --- naive Bayes -----------------------------------------------------------

// Vocabulary: fraud hoax scandal policy vote debate.
TrainingSet headline_set() {
  return make_set({dense({1, 1, 0, 0, 0, 0}), dense({1, 0, 1, 0, 0, 0}), dense({0, 0, 0, 1, 1, 0}),
                   dense({0, 0, 0, 0, 1, 1})},
                  {1, 1, 0, 0}, 6);
}

TEST(NaiveBayes, HandPosteriorOracle) {
  auto nb = NaiveBayes::fit(default_spec(Algorithm::kMultinomialNb), headline_set());
  auto joint = nb.joint_log_likelihood(dense({1, 1, 0, 0, 0, 0}));
  // 0.5 * 3/10 * 2/10 and 0.5 * 1/10 * 1/10
  EXPECT_NEAR(std::exp(joint[1]), 0.03, 1e-12);
  EXPECT_NEAR(std::exp(joint[0]), 0.005, 1e-12);
  EXPECT_EQ(nb.predict(dense({1, 1, 0, 0, 0, 0})), 1);
  EXPECT_NEAR(nb.decision_score(dense({1, 1, 0, 0, 0, 0})), 0.03 / 0.035, 1e-12);
}

TEST(NaiveBayes, TieGoesToClassZero) {
  auto nb = NaiveBayes::fit(default_spec(Algorithm::kMultinomialNb), headline_set());
  // "vote fraud" is symmetric: each class saw one of the two words.
  FeatureVector x = dense({1, 0, 0, 0, 1, 0});
  EXPECT_DOUBLE_EQ(nb.decision_score(x), 0.5);
  EXPECT_EQ(nb.predict(x), 0);
}

TEST(NaiveBayes, LargeAlphaApproachesPrior) {
  auto data = make_set({dense({1, 0}), dense({1, 1}), dense({2, 0}), dense({0, 3})}, {1, 1, 1, 0}, 2);
  for (Algorithm a : {Algorithm::kMultinomialNb, Algorithm::kBernoulliNb}) {
    auto nb = NaiveBayes::fit(spec_with(a, {{"alpha", 1e6}}), data);
    EXPECT_NEAR(nb.decision_score(dense({0, 5})), 0.75, 1e-3);
    EXPECT_NEAR(nb.decision_score(dense({4, 0})), 0.75, 1e-3);
  }
}

TEST(NaiveBayes, PosteriorInvariantToJointShift) {
  for (double shift : {-1000.0, -3.5, 0.0, 42.0, 900.0}) {
    EXPECT_NEAR(posterior_from_joint({-2.0 + shift, -1.0 + shift}), posterior_from_joint({-2.0, -1.0}), 1e-15);
  }
}

// Frozen from sklearn BernoulliNB(alpha=1) / MultinomialNB(alpha=0.5).
TEST(NaiveBayes, MatchesReferenceImplementation) {
  auto x = make_set({dense({1, 0, 1, 0}), dense({1, 1, 0, 0}), dense({0, 0, 1, 1}), dense({0, 1, 1, 1}),
                     dense({1, 0, 0, 0})},
                    {1, 1, 0, 0, 1}, 4);
  auto b = NaiveBayes::fit(default_spec(Algorithm::kBernoulliNb), x);
  EXPECT_NEAR(b.decision_score(dense({1, 0, 0, 1})), 0.78661659, 1e-8);
  EXPECT_NEAR(b.decision_score(dense({0, 1, 1, 0})), 0.35322525, 1e-8);
  for (auto& v : x.x) {
    for (double& value : v.values) value *= 2;
  }
  auto m = NaiveBayes::fit(spec_with(Algorithm::kMultinomialNb, {{"alpha", 0.5}}), x);
  EXPECT_NEAR(m.decision_score(dense({1, 0, 0, 1})), 0.68421053, 1e-8);
  EXPECT_NEAR(m.decision_score(dense({0, 1, 1, 0})), 0.45454545, 1e-8);
}

TEST(NaiveBayes, RejectsNegativeCountsAndMissingClass) {
  auto neg = make_set({dense({-1, 0}), dense({1, 0})}, {0, 1}, 2);
  EXPECT_THROW(fit_naive_bayes(default_spec(Algorithm::kMultinomialNb), neg), Error);
  auto one_class = make_set({dense({1, 0}), dense({1, 2})}, {1, 1}, 2);
  EXPECT_THROW(fit_naive_bayes(default_spec(Algorithm::kMultinomialNb), one_class), Error);
}

// --- linear models ---------------------------------------------------------

TEST(Linear, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    TrainingSet data = random_set(100 + static_cast<std::uint64_t>(trial), 15);
    std::vector<double> w(data.dimension);
    for (double& v : w) v = rng.normal();
    double b = rng.normal();
    const double lambda = 0.05;
    for (LinearLoss loss : {LinearLoss::kLogistic, LinearLoss::kSquaredHinge}) {
      std::vector<double> gw;
      double gb = 0;
      linear_gradient(loss, w, b, data, lambda, gw, gb);
      const double h = 1e-6;
      for (std::size_t j = 0; j <= w.size(); ++j) {
        auto wp = w, wm = w;
        double bp = b, bm = b;
        if (j < w.size()) {
          wp[j] += h;
          wm[j] -= h;
        } else {
          bp += h;
          bm -= h;
        }
        double fd = (linear_objective(loss, wp, bp, data, lambda) - linear_objective(loss, wm, bm, data, lambda)) /
                    (2 * h);
        double an = j < w.size() ? gw[j] : gb;
        EXPECT_LT(std::abs(fd - an), 1e-4 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

// Minimizers frozen from a BFGS run on the same objective with lambda = 0.1.
TEST(Linear, ConvergesToReferenceMinimizer) {
  auto data = plane_set();
  auto lr = LinearModel::fit(
      spec_with(Algorithm::kLogisticRegression, {{"alpha", 0.1}, {"max_iter", std::int64_t{200000}}, {"tol", 1e-15}}),
      data);
  EXPECT_NEAR(lr.weights()[0], -0.99858547, 1e-5);
  EXPECT_NEAR(lr.weights()[1], 0.17373524, 1e-5);
  EXPECT_NEAR(lr.bias(), 0.40427013, 1e-5);
  auto svc = LinearModel::fit(
      spec_with(Algorithm::kLinearSvc, {{"alpha", 0.1}, {"max_iter", std::int64_t{200000}}, {"tol", 1e-15}}), data);
  EXPECT_NEAR(svc.weights()[0], -1.71192494, 1e-5);
  EXPECT_NEAR(svc.weights()[1], 0.32139025, 1e-5);
  EXPECT_NEAR(svc.bias(), 0.68190303, 1e-5);
}

TEST(Linear, SeparableToySetIsFitExactly) {
  auto data = make_set({dense({2, 0}), dense({1.5, 0.2}), dense({2.2, 0.4}), dense({0, 2}), dense({0.3, 1.8}),
                        dense({0.1, 2.5})},
                       {1, 1, 1, 0, 0, 0}, 2);
  for (Algorithm a : {Algorithm::kLogisticRegression, Algorithm::kSgdHinge, Algorithm::kLinearSvc}) {
    auto m = LinearModel::fit(default_spec(a), data);
    EXPECT_DOUBLE_EQ(accuracy(m, data), 1.0) << algorithm_name(a);
  }
}

TEST(Linear, SinglePositiveFeatureGetsPositiveWeight) {
  auto data = make_set({dense({1, 0.5}), dense({2, 0.5}), dense({0.5, 0.5}), dense({0, 0.5}), dense({0, 0.5}),
                        dense({0, 0.5})},
                       {1, 1, 1, 0, 0, 0}, 2);
  for (Algorithm a : {Algorithm::kLogisticRegression, Algorithm::kSgdHinge, Algorithm::kLinearSvc}) {
    auto m = LinearModel::fit(default_spec(a), data);
    EXPECT_GT(m.weights()[0], 0.0) << algorithm_name(a);
  }
}

TEST(Linear, DuplicatedTrainingSetKeepsBoundary) {
  auto data = plane_set();
  auto doubled = data;
  doubled.x.insert(doubled.x.end(), data.x.begin(), data.x.end());
  doubled.y.insert(doubled.y.end(), data.y.begin(), data.y.end());
  auto queries = random_queries(3, 100, 2);
  for (Algorithm a : {Algorithm::kLogisticRegression, Algorithm::kLinearSvc}) {
    auto m1 = LinearModel::fit(default_spec(a), data);
    auto m2 = LinearModel::fit(default_spec(a), doubled);
    for (const auto& q : queries) EXPECT_NEAR(m1.decision_score(q), m2.decision_score(q), 1e-6);
  }
}

TEST(Linear, NonFiniteLossReportsEpoch) {
  auto data = make_set({dense({1e300, 0}), dense({0, 1e300})}, {1, 0}, 2);
  try {
    LinearModel::fit(spec_with(Algorithm::kSgdHinge, {{"alpha", 0.0}, {"learning_rate", 1e300}}), data);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergence);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(Linear, LambdaFollowsC) {
  EXPECT_DOUBLE_EQ(regularization_strength(default_spec(Algorithm::kLogisticRegression)), 1e-4);
  EXPECT_DOUBLE_EQ(regularization_strength(spec_with(Algorithm::kLinearSvc, {{"C", 10.0}})), 1e-5);
  EXPECT_DOUBLE_EQ(regularization_strength(spec_with(Algorithm::kLinearSvc, {{"alpha", 0.3}})), 0.3);
}

// --- kernel SVC ------------------------------------------------------------

TEST(KernelSvc, XorIsSeparable) {
  auto data = xor_set();
  auto svc = KernelSvc::fit(default_spec(Algorithm::kKernelSvcRbf), data);
  EXPECT_DOUBLE_EQ(accuracy(svc, data), 1.0);
  EXPECT_DOUBLE_EQ(svc.gamma(), 2.0);
}

// Decision values frozen from libsvm (sklearn SVC, C=1, gamma="scale").
TEST(KernelSvc, MatchesReferenceSolver) {
  auto data = plane_set();
  auto svc = KernelSvc::fit(spec_with(Algorithm::kKernelSvcRbf, {{"tol", 1e-6}}), data);
  EXPECT_NEAR(svc.gamma(), 5.987837205675971, 1e-12);
  EXPECT_EQ(svc.support_vector_count(), 10u);
  EXPECT_NEAR(svc.decision_score(dense({0.2, 0.2})), 0.94426826, 1e-5);
  EXPECT_NEAR(svc.decision_score(dense({0.9, 0.9})), -0.91004105, 1e-5);
  EXPECT_NEAR(svc.decision_score(dense({0.5, 0.1})), -0.39415226, 1e-5);
  EXPECT_NEAR(svc.decision_score(dense({0.1, 0.6})), 1.15566561, 1e-5);
}

TEST(KernelSvc, SmallGammaAgreesWithLinearModel) {
  auto data = make_set({dense({2, 0.1}), dense({1.5, 0.2}), dense({2.2, 0.4}), dense({1.8, 1.0}), dense({0.1, 2}),
                        dense({0.3, 1.8}), dense({0.1, 2.5}), dense({1.0, 1.9})},
                       {1, 1, 1, 1, 0, 0, 0, 0}, 2);
  auto rbf = KernelSvc::fit(spec_with(Algorithm::kKernelSvcRbf, {{"gamma", 1e-3}, {"C", 1000.0}}), data);
  auto lin = LinearModel::fit(default_spec(Algorithm::kLinearSvc), data);
  auto queries = random_queries(11, 200, 2);
  std::size_t agree = 0;
  for (auto& q : queries) {
    for (double& v : q.values) v *= 2.5;
    agree += rbf.predict(q) == lin.predict(q) ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(agree) / static_cast<double>(queries.size()), 0.9);
}

TEST(KernelSvc, ContradictoryDuplicatesAreTolerated) {
  auto data = make_set({dense({1, 1}), dense({1, 1}), dense({0, 2}), dense({2, 0})}, {1, 0, 1, 0}, 2);
  KernelSvc svc;
  ASSERT_NO_THROW(svc = KernelSvc::fit(default_spec(Algorithm::kKernelSvcRbf), data));
  EXPECT_TRUE(std::isfinite(svc.decision_score(dense({1, 1}))));
}

TEST(KernelSvc, CapRaisesSizeError) {
  auto data = random_set(5, 30);
  try {
    fit_kernel_svc_rbf(spec_with(Algorithm::kKernelSvcRbf, {{"max_train", std::int64_t{20}}}), data);
    FAIL() << "expected size error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSize);
    EXPECT_NE(std::string(e.what()).find("linear"), std::string::npos);
  }
}

// --- trees -----------------------------------------------------------------

TEST(Tree, GiniFormula) {
  EXPECT_DOUBLE_EQ(gini_impurity(2, 4), 0.5);
  EXPECT_DOUBLE_EQ(gini_impurity(0, 4), 0.0);
  EXPECT_DOUBLE_EQ(gini_impurity(4, 4), 0.0);
}

TEST(Tree, PureNodeIsLeaf) {
  auto data = make_set({dense({1, 0}), dense({0, 1}), dense({2, 3})}, {1, 1, 1}, 2);
  std::vector<double> y{1, 1, 1}, w{1, 1, 1};
  auto nodes = grow_tree(data.x, y, w, 2, {}, nullptr, class_share_leaf(y, w));
  ASSERT_EQ(nodes.size(), 1u);
  EXPECT_EQ(nodes[0].feature, -1);
  EXPECT_DOUBLE_EQ(nodes[0].value, 1.0);
}

TEST(Tree, XorNeedsDepthTwo) {
  auto data = xor_set();
  auto tree = DecisionTree::fit(default_spec(Algorithm::kDecisionTree), data);
  EXPECT_EQ(tree.depth(), 2u);
  EXPECT_DOUBLE_EQ(accuracy(tree, data), 1.0);
}

TEST(Tree, TiesPreferLowestFeatureThenThreshold) {
  // Features 0 and 2 are identical perfect splitters.
  auto data = make_set({dense({1, 5, 1}), dense({2, 0, 2}), dense({5, 1, 5}), dense({6, 3, 6})}, {0, 0, 1, 1}, 3);
  auto tree = DecisionTree::fit(default_spec(Algorithm::kDecisionTree), data);
  EXPECT_EQ(tree.nodes()[0].feature, 0);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 3.5);
  // Equal-gain thresholds on one feature: the lowest wins.
  auto flat = make_set({dense({1}), dense({2}), dense({3}), dense({4})}, {0, 1, 0, 1}, 1);
  auto t2 = DecisionTree::fit(default_spec(Algorithm::kDecisionTree), flat);
  EXPECT_DOUBLE_EQ(t2.nodes()[0].threshold, 1.5);
}

TEST(Tree, MaxDepthIsRespected) {
  auto data = random_set(9, 80);
  auto tree = DecisionTree::fit(spec_with(Algorithm::kDecisionTree, {{"max_depth", std::int64_t{2}}}), data);
  EXPECT_LE(tree.depth(), 2u);
  auto full = DecisionTree::fit(default_spec(Algorithm::kDecisionTree), data);
  EXPECT_DOUBLE_EQ(accuracy(full, data), 1.0);
}

// --- forest ----------------------------------------------------------------

TEST(Forest, SingleTreeWithoutBootstrapIsDecisionTree) {
  auto data = random_set(12, 60);
  auto forest = RandomForest::fit(spec_with(Algorithm::kRandomForest, {{"n_estimators", std::int64_t{1}},
                                                                       {"bootstrap", false},
                                                                       {"max_features", std::string("all")}}),
                                  data);
  auto tree = DecisionTree::fit(default_spec(Algorithm::kDecisionTree), data);
  for (const auto& q : random_queries(4, 100, 6)) EXPECT_EQ(forest.predict(q), tree.predict(q));
}

TEST(Forest, SameSeedSameForest) {
  auto data = random_set(13, 60);
  auto a = RandomForest::fit(default_spec(Algorithm::kRandomForest, 5), data);
  auto b = RandomForest::fit(default_spec(Algorithm::kRandomForest, 5), data);
  for (const auto& q : random_queries(4, 100, 6)) EXPECT_EQ(a.decision_score(q), b.decision_score(q));
}

TEST(Forest, NotWorseThanSingleTreeOnSeparableSet) {
  auto train = random_set(21, 150);
  auto test = random_set(22, 80);
  auto forest = RandomForest::fit(default_spec(Algorithm::kRandomForest), train);
  auto tree = DecisionTree::fit(default_spec(Algorithm::kDecisionTree), train);
  EXPECT_GE(accuracy(forest, test), accuracy(tree, test) - 0.05);
}

TEST(Forest, MaxFeaturesResolution) {
  EXPECT_EQ(resolve_max_features(default_spec(Algorithm::kRandomForest), 100), 10u);
  EXPECT_EQ(resolve_max_features(spec_with(Algorithm::kRandomForest, {{"max_features", std::string("log2")}}), 100),
            6u);
  EXPECT_EQ(resolve_max_features(spec_with(Algorithm::kRandomForest, {{"max_features", std::int64_t{7}}}), 100), 7u);
  EXPECT_EQ(resolve_max_features(spec_with(Algorithm::kRandomForest, {{"max_features", std::string("all")}}), 100),
            0u);
}

// --- boosting --------------------------------------------------------------

TEST(AdaBoost, FirstAlphaFromWeightedError) {
  auto data = make_set({dense({0}), dense({0}), dense({1}), dense({1})}, {0, 1, 1, 1}, 1);
  auto ada = AdaBoost::fit(spec_with(Algorithm::kAdaBoost, {{"n_estimators", std::int64_t{1}}}), data);
  ASSERT_EQ(ada.stages().size(), 1u);
  EXPECT_DOUBLE_EQ(ada.stages()[0].weighted_error, 0.25);
  EXPECT_NEAR(ada.stages()[0].alpha, 0.5 * std::log(3.0), 1e-12);
  EXPECT_NEAR(ada.stages()[0].alpha, 0.5493, 1e-4);
}

TEST(AdaBoost, OneEstimatorIsBestStump) {
  auto data = random_set(31, 60);
  auto ada = AdaBoost::fit(spec_with(Algorithm::kAdaBoost, {{"n_estimators", std::int64_t{1}}}), data);
  auto stump = DecisionTree::fit(spec_with(Algorithm::kDecisionTree, {{"max_depth", std::int64_t{1}}}), data);
  for (const auto& q : random_queries(8, 100, 6)) EXPECT_EQ(ada.predict(q), stump.predict(q));
}

TEST(AdaBoost, ExponentialLossDecreases) {
  auto ada = AdaBoost::fit(default_spec(Algorithm::kAdaBoost), plane_set());
  ASSERT_GT(ada.stages().size(), 2u);
  double prev = 1.0;
  for (const auto& st : ada.stages()) {
    EXPECT_LT(st.weighted_error, 0.5);
    EXPECT_LT(st.exponential_loss, prev);
    prev = st.exponential_loss;
  }
}

TEST(AdaBoost, PerfectStumpIsClampedAndStops) {
  auto data = make_set({dense({0}), dense({1}), dense({0}), dense({1})}, {0, 1, 0, 1}, 1);
  auto ada = AdaBoost::fit(default_spec(Algorithm::kAdaBoost), data);
  EXPECT_EQ(ada.status(), "perfect_fit");
  ASSERT_EQ(ada.stages().size(), 1u);
  EXPECT_DOUBLE_EQ(ada.stages()[0].weighted_error, 1e-10);
  EXPECT_NEAR(ada.stages()[0].alpha, 0.5 * std::log((1 - 1e-10) / 1e-10), 1e-9);
}

TEST(AdaBoost, UselessStumpStops) {
  // Constant features: the only stump is a single leaf at 50% error.
  auto data = make_set({dense({1}), dense({1}), dense({1}), dense({1})}, {0, 1, 0, 1}, 1);
  auto ada = AdaBoost::fit(default_spec(Algorithm::kAdaBoost), data);
  EXPECT_EQ(ada.status(), "weak_learner_exhausted");
  EXPECT_TRUE(ada.stages().empty());
  EXPECT_EQ(ada.predict(dense({1})), 0);
}

TEST(GradientBoosting, TrainingLossNonIncreasing) {
  auto gb = GradientBoosting::fit(default_spec(Algorithm::kGradientBoosting), plane_set());
  const auto& loss = gb.training_loss();
  ASSERT_EQ(loss.size(), 101u);
  EXPECT_NEAR(loss[0], std::log(2.0), 1e-12);
  for (std::size_t m = 1; m < loss.size(); ++m) EXPECT_LE(loss[m], loss[m - 1] + 1e-12);
}

// --- knn -------------------------------------------------------------------

TEST(Knn, KOnePredictsOwnLabel) {
  auto data = random_set(41, 40);
  auto knn = Knn::fit(spec_with(Algorithm::kKnn, {{"k", std::int64_t{1}}}), data);
  for (std::size_t i = 0; i < data.size(); ++i) EXPECT_EQ(knn.predict(data.x[i]), data.y[i]);
}

TEST(Knn, KEqualsNPredictsMajority) {
  auto data = random_set(42, 30, 0.2);
  auto knn = Knn::fit(spec_with(Algorithm::kKnn, {{"k", std::int64_t{30}}}), data);
  for (const auto& q : random_queries(5, 50, 6)) EXPECT_EQ(knn.predict(q), 0);
}

TEST(Knn, ThreePointVote) {
  // Query (1, 0.2): distances 0.0194 (a), 0.3066 (b), 0.8039 (c).
  auto data = make_set({dense({1, 0}), dense({1, 1}), dense({0, 1})}, {1, 0, 0}, 2);
  auto q = dense({1, 0.2});
  EXPECT_NEAR(cosine_distance(q, data.x[0]), 1 - 1 / std::sqrt(1.04), 1e-12);
  auto k3 = Knn::fit(spec_with(Algorithm::kKnn, {{"k", std::int64_t{3}}}), data);
  EXPECT_NEAR(k3.decision_score(q), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(k3.predict(q), 0);
  auto k1 = Knn::fit(spec_with(Algorithm::kKnn, {{"k", std::int64_t{1}}}), data);
  EXPECT_EQ(k1.predict(q), 1);
  auto k2 = Knn::fit(spec_with(Algorithm::kKnn, {{"k", std::int64_t{2}}}), data);
  EXPECT_DOUBLE_EQ(k2.decision_score(q), 0.5);
  EXPECT_EQ(k2.predict(q), 0);
}

TEST(Knn, KLargerThanTrainingSetFails) {
  auto data = random_set(43, 4);
  EXPECT_THROW(fit_knn(spec_with(Algorithm::kKnn, {{"k", std::int64_t{5}}}), data), Error);
}

// --- trained models --------------------------------------------------------

TEST(TrainedModel, ThresholdsFollowScoreKind) {
  EXPECT_EQ(label_from_score(0.7, ScoreKind::kProbability), 1);
  EXPECT_EQ(label_from_score(0.5, ScoreKind::kProbability), 0);
  EXPECT_EQ(label_from_score(-2.3, ScoreKind::kMargin), 0);
  EXPECT_EQ(label_from_score(0.0, ScoreKind::kMargin), 0);
  EXPECT_EQ(label_from_score(0.3, ScoreKind::kMargin), 1);
}

TEST(TrainedModel, FingerprintMismatchIsRejected) {
  auto data = random_set(51, 30);
  for (auto& x : data.x) x.fingerprint = 77;
  auto model = fit_model(default_spec(Algorithm::kLogisticRegression), data, 77);
  FeatureVector good = data.x[0];
  EXPECT_NO_THROW(decision_score(model, good));
  FeatureVector bad = good;
  bad.fingerprint = 78;
  try {
    predict_label(model, bad);
    FAIL() << "expected compatibility error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCompatibility);
  }
}

TEST(TrainedModel, EveryAlgorithmFitsAndScores) {
  auto data = random_set(61, 60);
  auto queries = random_queries(62, 50, 6);
  for (Algorithm a : all_algorithms()) {
    SCOPED_TRACE(std::string(algorithm_name(a)));
    auto model = fit_model(default_spec(a), data);
    for (const auto& q : queries) {
      DecisionScore s = decision_score(model, q);
      EXPECT_TRUE(std::isfinite(s.value));
      if (s.kind == ScoreKind::kProbability) {
        EXPECT_GE(s.value, 0.0);
        EXPECT_LE(s.value, 1.0);
      }
      EXPECT_EQ(decision_score(model, q).value, s.value);
    }
    EXPECT_GT(accuracy(*model.classifier, data), 0.6);
  }
}

TEST(TrainedModel, RefitIsDeterministic) {
  auto data = random_set(63, 60);
  auto queries = random_queries(64, 50, 6);
  for (Algorithm a : all_algorithms()) {
    auto m1 = fit_model(default_spec(a, 9), data);
    auto m2 = fit_model(default_spec(a, 9), data);
    for (const auto& q : queries) {
      EXPECT_NEAR(m1.classifier->decision_score(q), m2.classifier->decision_score(q), 1e-9) << algorithm_name(a);
    }
  }
}

TEST(Serialization, RoundTripPreservesScoresBitForBit) {
  auto data = random_set(71, 60);
  auto queries = random_queries(72, 100, 6);
  for (Algorithm a : all_algorithms()) {
    SCOPED_TRACE(std::string(algorithm_name(a)));
    auto model = fit_model(default_spec(a), data);
    model.notes["origin"] = "unit";
    auto back = decode_model(encode_model(model));
    EXPECT_EQ(back.spec.algorithm, a);
    EXPECT_EQ(back.spec.hyperparameters, model.spec.hyperparameters);
    EXPECT_EQ(back.notes, model.notes);
    EXPECT_EQ(back.trained_at, model.trained_at);
    for (const auto& q : queries) {
      EXPECT_EQ(back.classifier->decision_score(q), model.classifier->decision_score(q));
    }
  }
}

TEST(Serialization, DamageIsDetected) {
  auto model = fit_model(default_spec(Algorithm::kMultinomialNb), random_set(73, 20));
  std::string bytes = encode_model(model);
  auto code_of = [](std::string_view b) {
    try {
      decode_model(b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of(std::string_view(bytes).substr(0, bytes.size() - 3)), ErrorCode::kIntegrity);
  EXPECT_EQ(code_of(std::string_view(bytes).substr(0, 10)), ErrorCode::kIntegrity);
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x01;
  EXPECT_EQ(code_of(flipped), ErrorCode::kIntegrity);
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(code_of(magic), ErrorCode::kIntegrity);
}

TEST(Serialization, FutureVersionNeedsMigration) {
  auto model = fit_model(default_spec(Algorithm::kMultinomialNb), random_set(74, 20));
  std::string bytes = encode_model(model);
  bytes[4] = 2;
  try {
    decode_model(bytes);
    FAIL() << "expected migration error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMigration);
    std::string msg = e.what();
    EXPECT_NE(msg.find('2'), std::string::npos);
    EXPECT_NE(msg.find('1'), std::string::npos);
  }
}

TEST(Serialization, RegistryStoresModelAndMeta) {
  auto dir = std::filesystem::temp_directory_path() / "fakewatch_registry_test";
  std::filesystem::remove_all(dir);
  ModelRegistry registry(dir.string());
  auto model = fit_model(default_spec(Algorithm::kRandomForest), random_set(75, 30));
  registry.store("forest", model);
  EXPECT_TRUE(std::filesystem::exists(dir / "forest" / "model.fkw"));
  EXPECT_TRUE(std::filesystem::exists(dir / "forest" / "meta.json"));
  EXPECT_EQ(registry.names(), std::vector<std::string>{"forest"});
  auto back = registry.load("forest");
  auto q = dense({0.2, 0.4, 0, 0.1, 0.9, 0});
  EXPECT_EQ(back.classifier->decision_score(q), model.classifier->decision_score(q));
  EXPECT_THROW(registry.load("missing"), Error);
  EXPECT_THROW(registry.store("../escape", model), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace fakewatch::model_hub
