#include "fakewatch/model_hub/model_spec.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {
namespace {

struct AlgorithmInfo {
  Algorithm algorithm;
  std::string_view name;
  std::string_view display;
};

constexpr std::array<AlgorithmInfo, 11> kAlgorithms = {{
    {Algorithm::kMultinomialNb, "multinomial_nb", "Multinomial Naive Bayes"},
    {Algorithm::kBernoulliNb, "bernoulli_nb", "Bernoulli Naive Bayes"},
    {Algorithm::kLogisticRegression, "logistic_regression", "Logistic Regression"},
    {Algorithm::kSgdHinge, "sgd_hinge", "SGD Classifier"},
    {Algorithm::kLinearSvc, "linear_svc", "Linear SVC"},
    {Algorithm::kKernelSvcRbf, "kernel_svc_rbf", "SVC"},
    {Algorithm::kDecisionTree, "decision_tree", "Decision Tree"},
    {Algorithm::kRandomForest, "random_forest", "Random Forest"},
    {Algorithm::kAdaBoost, "adaboost", "AdaBoost"},
    {Algorithm::kGradientBoosting, "gradient_boosting", "Gradient Boosting"},
    {Algorithm::kKnn, "knn", "K-Nearest Neighbors"},
}};

enum class Kind { kBool, kInt, kNumber, kKeyword, kNumberOrKeyword };

struct ParamRule {
  std::string_view name;
  Kind kind;
  ParamValue fallback;
  std::function<bool(double)> range = nullptr;
  std::vector<std::string_view> keywords = {};
};

bool positive(double v) { return v > 0.0; }
bool at_least_one(double v) { return v >= 1.0; }
bool at_least_two(double v) { return v >= 2.0; }
bool non_negative(double v) { return v >= 0.0; }

std::vector<ParamRule> rules_for(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kMultinomialNb:
    case Algorithm::kBernoulliNb:
      return {{"alpha", Kind::kNumber, 1.0, positive}, {"fit_prior", Kind::kBool, true}};
    case Algorithm::kLogisticRegression:
      return {{"C", Kind::kNumber, 1.0, positive},
              {"alpha", Kind::kNumber, 0.0, non_negative},
              {"penalty", Kind::kKeyword, std::string("l2"), nullptr, {"l2"}},
              {"max_iter", Kind::kInt, std::int64_t{1000}, at_least_one},
              {"tol", Kind::kNumber, 1e-6, non_negative}};
    case Algorithm::kSgdHinge:
      return {{"loss", Kind::kKeyword, std::string("hinge"), nullptr, {"hinge"}},
              {"penalty", Kind::kKeyword, std::string("l2"), nullptr, {"l2"}},
              {"learning_rate", Kind::kNumber, 0.01, positive},
              {"alpha", Kind::kNumber, 1e-4, non_negative},
              {"max_iter", Kind::kInt, std::int64_t{1000}, at_least_one},
              {"tol", Kind::kNumber, 1e-3, non_negative},
              {"n_iter_no_change", Kind::kInt, std::int64_t{5}, at_least_one}};
    case Algorithm::kLinearSvc:
      return {{"C", Kind::kNumber, 1.0, positive},
              {"alpha", Kind::kNumber, 0.0, non_negative},
              {"loss", Kind::kKeyword, std::string("squared_hinge"), nullptr, {"squared_hinge"}},
              {"penalty", Kind::kKeyword, std::string("l2"), nullptr, {"l2"}},
              {"max_iter", Kind::kInt, std::int64_t{1000}, at_least_one},
              {"tol", Kind::kNumber, 1e-6, non_negative}};
    case Algorithm::kKernelSvcRbf:
      return {{"kernel", Kind::kKeyword, std::string("rbf"), nullptr, {"rbf"}},
              {"C", Kind::kNumber, 1.0, positive},
              {"gamma", Kind::kNumberOrKeyword, std::string("scale"), positive, {"scale"}},
              {"tol", Kind::kNumber, 1e-3, positive},
              {"max_train", Kind::kInt, std::int64_t{3000}, at_least_two},
              {"max_iter", Kind::kInt, std::int64_t{10000000}, at_least_one}};
    case Algorithm::kDecisionTree:
      return {{"criterion", Kind::kKeyword, std::string("gini"), nullptr, {"gini"}},
              {"max_depth", Kind::kInt, std::int64_t{0}, non_negative},
              {"min_samples_split", Kind::kInt, std::int64_t{2}, at_least_two}};
    case Algorithm::kRandomForest:
      return {{"n_estimators", Kind::kInt, std::int64_t{100}, at_least_one},
              {"max_depth", Kind::kInt, std::int64_t{0}, non_negative},
              {"max_features", Kind::kNumberOrKeyword, std::string("sqrt"), at_least_one,
               {"sqrt", "auto", "log2", "all"}},
              {"min_samples_split", Kind::kInt, std::int64_t{2}, at_least_two},
              {"bootstrap", Kind::kBool, true},
              {"criterion", Kind::kKeyword, std::string("gini"), nullptr, {"gini"}}};
    case Algorithm::kAdaBoost:
      return {{"n_estimators", Kind::kInt, std::int64_t{50}, at_least_one},
              {"learning_rate", Kind::kNumber, 1.0, positive}};
    case Algorithm::kGradientBoosting:
      return {{"n_estimators", Kind::kInt, std::int64_t{100}, at_least_one},
              {"learning_rate", Kind::kNumber, 0.1, positive},
              {"max_depth", Kind::kInt, std::int64_t{3}, at_least_one},
              {"min_samples_split", Kind::kInt, std::int64_t{2}, at_least_two}};
    case Algorithm::kKnn:
      return {{"k", Kind::kInt, std::int64_t{5}, at_least_one},
              {"metric", Kind::kKeyword, std::string("cosine"), nullptr, {"cosine"}}};
  }
  return {};
}

std::optional<double> as_number(const ParamValue& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

}  // namespace

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = [] {
    std::vector<Algorithm> v;
    for (const auto& info : kAlgorithms) v.push_back(info.algorithm);
    return v;
  }();
  return all;
}

std::string_view algorithm_name(Algorithm algorithm) {
  for (const auto& info : kAlgorithms) {
    if (info.algorithm == algorithm) return info.name;
  }
  return "unknown";
}

std::string_view algorithm_display_name(Algorithm algorithm) {
  for (const auto& info : kAlgorithms) {
    if (info.algorithm == algorithm) return info.display;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& info : kAlgorithms) {
    if (info.name == name) return info.algorithm;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

const ParamValue* ModelSpec::find(const std::string& name) const {
  auto it = hyperparameters.find(name);
  return it == hyperparameters.end() ? nullptr : &it->second;
}

double ModelSpec::get_double(const std::string& name, double fallback) const {
  const ParamValue* v = find(name);
  if (!v) return fallback;
  if (auto n = as_number(*v)) return *n;
  throw Error(ErrorCode::kInvalidArgument, "hyperparameter '" + name + "' is not numeric");
}

std::int64_t ModelSpec::get_int(const std::string& name, std::int64_t fallback) const {
  const ParamValue* v = find(name);
  if (!v) return fallback;
  if (auto* i = std::get_if<std::int64_t>(v)) return *i;
  if (auto* d = std::get_if<double>(v); d && std::floor(*d) == *d) return static_cast<std::int64_t>(*d);
  throw Error(ErrorCode::kInvalidArgument, "hyperparameter '" + name + "' is not an integer");
}

bool ModelSpec::get_bool(const std::string& name, bool fallback) const {
  const ParamValue* v = find(name);
  if (!v) return fallback;
  if (auto* b = std::get_if<bool>(v)) return *b;
  throw Error(ErrorCode::kInvalidArgument, "hyperparameter '" + name + "' is not a boolean");
}

std::string ModelSpec::get_string(const std::string& name, const std::string& fallback) const {
  const ParamValue* v = find(name);
  if (!v) return fallback;
  if (auto* s = std::get_if<std::string>(v)) return *s;
  throw Error(ErrorCode::kInvalidArgument, "hyperparameter '" + name + "' is not a string");
}

ModelSpec default_spec(Algorithm algorithm, std::uint64_t seed) {
  ModelSpec spec;
  spec.algorithm = algorithm;
  spec.seed = seed;
  for (const ParamRule& rule : rules_for(algorithm)) spec.hyperparameters[std::string(rule.name)] = rule.fallback;
  return spec;
}

void validate_spec(const ModelSpec& spec) {
  const auto rules = rules_for(spec.algorithm);
  const std::string algo(algorithm_name(spec.algorithm));
  for (const auto& [name, value] : spec.hyperparameters) {
    const ParamRule* rule = nullptr;
    for (const auto& r : rules) {
      if (r.name == name) rule = &r;
    }
    if (!rule) throw Error(ErrorCode::kInvalidArgument, algo + ": unknown hyperparameter '" + name + "'");
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kInvalidArgument, algo + ": hyperparameter '" + name + "' " + why);
    };
    auto check_keyword = [&](const std::string& s) {
      for (auto k : rule->keywords) {
        if (k == s) return;
      }
      fail("has unsupported value '" + s + "'");
    };
    switch (rule->kind) {
      case Kind::kBool:
        if (!std::holds_alternative<bool>(value)) fail("must be a boolean");
        break;
      case Kind::kInt: {
        std::int64_t v = spec.get_int(name, 0);
        if (rule->range && !rule->range(static_cast<double>(v))) fail("is out of range");
        break;
      }
      case Kind::kNumber: {
        auto n = as_number(value);
        if (!n || !std::isfinite(*n)) fail("must be a finite number");
        if (rule->range && !rule->range(*n)) fail("is out of range");
        break;
      }
      case Kind::kKeyword:
        if (auto* s = std::get_if<std::string>(&value)) check_keyword(*s);
        else fail("must be a string");
        break;
      case Kind::kNumberOrKeyword:
        if (auto* s = std::get_if<std::string>(&value)) {
          check_keyword(*s);
        } else {
          auto n = as_number(value);
          if (!n || (rule->range && !rule->range(*n))) fail("is out of range");
        }
        break;
    }
  }
}

std::string param_to_string(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", v);
          return buf;
        } else return std::to_string(v);
      },
      value);
}

}  // namespace fakewatch::model_hub
