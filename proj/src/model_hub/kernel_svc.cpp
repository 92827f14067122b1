#include "fakewatch/model_hub/kernel_svc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fakewatch/common/error.hpp"
#include "fakewatch/simd/kernels.hpp"

namespace fakewatch::model_hub {
namespace {

constexpr double kTau = 1e-12;

double rbf(double gamma, const FeatureVector& a, double na, const FeatureVector& b, double nb) {
  double d2 = std::max(0.0, na + nb - 2.0 * features::sparse_dot(a, b));
  return std::exp(-gamma * d2);
}

}  // namespace

double scale_gamma(const TrainingSet& data) {
  const double count = static_cast<double>(data.size()) * static_cast<double>(data.dimension);
  if (count == 0.0) return 1.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& x : data.x) {
    for (double v : x.values) {
      sum += v;
      sum_sq += v * v;
    }
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  if (!(var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(data.dimension) * var);
}

// SMO on the dual  min 1/2 a'Qa - e'a,  0 <= a_i <= C,  y'a = 0  with
// Q_ij = y_i y_j K(x_i, x_j), following the LIBSVM solver: maximal-violating
// i, second-order choice of j, stop when the KKT gap drops below tol.
KernelSvc KernelSvc::fit(const ModelSpec& spec, const TrainingSet& data) {
  const std::size_t n = data.size();
  const auto cap = static_cast<std::size_t>(spec.get_int("max_train", 3000));
  if (n > cap) {
    throw Error(ErrorCode::kSize, "kernel SVC training set has " + std::to_string(n) + " rows, cap is " +
                                      std::to_string(cap) + "; use a linear model for larger data");
  }
  const double c = spec.get_double("C", 1.0);
  const double eps = spec.get_double("tol", 1e-3);
  const auto max_iter = static_cast<std::size_t>(spec.get_int("max_iter", 10000000));

  KernelSvc svc;
  const ParamValue* g = spec.find("gamma");
  if (g && !std::holds_alternative<std::string>(*g)) {
    svc.gamma_ = spec.get_double("gamma", 1.0);
  } else {
    svc.gamma_ = scale_gamma(data);
  }

  std::vector<double> y(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = data.y[i] == 1 ? 1.0 : -1.0;
    sq[i] = features::squared_norm(data.x[i]);
  }
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double v = y[i] * y[j] * rbf(svc.gamma_, data.x[i], sq[i], data.x[j], sq[j]);
      q[i * n + j] = v;
      q[j * n + i] = v;
    }
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c); };

  std::size_t iter = 0;
  while (iter < max_iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    if (i == n) break;
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    const double* qi = &q[i * n];
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, y[t] * grad[t]);
      double b = gmax + y[t] * grad[t];
      if (b > 0) {
        double a = qi[i] + q[t * n + t] - 2.0 * y[i] * y[t] * qi[t];
        if (a <= 0) a = kTau;
        double obj = -(b * b) / a;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < eps || j == n) break;
    ++iter;

    const double* qj = &q[j * n];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = qi[i] + qj[j] + 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      double delta = (-grad[i] - grad[j]) / quad;
      double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qi[i] + qj[j] - 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      double delta = (grad[i] - grad[j]) / quad;
      double total = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (total > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = total - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = total;
      }
      if (total > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = total - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = total;
      }
    }
    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    // Q is symmetric, so row i doubles as column i.
    simd::axpy(di, std::span<const double>(qi, n), grad);
    simd::axpy(dj, std::span<const double>(qj, n), grad);
  }
  svc.iterations_ = iter;

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  svc.rho_ = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      svc.support_.push_back(data.x[t]);
      svc.support_sq_norm_.push_back(sq[t]);
      svc.coef_.push_back(alpha[t] * y[t]);
    }
  }
  return svc;
}

double KernelSvc::decision_score(const FeatureVector& x) const {
  const double nx = features::squared_norm(x);
  double s = -rho_;
  for (std::size_t t = 0; t < support_.size(); ++t) s += coef_[t] * rbf(gamma_, support_[t], support_sq_norm_[t], x, nx);
  return s;
}

void KernelSvc::encode(BinaryWriter& out) const {
  out.f64(gamma_);
  out.f64(rho_);
  out.u64(iterations_);
  out.f64_vec(coef_);
  for (const auto& sv : support_) {
    out.u32_vec(sv.indices);
    out.f64_vec(sv.values);
  }
}

KernelSvc KernelSvc::decode(BinaryReader& in) {
  KernelSvc svc;
  svc.gamma_ = in.f64();
  svc.rho_ = in.f64();
  svc.iterations_ = in.u64();
  svc.coef_ = in.f64_vec();
  for (std::size_t t = 0; t < svc.coef_.size(); ++t) {
    FeatureVector sv;
    sv.indices = in.u32_vec();
    sv.values = in.f64_vec();
    if (sv.indices.size() != sv.values.size()) throw Error(ErrorCode::kIntegrity, "support vector length mismatch");
    svc.support_sq_norm_.push_back(features::squared_norm(sv));
    svc.support_.push_back(std::move(sv));
  }
  return svc;
}

}  // namespace fakewatch::model_hub
