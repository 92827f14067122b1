#include "fakewatch/evaluation/ttest.hpp"

#include <cmath>
#include <limits>

#include "fakewatch/common/error.hpp"

namespace fakewatch::evaluation {
namespace {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> x) {
  Moments m;
  m.n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / m.n;
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.var = ss / (m.n - 1.0);
  return m;
}

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::kDivergence, "incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs 0 <= x <= 1");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double p = regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return std::min(1.0, std::max(0.0, p));
}

TTestResult ttest(std::span<const double> a, std::span<const double> b, TTestVariant variant, double alpha) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "t-test needs at least two values per sample (got " +
                                                 std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  if (ma.var == 0.0 && mb.var == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "t-test needs non-zero variance in at least one sample");
  }
  TTestResult r;
  r.mean_a = ma.mean;
  r.mean_b = mb.mean;
  double se2 = 0.0;
  if (variant == TTestVariant::kWelch) {
    const double va = ma.var / ma.n;
    const double vb = mb.var / mb.n;
    se2 = va + vb;
    r.degrees_of_freedom = se2 * se2 / (va * va / (ma.n - 1.0) + vb * vb / (mb.n - 1.0));
  } else {
    r.degrees_of_freedom = ma.n + mb.n - 2.0;
    const double pooled = ((ma.n - 1.0) * ma.var + (mb.n - 1.0) * mb.var) / r.degrees_of_freedom;
    se2 = pooled * (1.0 / ma.n + 1.0 / mb.n);
  }
  r.t_statistic = (ma.mean - mb.mean) / std::sqrt(se2);
  r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
  r.significant = r.p_value < alpha;
  return r;
}

TTestResult welch_ttest(std::span<const double> a, std::span<const double> b, double alpha) {
  return ttest(a, b, TTestVariant::kWelch, alpha);
}

}  // namespace fakewatch::evaluation
