#pragma once

#include <span>

namespace fakewatch::evaluation {

enum class TTestVariant { kWelch, kStudentPooled };

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;  // two-sided
  double mean_a = 0.0;
  double mean_b = 0.0;
  bool significant = false;  // p < alpha
};

// Independent two-sample t-test. Each sample needs at least two values and
// the samples may not both be constant.
TTestResult welch_ttest(std::span<const double> a, std::span<const double> b, double alpha = 0.05);
TTestResult ttest(std::span<const double> a, std::span<const double> b, TTestVariant variant, double alpha = 0.05);

// I_x(a, b) by Lentz's continued fraction; accurate to about 1e-14.
double regularized_incomplete_beta(double a, double b, double x);
// Two-sided tail probability of Student's t distribution.
double student_t_two_sided_p(double t, double df);

}  // namespace fakewatch::evaluation
