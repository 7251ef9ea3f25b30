#ifndef CLGNN_STATS_HPP_
#define CLGNN_STATS_HPP_

#include <vector>

#include "clgnn/types.hpp"

namespace clgnn {

double mean(const std::vector<double>& xs);
double sample_std(const std::vector<double>& xs);  // Bessel-corrected

// Fraction of positions where pred == truth. Sizes must match and be > 0.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Mean per-class recall over the classes that occur in truth.
double balanced_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with `dof` degrees of freedom.
double student_t_cdf(double t, int dof);

struct PairedTTestResult {
  double t = 0.0;
  double p = 0.0;  // two-sided
  int dof = 0;
  double mean_diff = 0.0;
};

// Two-sided paired t-test on a[i] - b[i]. Throws DegenerateTestError when the
// differences have zero variance or fewer than two pairs exist.
PairedTTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace clgnn

#endif  // CLGNN_STATS_HPP_
