#include "clgnn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clgnn {
namespace {

// Lentz's algorithm for the incomplete-beta continued fraction.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw DegenerateTestError("incomplete beta continued fraction did not converge");
}

}  // namespace

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ParameterError("mean of an empty vector");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ParameterError("sample_std needs at least two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw DimensionError("prediction and truth lengths differ");
  if (pred.empty()) throw ParameterError("accuracy of empty vectors");
  int hits = 0;
  for (size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double balanced_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw DimensionError("prediction and truth lengths differ");
  if (pred.empty()) throw ParameterError("balanced accuracy of empty vectors");
  int max_class = 0;
  for (int y : truth) {
    if (y < 0) throw ParameterError("negative class in truth");
    max_class = std::max(max_class, y);
  }
  std::vector<int> total(static_cast<size_t>(max_class) + 1, 0);
  std::vector<int> correct(static_cast<size_t>(max_class) + 1, 0);
  for (size_t i = 0; i < truth.size(); ++i) {
    ++total[static_cast<size_t>(truth[i])];
    if (pred[i] == truth[i]) ++correct[static_cast<size_t>(truth[i])];
  }
  double recall_sum = 0.0;
  int present = 0;
  for (size_t c = 0; c < total.size(); ++c) {
    if (total[c] == 0) continue;
    ++present;
    recall_sum += static_cast<double>(correct[c]) / static_cast<double>(total[c]);
  }
  return recall_sum / static_cast<double>(present);
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("incomplete_beta needs a, b > 0");
  if (x < 0.0 || x > 1.0) throw ParameterError("incomplete_beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int dof) {
  if (dof < 1) throw ParameterError("student_t_cdf needs dof >= 1");
  if (t == 0.0) return 0.5;
  const double v = static_cast<double>(dof);
  const double x = v / (v + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * v, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

PairedTTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionError("paired samples have different lengths");
  if (a.size() < 2) throw DegenerateTestError("paired t-test needs at least two pairs");
  std::vector<double> diffs(a.size());
  for (size_t i = 0; i < a.size(); ++i) diffs[i] = a[i] - b[i];
  const double m = mean(diffs);
  const double sd = sample_std(diffs);
  if (sd == 0.0) throw DegenerateTestError("paired differences have zero variance");
  const int n = static_cast<int>(a.size());
  PairedTTestResult out;
  out.dof = n - 1;
  out.mean_diff = m;
  out.t = m / (sd / std::sqrt(static_cast<double>(n)));
  out.p = 2.0 * (1.0 - student_t_cdf(std::fabs(out.t), out.dof));
  return out;
}

}  // namespace clgnn
