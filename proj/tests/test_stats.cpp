#include "clgnn/stats.hpp"

#include <cmath>

#include "clgnn/rng.hpp"
#include "clgnn/types.hpp"
#include "doctest.h"

using namespace clgnn;

TEST_CASE("mean and sample_std") {
  CHECK(mean({2.0, 4.0, 9.0}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(sample_std({1.0, 2.0, 3.0, 4.0, 5.0}) ==
        doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
  CHECK_THROWS_AS(mean({}), ParameterError);
  CHECK_THROWS_AS(sample_std({1.0}), ParameterError);
}

TEST_CASE("accuracy closed forms") {
  CHECK(accuracy({0, 1, 2}, {0, 1, 2}) == 1.0);
  CHECK(accuracy({0, 1, 0, 0}, {0, 1, 1, 1}) == 0.5);
  CHECK_THROWS_AS(accuracy({0}, {0, 1}), DimensionError);
  CHECK_THROWS_AS(accuracy({}, {}), ParameterError);
}

TEST_CASE("balanced accuracy closed forms") {
  // class 0 recall 1, class 1 recall 1/2
  CHECK(balanced_accuracy({0, 0, 1, 0}, {0, 0, 1, 1}) == 0.75);
  CHECK(balanced_accuracy({0, 1}, {0, 1}) == 1.0);
  // majority-vote predictions on an imbalanced truth score 1/2, not 3/4
  CHECK(balanced_accuracy({0, 0, 0, 0}, {0, 0, 0, 1}) == 0.5);
  // absent classes are skipped: truth uses 0 and 3 only
  CHECK(balanced_accuracy({0, 3, 3, 3}, {0, 0, 3, 3}) == 0.75);
  CHECK_THROWS_AS(balanced_accuracy({0}, {-1}), ParameterError);
  CHECK_THROWS_AS(balanced_accuracy({0}, {0, 1}), DimensionError);
}

TEST_CASE("random predictions score near chance level") {
  Rng rng(401);
  const int n = 10000;
  std::vector<int> pred(static_cast<size_t>(n)), truth(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    pred[static_cast<size_t>(i)] = rng.index(7);
    truth[static_cast<size_t>(i)] = rng.index(7);
  }
  CHECK(accuracy(pred, truth) == doctest::Approx(1.0 / 7.0).epsilon(0.15));
  CHECK(balanced_accuracy(pred, truth) == doctest::Approx(1.0 / 7.0).epsilon(0.15));
}

TEST_CASE("incomplete beta reference points") {
  CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(incomplete_beta(2.0, 1.0, 0.3) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(incomplete_beta(1.0, 2.0, 0.3) == doctest::Approx(0.51).epsilon(1e-12));
  CHECK(incomplete_beta(2.5, 1.5, 0.7) ==
        doctest::Approx(0.58431214770197465).epsilon(1e-12));
  // complement symmetry
  for (double x : {0.1, 0.4, 0.8}) {
    CHECK(incomplete_beta(2.5, 1.5, x) ==
          doctest::Approx(1.0 - incomplete_beta(1.5, 2.5, 1.0 - x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), ParameterError);
  CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), ParameterError);
}

TEST_CASE("student t cdf reference points") {
  CHECK(student_t_cdf(0.0, 5) == 0.5);
  CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(student_t_cdf(0.5, 7) == doctest::Approx(0.68379643215535789).epsilon(1e-12));
  CHECK(student_t_cdf(-1.3, 3) == doctest::Approx(0.1422337543639487).epsilon(1e-12));
  // the classic 5% two-sided critical value at 10 dof
  CHECK(2.0 * (1.0 - student_t_cdf(2.228138851986273, 10)) ==
        doctest::Approx(0.05).epsilon(1e-10));
  // symmetry and monotonicity
  for (double t : {0.3, 1.7, 4.0})
    CHECK(student_t_cdf(t, 6) ==
          doctest::Approx(1.0 - student_t_cdf(-t, 6)).epsilon(1e-12));
  CHECK(student_t_cdf(1.0, 4) < student_t_cdf(2.0, 4));
  CHECK_THROWS_AS(student_t_cdf(1.0, 0), ParameterError);
}

TEST_CASE("paired t test reference case") {
  const std::vector<double> a = {1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> b = {0.0, 0.0, 0.0, 0.0, 0.0};
  const PairedTTestResult out = paired_t_test(a, b);
  CHECK(out.dof == 4);
  CHECK(out.mean_diff == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(out.t == doctest::Approx(4.2426406871192851).epsilon(1e-13));
  CHECK(out.p == doctest::Approx(0.01323559956368269).epsilon(1e-10));
  CHECK(out.p < 0.05);

  // order flip negates t, keeps p
  const PairedTTestResult flipped = paired_t_test(b, a);
  CHECK(flipped.t == doctest::Approx(-out.t).epsilon(1e-13));
  CHECK(flipped.p == doctest::Approx(out.p).epsilon(1e-12));
}

TEST_CASE("paired t test degenerate inputs") {
  CHECK_THROWS_AS(paired_t_test({1.0, 2.0}, {1.0}), DimensionError);
  CHECK_THROWS_AS(paired_t_test({1.0}, {0.0}), DegenerateTestError);
  CHECK_THROWS_AS(paired_t_test({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), DegenerateTestError);
  // constant nonzero differences are just as degenerate
  CHECK_THROWS_AS(paired_t_test({2.0, 3.0, 4.0}, {1.0, 2.0, 3.0}), DegenerateTestError);
}

TEST_CASE("near-constant gains are detected as significant") {
  std::vector<double> a, b;
  Rng rng(402);
  for (int i = 0; i < 5; ++i) {
    const double base = rng.uniform();
    b.push_back(base);
    a.push_back(base + 1.0 + 1e-3 * rng.uniform());
  }
  const PairedTTestResult out = paired_t_test(a, b);
  CHECK(out.mean_diff > 0.99);
  CHECK(out.p < 1e-6);
}
