#include "clgnn/linalg.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace clgnn;
using namespace clgnn::testing;

TEST_CASE("matmul identity and projector") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  CHECK(matmul(Matrix::Identity(2, 2), a) == a);

  Matrix proj(2, 2);
  proj << 1, 0, 0, 0;
  Matrix x(2, 1);
  x << 5, 7;
  Matrix got = matmul(proj, x);
  CHECK(got(0, 0) == 5.0);
  CHECK(got(1, 0) == 0.0);
}

TEST_CASE("matmul matches the naive triple loop") {
  Rng rng(11);
  const Matrix a = random_matrix(3, 4, rng);
  const Matrix b = random_matrix(4, 2, rng);
  const Matrix want = naive_matmul(a, b);
  const Matrix got = matmul(a, b);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("matmul rejects mismatched shapes") {
  const Matrix a = Matrix::Zero(2, 3);
  const Matrix b = Matrix::Zero(4, 2);
  CHECK_THROWS_AS(matmul(a, b), DimensionError);
  try {
    matmul(a, b);
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
    CHECK(msg.find("4x2") != std::string::npos);
  }
}

TEST_CASE("softmax_rows basics") {
  Matrix flat(1, 2);
  flat << 0, 0;
  const Matrix u = softmax_rows(flat);
  CHECK(u(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  Matrix big(1, 2);
  big << 1000, 0;
  const Matrix s = softmax_rows(big);
  CHECK(std::abs(s(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(s(0, 1)) < 1e-12);

  Matrix row(1, 3);
  row << 1, 2, 3;
  const Matrix got = softmax_rows(row);
  const double denom = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  for (int c = 0; c < 3; ++c)
    CHECK(std::abs(got(0, c) - std::exp(1.0 + c) / denom) < 1e-12);
}

TEST_CASE("softmax_rows normalizes large-magnitude inputs") {
  Rng rng(5);
  const Matrix logits = random_matrix(20, 6, rng, 1e3);
  const Matrix probs = softmax_rows(logits);
  for (int i = 0; i < 20; ++i) {
    CHECK(std::abs(probs.row(i).sum() - 1.0) < 1e-12);
    CHECK(probs.row(i).minCoeff() >= 0.0);
  }
}

TEST_CASE("masked_cross_entropy closed forms") {
  Matrix probs(2, 2);
  probs << 1, 0, 0.5, 0.5;
  Matrix targets(2, 2);
  targets << 1, 0, 0, 1;

  CHECK(masked_cross_entropy(probs, targets, {1, 0}).loss == doctest::Approx(0.0));
  CHECK(masked_cross_entropy(probs, targets, {0, 1}).loss ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(masked_cross_entropy(probs, targets, {0, 0}), DegenerateBatchError);
}

TEST_CASE("masked_cross_entropy gradient matches finite differences") {
  Rng rng(21);
  Matrix logits = random_matrix(5, 3, rng);
  Matrix targets = Matrix::Zero(5, 3);
  std::vector<double> weights(5);
  for (int v = 0; v < 5; ++v) {
    targets(v, rng.index(3)) = 1.0;
    weights[static_cast<size_t>(v)] = v % 2 == 0 ? 1.0 : 0.0;
  }
  const CrossEntropyResult ce = masked_cross_entropy(softmax_rows(logits), targets, weights);
  const double worst = max_grad_rel_err(
      logits, ce.dlogits,
      [&] { return masked_cross_entropy(softmax_rows(logits), targets, weights).loss; });
  CHECK(worst < 1e-6);
}

TEST_CASE("relu and its backward") {
  Matrix x(1, 3);
  x << -1, 0, 2;
  const Matrix y = relu(x);
  CHECK(y(0, 0) == 0.0);
  CHECK(y(0, 1) == 0.0);
  CHECK(y(0, 2) == 2.0);

  Matrix pre(1, 2);
  pre << -1, 2;
  Matrix up(1, 2);
  up << 5, 5;
  const Matrix back = relu_backward(pre, up);
  CHECK(back(0, 0) == 0.0);
  CHECK(back(0, 1) == 5.0);
}

TEST_CASE("relu gradient matches finite differences away from the kink") {
  Rng rng(31);
  Matrix x = random_matrix(4, 4, rng);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(x(i, j)) < 1e-3) x(i, j) = 0.1;  // keep clear of the kink
  const Matrix up = random_matrix(4, 4, rng);
  const Matrix analytic = relu_backward(x, up);
  const double worst =
      max_grad_rel_err(x, analytic, [&] { return relu(x).cwiseProduct(up).sum(); });
  CHECK(worst < 1e-6);
}

TEST_CASE("dropout conventions") {
  Rng rng(41);
  const Matrix x = random_matrix(3, 3, rng);

  const DropoutResult keep = dropout(x, 0.0, rng, true);
  CHECK(keep.value == x);

  const DropoutResult eval = dropout(x, 0.9, rng, false);
  CHECK(eval.value == x);

  CHECK_THROWS_AS(dropout(x, 1.0, rng, true), ParameterError);
}

TEST_CASE("dropout preserves the mean at p=0.5") {
  Rng rng(43);
  const Matrix ones = Matrix::Ones(100, 1000);
  const DropoutResult d = dropout(ones, 0.5, rng, true);
  const double m = d.value.mean();
  CHECK(m > 0.97);
  CHECK(m < 1.03);
  // backward is exactly the stored mask
  CHECK((d.mask.array() == 0.0 || d.mask.array() == 2.0).all());
}

TEST_CASE("adam_step closed forms") {
  Param p(Matrix::Constant(1, 1, 3.0));
  AdamConfig cfg;
  cfg.lr = 0.1;
  cfg.weight_decay = 0.0;

  adam_step(p, cfg, 1);
  CHECK(p.value(0, 0) == 3.0);  // zero grad, zero decay: no movement

  p.grad(0, 0) = 1.0;
  adam_step(p, cfg, 1);
  // bias-corrected first step: lr * g / (|g| + eps)
  CHECK(p.value(0, 0) == doctest::Approx(3.0 - 0.1).epsilon(1e-6));
}

TEST_CASE("adam_step is deterministic") {
  auto run = [] {
    Param p(Matrix::Constant(2, 2, 1.0));
    AdamConfig cfg;
    cfg.weight_decay = 5e-4;
    for (int step = 1; step <= 5; ++step) {
      p.grad.setConstant(0.3 * step);
      adam_step(p, cfg, step);
    }
    return p.value;
  };
  CHECK(run() == run());
}

TEST_CASE("clip_global_norm caps only oversized gradients") {
  Param a(Matrix::Zero(1, 2));
  Param b(Matrix::Zero(1, 1));
  a.grad << 3.0, 0.0;
  b.grad << 4.0;
  std::vector<Param*> params = {&a, &b};

  const double pre = clip_global_norm(params, 2.5);
  CHECK(pre == doctest::Approx(5.0));
  const double post = std::sqrt(a.grad.squaredNorm() + b.grad.squaredNorm());
  CHECK(post == doctest::Approx(2.5).epsilon(1e-12));

  a.grad << 0.3, 0.0;
  b.grad << 0.4;
  clip_global_norm(params, 2.5);
  CHECK(a.grad(0, 0) == 0.3);
  CHECK(b.grad(0, 0) == 0.4);
}
