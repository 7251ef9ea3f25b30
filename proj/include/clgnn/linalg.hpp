#ifndef CLGNN_LINALG_HPP_
#define CLGNN_LINALG_HPP_

#include <utility>
#include <vector>

#include "clgnn/rng.hpp"
#include "clgnn/types.hpp"

namespace clgnn {

// Learnable tensor with gradient and Adam moment buffers, all same shape.
struct Param {
  Matrix value;
  Matrix grad;
  Matrix m1;
  Matrix m2;

  Param() = default;
  explicit Param(Matrix v)
      : value(std::move(v)),
        grad(Matrix::Zero(value.rows(), value.cols())),
        m1(Matrix::Zero(value.rows(), value.cols())),
        m2(Matrix::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(); }
};

struct AdamConfig {
  double lr = 0.01;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct DropoutResult {
  Matrix value;
  Matrix mask;  // 0 where dropped, 1/(1-p) where kept; backward = upstream .* mask
};

struct CrossEntropyResult {
  double loss = 0.0;
  Matrix dlogits;
};

// Checked product: throws DimensionError naming both shapes on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// Row-wise softmax with per-row max subtraction for stability.
Matrix softmax_rows(const Matrix& logits);

// Weighted cross-entropy over one-hot target rows.
//   loss    = -(1/sum w) * sum_v w_v * log probs(v, y_v)
//   dlogits =  w_v * (probs_v - target_v) / sum w
// probs must be a softmax output aligned with the logits being differentiated.
CrossEntropyResult masked_cross_entropy(const Matrix& probs, const Matrix& targets,
                                        const std::vector<double>& row_weights);

Matrix relu(const Matrix& x);

// Gradient passes only where the pre-activation is strictly positive
// (ties at zero get zero gradient).
Matrix relu_backward(const Matrix& pre_activation, const Matrix& upstream);

// Training-mode dropout: entries dropped independently w.p. p, survivors
// scaled by 1/(1-p). training=false is the identity (mask of ones).
DropoutResult dropout(const Matrix& x, double p, Rng& rng, bool training = true);

// One Adam update with decoupled weight decay. step_index starts at 1.
void adam_step(Param& param, const AdamConfig& cfg, int step_index);

// Scales all gradients by max_norm/norm when the global L2 norm exceeds
// max_norm. Returns the pre-clip norm.
double clip_global_norm(const std::vector<Param*>& params, double max_norm);

}  // namespace clgnn

#endif  // CLGNN_LINALG_HPP_
