#include "clgnn/linalg.hpp"

#include <cmath>
#include <string>

namespace clgnn {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: incompatible shapes " + shape_string(a) + " * " +
                         shape_string(b));
  }
  return a * b;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double row_max = logits.row(i).maxCoeff();
    Eigen::ArrayXd shifted = (logits.row(i).array() - row_max).exp();
    out.row(i) = (shifted / shifted.sum()).matrix();
  }
  return out;
}

CrossEntropyResult masked_cross_entropy(const Matrix& probs, const Matrix& targets,
                                        const std::vector<double>& row_weights) {
  if (probs.rows() != targets.rows() || probs.cols() != targets.cols()) {
    throw DimensionError("masked_cross_entropy: probs " + shape_string(probs) +
                         " vs targets " + shape_string(targets));
  }
  if (static_cast<Eigen::Index>(row_weights.size()) != probs.rows()) {
    throw DimensionError("masked_cross_entropy: " + std::to_string(row_weights.size()) +
                         " weights for " + std::to_string(probs.rows()) + " rows");
  }
  double weight_sum = 0.0;
  for (double w : row_weights) {
    if (w < 0.0) throw ParameterError("masked_cross_entropy: negative row weight");
    weight_sum += w;
  }
  if (weight_sum == 0.0) {
    throw DegenerateBatchError("masked_cross_entropy: all row weights are zero");
  }

  CrossEntropyResult result;
  result.dlogits = Matrix::Zero(probs.rows(), probs.cols());
  double loss = 0.0;
  for (Eigen::Index v = 0; v < probs.rows(); ++v) {
    const double w = row_weights[static_cast<size_t>(v)];
    if (w == 0.0) continue;
    Eigen::Index y = 0;
    targets.row(v).maxCoeff(&y);
    loss -= w * std::log(probs(v, y));
    result.dlogits.row(v) = (w / weight_sum) * (probs.row(v) - targets.row(v));
  }
  result.loss = loss / weight_sum;
  return result;
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& pre_activation, const Matrix& upstream) {
  if (pre_activation.rows() != upstream.rows() || pre_activation.cols() != upstream.cols()) {
    throw DimensionError("relu_backward: pre-activation " + shape_string(pre_activation) +
                         " vs upstream " + shape_string(upstream));
  }
  return (pre_activation.array() > 0.0).cast<double>().matrix().cwiseProduct(upstream);
}

DropoutResult dropout(const Matrix& x, double p, Rng& rng, bool training) {
  if (p < 0.0 || p >= 1.0) {
    throw ParameterError("dropout: rate must lie in [0, 1), got " + std::to_string(p));
  }
  DropoutResult result;
  if (!training || p == 0.0) {
    result.value = x;
    result.mask = Matrix::Ones(x.rows(), x.cols());
    return result;
  }
  const double scale = 1.0 / (1.0 - p);
  result.mask.resize(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      result.mask(i, j) = rng.uniform() < p ? 0.0 : scale;
    }
  }
  result.value = x.cwiseProduct(result.mask);
  return result;
}

void adam_step(Param& param, const AdamConfig& cfg, int step_index) {
  if (step_index < 1) throw ParameterError("adam_step: step_index must be >= 1");
  param.m1 = cfg.beta1 * param.m1 + (1.0 - cfg.beta1) * param.grad;
  param.m2 = cfg.beta2 * param.m2 + (1.0 - cfg.beta2) * param.grad.cwiseProduct(param.grad);
  const double c1 = 1.0 - std::pow(cfg.beta1, step_index);
  const double c2 = 1.0 - std::pow(cfg.beta2, step_index);
  const Matrix m_hat = param.m1 / c1;
  const Matrix v_hat = param.m2 / c2;
  param.value -=
      cfg.lr * (m_hat.array() / (v_hat.array().sqrt() + cfg.eps)).matrix() +
      (cfg.lr * cfg.weight_decay) * param.value;
}

double clip_global_norm(const std::vector<Param*>& params, double max_norm) {
  if (max_norm <= 0.0) throw ParameterError("clip_global_norm: max_norm must be positive");
  double sq = 0.0;
  for (const Param* p : params) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (Param* p : params) p->grad *= scale;
  }
  return norm;
}

}  // namespace clgnn
