#ifndef CLGNN_GNN_HPP_
#define CLGNN_GNN_HPP_

#include <string>
#include <vector>

#include "clgnn/graph.hpp"
#include "clgnn/linalg.hpp"

namespace clgnn {

enum class ModelKind { gcn, sage };

std::string model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

// Two message-passing layers plus a linear readout to class logits.
//   gcn:  z = P relu(drop(P drop(x) W1)) W2,  P = D^-1/2 (A+I) D^-1/2
//   sage: per layer  h = act(W [drop(h) || mean(sampled neighbors of drop(h))])
//         (relu after layer 1, linear layer 2; eval aggregates all neighbors)
struct ModelState {
  ModelKind kind = ModelKind::gcn;
  int input_dim = 0;
  int hidden_dim = 16;
  int embed_dim = 16;
  int num_classes = 0;
  double dropout_p = 0.5;
  int sample_size = 5;  // sage training-mode neighbor cap

  Param w1;
  Param w2;
  Param readout_w;  // embed_dim x num_classes
  Param readout_b;  // 1 x num_classes

  std::vector<Param*> params();
  std::vector<const Param*> params() const;
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero readout bias.
ModelState init_model(ModelKind kind, int input_dim, int hidden_dim, int num_classes,
                      double dropout_p, Rng& rng, int sample_size = 5);

struct SageLayerCache {
  Matrix dropout_mask;
  Matrix dropped;
  MeanAggregate agg;
  Matrix concat;
  Matrix pre_activation;
};

struct ForwardCache {
  // gcn
  Matrix a1;       // P drop(x)
  Matrix d1_mask;  // dropout mask on layer-1 pre-activations
  Matrix s1d;      // dropped pre-activations (relu input)
  Matrix a2;       // P relu(s1d)
  // sage
  SageLayerCache sage1;
  SageLayerCache sage2;
};

struct ForwardResult {
  Matrix z;
  ForwardCache cache;
};

Matrix forward_eval(const ModelState& model, const Graph& g, const Matrix& input);
ForwardResult forward_train(const ModelState& model, const Graph& g, const Matrix& input,
                            Rng& rng);

// Accumulates parameter gradients for one cached forward pass.
void backward(ModelState& model, const Graph& g, const ForwardCache& cache,
              const Matrix& dz);

Matrix readout_logits(const ModelState& model, const Matrix& z);
Matrix predict_probs(const ModelState& model, const Matrix& z);

// Accumulates readout gradients and returns the embedding gradient.
Matrix readout_backward(ModelState& model, const Matrix& z, const Matrix& dlogits);

// Row-wise argmax; ties resolve to the lowest class index.
std::vector<int> argmax_rows(const Matrix& probs);

struct EpochStat {
  double loss = 0.0;
  double val_accuracy = -1.0;  // -1 when no validation set was given
};

struct TrainConfig {
  int epochs = 200;
  double lr = 0.01;
  double weight_decay = 5e-4;
  int patience = 0;  // 0 disables early stopping
};

struct BaselineResult {
  ModelState best_model;
  int best_epoch = -1;
  std::vector<EpochStat> history;
};

// Full-graph training on the train_labeled cross-entropy; per-epoch
// validation accuracy picks the returned snapshot. epochs = 0 returns the
// initial parameters untouched.
BaselineResult train_baseline(const ModelState& init, const Graph& g, const SplitSpec& split,
                              const TrainConfig& cfg, Rng& rng);

// Text checkpoint with hex-float payload; round-trips parameters bitwise.
void save_checkpoint(const ModelState& model, const std::string& path);
ModelState load_checkpoint(const std::string& path);
std::string checkpoint_string(const ModelState& model);
ModelState checkpoint_from_string(const std::string& text);

}  // namespace clgnn

#endif  // CLGNN_GNN_HPP_
