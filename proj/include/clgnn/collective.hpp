#ifndef CLGNN_COLLECTIVE_HPP_
#define CLGNN_COLLECTIVE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "clgnn/gnn.hpp"

namespace clgnn {

// test_unlabeled: no test-side labels exist; the input mask is always zero.
// test_partial:   a labeled subset of the test graph is visible as input.
enum class Scenario { test_unlabeled, test_partial };

// How the label channel for non-visible nodes is filled during training and
// inference. `sampled` is the real method; the others are study variants.
enum class LabelStrategy {
  sampled,              // K categorical draws from the frozen snapshot
  uniform,              // K uniform categorical draws (signal-free control)
  true_only,            // visible true labels only, no predicted channel
  deterministic_probs,  // probability rows propagated without sampling
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);
std::string label_strategy_name(LabelStrategy s);
LabelStrategy label_strategy_from_name(const std::string& name);

struct CLConfig {
  int K = 10;             // label samples per embedding estimate
  int T = 10;             // collective iterations
  int J = 100;            // gradient steps (epochs) per iteration
  Scenario scenario = Scenario::test_partial;
  LabelStrategy strategy = LabelStrategy::sampled;
  double mask_rate = 0.5;  // P(labeled node hidden from the input channel)
  double lr = 0.01;
  double weight_decay = 5e-4;
  double dropout_p = 0.5;
  int hidden_dim = 16;
  double clip_norm = 5.0;
  int patience = 0;          // per-iteration epoch early stopping; 0 = off
  bool redraw_per_step = true;
  int sample_size = 5;       // sage neighbor cap
};

void validate_config(const CLConfig& cfg);

// Per-node visibility bits; bits can be 1 only for input-visible labeled
// nodes, and broadcast across the C label columns.
struct MaskMatrix {
  std::vector<std::uint8_t> visible;

  int num_nodes() const { return static_cast<int>(visible.size()); }
  bool is_visible(int v) const { return visible[static_cast<size_t>(v)] != 0; }
};

// K predicted-label matrices (n x C); rows are one-hot once sampling has
// started, all-zero at the recursion base. source_iteration tracks which
// model iteration produced them (0 = base).
struct LabelSampleSet {
  std::vector<Matrix> samples;
  int source_iteration = 0;
};

LabelSampleSet zero_label_base(int num_nodes, int num_classes, int count);

// Zero mask in test_unlabeled. In test_partial each labeled node is visible
// w.p. 1-mask_rate; the whole mask is redrawn (bounded) until at least one
// labeled node is hidden, so the training loss set is never empty.
MaskMatrix sample_mask(const Graph& g, const std::vector<int>& labeled, const CLConfig& cfg,
                       Rng& rng);

// [X || Y.M + Yhat.(1-M)]: features, then the masked label channel.
Matrix build_input(const Graph& g, const Matrix& y_visible, const Matrix& yhat,
                   const MaskMatrix& m);

// Eq.-style label sampling: embeds with the frozen snapshot (eval mode,
// averaging over prev's samples under mask m), reads out probabilities, and
// draws K independent one-hot matrices.
LabelSampleSet sample_predicted_labels(const ModelState& snapshot, const Graph& g,
                                       const Matrix& y_visible, const MaskMatrix& m,
                                       const LabelSampleSet& prev, int count, Rng& rng);

// Signal-free control with the same draw pattern (one categorical inversion
// per node per sample).
LabelSampleSet uniform_label_samples(int num_nodes, int num_classes, int count,
                                     int source_iteration, Rng& rng);

// Draws a sample set directly from given probability rows.
LabelSampleSet draw_label_samples(const Matrix& probs, int count, int source_iteration,
                                  Rng& rng);

// Monte Carlo embedding: mean of one forward per sample matrix.
Matrix mc_embedding(const ModelState& model, const Graph& g, const Matrix& y_visible,
                    const MaskMatrix& m, const LabelSampleSet& samples);

struct McTrainEmbedding {
  Matrix z;
  std::vector<ForwardCache> caches;
};

McTrainEmbedding mc_embedding_train(const ModelState& model, const Graph& g,
                                    const Matrix& y_visible, const MaskMatrix& m,
                                    const LabelSampleSet& samples, Rng& rng);

struct IterationStat {
  double mean_loss = 0.0;
  double val_accuracy = -1.0;
  int epochs_run = 0;
};

struct CLTrainResult {
  std::vector<ModelState> snapshots;  // snapshots[t-1] = parameters after iteration t
  std::vector<IterationStat> iterations;
  std::vector<std::vector<EpochStat>> epoch_history;  // per iteration
  int best_iteration = 1;  // 1-based, by validation accuracy
  Scenario scenario = Scenario::test_partial;
  LabelStrategy strategy = LabelStrategy::sampled;
};

// Collective training: per iteration the label-sampling snapshot is frozen;
// each gradient step draws a fresh mask (and, from iteration 2 on, a fresh
// label-sample set) and minimizes the masked cross-entropy of the MC-averaged
// embedding over hidden labeled nodes. Iteration 1 runs on the all-zero base.
CLTrainResult cl_train(ModelKind kind, const Graph& g, const SplitSpec& split,
                       const CLConfig& cfg, Rng& rng);

// Uniform-label control: identical pipeline, draws replaced by uniform ones.
CLTrainResult ablate_uniform_labels(ModelKind kind, const Graph& g, const SplitSpec& split,
                                    const CLConfig& cfg, Rng& rng);

// Visible-true-labels-only control; requires scenario test_partial.
CLTrainResult ablate_true_labels_only(ModelKind kind, const Graph& g, const SplitSpec& split,
                                      const CLConfig& cfg, Rng& rng);

// Propagates probability rows instead of samples (expressiveness analyses).
CLTrainResult deterministic_propagation_variant(ModelKind kind, const Graph& g,
                                                const SplitSpec& split, const CLConfig& cfg,
                                                Rng& rng);

struct CLInferResult {
  std::vector<Matrix> iteration_embeddings;  // averaged Z per iteration
  std::vector<Matrix> iteration_probs;       // readout of the averaged Z
  std::vector<int> predictions;              // argmax of the last iteration
};

// Iteration t uses snapshot t: J masks x K sample sets are averaged into one
// embedding, probabilities are read out, and the next iteration's samples are
// drawn from them (zero base at the start).
CLInferResult cl_infer(const std::vector<ModelState>& snapshots, Scenario trained_scenario,
                       LabelStrategy strategy, const Graph& g, const SplitSpec& split,
                       const CLConfig& cfg, Rng& rng);

CLInferResult cl_infer(const CLTrainResult& trained, const Graph& g, const SplitSpec& split,
                       const CLConfig& cfg, Rng& rng);

// "node<TAB>argmax<TAB>p0,p1,..." per node.
std::string format_predictions(const std::vector<int>& predictions, const Matrix& probs);

}  // namespace clgnn

#endif  // CLGNN_COLLECTIVE_HPP_
