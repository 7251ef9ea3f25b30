#include "clgnn/collective.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "clgnn/linalg.hpp"
#include "clgnn/report.hpp"

namespace clgnn {
namespace {

constexpr int kMaskResampleLimit = 10000;

int effective_sample_count(const CLConfig& cfg) {
  return cfg.strategy == LabelStrategy::deterministic_probs ? 1 : cfg.K;
}

Matrix visible_label_matrix(const Graph& g, const std::vector<int>& labeled) {
  Matrix y = Matrix::Zero(g.num_nodes, g.num_classes);
  for (int v : labeled) {
    if (v < 0 || v >= g.num_nodes) throw ParameterError("labeled node out of range");
    if (!g.has_label(v)) throw ParameterError("node " + std::to_string(v) + " has no label");
    y(v, g.labels[static_cast<size_t>(v)]) = 1.0;
  }
  return y;
}

LabelSampleSet next_samples(LabelStrategy strategy, const ModelState& snapshot, const Graph& g,
                            const Matrix& y_visible, const MaskMatrix& m,
                            const LabelSampleSet& prev, int count, Rng& rng) {
  switch (strategy) {
    case LabelStrategy::sampled:
      return sample_predicted_labels(snapshot, g, y_visible, m, prev, count, rng);
    case LabelStrategy::uniform:
      return uniform_label_samples(g.num_nodes, g.num_classes, count,
                                   prev.source_iteration + 1, rng);
    case LabelStrategy::true_only:
      return zero_label_base(g.num_nodes, g.num_classes, count);
    case LabelStrategy::deterministic_probs: {
      Matrix z = mc_embedding(snapshot, g, y_visible, m, prev);
      LabelSampleSet out;
      out.samples.push_back(predict_probs(snapshot, z));
      out.source_iteration = prev.source_iteration + 1;
      return out;
    }
  }
  throw ParameterError("unknown label strategy");
}

LabelSampleSet samples_from_probs(LabelStrategy strategy, const Matrix& probs,
                                  int source_iteration, int count, Rng& rng) {
  switch (strategy) {
    case LabelStrategy::sampled:
      return draw_label_samples(probs, count, source_iteration, rng);
    case LabelStrategy::uniform:
      return uniform_label_samples(static_cast<int>(probs.rows()),
                                   static_cast<int>(probs.cols()), count, source_iteration,
                                   rng);
    case LabelStrategy::true_only: {
      LabelSampleSet out = zero_label_base(static_cast<int>(probs.rows()),
                                           static_cast<int>(probs.cols()), count);
      out.source_iteration = source_iteration;
      return out;
    }
    case LabelStrategy::deterministic_probs: {
      LabelSampleSet out;
      out.samples.push_back(probs);
      out.source_iteration = source_iteration;
      return out;
    }
  }
  throw ParameterError("unknown label strategy");
}

double masked_accuracy(const Matrix& probs, const Graph& g, const std::vector<int>& nodes) {
  if (nodes.empty()) return -1.0;
  std::vector<int> pred = argmax_rows(probs);
  int hits = 0;
  for (int v : nodes) {
    if (!g.has_label(v))
      throw ParameterError("accuracy requires a label on node " + std::to_string(v));
    if (pred[static_cast<size_t>(v)] == g.labels[static_cast<size_t>(v)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

// Validation convention: eval-mode MC embedding with the current sample set
// and the scenario's deterministic mask (all training labels visible in
// test_partial, none in test_unlabeled).
double cl_validation_accuracy(const ModelState& model, const Graph& g, const SplitSpec& split,
                              const CLConfig& cfg, const Matrix& y_visible,
                              const LabelSampleSet& samples) {
  if (split.validation.empty()) return -1.0;
  MaskMatrix m;
  m.visible.assign(static_cast<size_t>(g.num_nodes), 0);
  if (cfg.scenario == Scenario::test_partial) {
    for (int v : split.train_labeled) m.visible[static_cast<size_t>(v)] = 1;
  }
  Matrix z = mc_embedding(model, g, y_visible, m, samples);
  Matrix probs = predict_probs(model, z);
  return masked_accuracy(probs, g, split.validation);
}

}  // namespace

std::string scenario_name(Scenario s) {
  return s == Scenario::test_unlabeled ? "test_unlabeled" : "test_partial";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "test_unlabeled") return Scenario::test_unlabeled;
  if (name == "test_partial") return Scenario::test_partial;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string label_strategy_name(LabelStrategy s) {
  switch (s) {
    case LabelStrategy::sampled: return "sampled";
    case LabelStrategy::uniform: return "uniform";
    case LabelStrategy::true_only: return "true_only";
    case LabelStrategy::deterministic_probs: return "deterministic_probs";
  }
  throw ParameterError("unknown label strategy");
}

LabelStrategy label_strategy_from_name(const std::string& name) {
  if (name == "sampled") return LabelStrategy::sampled;
  if (name == "uniform") return LabelStrategy::uniform;
  if (name == "true_only") return LabelStrategy::true_only;
  if (name == "deterministic_probs") return LabelStrategy::deterministic_probs;
  throw ConfigError("unknown label strategy '" + name + "'");
}

void validate_config(const CLConfig& cfg) {
  if (cfg.K < 1) throw ConfigError("K must be >= 1");
  if (cfg.T < 1) throw ConfigError("T must be >= 1");
  if (cfg.J < 1) throw ConfigError("J must be >= 1");
  if (!(cfg.mask_rate >= 0.0 && cfg.mask_rate < 1.0))
    throw ConfigError("mask_rate must lie in [0, 1)");
  if (!(cfg.lr > 0.0)) throw ConfigError("lr must be positive");
  if (cfg.weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  if (!(cfg.dropout_p >= 0.0 && cfg.dropout_p < 1.0))
    throw ConfigError("dropout_p must lie in [0, 1)");
  if (cfg.hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (!(cfg.clip_norm > 0.0)) throw ConfigError("clip_norm must be positive");
  if (cfg.patience < 0) throw ConfigError("patience must be >= 0");
  if (cfg.sample_size < 1) throw ConfigError("sample_size must be >= 1");
  if (cfg.strategy == LabelStrategy::true_only && cfg.scenario != Scenario::test_partial)
    throw ConfigError("true_only labels require scenario test_partial");
}

LabelSampleSet zero_label_base(int num_nodes, int num_classes, int count) {
  if (num_nodes < 1 || num_classes < 1 || count < 1)
    throw ParameterError("zero_label_base needs positive dimensions");
  LabelSampleSet out;
  out.samples.assign(static_cast<size_t>(count), Matrix::Zero(num_nodes, num_classes));
  out.source_iteration = 0;
  return out;
}

MaskMatrix sample_mask(const Graph& g, const std::vector<int>& labeled, const CLConfig& cfg,
                       Rng& rng) {
  MaskMatrix m;
  m.visible.assign(static_cast<size_t>(g.num_nodes), 0);
  if (cfg.scenario == Scenario::test_unlabeled) return m;
  if (labeled.empty())
    throw ConfigError("test_partial masking requires a non-empty labeled set");
  for (int attempt = 0; attempt < kMaskResampleLimit; ++attempt) {
    bool any_hidden = false;
    for (int v : labeled) {
      bool vis = rng.bernoulli(1.0 - cfg.mask_rate);
      m.visible[static_cast<size_t>(v)] = vis ? 1 : 0;
      if (!vis) any_hidden = true;
    }
    if (any_hidden) return m;
  }
  throw SamplingError("mask resampling failed to hide any labeled node");
}

Matrix build_input(const Graph& g, const Matrix& y_visible, const Matrix& yhat,
                   const MaskMatrix& m) {
  const int n = g.num_nodes;
  const int c = g.num_classes;
  if (y_visible.rows() != n || y_visible.cols() != c)
    throw DimensionError("visible label matrix is " + shape_string(y_visible) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(c));
  if (yhat.rows() != n || yhat.cols() != c)
    throw DimensionError("label sample matrix is " + shape_string(yhat) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(c));
  if (m.num_nodes() != n) throw DimensionError("mask size does not match node count");
  Matrix out(n, g.feature_dim() + c);
  out.leftCols(g.feature_dim()) = g.features;
  for (int v = 0; v < n; ++v) {
    if (m.is_visible(v))
      out.row(v).tail(c) = y_visible.row(v);
    else
      out.row(v).tail(c) = yhat.row(v);
  }
  return out;
}

LabelSampleSet draw_label_samples(const Matrix& probs, int count, int source_iteration,
                                  Rng& rng) {
  const int n = static_cast<int>(probs.rows());
  const int c = static_cast<int>(probs.cols());
  if (count < 1) throw ParameterError("sample count must be >= 1");
  LabelSampleSet out;
  out.samples.reserve(static_cast<size_t>(count));
  out.source_iteration = source_iteration;
  for (int k = 0; k < count; ++k) {
    Matrix s = Matrix::Zero(n, c);
    for (int v = 0; v < n; ++v) {
      int cls = rng.categorical(probs.row(v).data(), c);
      s(v, cls) = 1.0;
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

LabelSampleSet sample_predicted_labels(const ModelState& snapshot, const Graph& g,
                                       const Matrix& y_visible, const MaskMatrix& m,
                                       const LabelSampleSet& prev, int count, Rng& rng) {
  Matrix z = mc_embedding(snapshot, g, y_visible, m, prev);
  Matrix probs = predict_probs(snapshot, z);
  return draw_label_samples(probs, count, prev.source_iteration + 1, rng);
}

LabelSampleSet uniform_label_samples(int num_nodes, int num_classes, int count,
                                     int source_iteration, Rng& rng) {
  if (num_nodes < 1 || num_classes < 1 || count < 1)
    throw ParameterError("uniform_label_samples needs positive dimensions");
  Matrix probs =
      Matrix::Constant(num_nodes, num_classes, 1.0 / static_cast<double>(num_classes));
  return draw_label_samples(probs, count, source_iteration, rng);
}

Matrix mc_embedding(const ModelState& model, const Graph& g, const Matrix& y_visible,
                    const MaskMatrix& m, const LabelSampleSet& samples) {
  if (samples.samples.empty()) throw ParameterError("empty label sample set");
  Matrix accum = Matrix::Zero(g.num_nodes, model.embed_dim);
  for (const Matrix& s : samples.samples)
    accum += forward_eval(model, g, build_input(g, y_visible, s, m));
  return accum / static_cast<double>(samples.samples.size());
}

McTrainEmbedding mc_embedding_train(const ModelState& model, const Graph& g,
                                    const Matrix& y_visible, const MaskMatrix& m,
                                    const LabelSampleSet& samples, Rng& rng) {
  if (samples.samples.empty()) throw ParameterError("empty label sample set");
  McTrainEmbedding out;
  out.z = Matrix::Zero(g.num_nodes, model.embed_dim);
  out.caches.reserve(samples.samples.size());
  for (const Matrix& s : samples.samples) {
    ForwardResult fr = forward_train(model, g, build_input(g, y_visible, s, m), rng);
    out.z += fr.z;
    out.caches.push_back(std::move(fr.cache));
  }
  out.z /= static_cast<double>(samples.samples.size());
  return out;
}

CLTrainResult cl_train(ModelKind kind, const Graph& g, const SplitSpec& split,
                       const CLConfig& cfg, Rng& rng) {
  validate_config(cfg);
  validate_graph(g);
  validate_split(g, split);
  if (split.train_labeled.empty()) throw ConfigError("cl_train requires labeled nodes");

  const int k_eff = effective_sample_count(cfg);
  const Matrix y_visible = visible_label_matrix(g, split.train_labeled);
  const Matrix targets = y_visible;

  ModelState model = init_model(kind, g.feature_dim() + g.num_classes, cfg.hidden_dim,
                                g.num_classes, cfg.dropout_p, rng, cfg.sample_size);
  AdamConfig adam{cfg.lr, cfg.weight_decay};

  CLTrainResult result;
  result.scenario = cfg.scenario;
  result.strategy = cfg.strategy;

  LabelSampleSet samples = zero_label_base(g.num_nodes, g.num_classes, k_eff);
  LabelSampleSet prev = samples;
  std::vector<double> weights(static_cast<size_t>(g.num_nodes), 0.0);
  int step_index = 0;

  for (int t = 1; t <= cfg.T; ++t) {
    const ModelState frozen = model;
    std::vector<EpochStat> epochs;
    double loss_sum = 0.0;
    ModelState best_model = model;
    double best_val = -2.0;
    int epochs_since_best = 0;
    bool stopped = false;

    for (int j = 1; j <= cfg.J && !stopped; ++j) {
      MaskMatrix m = sample_mask(g, split.train_labeled, cfg, rng);
      if (t >= 2 && (cfg.redraw_per_step || j == 1))
        samples = next_samples(cfg.strategy, frozen, g, y_visible, m, prev, k_eff, rng);

      for (Param* p : model.params()) p->zero_grad();
      McTrainEmbedding mc = mc_embedding_train(model, g, y_visible, m, samples, rng);
      Matrix probs = predict_probs(model, mc.z);
      for (int v : split.train_labeled)
        weights[static_cast<size_t>(v)] = m.is_visible(v) ? 0.0 : 1.0;
      CrossEntropyResult ce = masked_cross_entropy(probs, targets, weights);
      Matrix dz = readout_backward(model, mc.z, ce.dlogits);
      Matrix dz_per = dz / static_cast<double>(samples.samples.size());
      for (const ForwardCache& cache : mc.caches) backward(model, g, cache, dz_per);
      clip_global_norm(model.params(), cfg.clip_norm);
      ++step_index;
      for (Param* p : model.params()) adam_step(*p, adam, step_index);

      EpochStat stat;
      stat.loss = ce.loss;
      loss_sum += ce.loss;
      if (cfg.patience > 0) {
        stat.val_accuracy = cl_validation_accuracy(model, g, split, cfg, y_visible, samples);
        if (stat.val_accuracy > best_val) {
          best_val = stat.val_accuracy;
          best_model = model;
          epochs_since_best = 0;
        } else if (++epochs_since_best >= cfg.patience) {
          stopped = true;
        }
      }
      epochs.push_back(stat);
    }

    if (cfg.patience > 0) model = best_model;

    IterationStat it;
    it.epochs_run = static_cast<int>(epochs.size());
    it.mean_loss = loss_sum / static_cast<double>(epochs.size());
    it.val_accuracy = cl_validation_accuracy(model, g, split, cfg, y_visible, samples);
    result.iterations.push_back(it);
    result.epoch_history.push_back(std::move(epochs));
    result.snapshots.push_back(model);
    prev = samples;
  }

  result.best_iteration = 1;
  double best = result.iterations[0].val_accuracy;
  for (int t = 2; t <= cfg.T; ++t) {
    if (result.iterations[static_cast<size_t>(t - 1)].val_accuracy > best) {
      best = result.iterations[static_cast<size_t>(t - 1)].val_accuracy;
      result.best_iteration = t;
    }
  }
  return result;
}

CLTrainResult ablate_uniform_labels(ModelKind kind, const Graph& g, const SplitSpec& split,
                                    const CLConfig& cfg, Rng& rng) {
  CLConfig c = cfg;
  c.strategy = LabelStrategy::uniform;
  return cl_train(kind, g, split, c, rng);
}

CLTrainResult ablate_true_labels_only(ModelKind kind, const Graph& g, const SplitSpec& split,
                                      const CLConfig& cfg, Rng& rng) {
  if (cfg.scenario != Scenario::test_partial)
    throw ConfigError("true_only labels require scenario test_partial");
  CLConfig c = cfg;
  c.strategy = LabelStrategy::true_only;
  return cl_train(kind, g, split, c, rng);
}

CLTrainResult deterministic_propagation_variant(ModelKind kind, const Graph& g,
                                                const SplitSpec& split, const CLConfig& cfg,
                                                Rng& rng) {
  CLConfig c = cfg;
  c.strategy = LabelStrategy::deterministic_probs;
  return cl_train(kind, g, split, c, rng);
}

CLInferResult cl_infer(const std::vector<ModelState>& snapshots, Scenario trained_scenario,
                       LabelStrategy strategy, const Graph& g, const SplitSpec& split,
                       const CLConfig& cfg, Rng& rng) {
  validate_config(cfg);
  validate_graph(g);
  validate_split(g, split);
  if (cfg.scenario != trained_scenario)
    throw ConfigError("inference scenario " + scenario_name(cfg.scenario) +
                      " does not match training scenario " + scenario_name(trained_scenario));
  if (snapshots.empty()) throw ConfigError("cl_infer requires at least one snapshot");
  if (static_cast<int>(snapshots.size()) != cfg.T)
    throw ConfigError("cl_infer expects T == number of snapshots (" +
                      std::to_string(snapshots.size()) + "), got T = " +
                      std::to_string(cfg.T));

  const int k_eff = strategy == LabelStrategy::deterministic_probs ? 1 : cfg.K;
  const Matrix y_visible = visible_label_matrix(g, split.test_labeled);
  // All masks are identical (zero) in test_unlabeled and eval forwards are
  // deterministic, so a single mask draw reproduces the J-average exactly.
  const int j_eff = cfg.scenario == Scenario::test_unlabeled ? 1 : cfg.J;

  CLInferResult result;
  LabelSampleSet sets = zero_label_base(g.num_nodes, g.num_classes, k_eff);

  for (int t = 1; t <= cfg.T; ++t) {
    const ModelState& model = snapshots[static_cast<size_t>(t - 1)];
    Matrix accum = Matrix::Zero(g.num_nodes, model.embed_dim);
    for (int j = 0; j < j_eff; ++j) {
      MaskMatrix m = sample_mask(g, split.test_labeled, cfg, rng);
      for (const Matrix& s : sets.samples)
        accum += forward_eval(model, g, build_input(g, y_visible, s, m));
    }
    Matrix z = accum / static_cast<double>(j_eff * static_cast<int>(sets.samples.size()));
    Matrix probs = predict_probs(model, z);
    if (t < cfg.T)
      sets = samples_from_probs(strategy, probs, sets.source_iteration + 1, k_eff, rng);
    result.iteration_embeddings.push_back(std::move(z));
    result.iteration_probs.push_back(std::move(probs));
  }
  result.predictions = argmax_rows(result.iteration_probs.back());
  return result;
}

CLInferResult cl_infer(const CLTrainResult& trained, const Graph& g, const SplitSpec& split,
                       const CLConfig& cfg, Rng& rng) {
  return cl_infer(trained.snapshots, trained.scenario, trained.strategy, g, split, cfg, rng);
}

std::string format_predictions(const std::vector<int>& predictions, const Matrix& probs) {
  if (static_cast<int>(predictions.size()) != probs.rows())
    throw DimensionError("prediction count does not match probability rows");
  std::string out;
  for (int v = 0; v < static_cast<int>(predictions.size()); ++v) {
    out += std::to_string(v);
    out += '\t';
    out += std::to_string(predictions[static_cast<size_t>(v)]);
    out += '\t';
    for (int c = 0; c < probs.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(probs(v, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace clgnn
