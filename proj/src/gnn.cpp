#include "clgnn/gnn.hpp"

#include <cmath>
#include <limits>

#include "clgnn/report.hpp"
#include "clgnn/graph_io.hpp"

namespace clgnn {

namespace {

Matrix glorot(int rows, int cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  }
  return m;
}

void check_input(const ModelState& model, const Graph& g, const Matrix& input) {
  if (input.rows() != g.num_nodes) {
    throw DimensionError("forward: " + std::to_string(input.rows()) + " input rows for " +
                         std::to_string(g.num_nodes) + " nodes");
  }
  if (input.cols() != model.input_dim) {
    throw DimensionError("forward: input width " + std::to_string(input.cols()) +
                         ", model expects " + std::to_string(model.input_dim));
  }
}

struct SageLayerOut {
  Matrix value;
  SageLayerCache cache;
};

SageLayerOut sage_layer(const ModelState& model, const Graph& g, const Matrix& h,
                        const Param& w, bool relu_act, bool training, Rng* rng) {
  SageLayerOut out;
  if (training) {
    DropoutResult drop = dropout(h, model.dropout_p, *rng, true);
    out.cache.dropped = std::move(drop.value);
    out.cache.dropout_mask = std::move(drop.mask);
    out.cache.agg = mean_neighbor_aggregate(g, out.cache.dropped, model.sample_size, *rng);
  } else {
    out.cache.dropped = h;
    out.cache.agg = mean_all_neighbors(g, out.cache.dropped);
  }
  out.cache.concat.resize(h.rows(), 2 * h.cols());
  out.cache.concat << out.cache.dropped, out.cache.agg.values;
  out.cache.pre_activation = matmul(out.cache.concat, w.value);
  out.value = relu_act ? relu(out.cache.pre_activation) : out.cache.pre_activation;
  return out;
}

Matrix sage_layer_backward(const ModelState& model, Param& w, const SageLayerCache& cache,
                           const Matrix& dout, bool relu_act, bool training) {
  const Matrix ds = relu_act ? relu_backward(cache.pre_activation, dout) : dout;
  w.grad += cache.concat.transpose() * ds;
  const Matrix dconcat = ds * w.value.transpose();
  const int in_dim = static_cast<int>(cache.dropped.cols());
  Matrix dh = dconcat.leftCols(in_dim) +
              mean_aggregate_backward(cache.agg, dconcat.rightCols(in_dim),
                                      static_cast<int>(cache.dropped.rows()));
  if (training) dh = dh.cwiseProduct(cache.dropout_mask);
  return dh;
}

}  // namespace

std::string model_kind_name(ModelKind kind) {
  return kind == ModelKind::gcn ? "gcn" : "sage";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "gcn") return ModelKind::gcn;
  if (name == "sage") return ModelKind::sage;
  throw ConfigError("unknown model kind '" + name + "' (expected gcn or sage)");
}

std::vector<Param*> ModelState::params() {
  return {&w1, &w2, &readout_w, &readout_b};
}

std::vector<const Param*> ModelState::params() const {
  return {&w1, &w2, &readout_w, &readout_b};
}

ModelState init_model(ModelKind kind, int input_dim, int hidden_dim, int num_classes,
                      double dropout_p, Rng& rng, int sample_size) {
  if (input_dim < 1) throw ParameterError("init_model: input_dim must be >= 1");
  if (hidden_dim < 1) throw ParameterError("init_model: hidden_dim must be >= 1");
  if (num_classes < 1) throw ParameterError("init_model: num_classes must be >= 1");
  if (dropout_p < 0.0 || dropout_p >= 1.0) {
    throw ParameterError("init_model: dropout_p must lie in [0, 1)");
  }
  ModelState model;
  model.kind = kind;
  model.input_dim = input_dim;
  model.hidden_dim = hidden_dim;
  model.embed_dim = hidden_dim;
  model.num_classes = num_classes;
  model.dropout_p = dropout_p;
  model.sample_size = sample_size;
  const int fan1 = kind == ModelKind::sage ? 2 * input_dim : input_dim;
  const int fan2 = kind == ModelKind::sage ? 2 * hidden_dim : hidden_dim;
  model.w1 = Param(glorot(fan1, hidden_dim, rng));
  model.w2 = Param(glorot(fan2, model.embed_dim, rng));
  model.readout_w = Param(glorot(model.embed_dim, num_classes, rng));
  model.readout_b = Param(Matrix::Zero(1, num_classes));
  return model;
}

Matrix forward_eval(const ModelState& model, const Graph& g, const Matrix& input) {
  check_input(model, g, input);
  if (model.kind == ModelKind::gcn) {
    const Matrix a1 = sym_norm_propagate(g, input);
    const Matrix h1 = relu(matmul(a1, model.w1.value));
    return matmul(sym_norm_propagate(g, h1), model.w2.value);
  }
  const SageLayerOut l1 = sage_layer(model, g, input, model.w1, true, false, nullptr);
  return sage_layer(model, g, l1.value, model.w2, false, false, nullptr).value;
}

ForwardResult forward_train(const ModelState& model, const Graph& g, const Matrix& input,
                            Rng& rng) {
  check_input(model, g, input);
  ForwardResult result;
  if (model.kind == ModelKind::gcn) {
    DropoutResult d0 = dropout(input, model.dropout_p, rng, true);
    result.cache.a1 = sym_norm_propagate(g, d0.value);
    const Matrix s1 = matmul(result.cache.a1, model.w1.value);
    DropoutResult d1 = dropout(s1, model.dropout_p, rng, true);
    result.cache.d1_mask = std::move(d1.mask);
    result.cache.s1d = std::move(d1.value);
    result.cache.a2 = sym_norm_propagate(g, relu(result.cache.s1d));
    result.z = matmul(result.cache.a2, model.w2.value);
    return result;
  }
  SageLayerOut l1 = sage_layer(model, g, input, model.w1, true, true, &rng);
  SageLayerOut l2 = sage_layer(model, g, l1.value, model.w2, false, true, &rng);
  result.z = std::move(l2.value);
  result.cache.sage1 = std::move(l1.cache);
  result.cache.sage2 = std::move(l2.cache);
  return result;
}

void backward(ModelState& model, const Graph& g, const ForwardCache& cache,
              const Matrix& dz) {
  if (model.kind == ModelKind::gcn) {
    model.w2.grad += cache.a2.transpose() * dz;
    const Matrix dh1 = sym_norm_propagate(g, dz * model.w2.value.transpose());
    const Matrix ds1 = relu_backward(cache.s1d, dh1).cwiseProduct(cache.d1_mask);
    model.w1.grad += cache.a1.transpose() * ds1;
    return;
  }
  const Matrix dl1 = sage_layer_backward(model, model.w2, cache.sage2, dz, false, true);
  sage_layer_backward(model, model.w1, cache.sage1, dl1, true, true);
}

Matrix readout_logits(const ModelState& model, const Matrix& z) {
  return (matmul(z, model.readout_w.value)).rowwise() + model.readout_b.value.row(0);
}

Matrix predict_probs(const ModelState& model, const Matrix& z) {
  return softmax_rows(readout_logits(model, z));
}

Matrix readout_backward(ModelState& model, const Matrix& z, const Matrix& dlogits) {
  model.readout_w.grad += z.transpose() * dlogits;
  model.readout_b.grad += dlogits.colwise().sum();
  return dlogits * model.readout_w.value.transpose();
}

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> out(static_cast<size_t>(probs.rows()));
  for (Eigen::Index v = 0; v < probs.rows(); ++v) {
    int best = 0;
    for (Eigen::Index c = 1; c < probs.cols(); ++c) {
      if (probs(v, c) > probs(v, best)) best = static_cast<int>(c);
    }
    out[static_cast<size_t>(v)] = best;
  }
  return out;
}

namespace {

double eval_accuracy(const ModelState& model, const Graph& g, const std::vector<int>& nodes) {
  if (nodes.empty()) return -1.0;
  const Matrix probs = predict_probs(model, forward_eval(model, g, g.features));
  const std::vector<int> preds = argmax_rows(probs);
  int hits = 0;
  for (int v : nodes) {
    if (!g.has_label(v)) throw ParameterError("validation node " + std::to_string(v) + " is unlabeled");
    if (preds[static_cast<size_t>(v)] == g.labels[static_cast<size_t>(v)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

}  // namespace

BaselineResult train_baseline(const ModelState& init, const Graph& g, const SplitSpec& split,
                              const TrainConfig& cfg, Rng& rng) {
  if (cfg.epochs < 0) throw ParameterError("train_baseline: negative epoch count");
  if (split.train_labeled.empty()) {
    throw DegenerateBatchError("train_baseline: no training nodes");
  }
  validate_split(g, split);

  BaselineResult result;
  ModelState model = init;
  result.best_model = init;

  const Matrix targets = label_onehot(g, split.train_labeled);
  std::vector<double> weights(static_cast<size_t>(g.num_nodes), 0.0);
  for (int v : split.train_labeled) weights[static_cast<size_t>(v)] = 1.0;

  AdamConfig adam{cfg.lr, cfg.weight_decay};
  double best_acc = -std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (Param* p : model.params()) p->zero_grad();
    ForwardResult fwd = forward_train(model, g, g.features, rng);
    const Matrix probs = predict_probs(model, fwd.z);
    CrossEntropyResult ce = masked_cross_entropy(probs, targets, weights);
    const Matrix dz = readout_backward(model, fwd.z, ce.dlogits);
    backward(model, g, fwd.cache, dz);
    int step = epoch + 1;
    for (Param* p : model.params()) adam_step(*p, adam, step);

    EpochStat stat;
    stat.loss = ce.loss;
    stat.val_accuracy = eval_accuracy(model, g, split.validation);
    result.history.push_back(stat);

    if (split.validation.empty()) {
      result.best_model = model;
      result.best_epoch = epoch;
    } else if (stat.val_accuracy > best_acc) {
      best_acc = stat.val_accuracy;
      result.best_model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else {
      if (stat.val_accuracy == best_acc) {
        // latest among equal-best epochs; plateaus keep the most-trained model
        result.best_model = model;
        result.best_epoch = epoch;
      }
      if (cfg.patience > 0 && ++since_best >= cfg.patience) break;
    }
  }
  return result;
}

namespace {

void append_param(std::string& out, const char* name, const Param& p) {
  out += "param\t";
  out += name;
  out += '\t';
  out += std::to_string(p.value.rows());
  out += '\t';
  out += std::to_string(p.value.cols());
  out += '\n';
  for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.value.cols(); ++j) {
      if (j) out += '\t';
      out += format_double_hex(p.value(i, j));
    }
    out += '\n';
  }
}

}  // namespace

std::string checkpoint_string(const ModelState& model) {
  std::string out = "clgnn-checkpoint\t1\n";
  out += "kind\t" + model_kind_name(model.kind) + '\n';
  out += "input_dim\t" + std::to_string(model.input_dim) + '\n';
  out += "hidden_dim\t" + std::to_string(model.hidden_dim) + '\n';
  out += "embed_dim\t" + std::to_string(model.embed_dim) + '\n';
  out += "num_classes\t" + std::to_string(model.num_classes) + '\n';
  out += "dropout\t" + format_double_hex(model.dropout_p) + '\n';
  out += "sample_size\t" + std::to_string(model.sample_size) + '\n';
  append_param(out, "w1", model.w1);
  append_param(out, "w2", model.w2);
  append_param(out, "readout_w", model.readout_w);
  append_param(out, "readout_b", model.readout_b);
  return out;
}

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : text_(text) {}

  bool next(std::string& line) {
    if (pos_ >= text_.size()) return false;
    size_t end = text_.find('\n', pos_);
    if (end == std::string::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }

  int line_no() const { return line_no_; }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_no_ = 0;
};

std::vector<std::string> tab_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    const size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

ModelState checkpoint_from_string(const std::string& text) {
  LineReader reader(text);
  std::string line;
  auto expect_line = [&](const char* what) {
    if (!reader.next(line)) {
      throw ParseError("checkpoint line " + std::to_string(reader.line_no() + 1) +
                       ": missing " + what);
    }
  };
  auto expect_kv = [&](const char* key) -> std::string {
    expect_line(key);
    const auto fields = tab_fields(line);
    if (fields.size() != 2 || fields[0] != key) {
      throw ParseError("checkpoint line " + std::to_string(reader.line_no()) + ": expected '" +
                       key + "<TAB>value'");
    }
    return fields[1];
  };

  expect_line("header");
  if (line != "clgnn-checkpoint\t1") {
    throw ParseError("checkpoint line 1: bad header");
  }
  ModelState model;
  model.kind = model_kind_from_name(expect_kv("kind"));
  model.input_dim = static_cast<int>(std::stol(expect_kv("input_dim")));
  model.hidden_dim = static_cast<int>(std::stol(expect_kv("hidden_dim")));
  model.embed_dim = static_cast<int>(std::stol(expect_kv("embed_dim")));
  model.num_classes = static_cast<int>(std::stol(expect_kv("num_classes")));
  model.dropout_p = parse_double_hex(expect_kv("dropout"));
  model.sample_size = static_cast<int>(std::stol(expect_kv("sample_size")));

  const std::vector<std::pair<const char*, Param*>> slots = {
      {"w1", &model.w1}, {"w2", &model.w2}, {"readout_w", &model.readout_w},
      {"readout_b", &model.readout_b}};
  for (const auto& [name, param] : slots) {
    expect_line("param header");
    const auto fields = tab_fields(line);
    if (fields.size() != 4 || fields[0] != "param" || fields[1] != name) {
      throw ParseError("checkpoint line " + std::to_string(reader.line_no()) +
                       ": expected 'param\t" + std::string(name) + "\trows\tcols'");
    }
    const int rows = static_cast<int>(std::stol(fields[2]));
    const int cols = static_cast<int>(std::stol(fields[3]));
    Matrix value(rows, cols);
    for (int i = 0; i < rows; ++i) {
      expect_line("matrix row");
      const auto cells = tab_fields(line);
      if (static_cast<int>(cells.size()) != cols) {
        throw ParseError("checkpoint line " + std::to_string(reader.line_no()) + ": expected " +
                         std::to_string(cols) + " cells, got " + std::to_string(cells.size()));
      }
      for (int j = 0; j < cols; ++j) value(i, j) = parse_double_hex(cells[static_cast<size_t>(j)]);
    }
    *param = Param(std::move(value));
  }
  return model;
}

void save_checkpoint(const ModelState& model, const std::string& path) {
  write_file(path, checkpoint_string(model));
}

ModelState load_checkpoint(const std::string& path) {
  return checkpoint_from_string(read_file(path));
}

}  // namespace clgnn
