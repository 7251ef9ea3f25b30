#include "clgnn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "clgnn/graph_io.hpp"

namespace clgnn {
namespace {

enum SeedStream : std::uint64_t {
  kStreamData = 0,
  kStreamSplit = 1,
  kStreamBaseline = 2,
  kStreamCollective = 3,
  kStreamInference = 4,
};

std::uint64_t trial_seed(std::uint64_t master, int trial, SeedStream stream) {
  return derive_seed(master, static_cast<std::uint64_t>(trial) + 1,
                     static_cast<std::uint64_t>(stream));
}

double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  return sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

std::vector<int> slice_labels(const Graph& g, const std::vector<int>& nodes) {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (int v : nodes) {
    if (!g.has_label(v))
      throw ParameterError("evaluation node " + std::to_string(v) + " has no label");
    out.push_back(g.labels[static_cast<size_t>(v)]);
  }
  return out;
}

std::vector<int> slice_preds(const std::vector<int>& preds, const std::vector<int>& nodes) {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (int v : nodes) out.push_back(preds[static_cast<size_t>(v)]);
  return out;
}

struct TrialArtifacts {
  CLTrainResult trained;
  CLInferResult inferred;
  Matrix baseline_probs;
};

void describe_dataset(Report& r, const ExperimentConfig& cfg) {
  if (cfg.use_synth) {
    r.set("dataset", "synthetic");
    r.set_int("synth_nodes", cfg.synth.num_nodes);
    r.set_int("synth_classes", cfg.synth.num_classes);
    r.set_int("synth_communities", cfg.synth.communities);
    r.set_double("synth_homophily", cfg.synth.homophily);
    r.set_double("synth_feature_noise", cfg.synth.feature_noise);
    r.set_double("synth_avg_degree", cfg.synth.avg_degree);
  } else if (!cfg.cora_content_path.empty()) {
    r.set("dataset", "citation");
    r.set("content_path", cfg.cora_content_path);
    r.set("cites_path", cfg.cora_cites_path);
  } else {
    r.set("dataset", "files");
    r.set("edges_path", cfg.edges_path);
    r.set("features_path", cfg.features_path);
    r.set("labels_path", cfg.labels_path);
  }
}

void describe_config(Report& r, const ExperimentConfig& cfg) {
  r.set("model", model_kind_name(cfg.model));
  r.set("scenario", scenario_name(cfg.cl.scenario));
  r.set("strategy", label_strategy_name(cfg.cl.strategy));
  r.set("metric", metric_name(cfg.metric));
  r.set_int("trials", cfg.trials);
  r.set_int("train_labeled", cfg.train_labeled);
  r.set_int("samples_k", cfg.cl.K);
  r.set_int("iterations_t", cfg.cl.T);
  r.set_int("steps_j", cfg.cl.J);
  r.set_double("mask_rate", cfg.cl.mask_rate);
  r.set_double("lr", cfg.cl.lr);
  r.set_double("weight_decay", cfg.cl.weight_decay);
  r.set_double("dropout", cfg.cl.dropout_p);
  r.set_int("hidden_dim", cfg.cl.hidden_dim);
  r.set_double("clip_norm", cfg.cl.clip_norm);
  r.set_bool("collective_enabled", cfg.collective_enabled);
  r.set_int("seed", static_cast<long long>(cfg.seed));
}

RunResult run_experiment(const ExperimentConfig& cfg, TrialArtifacts* last_artifacts) {
  validate_experiment_config(cfg);
  RunResult result;

  Graph file_graph;
  bool file_loaded = false;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng data_rng(trial_seed(cfg.seed, trial, kStreamData));
    Graph g;
    if (cfg.use_synth) {
      g = load_dataset(cfg, data_rng);
    } else {
      if (!file_loaded) {
        file_graph = load_dataset(cfg, data_rng);
        file_loaded = true;
      }
      g = file_graph;
    }
    if (cfg.use_synth && cfg.metric == Metric::accuracy && class_counts_imbalanced(g))
      throw ConfigError("imbalanced synthetic labels require metric balanced_accuracy");

    Rng split_rng(trial_seed(cfg.seed, trial, kStreamSplit));
    SplitSpec split = make_split(g, cfg.train_labeled, cfg.cl.scenario,
                                 cfg.test_labeled_connected, split_rng);

    TrialOutcome outcome;
    outcome.seed = trial_seed(cfg.seed, trial, kStreamBaseline);

    Rng baseline_rng(trial_seed(cfg.seed, trial, kStreamBaseline));
    ModelState baseline_init =
        init_model(cfg.model, g.feature_dim(), cfg.cl.hidden_dim, g.num_classes,
                   cfg.cl.dropout_p, baseline_rng, cfg.cl.sample_size);
    TrainConfig baseline_cfg;
    baseline_cfg.epochs = cfg.cl.T * cfg.cl.J;
    baseline_cfg.lr = cfg.cl.lr;
    baseline_cfg.weight_decay = cfg.cl.weight_decay;
    baseline_cfg.patience = cfg.cl.patience;
    BaselineResult baseline =
        train_baseline(baseline_init, g, split, baseline_cfg, baseline_rng);
    Matrix baseline_probs =
        predict_probs(baseline.best_model, forward_eval(baseline.best_model, g, g.features));
    std::vector<int> baseline_preds = argmax_rows(baseline_probs);
    outcome.baseline_metric = eval_metric(cfg.metric, baseline_preds, g, split.test_eval);

    if (cfg.collective_enabled) {
      Rng cl_rng(trial_seed(cfg.seed, trial, kStreamCollective));
      CLTrainResult trained = cl_train(cfg.model, g, split, cfg.cl, cl_rng);
      Rng infer_rng(trial_seed(cfg.seed, trial, kStreamInference));
      CLInferResult inferred = cl_infer(trained, g, split, cfg.cl, infer_rng);
      outcome.collective_metric =
          eval_metric(cfg.metric, inferred.predictions, g, split.test_eval);
      for (int t = 0; t < cfg.cl.T; ++t) {
        const std::vector<int> preds =
            argmax_rows(inferred.iteration_probs[static_cast<size_t>(t)]);
        outcome.iteration_metric.push_back(eval_metric(cfg.metric, preds, g, split.test_eval));
        outcome.iteration_loss.push_back(
            trained.iterations[static_cast<size_t>(t)].mean_loss);
      }
      if (last_artifacts != nullptr && trial == cfg.trials - 1) {
        last_artifacts->trained = std::move(trained);
        last_artifacts->inferred = std::move(inferred);
        last_artifacts->baseline_probs = baseline_probs;
      }
    } else {
      outcome.collective_metric = outcome.baseline_metric;
    }
    outcome.improvement = outcome.collective_metric - outcome.baseline_metric;
    result.trials.push_back(std::move(outcome));
  }

  std::vector<double> base, coll, improv;
  for (const TrialOutcome& t : result.trials) {
    base.push_back(t.baseline_metric);
    coll.push_back(t.collective_metric);
    improv.push_back(t.improvement);
  }
  result.baseline_mean = mean(base);
  result.baseline_se = standard_error(base);
  result.collective_mean = mean(coll);
  result.collective_se = standard_error(coll);
  result.improvement_mean = mean(improv);
  result.improvement_se = standard_error(improv);
  if (cfg.trials >= 2) {
    try {
      result.t_test = paired_t_test(coll, base);
      result.t_test_valid = true;
    } catch (const DegenerateTestError&) {
      result.t_test_valid = false;
    }
  }

  Report r;
  r.set("document", "run");
  describe_config(r, cfg);
  describe_dataset(r, cfg);
  r.set_double("baseline_mean", result.baseline_mean);
  r.set_double("baseline_se", result.baseline_se);
  r.set_double("collective_mean", result.collective_mean);
  r.set_double("collective_se", result.collective_se);
  r.set_double("improvement_mean", result.improvement_mean);
  r.set_double("improvement_se", result.improvement_se);
  if (result.t_test_valid) {
    r.set_double("t_statistic", result.t_test.t);
    r.set_double("p_value", result.t_test.p);
    r.set_int("t_dof", result.t_test.dof);
  } else {
    r.set_bool("t_test_degenerate", true);
  }
  ReportTable& trials_table =
      r.add_table("trials", {"trial", "seed", "baseline", "collective", "improvement"});
  for (size_t i = 0; i < result.trials.size(); ++i) {
    const TrialOutcome& t = result.trials[i];
    trials_table.rows.push_back({std::to_string(i), std::to_string(t.seed),
                                 format_double(t.baseline_metric),
                                 format_double(t.collective_metric),
                                 format_double(t.improvement)});
  }
  if (cfg.collective_enabled) {
    ReportTable& iter_table =
        r.add_table("iterations", {"trial", "iteration", "train_loss", "eval_metric"});
    for (size_t i = 0; i < result.trials.size(); ++i) {
      const TrialOutcome& t = result.trials[i];
      for (size_t k = 0; k < t.iteration_metric.size(); ++k) {
        iter_table.rows.push_back({std::to_string(i), std::to_string(k + 1),
                                   format_double(t.iteration_loss[k]),
                                   format_double(t.iteration_metric[k])});
      }
    }
  }
  result.report = std::move(r);
  return result;
}

BatteryCheck check(const std::string& name, bool passed, std::string detail) {
  BatteryCheck c;
  c.name = name;
  c.passed = passed;
  c.detail = std::move(detail);
  return c;
}

double max_pairwise_row_distance(const Matrix& z, const std::vector<int>& nodes) {
  double worst = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      const double d =
          (z.row(nodes[i]) - z.row(nodes[j])).cwiseAbs().maxCoeff();
      worst = std::max(worst, d);
    }
  return worst;
}

}  // namespace

std::string metric_name(Metric m) {
  return m == Metric::accuracy ? "accuracy" : "balanced_accuracy";
}

Metric metric_from_name(const std::string& name) {
  if (name == "accuracy") return Metric::accuracy;
  if (name == "balanced_accuracy") return Metric::balanced_accuracy;
  throw ConfigError("unknown metric '" + name + "'");
}

void validate_experiment_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.train_labeled < 1) throw ConfigError("train_labeled must be >= 1");
  validate_config(cfg.cl);
  if (cfg.use_synth) {
    validate_synth_spec(cfg.synth);
  } else if (!cfg.cora_content_path.empty() || !cfg.cora_cites_path.empty()) {
    if (cfg.cora_content_path.empty() || cfg.cora_cites_path.empty())
      throw ConfigError("citation datasets need both content and cites paths");
  } else if (cfg.edges_path.empty() || cfg.features_path.empty() || cfg.labels_path.empty()) {
    throw ConfigError("file datasets need edges, features, and labels paths");
  }
}

Graph load_dataset(const ExperimentConfig& cfg, Rng& data_rng) {
  if (cfg.use_synth) return synth_homophily(cfg.synth, data_rng);
  if (!cfg.cora_content_path.empty())
    return load_cora(cfg.cora_content_path, cfg.cora_cites_path);
  return load_graph(cfg.edges_path, cfg.features_path, cfg.labels_path);
}

SplitSpec make_split(const Graph& g, int train_size, Scenario scenario,
                     bool test_labeled_connected, Rng& rng) {
  if (train_size < 1) throw ConfigError("train_labeled must be >= 1");
  std::vector<char> pool_mask(static_cast<size_t>(g.num_nodes), 0);
  std::vector<int> pool;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (g.has_label(v)) {
      pool_mask[static_cast<size_t>(v)] = 1;
      pool.push_back(v);
    }
  }
  if (static_cast<int>(pool.size()) <= train_size)
    throw SamplingError("labeled pool is too small for the requested split");

  SplitSpec split;
  split.train_labeled = connected_component_sample(g, train_size, rng, &pool_mask);
  std::set<int> train_set(split.train_labeled.begin(), split.train_labeled.end());
  std::vector<int> rest;
  for (int v : pool)
    if (!train_set.count(v)) rest.push_back(v);
  rng.shuffle(rest);

  const int r = static_cast<int>(rest.size());
  if (scenario == Scenario::test_partial) {
    const int third = r / 3;
    if (third < 1) throw SamplingError("too few labeled nodes for a test_partial split");
    split.validation.assign(rest.begin(), rest.begin() + third);
    if (test_labeled_connected) {
      std::vector<char> allowed(static_cast<size_t>(g.num_nodes), 0);
      for (int i = third; i < r; ++i) allowed[static_cast<size_t>(rest[i])] = 1;
      split.test_labeled = connected_component_sample(g, third, rng, &allowed);
      std::set<int> taken(split.test_labeled.begin(), split.test_labeled.end());
      for (int i = third; i < r; ++i)
        if (!taken.count(rest[i])) split.test_eval.push_back(rest[i]);
    } else {
      split.test_labeled.assign(rest.begin() + third, rest.begin() + 2 * third);
      split.test_eval.assign(rest.begin() + 2 * third, rest.end());
    }
  } else {
    const int half = r / 2;
    if (half < 1 || r - half < 1)
      throw SamplingError("too few labeled nodes for a test_unlabeled split");
    split.validation.assign(rest.begin(), rest.begin() + half);
    split.test_eval.assign(rest.begin() + half, rest.end());
  }
  std::sort(split.train_labeled.begin(), split.train_labeled.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test_labeled.begin(), split.test_labeled.end());
  std::sort(split.test_eval.begin(), split.test_eval.end());
  validate_split(g, split);
  return split;
}

double metric_accuracy(const std::vector<int>& preds, const Graph& g,
                       const std::vector<int>& eval_set) {
  return accuracy(slice_preds(preds, eval_set), slice_labels(g, eval_set));
}

double metric_balanced_accuracy(const std::vector<int>& preds, const Graph& g,
                                const std::vector<int>& eval_set) {
  return balanced_accuracy(slice_preds(preds, eval_set), slice_labels(g, eval_set));
}

double eval_metric(Metric m, const std::vector<int>& preds, const Graph& g,
                   const std::vector<int>& eval_set) {
  return m == Metric::accuracy ? metric_accuracy(preds, g, eval_set)
                               : metric_balanced_accuracy(preds, g, eval_set);
}

RunResult cmd_run(const ExperimentConfig& cfg) {
  TrialArtifacts artifacts;
  RunResult result = run_experiment(cfg, &artifacts);
  if (!cfg.predictions_path.empty() && cfg.collective_enabled && !result.trials.empty()) {
    write_file(cfg.predictions_path,
               format_predictions(artifacts.inferred.predictions,
                                  artifacts.inferred.iteration_probs.back()));
  }
  if (!cfg.output_path.empty()) write_file(cfg.output_path, result.report.serialize());
  return result;
}

AblationResult cmd_ablate(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  AblationResult out;

  ExperimentConfig sampled_cfg = cfg;
  sampled_cfg.cl.strategy = LabelStrategy::sampled;
  sampled_cfg.output_path.clear();
  sampled_cfg.predictions_path.clear();
  out.sampled = run_experiment(sampled_cfg, nullptr);

  // The uniform control carries no label signal; it runs in test_unlabeled so
  // visible true labels cannot mask the comparison.
  ExperimentConfig uniform_cfg = sampled_cfg;
  uniform_cfg.cl.strategy = LabelStrategy::uniform;
  uniform_cfg.cl.scenario = Scenario::test_unlabeled;
  out.uniform = run_experiment(uniform_cfg, nullptr);

  if (cfg.cl.scenario == Scenario::test_partial) {
    ExperimentConfig true_cfg = sampled_cfg;
    true_cfg.cl.strategy = LabelStrategy::true_only;
    out.true_only = run_experiment(true_cfg, nullptr);
    out.has_true_only = true;
  }

  Report r;
  r.set("document", "ablation");
  describe_config(r, cfg);
  describe_dataset(r, cfg);
  auto emit = [&r](const std::string& prefix, const RunResult& leg) {
    r.set_double(prefix + "_baseline_mean", leg.baseline_mean);
    r.set_double(prefix + "_collective_mean", leg.collective_mean);
    r.set_double(prefix + "_improvement_mean", leg.improvement_mean);
    r.set_double(prefix + "_improvement_se", leg.improvement_se);
    if (leg.t_test_valid) {
      r.set_double(prefix + "_t_statistic", leg.t_test.t);
      r.set_double(prefix + "_p_value", leg.t_test.p);
    } else {
      r.set_bool(prefix + "_t_test_degenerate", true);
    }
  };
  emit("sampled", out.sampled);
  emit("uniform", out.uniform);
  if (out.has_true_only) emit("true_only", out.true_only);
  ReportTable& table = r.add_table(
      "legs", {"strategy", "trial", "baseline", "collective", "improvement"});
  auto emit_rows = [&table](const std::string& name, const RunResult& leg) {
    for (size_t i = 0; i < leg.trials.size(); ++i) {
      const TrialOutcome& t = leg.trials[i];
      table.rows.push_back({name, std::to_string(i), format_double(t.baseline_metric),
                            format_double(t.collective_metric),
                            format_double(t.improvement)});
    }
  };
  emit_rows("sampled", out.sampled);
  emit_rows("uniform", out.uniform);
  if (out.has_true_only) emit_rows("true_only", out.true_only);
  out.report = std::move(r);
  if (!cfg.output_path.empty()) write_file(cfg.output_path, out.report.serialize());
  return out;
}

BatteryResult cmd_expressiveness(std::uint64_t seed) {
  BatteryResult out;

  SeparationCertificate group_cert = make_group_separation_graph();
  out.checks.push_back(check(
      "group_certificate",
      group_cert.shared_wl_color && group_cert.groups_non_isomorphic,
      "stable shared color and " + std::to_string(group_cert.automorphisms_checked) +
          " automorphisms checked"));
  const Graph& gg = group_cert.graph;
  std::vector<int> cycle_nodes;
  for (int v = 0; v < 8; ++v) cycle_nodes.push_back(v);

  {
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      Rng rng(derive_seed(seed, 10, static_cast<std::uint64_t>(s)));
      ModelState m = init_model(ModelKind::gcn, gg.feature_dim(), 16, gg.num_classes, 0.5,
                                rng, 5);
      Matrix z = forward_eval(m, gg, gg.features);
      worst = std::max(worst, max_pairwise_row_distance(z, cycle_nodes));
    }
    out.checks.push_back(check("baseline_symmetry_collapse", worst < 1e-6,
                               "max pairwise difference " + format_double(worst)));
  }

  {
    int separated = 0;
    CLConfig cfg;
    cfg.K = 10;
    cfg.T = 2;
    cfg.J = 1;
    cfg.scenario = Scenario::test_unlabeled;
    cfg.strategy = LabelStrategy::sampled;
    SplitSpec split;
    split.test_eval = cycle_nodes;
    for (int s = 0; s < 20; ++s) {
      Rng rng(derive_seed(seed, 20, static_cast<std::uint64_t>(s)));
      ModelState m = init_model(ModelKind::gcn, gg.feature_dim() + gg.num_classes, 16,
                                gg.num_classes, 0.5, rng, 5);
      std::vector<ModelState> snapshots = {m, m};
      CLInferResult inf = cl_infer(snapshots, Scenario::test_unlabeled,
                                   LabelStrategy::sampled, gg, split, cfg, rng);
      const Matrix& z = inf.iteration_embeddings.back();
      Vector mean_a = Vector::Zero(z.cols());
      Vector mean_b = Vector::Zero(z.cols());
      for (int v : group_cert.group_a) mean_a += z.row(v).transpose();
      for (int v : group_cert.group_b) mean_b += z.row(v).transpose();
      mean_a /= static_cast<double>(group_cert.group_a.size());
      mean_b /= static_cast<double>(group_cert.group_b.size());
      if ((mean_a - mean_b).norm() > 1e-3) ++separated;
    }
    out.checks.push_back(check("sampling_separates_groups", separated >= 18,
                               std::to_string(separated) + " of 20 seeds separated"));
  }

  {
    bool all_collapsed = true;
    double worst = 0.0;
    CLConfig cfg;
    cfg.K = 10;
    cfg.T = 3;
    cfg.J = 1;
    cfg.scenario = Scenario::test_unlabeled;
    cfg.strategy = LabelStrategy::deterministic_probs;
    SplitSpec split;
    split.test_eval = cycle_nodes;
    for (int s = 0; s < 20; ++s) {
      Rng rng(derive_seed(seed, 30, static_cast<std::uint64_t>(s)));
      ModelState m = init_model(ModelKind::gcn, gg.feature_dim() + gg.num_classes, 16,
                                gg.num_classes, 0.0, rng, 5);
      std::vector<ModelState> snapshots = {m, m, m};
      CLInferResult inf = cl_infer(snapshots, Scenario::test_unlabeled,
                                   LabelStrategy::deterministic_probs, gg, split, cfg, rng);
      for (const Matrix& z : inf.iteration_embeddings) {
        const double d = max_pairwise_row_distance(z, cycle_nodes);
        worst = std::max(worst, d);
        if (d >= 1e-9) all_collapsed = false;
      }
    }
    out.checks.push_back(check("deterministic_variant_stays_collapsed", all_collapsed,
                               "max pairwise difference " + format_double(worst)));
  }

  SeparationCertificate pair_cert = make_local_isomorphism_graph(2);
  out.checks.push_back(check(
      "pair_certificate",
      pair_cert.shared_wl_color && pair_cert.groups_non_isomorphic,
      "pair (" + std::to_string(pair_cert.node_u) + ", " + std::to_string(pair_cert.node_v) +
          ") with labeled pair (" + std::to_string(pair_cert.labeled_u) + ", " +
          std::to_string(pair_cert.labeled_v) + ") on " +
          std::to_string(pair_cert.graph.num_nodes) + " nodes"));

  const Graph& pg = pair_cert.graph;
  {
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      Rng rng(derive_seed(seed, 40, static_cast<std::uint64_t>(s)));
      ModelState m = init_model(ModelKind::gcn, pg.feature_dim(), 16, pg.num_classes, 0.5,
                                rng, 5);
      Matrix z = forward_eval(m, pg, pg.features);
      const double d =
          (z.row(pair_cert.node_u) - z.row(pair_cert.node_v)).cwiseAbs().maxCoeff();
      worst = std::max(worst, d);
    }
    out.checks.push_back(check("pair_baseline_collapse", worst < 1e-6,
                               "max difference " + format_double(worst)));
  }

  {
    int separated = 0;
    CLConfig cfg;
    cfg.K = 10;
    cfg.T = 2;
    cfg.J = 100;
    cfg.scenario = Scenario::test_unlabeled;
    cfg.strategy = LabelStrategy::sampled;
    cfg.dropout_p = 0.5;
    cfg.hidden_dim = 16;
    SplitSpec split;
    split.train_labeled = {pair_cert.labeled_u, pair_cert.labeled_v};
    std::sort(split.train_labeled.begin(), split.train_labeled.end());
    for (int v = 0; v < pg.num_nodes; ++v)
      if (!pg.has_label(v)) split.test_eval.push_back(v);
    for (int s = 0; s < 20; ++s) {
      Rng train_rng(derive_seed(seed, 50, static_cast<std::uint64_t>(s)));
      CLTrainResult trained = cl_train(ModelKind::gcn, pg, split, cfg, train_rng);
      CLConfig infer_cfg = cfg;
      infer_cfg.J = 1;
      Rng infer_rng(derive_seed(seed, 60, static_cast<std::uint64_t>(s)));
      CLInferResult inf = cl_infer(trained, pg, split, infer_cfg, infer_rng);
      const Matrix& z = inf.iteration_embeddings.back();
      if ((z.row(pair_cert.node_u) - z.row(pair_cert.node_v)).norm() > 1e-3) ++separated;
    }
    out.checks.push_back(check("sampling_separates_pair", separated >= 18,
                               std::to_string(separated) + " of 20 seeds separated"));
  }

  out.all_passed = true;
  for (const BatteryCheck& c : out.checks) out.all_passed = out.all_passed && c.passed;

  Report r;
  r.set("document", "expressiveness");
  r.set_int("seed", static_cast<long long>(seed));
  r.set_bool("all_passed", out.all_passed);
  ReportTable& table = r.add_table("checks", {"name", "passed", "detail"});
  for (const BatteryCheck& c : out.checks)
    table.rows.push_back({c.name, c.passed ? "true" : "false", c.detail});
  Report group_report = group_cert.to_report();
  for (const auto& [k, v] : group_report.entries())
    if (k != "document") r.set("group_" + k, v);
  Report pair_report = pair_cert.to_report();
  for (const auto& [k, v] : pair_report.entries())
    if (k != "document") r.set("pair_" + k, v);
  out.report = std::move(r);
  return out;
}

Report cmd_synth(const SynthSpec& spec, std::uint64_t seed, const std::string& out_prefix) {
  Rng rng(seed);
  Graph g = synth_homophily(spec, rng);
  if (!out_prefix.empty()) {
    save_graph(g, out_prefix + ".edges.tsv", out_prefix + ".features.tsv",
               out_prefix + ".labels.tsv");
  }
  Report r;
  r.set("document", "synth");
  r.set_int("seed", static_cast<long long>(seed));
  r.set_int("num_nodes", g.num_nodes);
  r.set_int("num_edges", g.num_edges());
  r.set_int("num_classes", g.num_classes);
  r.set_double("homophily", spec.homophily);
  r.set_double("avg_degree_actual",
               2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.num_nodes));
  r.set_double("edge_probability_within", edge_probability_within(spec));
  r.set_double("edge_probability_across", edge_probability_across(spec));
  r.set_bool("imbalanced", class_counts_imbalanced(g));
  if (!out_prefix.empty()) r.set("output_prefix", out_prefix);
  return r;
}

Report cmd_eval(const std::string& checkpoint_path, const ExperimentConfig& cfg) {
  ModelState model = load_checkpoint(checkpoint_path);
  Rng data_rng(cfg.seed);
  Graph g = load_dataset(cfg, data_rng);
  if (model.input_dim != g.feature_dim())
    throw ConfigError("checkpoint expects input dim " + std::to_string(model.input_dim) +
                      ", dataset has " + std::to_string(g.feature_dim()));
  Matrix z = forward_eval(model, g, g.features);
  Matrix probs = predict_probs(model, z);
  std::vector<int> preds = argmax_rows(probs);
  Report r;
  r.set("document", "eval");
  r.set("checkpoint", checkpoint_path);
  r.set_int("num_nodes", g.num_nodes);
  std::vector<int> labeled;
  for (int v = 0; v < g.num_nodes; ++v)
    if (g.has_label(v)) labeled.push_back(v);
  if (!labeled.empty()) {
    r.set_double("accuracy", metric_accuracy(preds, g, labeled));
    r.set_double("balanced_accuracy", metric_balanced_accuracy(preds, g, labeled));
    r.set_int("labeled_nodes", static_cast<long long>(labeled.size()));
  }
  if (!cfg.predictions_path.empty())
    write_file(cfg.predictions_path, format_predictions(preds, probs));
  if (!cfg.output_path.empty()) write_file(cfg.output_path, r.serialize());
  return r;
}

}  // namespace clgnn
