#ifndef CLGNN_EXPERIMENT_HPP_
#define CLGNN_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "clgnn/collective.hpp"
#include "clgnn/report.hpp"
#include "clgnn/sbm.hpp"
#include "clgnn/stats.hpp"
#include "clgnn/wl.hpp"

namespace clgnn {

enum class Metric { accuracy, balanced_accuracy };

std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

struct ExperimentConfig {
  bool use_synth = true;
  SynthSpec synth;
  std::string edges_path, features_path, labels_path;  // tsv dataset
  std::string cora_content_path, cora_cites_path;      // citation dataset
  ModelKind model = ModelKind::gcn;
  CLConfig cl;
  int trials = 5;
  Metric metric = Metric::accuracy;
  int train_labeled = 30;
  bool test_labeled_connected = false;
  bool collective_enabled = true;
  std::uint64_t seed = 0;
  std::string output_path;       // report file; empty = stdout only
  std::string predictions_path;  // optional per-node prediction dump
};

void validate_experiment_config(const ExperimentConfig& cfg);
Graph load_dataset(const ExperimentConfig& cfg, Rng& data_rng);

// Training nodes via connected-component sampling over the labeled pool; the
// shuffled remainder is cut into validation / test_labeled / test_eval thirds
// in test_partial and validation / test_eval halves in test_unlabeled.
SplitSpec make_split(const Graph& g, int train_size, Scenario scenario,
                     bool test_labeled_connected, Rng& rng);

double metric_accuracy(const std::vector<int>& preds, const Graph& g,
                       const std::vector<int>& eval_set);
double metric_balanced_accuracy(const std::vector<int>& preds, const Graph& g,
                                const std::vector<int>& eval_set);
double eval_metric(Metric m, const std::vector<int>& preds, const Graph& g,
                   const std::vector<int>& eval_set);

struct TrialOutcome {
  std::uint64_t seed = 0;
  double baseline_metric = 0.0;
  double collective_metric = 0.0;
  double improvement = 0.0;
  std::vector<double> iteration_metric;  // collective metric per iteration
  std::vector<double> iteration_loss;    // mean training loss per iteration
};

struct RunResult {
  std::vector<TrialOutcome> trials;
  double baseline_mean = 0.0, baseline_se = 0.0;
  double collective_mean = 0.0, collective_se = 0.0;
  double improvement_mean = 0.0, improvement_se = 0.0;
  bool t_test_valid = false;
  PairedTTestResult t_test;
  Report report;
};

// One experiment: per trial a fresh dataset draw (synthetic) or the loaded
// dataset, a fresh split, a baseline model trained for T*J epochs, and the
// collective model trained and applied with shared per-trial seed streams.
RunResult cmd_run(const ExperimentConfig& cfg);

struct AblationResult {
  RunResult sampled;
  RunResult uniform;
  bool has_true_only = false;
  RunResult true_only;
  Report report;
};

// Sampled-label run plus the uniform-label control (run under test_unlabeled)
// and, in test_partial, the visible-true-labels-only control. All legs share
// per-trial seed streams.
AblationResult cmd_ablate(const ExperimentConfig& cfg);

struct BatteryCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BatteryResult {
  std::vector<BatteryCheck> checks;
  bool all_passed = false;
  Report report;
};

// Expressiveness battery: certificate construction for both generator graphs,
// baseline symmetry collapse, sampling-based separation, and the
// deterministic-variant non-separation check.
BatteryResult cmd_expressiveness(std::uint64_t seed);

Report cmd_synth(const SynthSpec& spec, std::uint64_t seed, const std::string& out_prefix);

Report cmd_eval(const std::string& checkpoint_path, const ExperimentConfig& cfg);

}  // namespace clgnn

#endif  // CLGNN_EXPERIMENT_HPP_
