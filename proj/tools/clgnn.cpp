#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "clgnn/experiment.hpp"
#include "clgnn/graph_io.hpp"

namespace {

using namespace clgnn;

// Command-line flags fill the config first; a config file, when given,
// overrides them key by key. Lines are "key value"; '#' starts a comment.
void apply_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;
    if (!(ls >> value))
      throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key +
                        "' has no value");

    auto as_int = [&]() { return std::stoll(value); };
    auto as_double = [&]() { return parse_double(value); };
    auto as_bool = [&]() {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw ConfigError("config key '" + key + "' expects a boolean, got '" + value + "'");
    };

    if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_int());
    else if (key == "trials") cfg.trials = static_cast<int>(as_int());
    else if (key == "model") cfg.model = model_kind_from_name(value);
    else if (key == "scenario") cfg.cl.scenario = scenario_from_name(value);
    else if (key == "strategy") cfg.cl.strategy = label_strategy_from_name(value);
    else if (key == "metric") cfg.metric = metric_from_name(value);
    else if (key == "train_labeled") cfg.train_labeled = static_cast<int>(as_int());
    else if (key == "test_labeled_connected") cfg.test_labeled_connected = as_bool();
    else if (key == "collective") cfg.collective_enabled = as_bool();
    else if (key == "samples") cfg.cl.K = static_cast<int>(as_int());
    else if (key == "iterations") cfg.cl.T = static_cast<int>(as_int());
    else if (key == "steps") cfg.cl.J = static_cast<int>(as_int());
    else if (key == "mask_rate") cfg.cl.mask_rate = as_double();
    else if (key == "lr") cfg.cl.lr = as_double();
    else if (key == "weight_decay") cfg.cl.weight_decay = as_double();
    else if (key == "dropout") cfg.cl.dropout_p = as_double();
    else if (key == "hidden") cfg.cl.hidden_dim = static_cast<int>(as_int());
    else if (key == "clip_norm") cfg.cl.clip_norm = as_double();
    else if (key == "patience") cfg.cl.patience = static_cast<int>(as_int());
    else if (key == "sample_size") cfg.cl.sample_size = static_cast<int>(as_int());
    else if (key == "nodes") cfg.synth.num_nodes = static_cast<int>(as_int());
    else if (key == "classes") cfg.synth.num_classes = static_cast<int>(as_int());
    else if (key == "communities") cfg.synth.communities = static_cast<int>(as_int());
    else if (key == "homophily") cfg.synth.homophily = as_double();
    else if (key == "feature_noise") cfg.synth.feature_noise = as_double();
    else if (key == "avg_degree") cfg.synth.avg_degree = as_double();
    else if (key == "edges") { cfg.edges_path = value; cfg.use_synth = false; }
    else if (key == "features") { cfg.features_path = value; cfg.use_synth = false; }
    else if (key == "labels") { cfg.labels_path = value; cfg.use_synth = false; }
    else if (key == "cora_content") { cfg.cora_content_path = value; cfg.use_synth = false; }
    else if (key == "cora_cites") { cfg.cora_cites_path = value; cfg.use_synth = false; }
    else if (key == "output") cfg.output_path = value;
    else if (key == "predictions") cfg.predictions_path = value;
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

struct CliState {
  ExperimentConfig cfg;
  std::string config_path;
  std::string model = "gcn";
  std::string scenario = "test_partial";
  std::string strategy = "sampled";
  std::string metric = "accuracy";
  bool no_collective = false;
};

void add_dataset_flags(CLI::App* cmd, CliState& st) {
  cmd->add_option("--edges", st.cfg.edges_path, "edge list tsv (u<TAB>v per line)");
  cmd->add_option("--features", st.cfg.features_path, "node feature tsv");
  cmd->add_option("--labels", st.cfg.labels_path, "node label tsv (-1 = unlabeled)");
  cmd->add_option("--cora-content", st.cfg.cora_content_path, "citation .content file");
  cmd->add_option("--cora-cites", st.cfg.cora_cites_path, "citation .cites file");
  cmd->add_option("--nodes", st.cfg.synth.num_nodes, "synthetic graph size");
  cmd->add_option("--classes", st.cfg.synth.num_classes, "synthetic class count");
  cmd->add_option("--communities", st.cfg.synth.communities, "synthetic block count");
  cmd->add_option("--homophily", st.cfg.synth.homophily, "within-block edge preference [0,1]");
  cmd->add_option("--feature-noise", st.cfg.synth.feature_noise,
                  "gaussian noise scale on one-hot features (inf = pure noise)");
  cmd->add_option("--avg-degree", st.cfg.synth.avg_degree, "expected average degree");
}

void add_run_flags(CLI::App* cmd, CliState& st, bool seed_required) {
  auto* seed = cmd->add_option("--seed", st.cfg.seed, "master seed");
  if (seed_required) seed->required();
  cmd->add_option("--config", st.config_path, "config file; its keys override flags");
  cmd->add_option("--model", st.model, "gcn or sage");
  cmd->add_option("--scenario", st.scenario, "test_partial or test_unlabeled");
  cmd->add_option("--strategy", st.strategy,
                  "sampled, uniform, true_only, or deterministic_probs");
  cmd->add_option("--metric", st.metric, "accuracy or balanced_accuracy");
  cmd->add_option("--trials", st.cfg.trials, "independent trials");
  cmd->add_option("--train-labeled", st.cfg.train_labeled, "training label budget");
  cmd->add_flag("--test-labeled-connected", st.cfg.test_labeled_connected,
                "sample the visible test labels as a connected component");
  cmd->add_flag("--no-collective", st.no_collective, "baseline only");
  cmd->add_option("--samples", st.cfg.cl.K, "label samples per embedding");
  cmd->add_option("--iterations", st.cfg.cl.T, "collective iterations");
  cmd->add_option("--steps", st.cfg.cl.J, "gradient steps per iteration");
  cmd->add_option("--mask-rate", st.cfg.cl.mask_rate, "label hiding probability");
  cmd->add_option("--lr", st.cfg.cl.lr, "learning rate");
  cmd->add_option("--weight-decay", st.cfg.cl.weight_decay, "adam weight decay");
  cmd->add_option("--dropout", st.cfg.cl.dropout_p, "dropout probability");
  cmd->add_option("--hidden", st.cfg.cl.hidden_dim, "hidden width");
  cmd->add_option("--clip-norm", st.cfg.cl.clip_norm, "global gradient norm cap");
  cmd->add_option("--patience", st.cfg.cl.patience, "early-stopping patience (0 = off)");
  cmd->add_option("--sample-size", st.cfg.cl.sample_size, "sage neighbor sample cap");
  cmd->add_option("--output", st.cfg.output_path, "write the report here too");
  cmd->add_option("--predictions", st.cfg.predictions_path, "write per-node predictions");
  add_dataset_flags(cmd, st);
}

void finalize(CliState& st) {
  st.cfg.model = model_kind_from_name(st.model);
  st.cfg.cl.scenario = scenario_from_name(st.scenario);
  st.cfg.cl.strategy = label_strategy_from_name(st.strategy);
  st.cfg.metric = metric_from_name(st.metric);
  if (st.no_collective) st.cfg.collective_enabled = false;
  if (!st.cfg.edges_path.empty() || !st.cfg.cora_content_path.empty())
    st.cfg.use_synth = false;
  if (!st.config_path.empty()) apply_config_file(st.config_path, st.cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective-learning GNN experiments"};
  app.require_subcommand(1);

  CliState run_st;
  CLI::App* run = app.add_subcommand("run", "baseline vs collective benchmark");
  add_run_flags(run, run_st, true);

  CliState ablate_st;
  CLI::App* ablate = app.add_subcommand("ablate", "label-strategy ablation");
  add_run_flags(ablate, ablate_st, true);

  std::uint64_t expr_seed = 0;
  std::string expr_output;
  CLI::App* expr = app.add_subcommand("expressiveness", "separation test battery");
  expr->add_option("--seed", expr_seed, "battery seed (default 0)");
  expr->add_option("--output", expr_output, "write the report here too");

  CliState synth_st;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--seed", synth_st.cfg.seed, "generator seed")->required();
  synth->add_option("--out", synth_out, "output path prefix for the tsv files");
  add_dataset_flags(synth, synth_st);

  CliState eval_st;
  std::string checkpoint_path;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a saved checkpoint");
  eval->add_option("--seed", eval_st.cfg.seed, "dataset seed")->required();
  eval->add_option("--checkpoint", checkpoint_path, "model checkpoint path")->required();
  eval->add_option("--output", eval_st.cfg.output_path, "write the report here too");
  eval->add_option("--predictions", eval_st.cfg.predictions_path,
                   "write per-node predictions");
  add_dataset_flags(eval, eval_st);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      finalize(run_st);
      RunResult result = cmd_run(run_st.cfg);
      std::cout << result.report.serialize();
      return 0;
    }
    if (ablate->parsed()) {
      finalize(ablate_st);
      AblationResult result = cmd_ablate(ablate_st.cfg);
      std::cout << result.report.serialize();
      return 0;
    }
    if (expr->parsed()) {
      BatteryResult result = cmd_expressiveness(expr_seed);
      if (!expr_output.empty()) write_file(expr_output, result.report.serialize());
      std::cout << result.report.serialize();
      return result.all_passed ? 0 : 2;
    }
    if (synth->parsed()) {
      if (!synth_st.config_path.empty())
        apply_config_file(synth_st.config_path, synth_st.cfg);
      Report r = cmd_synth(synth_st.cfg.synth, synth_st.cfg.seed, synth_out);
      std::cout << r.serialize();
      return 0;
    }
    if (eval->parsed()) {
      if (!eval_st.cfg.edges_path.empty() || !eval_st.cfg.cora_content_path.empty())
        eval_st.cfg.use_synth = false;
      Report r = cmd_eval(checkpoint_path, eval_st.cfg);
      std::cout << r.serialize();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
