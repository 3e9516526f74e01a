// arglt: attack graphs, find robust graph lottery tickets, and report on runs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "arglt/experiment.hpp"

namespace {

// Flag text collected per config key; only flags the user actually passed
// become overrides, so config-file values survive.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::pair<std::string, std::pair<CLI::Option*, std::string>>> switches;

  CLI::Option* add(CLI::App& app, const std::string& flag, const std::string& key,
                   const std::string& help) {
    CLI::Option* opt = app.add_option(flag, values[key], help);
    options.emplace_back(key, opt);
    return opt;
  }
  void add_switch(CLI::App& app, const std::string& flag, const std::string& key,
                  const std::string& value, const std::string& help) {
    switches.push_back({key, {app.add_flag(flag, help), value}});
  }

  std::vector<std::pair<std::string, std::string>> collect() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) out.emplace_back(key, values.at(key));
    }
    for (const auto& [key, sw] : switches) {
      if (sw.first->count() > 0) out.emplace_back(key, sw.second);
    }
    return out;
  }
};

struct Command {
  CLI::App* app = nullptr;
  Overrides overrides;
  std::string config;
};

void add_data_flags(Command& c) {
  auto& a = *c.app;
  a.add_option("--config", c.config, "JSON config file (flags override it)");
  c.overrides.add(a, "--dataset", "dataset", "dataset directory (edges.txt, features.csv, labels.txt)");
  c.overrides.add(a, "--sbm", "sbm", "synthetic graph: k,n,p_in,p_out,F,sigma");
  c.overrides.add(a, "--seed", "seeds", "experiment seed(s), comma separated");
  c.overrides.add(a, "--out", "out", "output directory");
  c.overrides.add(a, "--train-frac", "train_frac", "train fraction of the seeded split");
  c.overrides.add(a, "--val-frac", "val_frac", "validation fraction of the seeded split");
  c.overrides.add_switch(a, "--no-lcc", "lcc", "false", "keep every component");
}

void add_attack_flags(Command& c) {
  auto& a = *c.app;
  c.overrides.add(a, "--attack", "attack", "pgd | random | dissimilar | none");
  c.overrides.add(a, "--ptb", "ptb", "perturbation rate Δ");
  c.overrides.add(a, "--attack-steps", "attack_steps", "PGD iterations");
  c.overrides.add(a, "--attack-trials", "attack_trials", "PGD Bernoulli samples");
  c.overrides.add(a, "--surrogate-epochs", "surrogate_epochs", "surrogate GCN training epochs");
}

void add_args_flags(Command& c) {
  auto& a = *c.app;
  c.overrides.add(a, "--attack-file", "attack_file", "attack.json to apply instead of attacking");
  for (const char* w : {"alpha", "beta", "gamma", "eta", "zeta", "lambda1", "lambda2"}) {
    c.overrides.add(a, std::string("--") + w, w, std::string("loss weight ") + w);
  }
  c.overrides.add(a, "--pg", "pg", "edge prune rate per round");
  c.overrides.add(a, "--ptheta", "ptheta", "weight prune rate per round");
  c.overrides.add(a, "--sg", "sg", "target graph sparsity");
  c.overrides.add(a, "--stheta", "stheta", "target model sparsity");
  c.overrides.add(a, "--tau", "tau", "pseudo-label confidence threshold");
  c.overrides.add(a, "--epochs", "epochs", "epochs per round and for retraining");
  c.overrides.add(a, "--patience", "patience", "early-stopping patience");
  c.overrides.add(a, "--hidden", "hidden", "GCN hidden width");
  c.overrides.add(a, "--lr", "lr", "weight learning rate");
  c.overrides.add(a, "--lr-edge-mask", "lr_edge_mask", "edge-mask learning rate");
  c.overrides.add(a, "--lr-weight-mask", "lr_weight_mask", "weight-mask learning rate");
  c.overrides.add(a, "--mlp-hidden", "mlp_hidden", "pseudo-label MLP hidden width");
  c.overrides.add(a, "--mlp-epochs", "mlp_epochs", "pseudo-label MLP epochs");
  c.overrides.add_switch(a, "--row-normalize", "row_normalize", "true",
                         "smoothness on L1-row-normalized features");
}

arglt::ExperimentSpec resolve(const Command& c) {
  return arglt::resolve_spec(c.config, c.overrides.collect());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarially robust graph lottery tickets"};
  app.require_subcommand(1);

  Command attack{app.add_subcommand("attack", "poison a graph and write attack.json")};
  add_data_flags(attack);
  add_attack_flags(attack);

  Command sparsify{app.add_subcommand("sparsify", "find a ticket; writes metrics.csv and ticket.json")};
  add_data_flags(sparsify);
  add_attack_flags(sparsify);
  add_args_flags(sparsify);

  Command ablate{app.add_subcommand("ablate", "loss-term ablation grid; writes ablation.csv")};
  add_data_flags(ablate);
  add_attack_flags(ablate);
  add_args_flags(ablate);
  ablate.overrides.add(*ablate.app, "--checkpoints", "checkpoints", "rounds to evaluate, e.g. 5,18");

  Command gen{app.add_subcommand("gen-sbm", "write a synthetic dataset directory")};
  gen.overrides.add(*gen.app, "--sbm", "sbm", "k,n,p_in,p_out,F,sigma")->required();
  gen.overrides.add(*gen.app, "--seed", "seeds", "generator seed");
  gen.overrides.add(*gen.app, "--out", "out", "dataset directory to write")->required();

  auto* report = app.add_subcommand("report", "aggregate runs into summary.json and CSVs");
  std::vector<std::string> run_dirs;
  std::string report_out = "report";
  report->add_option("runs", run_dirs, "run directories (or parents of seed_* directories)")->required();
  report->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (attack.app->parsed()) arglt::cli_attack(resolve(attack));
    else if (sparsify.app->parsed()) arglt::cli_sparsify(resolve(sparsify));
    else if (ablate.app->parsed()) arglt::cli_ablate(resolve(ablate));
    else if (gen.app->parsed()) arglt::cli_gen_sbm(resolve(gen));
    else if (report->parsed()) {
      std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
      arglt::cli_report(dirs, report_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "arglt: error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
