#include "arglt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "arglt/ablation.hpp"
#include "arglt/checkpoint.hpp"
#include "arglt/csv.hpp"
#include "arglt/dataset_io.hpp"
#include "arglt/report.hpp"
#include "arglt/seeds.hpp"
#include "config_json.hpp"

namespace arglt {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- logging

std::mutex log_mutex;
std::function<void(const std::string&)> log_sink = [](const std::string& line) {
  std::cerr << line << '\n';
};

void log_line(const std::string& line) {
  std::lock_guard lock(log_mutex);
  if (log_sink) log_sink(line);
}

// ---------------------------------------------------------------- config keys

template <class T>
json parse_text(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("cannot parse '" + text + "'"); };
  if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw bad();
  } else if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_floating_point_v<T>) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != text.size()) throw bad();
    return v;
  } else if constexpr (std::is_integral_v<T>) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != text.size()) throw bad();
    if constexpr (std::is_unsigned_v<T>) {
      if (v < 0) throw bad();
      return static_cast<std::uint64_t>(v);
    } else {
      return static_cast<std::int64_t>(v);
    }
  } else {
    using Item = typename T::value_type;
    json arr = json::array();
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) arr.push_back(parse_text<Item>(item));
    return arr;
  }
}

template <class T>
void check_type(const json& v) {
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) ok = v.is_boolean();
  else if constexpr (std::is_same_v<T, std::string>) ok = v.is_string();
  else if constexpr (std::is_floating_point_v<T>) ok = v.is_number();
  else if constexpr (std::is_unsigned_v<T>) ok = v.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>) ok = v.is_number_integer();
  else {
    ok = v.is_array();
    if (ok) for (const auto& x : v) check_type<typename T::value_type>(x);
  }
  if (!ok) throw std::invalid_argument("value " + v.dump() + " has the wrong type");
}

struct Key {
  std::string name;
  std::function<json(const ExperimentSpec&)> get;
  std::function<void(ExperimentSpec&, const json&)> set;
  std::function<json(const std::string&)> parse;
};

template <class T, class Ref>
Key make_key(std::string name, Ref ref) {
  Key k;
  k.name = std::move(name);
  k.get = [ref](const ExperimentSpec& s) { return json(ref(const_cast<ExperimentSpec&>(s))); };
  k.set = [ref](ExperimentSpec& s, const json& v) {
    check_type<T>(v);
    ref(s) = v.get<T>();
  };
  k.parse = parse_text<T>;
  return k;
}

#define ARGLT_KEY(type, name, expr) make_key<type>(name, [](ExperimentSpec& s) -> type& { return expr; })

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    Key dataset;
    dataset.name = "dataset";
    dataset.get = [](const ExperimentSpec& s) { return json(s.dataset.string()); };
    dataset.set = [](ExperimentSpec& s, const json& v) {
      check_type<std::string>(v);
      s.dataset = v.get<std::string>();
    };
    dataset.parse = parse_text<std::string>;
    k.push_back(dataset);

    Key sbm;
    sbm.name = "sbm";
    sbm.get = [](const ExperimentSpec& s) { return json(s.sbm ? s.sbm->to_string() : ""); };
    sbm.set = [](ExperimentSpec& s, const json& v) {
      check_type<std::string>(v);
      const auto text = v.get<std::string>();
      if (text.empty()) s.sbm.reset(); else s.sbm = SbmParams::parse(text);
    };
    sbm.parse = parse_text<std::string>;
    k.push_back(sbm);

    k.push_back(ARGLT_KEY(bool, "lcc", s.use_lcc));
    k.push_back(ARGLT_KEY(double, "train_frac", s.fractions.train));
    k.push_back(ARGLT_KEY(double, "val_frac", s.fractions.val));
    k.push_back(ARGLT_KEY(std::string, "attack", s.attack));

    Key attack_file = dataset;
    attack_file.name = "attack_file";
    attack_file.get = [](const ExperimentSpec& s) { return json(s.attack_file.string()); };
    attack_file.set = [](ExperimentSpec& s, const json& v) {
      check_type<std::string>(v);
      s.attack_file = v.get<std::string>();
    };
    k.push_back(attack_file);

    k.push_back(ARGLT_KEY(double, "ptb", s.attack_cfg.rate));
    k.push_back(ARGLT_KEY(int, "attack_steps", s.attack_cfg.steps));
    k.push_back(ARGLT_KEY(double, "attack_step_size", s.attack_cfg.step_size));
    k.push_back(ARGLT_KEY(int, "attack_trials", s.attack_cfg.sample_trials));
    k.push_back(ARGLT_KEY(Eigen::Index, "surrogate_hidden", s.surrogate.hidden));
    k.push_back(ARGLT_KEY(int, "surrogate_epochs", s.surrogate.epochs));
    k.push_back(ARGLT_KEY(double, "surrogate_lr", s.surrogate.lr));
    k.push_back(ARGLT_KEY(double, "surrogate_weight_decay", s.surrogate.weight_decay));

    k.push_back(ARGLT_KEY(double, "alpha", s.args.weights.alpha));
    k.push_back(ARGLT_KEY(double, "beta", s.args.weights.beta));
    k.push_back(ARGLT_KEY(double, "gamma", s.args.weights.gamma));
    k.push_back(ARGLT_KEY(double, "eta", s.args.weights.eta));
    k.push_back(ARGLT_KEY(double, "zeta", s.args.weights.zeta));
    k.push_back(ARGLT_KEY(double, "lambda1", s.args.weights.lambda1));
    k.push_back(ARGLT_KEY(double, "lambda2", s.args.weights.lambda2));
    k.push_back(ARGLT_KEY(double, "pg", s.args.p_g));
    k.push_back(ARGLT_KEY(double, "ptheta", s.args.p_theta));
    k.push_back(ARGLT_KEY(double, "sg", s.args.s_g));
    k.push_back(ARGLT_KEY(double, "stheta", s.args.s_theta));
    k.push_back(ARGLT_KEY(int, "epochs", s.args.epochs));
    k.push_back(ARGLT_KEY(int, "patience", s.args.patience));
    k.push_back(ARGLT_KEY(Eigen::Index, "hidden", s.args.hidden));
    k.push_back(ARGLT_KEY(double, "lr", s.args.lr_weights));
    k.push_back(ARGLT_KEY(double, "lr_edge_mask", s.args.lr_edge_mask));
    k.push_back(ARGLT_KEY(double, "lr_weight_mask", s.args.lr_weight_mask));
    k.push_back(ARGLT_KEY(double, "tau", s.args.tau));
    k.push_back(ARGLT_KEY(bool, "row_normalize", s.args.row_normalize_smoothness));

    k.push_back(ARGLT_KEY(Eigen::Index, "mlp_hidden", s.mlp.hidden));
    k.push_back(ARGLT_KEY(int, "mlp_epochs", s.mlp.epochs));
    k.push_back(ARGLT_KEY(double, "mlp_lr", s.mlp.lr));
    k.push_back(ARGLT_KEY(int, "mlp_patience", s.mlp.patience));

    k.push_back(ARGLT_KEY(std::vector<int>, "checkpoints", s.checkpoints));
    k.push_back(ARGLT_KEY(std::vector<std::uint64_t>, "seeds", s.seeds));

    Key out = attack_file;
    out.name = "out";
    out.get = [](const ExperimentSpec& s) { return json(s.out.string()); };
    out.set = [](ExperimentSpec& s, const json& v) {
      check_type<std::string>(v);
      s.out = v.get<std::string>();
    };
    k.push_back(out);
    return k;
  }();
  return keys;
}

#undef ARGLT_KEY

const Key& find_key(const std::string& name) {
  for (const auto& k : key_table()) {
    if (k.name == name) return k;
  }
  throw std::invalid_argument("unknown config key '" + name + "'");
}

json spec_to_json(const ExperimentSpec& spec) {
  json doc = json::object();
  for (const auto& k : key_table()) doc[k.name] = k.get(spec);
  return doc;
}

ExperimentSpec with_seed(const ExperimentSpec& spec, std::uint64_t seed, const fs::path& dir) {
  ExperimentSpec one = spec;
  one.seeds = {seed};
  one.out = dir;
  return one;
}

// ---------------------------------------------------------------- outputs

std::string fmt(double v) { return format_double(v); }

void write_resolved_config(const ExperimentSpec& spec, std::uint64_t seed, const fs::path& dir) {
  detail::write_json(dir / "resolved_config.json", spec_to_json(with_seed(spec, seed, dir)));
}

std::string attack_label(const ExperimentSpec& spec, const std::string& name) {
  return name.empty() ? spec.attack : name;
}

CsvTable attack_stats_table(const PerturbedGraph& pg, const NodeSplit& split, double rate) {
  const FeatureDiffHistogram h = feature_diff_histogram(pg, 20);
  const EdgeCategoryCounts c =
      edge_category_counts(pg, split, EdgeMask::ones(pg.edges().size()));
  CsvTable t;
  t.header = {"metric", "bin_lo", "bin_hi", "value"};
  auto scalar = [&](const char* name, double v) { t.rows.push_back({name, "", "", fmt(v)}); };
  scalar("budget", static_cast<double>(attack_budget(pg.base.num_edges(), rate)));
  scalar("flips_added", static_cast<double>(pg.added.size()));
  scalar("flips_removed", static_cast<double>(pg.removed.size()));
  scalar("clean_mean_diff", h.clean_mean);
  scalar("adv_mean_diff", h.adversarial_mean);
  scalar("adv_train_train", static_cast<double>(c.train_train));
  scalar("adv_train_test", static_cast<double>(c.train_test));
  scalar("adv_test_test", static_cast<double>(c.test_test));
  for (std::size_t b = 0; b < h.clean.size(); ++b) {
    t.rows.push_back({"clean_hist", fmt(h.bin_edges[b]), fmt(h.bin_edges[b + 1]), fmt(h.clean[b])});
  }
  for (std::size_t b = 0; b < h.adversarial.size(); ++b) {
    t.rows.push_back(
        {"adv_hist", fmt(h.bin_edges[b]), fmt(h.bin_edges[b + 1]), fmt(h.adversarial[b])});
  }
  return t;
}

CsvTable metrics_table(const TicketReport& report) {
  CsvTable t;
  t.header = {"round", "graph_sparsity", "model_sparsity", "val_acc", "test_acc", "l0", "lfs",
              "l1", "reg_g", "reg_theta", "adv_tt", "adv_trte", "adv_tete", "test_acc_final"};
  for (const RoundRow& r : report.rows) {
    t.rows.push_back({std::to_string(r.round), fmt(r.graph_sparsity), fmt(r.model_sparsity),
                      fmt(r.val_acc), fmt(r.test_acc), fmt(r.loss.l0), fmt(r.loss.lfs),
                      fmt(r.loss.l1), fmt(r.loss.reg_g), fmt(r.loss.reg_theta),
                      std::to_string(r.adversarial.train_train),
                      std::to_string(r.adversarial.train_test),
                      std::to_string(r.adversarial.test_test), fmt(r.final_test_acc)});
  }
  return t;
}

json counts_json(const EdgeCategoryCounts& c) {
  return {{"train_train", c.train_train}, {"train_test", c.train_test}, {"test_test", c.test_test}};
}

struct SparsifyInputs {
  PreparedData data;
  PerturbedGraph graph;
  PseudoLabels pseudo;
  std::string attack_name;
};

SparsifyInputs sparsify_inputs(const ExperimentSpec& spec, std::uint64_t seed, const fs::path& dir) {
  SparsifyInputs in{prepare_data(spec, seed), {}, {}, {}};
  in.graph = build_attack(spec, in.data, seed, &in.attack_name);
  if (spec.attack_file.empty() && spec.attack != "none") {
    save_attack(dir / "attack.json", in.graph, spec.attack_cfg.rate, seed, in.attack_name);
  }
  const MlpState mlp = train_mlp(in.data.graph, in.data.split, spec.mlp, derive_seed(seed, "mlp"));
  in.pseudo = select_pseudo_labels(mlp, in.data.graph, in.data.split, spec.args.tau);
  log_line("seed " + std::to_string(seed) + ": " + std::to_string(in.pseudo.size()) +
           " pseudo labels (accuracy " +
           fmt(pseudo_label_accuracy(in.pseudo, in.data.graph.labels)) + ")");
  return in;
}

void sparsify_one(const ExperimentSpec& spec, std::uint64_t seed) {
  const fs::path dir = run_dir(spec, seed);
  fs::create_directories(dir);
  write_resolved_config(spec, seed, dir);
  const SparsifyInputs in = sparsify_inputs(spec, seed, dir);
  save_pseudo_labels(dir / "pseudo_labels.json", in.pseudo);

  ArgsConfig cfg = spec.args;
  cfg.seed = seed;
  ArgsHooks hooks;
  hooks.on_round_end = [&](const RoundRow& row, const MaskPair&) {
    log_line("seed " + std::to_string(seed) + " round " + std::to_string(row.round) +
             ": graph " + fmt(100.0 * row.graph_sparsity) + "% model " +
             fmt(100.0 * row.model_sparsity) + "% test " + fmt(100.0 * row.test_acc) + "%");
  };
  const ArgsProblem problem{&in.graph, &in.data.split, &in.pseudo};
  const ArgsResult result = run_args(problem, cfg, hooks);

  write_csv(dir / "metrics.csv", metrics_table(result.report));
  save_checkpoint(dir / "theta0.json", result.theta0, seed);
  save_ticket(dir / "ticket.json", in.graph, result.masks, cfg, "theta0.json", "metrics.csv");

  const RetrainResult& fin = result.report.final_ticket;
  const json summary = {
      {"seed", seed},
      {"attack_name", attack_label(spec, in.attack_name)},
      {"flips", in.graph.budget_used()},
      {"initial_adversarial",
       counts_json(edge_category_counts(in.graph, in.data.split,
                                        EdgeMask::ones(in.graph.edges().size())))},
      {"pseudo_labels",
       {{"count", in.pseudo.size()},
        {"accuracy", pseudo_label_accuracy(in.pseudo, in.data.graph.labels)}}},
      {"rounds", result.report.rows.size()},
      {"final_ticket",
       {{"val_acc", fin.val_acc},
        {"test_acc", fin.test_acc},
        {"final_val_acc", fin.final_val_acc},
        {"final_test_acc", fin.final_test_acc}}}};
  detail::write_json(dir / "run_summary.json", summary);
}

std::vector<fs::path> expand_run_dirs(const std::vector<fs::path>& dirs) {
  std::vector<fs::path> out;
  for (const auto& d : dirs) {
    if (fs::exists(d / "metrics.csv")) {
      out.push_back(d);
      continue;
    }
    std::vector<fs::path> seeds;
    if (fs::is_directory(d)) {
      for (const auto& entry : fs::directory_iterator(d)) {
        if (entry.is_directory() && fs::exists(entry.path() / "metrics.csv")) seeds.push_back(entry.path());
      }
    }
    if (seeds.empty()) throw std::invalid_argument(d.string() + " has no metrics.csv");
    std::sort(seeds.begin(), seeds.end());
    out.insert(out.end(), seeds.begin(), seeds.end());
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- spec

void ExperimentSpec::validate() const {
  if (dataset.empty() == !sbm.has_value()) {
    throw std::invalid_argument("give exactly one of --dataset or --sbm");
  }
  if (sbm) sbm->validate();
  static const std::vector<std::string> attacks{"pgd", "random", "dissimilar", "none"};
  if (std::find(attacks.begin(), attacks.end(), attack) == attacks.end()) {
    throw std::invalid_argument("unknown attack '" + attack + "' (pgd, random, dissimilar, none)");
  }
  if (!attack_file.empty() && attack != "none") {
    throw std::invalid_argument("--attack-file and --attack are mutually exclusive");
  }
  if (!(fractions.train > 0.0) || fractions.val < 0.0 || fractions.train + fractions.val >= 1.0) {
    throw std::invalid_argument("split fractions need train > 0, val >= 0, train + val < 1");
  }
  attack_cfg.validate();
  args.validate();
  if (mlp.epochs < 0 || mlp.hidden < 1 || mlp.patience < 1 || !(mlp.lr > 0.0)) {
    throw std::invalid_argument("invalid MLP settings");
  }
  if (surrogate.hidden < 1 || surrogate.epochs < 0 || !(surrogate.lr > 0.0)) {
    throw std::invalid_argument("invalid surrogate settings");
  }
  if (checkpoints.empty()) throw std::invalid_argument("at least one checkpoint round is required");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (out.empty()) throw std::invalid_argument("output directory is required");
}

std::vector<std::string> spec_keys() {
  std::vector<std::string> names;
  for (const auto& k : key_table()) names.push_back(k.name);
  return names;
}

ExperimentSpec resolve_spec(const fs::path& config_file,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentSpec spec;
  if (!config_file.empty()) {
    const json doc = detail::read_json(config_file);
    if (!doc.is_object()) throw std::invalid_argument(config_file.string() + ": expected an object");
    for (const auto& [name, value] : doc.items()) {
      try {
        find_key(name).set(spec, value);
      } catch (const std::exception& e) {
        throw std::invalid_argument(config_file.string() + ": " + name + ": " + e.what());
      }
    }
  }
  for (const auto& [name, text] : overrides) {
    try {
      const Key& k = find_key(name);
      k.set(spec, k.parse(text));
    } catch (const std::exception& e) {
      throw std::invalid_argument("--" + name + ": " + e.what());
    }
  }
  spec.fractions.test = 1.0 - spec.fractions.train - spec.fractions.val;
  spec.validate();
  return spec;
}

std::string spec_json(const ExperimentSpec& spec) { return spec_to_json(spec).dump(1); }

// ---------------------------------------------------------------- pipeline

PreparedData prepare_data(const ExperimentSpec& spec, std::uint64_t seed) {
  Graph g = spec.sbm ? generate_sbm(*spec.sbm, derive_seed(seed, "sbm")) : load_graph(spec.dataset);
  std::optional<NodeSplit> file_split;
  if (!spec.dataset.empty()) file_split = load_split(spec.dataset);
  if (file_split) file_split->validate(g.num_nodes);
  if (spec.use_lcc) {
    ComponentResult cc = largest_connected_component(g);
    if (file_split) file_split = remap_split(*file_split, cc.old_to_new);
    g = std::move(cc.graph);
  }
  PreparedData data{std::move(g), {}};
  data.split = file_split ? *file_split : make_split(data.graph, spec.fractions, derive_seed(seed, "split"));
  data.split.validate(data.graph.num_nodes);
  return data;
}

PerturbedGraph build_attack(const ExperimentSpec& spec, const PreparedData& data,
                            std::uint64_t seed, std::string* attack_name) {
  if (!spec.attack_file.empty()) {
    AttackFile f = load_attack(spec.attack_file, data.graph);
    if (attack_name != nullptr) *attack_name = f.attack_name;
    return std::move(f.graph);
  }
  if (attack_name != nullptr) *attack_name = spec.attack;
  if (spec.attack == "none") return PerturbedGraph::clean(data.graph);
  if (spec.attack_cfg.rate == 0.0) log_line("warning: perturbation rate is 0, the flip set is empty");

  AttackConfig cfg = spec.attack_cfg;
  cfg.seed = derive_seed(seed, "attack");
  if (spec.attack == "pgd") return pgd_structure_attack(data.graph, data.split, spec.surrogate, cfg);
  if (spec.attack == "random") return random_flip_attack(data.graph, cfg);
  return dissimilar_edge_attack(data.graph, cfg);
}

fs::path run_dir(const ExperimentSpec& spec, std::uint64_t seed) {
  return spec.seeds.size() > 1 ? spec.out / ("seed_" + std::to_string(seed)) : spec.out;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ARGLT_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw std::invalid_argument("ARGLT_THREADS must be a positive integer");
    cap = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

void run_parallel(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = worker_count(jobs);
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t j = next++; j < jobs; j = next++) {
        try {
          fn(j);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void set_log_sink(std::function<void(const std::string&)> sink) {
  std::lock_guard lock(log_mutex);
  log_sink = std::move(sink);
}

// ---------------------------------------------------------------- commands

void cli_attack(const ExperimentSpec& spec) {
  if (spec.attack == "none" || !spec.attack_file.empty()) {
    throw std::invalid_argument("attack: choose --attack pgd, random or dissimilar");
  }
  run_parallel(spec.seeds.size(), [&](std::size_t j) {
    const std::uint64_t seed = spec.seeds[j];
    const fs::path dir = run_dir(spec, seed);
    fs::create_directories(dir);
    write_resolved_config(spec, seed, dir);
    const PreparedData data = prepare_data(spec, seed);
    std::string name;
    const PerturbedGraph pg = build_attack(spec, data, seed, &name);
    save_attack(dir / "attack.json", pg, spec.attack_cfg.rate, seed, name);
    write_csv(dir / "attack_stats.csv", attack_stats_table(pg, data.split, spec.attack_cfg.rate));
    log_line("seed " + std::to_string(seed) + ": " + std::to_string(pg.budget_used()) + " flips (" +
             std::to_string(pg.added.size()) + " added, " + std::to_string(pg.removed.size()) +
             " removed) on " + std::to_string(data.graph.num_edges()) + " edges");
  });
}

void cli_sparsify(const ExperimentSpec& spec) {
  run_parallel(spec.seeds.size(), [&](std::size_t j) { sparsify_one(spec, spec.seeds[j]); });
}

void cli_ablate(const ExperimentSpec& spec) {
  const std::vector<LossToggles> grid = default_ablation_grid();
  const std::size_t per_seed = grid.size();
  std::vector<std::vector<AblationCell>> cells(spec.seeds.size() * per_seed);
  std::vector<std::optional<SparsifyInputs>> inputs(spec.seeds.size());

  // Inputs first (one per seed), then every (seed, configuration) cell.
  run_parallel(spec.seeds.size(), [&](std::size_t s) {
    const fs::path dir = run_dir(spec, spec.seeds[s]);
    fs::create_directories(dir);
    write_resolved_config(spec, spec.seeds[s], dir);
    inputs[s] = sparsify_inputs(spec, spec.seeds[s], dir);
  });
  run_parallel(cells.size(), [&](std::size_t j) {
    const std::size_t s = j / per_seed;
    const std::size_t c = j % per_seed;
    ArgsConfig cfg = spec.args;
    cfg.seed = spec.seeds[s];
    const ArgsProblem problem{&inputs[s]->graph, &inputs[s]->data.split, &inputs[s]->pseudo};
    cells[j] = run_ablation(problem, cfg, {grid[c]}, spec.checkpoints);
    for (auto& cell : cells[j]) cell.configuration = static_cast<int>(c) + 1;
  });

  for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
    CsvTable t;
    t.header = {"configuration", "alpha", "beta", "gamma", "eta", "zeta", "round",
                "graph_sparsity", "model_sparsity", "val_acc", "test_acc", "test_acc_final", "reached"};
    for (std::size_t c = 0; c < per_seed; ++c) {
      for (const AblationCell& cell : cells[s * per_seed + c]) {
        const LossToggles& g = cell.toggles;
        auto on = [](bool b) { return std::string(b ? "1" : "0"); };
        t.rows.push_back({std::to_string(cell.configuration), on(g.alpha), on(g.beta), on(g.gamma),
                          on(g.eta), on(g.zeta), std::to_string(cell.round),
                          fmt(cell.graph_sparsity), fmt(cell.model_sparsity), fmt(cell.val_acc),
                          fmt(cell.test_acc), fmt(cell.final_test_acc), on(cell.reached)});
        log_line("seed " + std::to_string(spec.seeds[s]) + " config " +
                 std::to_string(cell.configuration) + " round " + std::to_string(cell.round) +
                 ": test " + fmt(100.0 * cell.test_acc) + "%");
      }
    }
    write_csv(run_dir(spec, spec.seeds[s]) / "ablation.csv", t);
  }
}

void cli_gen_sbm(const ExperimentSpec& spec) {
  if (!spec.sbm) throw std::invalid_argument("gen-sbm needs --sbm k,n,p_in,p_out,F,sigma");
  const std::uint64_t seed = spec.seeds.front();
  const Graph g = generate_sbm(*spec.sbm, derive_seed(seed, "sbm"));
  fs::create_directories(spec.out);
  save_graph(g, spec.out);
  log_line("wrote " + std::to_string(g.num_nodes) + " nodes, " + std::to_string(g.num_edges()) +
           " edges to " + spec.out.string());
}

void cli_report(const std::vector<fs::path>& run_dirs, const fs::path& out) {
  const std::vector<fs::path> dirs = expand_run_dirs(run_dirs);
  std::vector<CsvTable> tables;
  std::vector<json> summaries;
  for (const auto& d : dirs) {
    tables.push_back(read_csv(d / "metrics.csv"));
    if (fs::exists(d / "run_summary.json")) summaries.push_back(detail::read_json(d / "run_summary.json"));
  }
  const MetricsAggregate agg = aggregate_metrics(tables);
  fs::create_directories(out);

  json rounds = json::array();
  for (std::size_t r = 0; r < agg.rounds.size(); ++r) {
    json mean = json::object();
    json stddev = json::object();
    for (std::size_t c = 0; c < agg.columns.size(); ++c) {
      mean[agg.columns[c]] = agg.stats[r][c].mean;
      stddev[agg.columns[c]] = agg.stats[r][c].stddev;
    }
    rounds.push_back({{"round", agg.rounds[r]},
                      {"runs", agg.stats[r].empty() ? 0 : agg.stats[r][0].count},
                      {"mean", mean},
                      {"stddev", stddev}});
  }
  json run_list = json::array();
  for (const auto& d : dirs) run_list.push_back(d.string());
  json summary = {{"runs", run_list}, {"rounds", rounds}};

  const bool have_summaries = summaries.size() == dirs.size();
  if (have_summaries) {
    std::vector<double> fin;
    for (const auto& s : summaries) fin.push_back(s.at("final_ticket").at("test_acc").get<double>());
    const ColumnStats st = column_stats(fin);
    summary["final_ticket_test_acc"] = {{"mean", st.mean}, {"stddev", st.stddev}, {"runs", st.count}};
  }
  detail::write_json(out / "summary.json", summary);

  auto stat_cells = [&](std::size_t r, const std::string& col, std::vector<std::string>& row) {
    const ColumnStats& s = agg.at(agg.rounds[r], col);
    row.push_back(fmt(s.mean));
    row.push_back(fmt(s.stddev));
  };
  CsvTable acc;
  acc.header = {"round", "runs", "graph_sparsity_mean", "graph_sparsity_std", "model_sparsity_mean",
                "model_sparsity_std", "val_acc_mean", "val_acc_std", "test_acc_mean", "test_acc_std"};
  CsvTable adv;
  adv.header = {"round", "runs", "adv_tt_mean", "adv_tt_std", "adv_trte_mean", "adv_trte_std",
                "adv_tete_mean", "adv_tete_std"};
  if (have_summaries) {
    // Round 0: every adversarial edge active, before any pruning.
    std::vector<std::string> row{"0", std::to_string(summaries.size())};
    for (const char* key : {"train_train", "train_test", "test_test"}) {
      std::vector<double> v;
      for (const auto& s : summaries) v.push_back(s.at("initial_adversarial").at(key).get<double>());
      const ColumnStats st = column_stats(v);
      row.push_back(fmt(st.mean));
      row.push_back(fmt(st.stddev));
    }
    adv.rows.push_back(row);
  }
  for (std::size_t r = 0; r < agg.rounds.size(); ++r) {
    const std::string round = std::to_string(agg.rounds[r]);
    const std::string runs = std::to_string(agg.stats[r].front().count);
    std::vector<std::string> a{round, runs};
    for (const char* col : {"graph_sparsity", "model_sparsity", "val_acc", "test_acc"}) stat_cells(r, col, a);
    acc.rows.push_back(a);
    std::vector<std::string> b{round, runs};
    for (const char* col : {"adv_tt", "adv_trte", "adv_tete"}) stat_cells(r, col, b);
    adv.rows.push_back(b);
  }
  write_csv(out / "accuracy_vs_sparsity.csv", acc);
  write_csv(out / "adversarial_edges.csv", adv);
}

}  // namespace arglt
