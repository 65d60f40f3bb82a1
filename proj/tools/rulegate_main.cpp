#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rulegate/errors.hpp"
#include "rulegate/evaluation.hpp"

namespace fs = std::filesystem;
using namespace rulegate;

namespace {

struct common_opts {
  std::string data_path;
  std::string schema_path;
  std::string clf = "linear_svm";
  int k = 5;
  int trees = 100;
  std::vector<int> hidden{16};
  int epochs = 200;
  double tau = 0.6;
  int runs = 10;
  std::uint64_t seed = 42;
  int scale_digits = 0;  // 0 = auto, floor 1
};

classifier_kind make_kind(const common_opts& o) {
  if (o.clf == "knn") return classifier_kind::knn(o.k);
  if (o.clf == "rf") return classifier_kind::random_forest(o.trees);
  if (o.clf == "mlp") return classifier_kind::mlp(o.hidden, o.epochs);
  if (o.clf == "linear_svm") return classifier_kind::linear_svm(o.epochs);
  throw contract_error("unknown classifier '" + o.clf + "'");
}

dataset load_prepared(const common_opts& o) {
  schema_spec spec = schema_spec::load(o.schema_path);
  return preprocess(load_csv(o.data_path, spec));
}

void add_data_flags(CLI::App* cmd, common_opts& o) {
  cmd->add_option("--data", o.data_path, "dataset CSV")->required();
  cmd->add_option("--schema", o.schema_path, "schema sidecar file")
      ->required();
}

void add_model_flags(CLI::App* cmd, common_opts& o) {
  cmd->add_option("--clf", o.clf, "classifier")
      ->check(CLI::IsMember({"knn", "rf", "mlp", "linear_svm"}));
  cmd->add_option("--k", o.k, "knn neighbourhood size");
  cmd->add_option("--trees", o.trees, "forest size");
  cmd->add_option("--hidden", o.hidden, "mlp hidden layer widths");
  cmd->add_option("--epochs", o.epochs, "training epochs");
  cmd->add_option("--tau", o.tau, "confidence gate threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--scale-digits", o.scale_digits,
                  "fixed-point digits for program text (0 = auto)");
}

int cmd_experiment(const common_opts& o, const std::string& out_dir) {
  dataset ds = load_prepared(o);
  experiment_config cfg;
  cfg.dataset_id = fs::path(o.data_path).stem().string();
  cfg.clf = make_kind(o);
  cfg.hc.tau = o.tau;
  cfg.n_runs = o.runs;
  cfg.base_seed = o.seed;
  cfg.scale_digits = o.scale_digits;
  experiment_report report = run_experiments(ds, cfg);

  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json");
    out << report_json(report);
  }
  // explanations for every test instance of every run
  for (const auto& run : report.runs) {
    auto [train, test] = stratified_split(ds, cfg.test_fraction, run.seed);
    auto model = fit(cfg.clf, train, run.seed);
    ruleset rs = learn(train, ds.positive_class(), cfg.lp);
    translation tr = translate(rs, report.scale_digits_used);
    std::ofstream out(fs::path(out_dir) /
                      ("explanations_seed" + std::to_string(run.seed) +
                       ".txt"));
    for (std::size_t i = 0; i < test.size(); ++i) {
      prediction p = hybrid_predict(*model, tr, test.row(i), cfg.hc);
      out << render(explain(tr, test.row(i), p)) << "\n";
    }
    if (report.significant) {
      std::ofstream lp(fs::path(out_dir) /
                       ("rules_seed" + std::to_string(run.seed) + ".lp"));
      lp << run.program_text;
    }
  }
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

int cmd_explain(const common_opts& o, std::size_t index) {
  dataset ds = load_prepared(o);
  if (index >= ds.size())
    throw contract_error("instance index out of range (dataset has " +
                         std::to_string(ds.size()) + " rows)");
  auto [train, test] = stratified_split(ds, 0.2, o.seed);
  auto model = fit(make_kind(o), train, o.seed);
  ruleset rs = learn(train, ds.positive_class());
  int d = o.scale_digits > 0 ? o.scale_digits : ds.scale_digits(1);
  translation tr = translate(rs, d);
  hybrid_config hc;
  hc.tau = o.tau;
  prediction p = hybrid_predict(*model, tr, ds.row(index), hc);
  std::cout << render(explain(tr, ds.row(index), p));
  return 0;
}

int cmd_export_rules(const common_opts& o) {
  dataset ds = load_prepared(o);
  ruleset rs = learn(ds, ds.positive_class());
  int d = o.scale_digits > 0 ? o.scale_digits : ds.scale_digits(1);
  std::cout << print_program(translate(rs, d).program);
  return 0;
}

int cmd_eval_program(const std::string& program_path,
                     const std::string& facts_path) {
  std::ifstream pin(program_path);
  if (!pin) throw error("cannot open " + program_path);
  std::string ptext((std::istreambuf_iterator<char>(pin)),
                    std::istreambuf_iterator<char>());
  std::ifstream fin(facts_path);
  if (!fin) throw error("cannot open " + facts_path);
  std::string ftext((std::istreambuf_iterator<char>(fin)),
                    std::istreambuf_iterator<char>());

  asp_program prog = parse_program(ptext);
  fact_set facts = parse_facts(ftext);
  model m = evaluate(prog, facts);
  std::set<atom> given(facts.facts.begin(), facts.facts.end());
  for (const auto& a : m.atoms)
    if (!given.count(a)) std::cout << print_atom(a) << ".\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rule-gated hybrid classification over tabular data"};
  app.require_subcommand(1);
  app.set_config("--config");

  common_opts opts;
  std::string out_dir = "results";
  std::size_t instance_index = 0;
  std::string program_path, facts_path;

  CLI::App* experiment =
      app.add_subcommand("experiment", "repeated-split evaluation");
  add_data_flags(experiment, opts);
  add_model_flags(experiment, opts);
  experiment->add_option("--runs", opts.runs, "number of splits")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--out", out_dir, "output directory");

  CLI::App* explain_cmd =
      app.add_subcommand("explain", "explain one instance's prediction");
  add_data_flags(explain_cmd, opts);
  add_model_flags(explain_cmd, opts);
  explain_cmd->add_option("--instance", instance_index, "row index")
      ->required();

  CLI::App* export_cmd =
      app.add_subcommand("export-rules", "learn on the full dataset and "
                                         "print the logic program");
  add_data_flags(export_cmd, opts);
  export_cmd->add_option("--scale-digits", opts.scale_digits,
                         "fixed-point digits (0 = auto)");

  CLI::App* eval_cmd = app.add_subcommand(
      "eval-program", "apply a program to a fact file and print derivations");
  eval_cmd->add_option("--program", program_path, ".lp program file")
      ->required();
  eval_cmd->add_option("--facts", facts_path, "fact file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
  }

  try {
    if (app.got_subcommand(experiment)) return cmd_experiment(opts, out_dir);
    if (app.got_subcommand(explain_cmd))
      return cmd_explain(opts, instance_index);
    if (app.got_subcommand(export_cmd)) return cmd_export_rules(opts);
    if (app.got_subcommand(eval_cmd))
      return cmd_eval_program(program_path, facts_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
