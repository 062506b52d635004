#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "orthojoint/csv.hpp"
#include "orthojoint/eval.hpp"
#include "orthojoint/joint.hpp"
#include "orthojoint/model_file.hpp"
#include "orthojoint/synthetic.hpp"
#include "orthojoint/util.hpp"

namespace orthojoint::cli {

namespace {

using nlohmann::json;

struct Flags {
  std::string data;
  std::string config;
  std::string model;
  std::string out;
  std::optional<std::string> lambda1, lambda2, lambda3;
  std::optional<std::string> kernel;
  std::optional<double> gamma;
  std::optional<std::string> ordinal;
  std::optional<std::uint64_t> seed;
  std::optional<int> per_class_train;
  int folds = 3;
  // synth geometry
  SyntheticSpec synth = benchmark_spec(0);
};

double parse_number(const std::string& s, const char* flag) {
  double v = 0.0;
  if (!parse_double(s, v)) {
    throw Error(ErrorCode::InvalidConfig, std::string(flag) + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, flag));
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, std::string(flag) + ": empty list");
  return out;
}

// Built-in defaults, then the config file, then flags.
TrainConfig effective_config(const Flags& f) {
  TrainConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config, cfg);
  if (f.lambda1) cfg.lambda1 = parse_number(*f.lambda1, "--lambda1");
  if (f.lambda2) cfg.lambda2 = parse_number(*f.lambda2, "--lambda2");
  if (f.lambda3) cfg.lambda3 = parse_number(*f.lambda3, "--lambda3");
  if (f.kernel) cfg.kernel.kind = parse_kernel_kind(*f.kernel);
  if (f.gamma) cfg.kernel.gamma = *f.gamma;
  if (f.ordinal) cfg.ordinal_method = parse_ordinal_method(*f.ordinal);
  require_valid(cfg);
  return cfg;
}

void require_flag(const std::string& value, const char* name) {
  if (value.empty()) throw Error(ErrorCode::InvalidConfig, std::string("missing required flag ") + name);
}

// The rows a command works on: the whole file, or one side of the split.
Dataset select_rows(const Dataset& d, const Flags& f, bool train_side) {
  if (!f.per_class_train) return d;
  const Split s = stratified_split(d, *f.per_class_train, f.seed.value_or(0));
  return train_side ? s.train : s.test;
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
  }
}

int cmd_train(const Flags& f, std::ostream& out) {
  require_flag(f.data, "--data");
  require_flag(f.model, "--model");
  const TrainConfig cfg = effective_config(f);
  const Dataset d = select_rows(load_csv(f.data), f, /*train_side=*/true);
  const JointFit fit = train_joint(d, cfg);

  ModelFile mf{fit.model, cfg, f.seed, trace_digest(fit.report)};
  save_model(f.model, mf);
  json report = report_to_json(fit.report);
  report["config"] = config_to_json(cfg);
  report["n_train"] = d.size();
  if (f.seed) report["seed"] = *f.seed;
  emit_json(report, f.out, out);
  return 0;
}

int cmd_predict(const Flags& f, std::ostream& out) {
  require_flag(f.data, "--data");
  require_flag(f.model, "--model");
  const ModelFile mf = load_model(f.model);
  const Eigen::MatrixXd X = load_feature_csv(f.data);
  const Eigen::VectorXi g = predict_genders(mf.model, X);
  const Eigen::VectorXi k = predict_classes(mf.model, X);
  const LabelMaps& labels = model_labels(mf.model);

  std::ostringstream csv;
  csv << "row_id,gender_pred,age_pred\n";
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    csv << i << ',' << labels.gender_name(g(i)) << ',' << format_double(labels.age_of(k(i))) << '\n';
  }
  if (f.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(f.out);
    if (!(file << csv.str())) throw Error(ErrorCode::IoError, "IoError: cannot write " + f.out);
  }
  return 0;
}

int cmd_eval(const Flags& f, std::ostream& out) {
  require_flag(f.data, "--data");
  require_flag(f.model, "--model");
  const ModelFile mf = load_model(f.model);
  const Dataset d = select_rows(load_csv(f.data), f, /*train_side=*/false);
  json j = eval_to_json(evaluate(mf.model, d));
  j["config"] = config_to_json(mf.config);
  if (f.seed) j["seed"] = *f.seed;
  emit_json(j, f.out, out);
  return 0;
}

int cmd_gridsearch(const Flags& f, std::ostream& out) {
  require_flag(f.data, "--data");
  Flags scalar = f;
  scalar.lambda1.reset();
  scalar.lambda2.reset();
  scalar.lambda3.reset();
  const TrainConfig base = effective_config(scalar);
  GridSpec grid;
  grid.lambda1 = f.lambda1 ? parse_list(*f.lambda1, "--lambda1") : std::vector<double>{base.lambda1};
  grid.lambda2 = f.lambda2 ? parse_list(*f.lambda2, "--lambda2") : std::vector<double>{base.lambda2};
  if (f.lambda3) grid.lambda3 = parse_list(*f.lambda3, "--lambda3");

  const Dataset d = select_rows(load_csv(f.data), f, /*train_side=*/true);
  const GridResult r = grid_search(d, base, grid, f.folds, f.seed.value_or(0));
  if (f.out.empty()) {
    write_score_table(out, r.table);
  } else {
    std::ofstream file(f.out);
    write_score_table(file, r.table);
    if (!file) throw Error(ErrorCode::IoError, "IoError: cannot write " + f.out);
    json best = {{"best", config_to_json(r.best)},
                 {"mean_mae", format_double(r.best_score.mean_mae)},
                 {"mean_acc", format_double(r.best_score.mean_acc)}};
    out << best.dump() << '\n';
  }
  return 0;
}

int cmd_synth(const Flags& f, std::ostream& out) {
  SyntheticSpec spec = f.synth;
  if (f.seed) spec.seed = *f.seed;
  const Dataset d = generate_synthetic(spec);
  if (f.out.empty()) {
    write_csv(out, d);
  } else {
    save_csv(f.out, d);
  }
  return 0;
}

int cmd_angle(const Flags& f, std::ostream& out) {
  require_flag(f.model, "--model");
  const ModelFile mf = load_model(f.model);
  const double c = model_cos_angle(mf.model);
  const double deg = std::acos(c) * 180.0 / std::numbers::pi;
  out << "cos_angle=" << format_double(c) << " theta_deg=" << format_double(deg) << '\n';
  return 0;
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint gender / ordinal age trainer"};
  app.require_subcommand(1);
  app.set_help_flag();  // help output would not be a single machine-parsable line
  Flags f;

  auto add_common = [&f](CLI::App* c) {
    c->add_option("--data", f.data, "dataset CSV");
    c->add_option("--config", f.config, "config JSON");
    c->add_option("--model", f.model, "model JSON");
    c->add_option("--out", f.out, "output file");
    c->add_option("--lambda1", f.lambda1, "hinge weight (gridsearch: comma list)");
    c->add_option("--lambda2", f.lambda2, "ordinal weight (gridsearch: comma list)");
    c->add_option("--lambda3", f.lambda3, "coupling weight (gridsearch: comma list)");
    c->add_option("--kernel", f.kernel, "linear or rbf");
    c->add_option("--gamma", f.gamma, "rbf bandwidth, 0 = from data");
    c->add_option("--ordinal", f.ordinal, "kdlor or svor");
    c->add_option("--seed", f.seed, "random seed");
    c->add_option("--per-class-train", f.per_class_train, "samples per (class, gender) cell for training");
    c->add_option("--folds", f.folds, "cross-validation folds");
  };
  std::map<std::string, std::function<int(const Flags&, std::ostream&)>> commands = {
      {"train", cmd_train},           {"predict", cmd_predict}, {"eval", cmd_eval},
      {"gridsearch", cmd_gridsearch}, {"synth", cmd_synth},     {"angle", cmd_angle}};
  for (const auto& [name, fn] : commands) {
    CLI::App* c = app.add_subcommand(name);
    add_common(c);
    if (name == "synth") {
      c->add_option("--n-per-cell", f.synth.n_per_cell);
      c->add_option("--classes", f.synth.num_classes);
      c->add_option("--dim", f.synth.dim);
      c->add_option("--angle", f.synth.axis_angle_deg);
      c->add_option("--gap", f.synth.gender_gap);
      c->add_option("--age-step", f.synth.age_step);
      c->add_option("--noise", f.synth.noise_sigma);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << one_line(e.what()) << '\n';
    return 2;
  }
  try {
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) return fn(f, out);
    }
    err << "error: Usage: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: Internal: " << one_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace orthojoint::cli
