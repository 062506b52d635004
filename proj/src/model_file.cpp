#include "orthojoint/model_file.hpp"

#include <cstdio>
#include <fstream>

#include "orthojoint/util.hpp"

namespace orthojoint {

using nlohmann::json;

namespace {

Error format_error(const std::string& what) { return Error(ErrorCode::FormatError, "FormatError: " + what); }

// Numbers travel as 17-digit strings so a reload is bit-exact.
json num(double v) { return format_double(v); }

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw format_error("expected a number string");
  double v = 0.0;
  if (!parse_double(j.get<std::string>(), v)) throw format_error("bad number '" + j.get<std::string>() + "'");
  return v;
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Eigen::VectorXd get_vec(const json& j) {
  if (!j.is_array()) throw format_error("expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = get_num(j[i]);
  return v;
}

json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

Eigen::MatrixXd get_mat(const json& j, Eigen::Index cols) {
  if (!j.is_array()) throw format_error("expected a matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Eigen::VectorXd r = get_vec(j[i]);
    if (r.size() != cols) throw format_error("ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw format_error(std::string("missing field '") + key + "'");
  return *it;
}

json kernel_json(const KernelSpec& k) { return {{"kind", to_string(k.kind)}, {"gamma", num(k.gamma)}}; }

KernelSpec kernel_from(const json& j) {
  KernelSpec k;
  k.kind = parse_kernel_kind(field(j, "kind").get<std::string>());
  k.gamma = get_num(field(j, "gamma"));
  return k;
}

json labels_json(const LabelMaps& l) {
  json ages = json::array();
  for (double a : l.class_ages) ages.push_back(num(a));
  return {{"class_ages", ages}, {"gender_names", {l.gender_names[0], l.gender_names[1]}}};
}

LabelMaps labels_from(const json& j) {
  LabelMaps l;
  for (const auto& a : field(j, "class_ages")) l.class_ages.push_back(get_num(a));
  const json& g = field(j, "gender_names");
  if (!g.is_array() || g.size() != 2) throw format_error("gender_names needs two entries");
  l.gender_names = {g[0].get<std::string>(), g[1].get<std::string>()};
  return l;
}

}  // namespace

std::string_view to_string(KernelKind k) { return k == KernelKind::Rbf ? "rbf" : "linear"; }

KernelKind parse_kernel_kind(std::string_view s) {
  if (s == "linear") return KernelKind::Linear;
  if (s == "rbf") return KernelKind::Rbf;
  throw Error(ErrorCode::InvalidConfig, "unknown kernel '" + std::string(s) + "'");
}

std::string trace_digest(const FitReport& r) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= ';';
    h *= 1099511628211ULL;
  };
  for (const auto& rec : r.objective_trace) {
    feed(std::to_string(rec.iteration));
    feed(format_double(rec.svm_objective));
    feed(format_double(rec.ordinal_objective));
    feed(format_double(rec.coupling_value));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json config_to_json(const TrainConfig& cfg) {
  json j = {{"lambda1", num(cfg.lambda1)},
            {"lambda2", num(cfg.lambda2)},
            {"lambda3", num(cfg.lambda3)},
            {"kernel", to_string(cfg.kernel.kind)},
            {"gamma", num(cfg.kernel.gamma)},
            {"kernel_form", cfg.kernel_form},
            {"ordinal", to_string(cfg.ordinal_method)},
            {"max_outer_iters", cfg.max_outer_iters},
            {"outer_tol", num(cfg.outer_tol)},
            {"inner_tol", num(cfg.inner_tol)}};
  j["scatter_ridge"] = cfg.scatter_ridge ? num(*cfg.scatter_ridge) : json(nullptr);
  return j;
}

TrainConfig config_from_json(const json& j, TrainConfig cfg) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "lambda1") cfg.lambda1 = get_num(v);
      else if (key == "lambda2") cfg.lambda2 = get_num(v);
      else if (key == "lambda3") cfg.lambda3 = get_num(v);
      else if (key == "kernel") cfg.kernel.kind = parse_kernel_kind(v.get<std::string>());
      else if (key == "gamma") cfg.kernel.gamma = get_num(v);
      else if (key == "kernel_form") cfg.kernel_form = v.get<bool>();
      else if (key == "ordinal") cfg.ordinal_method = parse_ordinal_method(v.get<std::string>());
      else if (key == "max_outer_iters") cfg.max_outer_iters = v.get<int>();
      else if (key == "outer_tol") cfg.outer_tol = get_num(v);
      else if (key == "inner_tol") cfg.inner_tol = get_num(v);
      else if (key == "scatter_ridge") {
        if (v.is_null()) cfg.scatter_ridge.reset();
        else cfg.scatter_ridge = get_num(v);
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FormatError) throw Error(ErrorCode::InvalidConfig, e.what());
    throw;
  }
  return cfg;
}

TrainConfig load_config(const std::string& path, TrainConfig base) {
  return config_from_json(read_json_file(path), std::move(base));
}

json model_to_json(const ModelFile& m) {
  json j;
  j["format"] = "orthojoint-model";
  j["format_version"] = kModelFormatVersion;
  std::visit(
      [&j](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        j["ordinal"] = to_string(x.method);
        j["b_g"] = num(x.b_g);
        j["thresholds"] = vec(x.thresholds);
        j["scatter_ridge"] = num(x.scatter_ridge);
        j["labels"] = labels_json(x.labels);
        if constexpr (std::is_same_v<T, JointLinearModel>) {
          j["kind"] = "linear";
          j["w_g"] = vec(x.w_g);
          j["w_a"] = vec(x.w_a);
        } else {
          j["kind"] = "kernel";
          j["kernel"] = kernel_json(x.kernel);
          j["dim"] = x.train_features.cols();
          j["train_features"] = mat(x.train_features);
          j["alpha"] = vec(x.alpha);
          j["beta"] = vec(x.beta);
          j["projected_class_means"] = vec(x.projected_class_means);
        }
      },
      m.model);
  j["training"] = {{"config", config_to_json(m.config)},
                   {"seed", m.seed ? json(*m.seed) : json(nullptr)},
                   {"objective_trace_digest", m.trace_digest}};
  return j;
}

ModelFile model_from_json(const json& j) {
  try {
    if (field(j, "format").get<std::string>() != "orthojoint-model") throw format_error("not a model file");
    const int version = field(j, "format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw format_error("unsupported format_version " + std::to_string(version));
    }
    ModelFile m;
    const std::string kind = field(j, "kind").get<std::string>();
    const OrdinalMethod method = parse_ordinal_method(field(j, "ordinal").get<std::string>());
    if (kind == "linear") {
      JointLinearModel x;
      x.method = method;
      x.w_g = get_vec(field(j, "w_g"));
      x.w_a = get_vec(field(j, "w_a"));
      x.b_g = get_num(field(j, "b_g"));
      x.thresholds = get_vec(field(j, "thresholds"));
      x.scatter_ridge = get_num(field(j, "scatter_ridge"));
      x.labels = labels_from(field(j, "labels"));
      if (x.w_g.size() != x.w_a.size()) throw format_error("w_g and w_a lengths differ");
      m.model = std::move(x);
    } else if (kind == "kernel") {
      JointKernelModel x;
      x.method = method;
      x.kernel = kernel_from(field(j, "kernel"));
      x.train_features = get_mat(field(j, "train_features"), field(j, "dim").get<Eigen::Index>());
      x.alpha = get_vec(field(j, "alpha"));
      x.beta = get_vec(field(j, "beta"));
      x.b_g = get_num(field(j, "b_g"));
      x.thresholds = get_vec(field(j, "thresholds"));
      x.scatter_ridge = get_num(field(j, "scatter_ridge"));
      x.projected_class_means = get_vec(field(j, "projected_class_means"));
      x.labels = labels_from(field(j, "labels"));
      if (x.alpha.size() != x.train_features.rows() || x.beta.size() != x.train_features.rows()) {
        throw format_error("coefficient lengths differ from the training set size");
      }
      m.model = std::move(x);
    } else {
      throw format_error("unknown model kind '" + kind + "'");
    }
    const json& t = field(j, "training");
    m.config = config_from_json(field(t, "config"));
    const json& seed = field(t, "seed");
    if (!seed.is_null()) m.seed = seed.get<std::uint64_t>();
    m.trace_digest = field(t, "objective_trace_digest").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw format_error(e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "IoError: cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "IoError: write failed for " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "IoError: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "ParseError(" + path + "): " + e.what());
  }
}

void save_model(const std::string& path, const ModelFile& m) { write_json_file(path, model_to_json(m)); }

ModelFile load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

json report_to_json(const FitReport& r) {
  json trace = json::array();
  for (const auto& rec : r.objective_trace) {
    trace.push_back({{"iteration", rec.iteration},
                     {"svm_objective", num(rec.svm_objective)},
                     {"ordinal_objective", num(rec.ordinal_objective)},
                     {"coupling_value", num(rec.coupling_value)},
                     {"total", num(rec.total())}});
  }
  return {{"objective_trace", trace},
          {"cos_angle", num(r.cos_angle)},
          {"converged", r.converged},
          {"outer_iters_used", r.outer_iters_used},
          {"rejected_steps", r.rejected_steps}};
}

json eval_to_json(const EvalResult& r) {
  json confusion = json::array();
  for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < r.confusion.cols(); ++k) row.push_back(r.confusion(i, k));
    confusion.push_back(row);
  }
  return {{"n", r.n},
          {"gender_accuracy", num(r.gender_accuracy)},
          {"age_mae", num(r.age_mae)},
          {"cos_angle", num(r.cos_angle)},
          {"confusion", confusion}};
}

}  // namespace orthojoint
