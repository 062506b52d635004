#include "orthojoint/joint.hpp"

#include <cmath>
#include <optional>

#include "orthojoint/empirical_map.hpp"
#include "orthojoint/kdlor.hpp"
#include "orthojoint/kernels.hpp"
#include "orthojoint/ordinal.hpp"
#include "orthojoint/svm.hpp"
#include "orthojoint/svor.hpp"

namespace orthojoint {

namespace {

struct BlockState {
  Eigen::VectorXd w_g;
  double b_g = 0.0;
  Eigen::VectorXd w_a;
  Eigen::VectorXd thresholds;
};

// Evaluates the joint objective on a dataset in its current feature space.
class ObjectiveTracker {
 public:
  ObjectiveTracker(const Dataset& d, const TrainConfig& cfg, const ScatterSummary* s, double ridge)
      : d_(d), cfg_(cfg), scatter_(s), ridge_(ridge) {}

  ObjectiveRecord evaluate(const BlockState& st, int iteration) const {
    ObjectiveRecord r;
    r.iteration = iteration;
    r.svm_objective = 0.5 * st.w_g.squaredNorm() + cfg_.lambda1 * hinge_total(st.w_g, st.b_g, d_);
    if (cfg_.ordinal_method == OrdinalMethod::Kdlor) {
      r.ordinal_objective = st.w_a.dot(scatter_->within * st.w_a) + ridge_ * st.w_a.squaredNorm() -
                            cfg_.lambda2 * kdlor_margin(st.w_a, *scatter_);
    } else {
      r.ordinal_objective = 0.5 * st.w_a.squaredNorm() +
                            cfg_.lambda2 * svor_slack_total(d_.features * st.w_a, st.thresholds,
                                                            d_.classes, d_.num_classes);
    }
    const double inner = st.w_g.dot(st.w_a);
    r.coupling_value = cfg_.lambda3 * inner * inner;
    return r;
  }

 private:
  const Dataset& d_;
  const TrainConfig& cfg_;
  const ScatterSummary* scatter_;
  double ridge_;
};

struct AlternationResult {
  BlockState state;
  FitReport report;
  double ridge = 0.0;
  std::optional<ScatterSummary> scatter;
};

double safe_cos(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) return 0.0;
  return cos_angle(u, v);
}

AlternationResult alternate(const Dataset& d, const TrainConfig& cfg) {
  AlternationResult out;
  const InnerOptions inner{cfg.inner_tol, 0};
  const bool kdlor = cfg.ordinal_method == OrdinalMethod::Kdlor;
  if (kdlor) {
    out.scatter = scatter(d);
    out.ridge = cfg.scatter_ridge ? *cfg.scatter_ridge : default_scatter_ridge(*out.scatter);
  }
  const ObjectiveTracker tracker(d, cfg, out.scatter ? &*out.scatter : nullptr, out.ridge);

  auto gender_step = [&](BlockState& st, const Rank1Metric& coupling) {
    const SvmSolution s = solve_svm_linear(d, cfg.lambda1, coupling, inner);
    st.w_g = s.w;
    st.b_g = s.b;
  };
  auto ordinal_step = [&](BlockState& st, const Rank1Metric& coupling) {
    if (kdlor) {
      const KdlorSolution s = solve_kdlor_linear(*out.scatter, cfg.lambda2, coupling, out.ridge, inner);
      st.w_a = s.w_a;
      st.thresholds = s.thresholds;
    } else {
      const SvorSolution s = solve_svor_linear(d, cfg.lambda2, coupling, inner);
      st.w_a = s.w_a;
      st.thresholds = s.thresholds;
    }
  };

  BlockState st;
  const Rank1Metric uncoupled = Rank1Metric::identity(d.dim());
  gender_step(st, uncoupled);
  ordinal_step(st, uncoupled);
  ObjectiveRecord current = tracker.evaluate(st, 1);
  out.report.objective_trace.push_back(current);
  out.report.outer_iters_used = 1;

  for (int t = 2; t <= cfg.max_outer_iters; ++t) {
    // Gender block with the ordinal direction fixed.
    BlockState candidate = st;
    gender_step(candidate, Rank1Metric::from_vector(st.w_a, cfg.lambda3));
    ObjectiveRecord r = tracker.evaluate(candidate, t);
    if (r.total() <= current.total()) {
      st = candidate;
      current = r;
    } else {
      ++out.report.rejected_steps;
    }
    // Ordinal block with the gender direction fixed.
    candidate = st;
    ordinal_step(candidate, Rank1Metric::from_vector(st.w_g, cfg.lambda3));
    r = tracker.evaluate(candidate, t);
    if (r.total() <= current.total()) {
      st = candidate;
      current = r;
    } else {
      ++out.report.rejected_steps;
    }
    current.iteration = t;
    const double previous = out.report.objective_trace.back().total();
    out.report.objective_trace.push_back(current);
    out.report.outer_iters_used = t;
    if (relative_change(previous, current.total()) < cfg.outer_tol) {
      out.report.converged = true;
      break;
    }
  }
  out.report.cos_angle = safe_cos(st.w_g, st.w_a);
  out.state = std::move(st);
  return out;
}

}  // namespace

double relative_change(double previous, double current) {
  return std::abs(current - previous) / std::max(std::abs(previous), 1e-12);
}

LinearFit train_joint_linear(const Dataset& d, const TrainConfig& cfg) {
  require_valid(d);
  require_valid(cfg);
  AlternationResult r = alternate(d, cfg);
  LinearFit fit;
  fit.model.method = cfg.ordinal_method;
  fit.model.w_g = std::move(r.state.w_g);
  fit.model.b_g = r.state.b_g;
  fit.model.w_a = std::move(r.state.w_a);
  fit.model.thresholds = std::move(r.state.thresholds);
  fit.model.scatter_ridge = r.ridge;
  fit.model.labels = d.labels;
  fit.report = std::move(r.report);
  return fit;
}

KernelFit train_joint_kernel(const Dataset& d, const TrainConfig& cfg) {
  require_valid(d);
  require_valid(cfg);
  const KernelSpec spec = resolve_kernel(cfg.kernel, d.features);
  const EmpiricalFeatureMap map(gram(spec, d.features, d.features));
  const Dataset mapped = d.with_features(map.features());
  AlternationResult r = alternate(mapped, cfg);

  KernelFit fit;
  fit.model.method = cfg.ordinal_method;
  fit.model.kernel = spec;
  fit.model.train_features = d.features;
  fit.model.alpha = map.to_coefficients(r.state.w_g);
  fit.model.b_g = r.state.b_g;
  fit.model.beta = map.to_coefficients(r.state.w_a);
  fit.model.thresholds = std::move(r.state.thresholds);
  fit.model.scatter_ridge = r.ridge;
  if (r.scatter) fit.model.projected_class_means = r.scatter->class_means * r.state.w_a;
  fit.model.labels = d.labels;
  fit.report = std::move(r.report);
  return fit;
}

JointFit train_joint(const Dataset& d, const TrainConfig& cfg) {
  if (cfg.kernel.kind == KernelKind::Linear && !cfg.kernel_form) {
    LinearFit f = train_joint_linear(d, cfg);
    return {std::move(f.model), std::move(f.report)};
  }
  KernelFit f = train_joint_kernel(d, cfg);
  return {std::move(f.model), std::move(f.report)};
}

Eigen::VectorXi predict_genders(const JointModel& m, const Eigen::MatrixXd& X) {
  return std::visit([&](const auto& x) { return predict_binary(x, X); }, m);
}

Eigen::VectorXi predict_classes(const JointModel& m, const Eigen::MatrixXd& X) {
  return std::visit(
      [&](const auto& x) { return classes_from_projection(ordinal_projection(x, X), x.thresholds); },
      m);
}

const LabelMaps& model_labels(const JointModel& m) {
  return std::visit([](const auto& x) -> const LabelMaps& { return x.labels; }, m);
}

int model_num_classes(const JointModel& m) {
  return std::visit([](const auto& x) { return static_cast<int>(x.thresholds.size()) + 1; }, m);
}

}  // namespace orthojoint
