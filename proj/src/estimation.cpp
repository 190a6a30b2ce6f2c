#include "gcid/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace gcid {

void Dataset::validate(const KinematicModel* model) const {
  if (samples.empty()) throw ModelError("dataset is empty");
  const Eigen::Index n = samples[0].q.size();
  for (const auto& s : samples) {
    if (s.q.size() != n || s.tau.size() != n || s.dirs.size() != n)
      throw ModelError("dataset samples disagree on joint dimension");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (s.dirs[i] != 1 && s.dirs[i] != -1)
        throw ModelError("direction tags must be +1 or -1");
    }
  }
  if (model != nullptr) {
    if (static_cast<int>(n) != model->n_joints)
      throw ModelError("dataset joint dimension != model n_joints");
    for (const auto& s : samples) {
      if (!model->within_limits(s.q, 1e-9)) throw ModelError("dataset sample outside joint limits");
    }
  }
}

void ParamSet::validate() const {
  disturbance.validate();
  if (gravity_base.size() != gspec.base_count())
    throw ModelError("gravity base vector length != base parameter count");
  if (!gravity_base.allFinite()) throw ModelError("non-finite gravity parameters");
  for (const auto& a : disturbance.a_plus)
    if (!a.allFinite()) throw ModelError("non-finite disturbance parameters");
  for (const auto& a : disturbance.a_minus)
    if (!a.allFinite()) throw ModelError("non-finite disturbance parameters");
}

Vec predict_torque(const KinematicModel& model, const ParamSet& params, const Vec& q,
                   const DirectionVec& dirs) {
  return gravity_regressor_base(model, params.gspec, q) * params.gravity_base +
         tau_ext(params.disturbance, q, dirs);
}

std::vector<int> default_orders(int n_joints) {
  std::vector<int> orders(n_joints, 4);
  if (n_joints >= 2) orders[1] = 1;
  return orders;
}

MlsePartition build_partition(const KinematicModel& model, const GravityRegressorSpec& spec,
                              int probe_count, unsigned seed) {
  probe_count = std::max(probe_count, 200);
  std::mt19937_64 rng(seed);
  Mat max_abs = Mat::Zero(model.n_joints, spec.base_count());
  for (int p = 0; p < probe_count; ++p) {
    Vec q(model.n_joints);
    for (int j = 0; j < model.n_joints; ++j) {
      std::uniform_real_distribution<double> u(model.joint_limits[j][0], model.joint_limits[j][1]);
      q[j] = u(rng);
    }
    max_abs = max_abs.cwiseMax(gravity_regressor_base(model, spec, q).cwiseAbs());
  }

  MlsePartition part;
  part.step_cols.resize(model.n_joints);
  for (int col = 0; col < spec.base_count(); ++col) {
    int last_row = -1;
    for (int row = 0; row < model.n_joints; ++row) {
      if (max_abs(row, col) > 1e-10) last_row = row;
    }
    if (last_row < 0) {
      throw ModelError("base column " + std::to_string(col) + " is identically zero");
    }
    if (last_row == 0) {
      throw ModelError("base column " + std::to_string(col) +
                       " acts only on joint 1; inconsistent with a gravity-parallel first axis");
    }
    part.step_cols[last_row].push_back(col);
  }
  return part;
}

namespace {

std::vector<double> effective_centers(const KinematicModel& model, const EstimationOptions& opts,
                                      size_t n) {
  if (!opts.center) return std::vector<double>(n, 0.0);
  std::vector<double> c(n);
  for (size_t i = 0; i < n; ++i)
    c[i] = 0.5 * (model.joint_limits[i][0] + model.joint_limits[i][1]);
  return c;
}

std::vector<int> resolved_orders(const EstimationOptions& opts, int n_joints) {
  if (opts.orders.empty()) return default_orders(n_joints);
  if (static_cast<int>(opts.orders.size()) != n_joints)
    throw ModelError("orders must give one entry per joint");
  return opts.orders;
}

struct LsSolution {
  Vec beta;
  double cond = 0.0;
  Eigen::Index rank = 0;
};

LsSolution solve_ls(const Mat& w, const Vec& rhs, const std::string& context) {
  Eigen::BDCSVD<Mat> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  // Only reject structural deficiency: an ill-conditioned but nonsingular
  // regressor is still solvable via the SVD.
  const double tol =
      smax * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(w.rows(), w.cols()));
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;
  if (rank < w.cols()) {
    // Name the null-space directions so the caller knows what to excite.
    std::ostringstream msg;
    msg << context << ": regressor is rank-deficient (rank " << rank << " of " << w.cols()
        << "); unidentifiable directions involve columns";
    for (Eigen::Index k = rank; k < s.size(); ++k) {
      const Vec v = svd.matrixV().col(k).cwiseAbs();
      const double peak = v.maxCoeff();
      for (Eigen::Index c = 0; c < v.size(); ++c)
        if (v[c] > 0.3 * peak) msg << ' ' << c;
    }
    msg << "; add excitation or lower the polynomial order";
    throw IdentifiabilityError(msg.str());
  }
  LsSolution out;
  out.beta = svd.solve(rhs);
  out.cond = s[s.size() - 1] > 0.0 ? smax / s[s.size() - 1]
                                   : std::numeric_limits<double>::infinity();
  out.rank = rank;
  return out;
}

JointStats residual_stats(const Vec& predicted, const Vec& measured, double cond) {
  JointStats st;
  st.condition_number = cond;
  st.rows = static_cast<int>(measured.size());
  const Vec err = predicted - measured;
  st.rms_absolute = std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
  st.max_absolute = err.cwiseAbs().maxCoeff();
  const double denom = measured.norm();
  st.rms_relative_pct =
      denom > 0.0 ? err.norm() / denom * 100.0 : std::numeric_limits<double>::quiet_NaN();
  return st;
}

}  // namespace

double condition_number(const Mat& w) {
  if (w.size() == 0) throw ModelError("condition number of an empty matrix");
  Eigen::BDCSVD<Mat> svd(w);
  const auto& s = svd.singularValues();
  const double smax = s[0];
  const double smin = s[s.size() - 1];
  // Structural deficiency (exact collinearity up to rounding) reads as +inf;
  // anything above the floating-point noise floor is a finite, if large, ratio.
  const double tol = smax * std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(w.rows(), w.cols()));
  if (smin <= tol) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

std::pair<Mat, Vec> stack_regressor(const Dataset& data, const KinematicModel& model,
                                    const GravityRegressorSpec& spec,
                                    const EstimationOptions& opts) {
  data.validate();
  const int n = model.n_joints;
  const auto orders = resolved_orders(opts, n);
  const auto centers = effective_centers(model, opts, orders.size());
  const int b = spec.base_count();
  const int dist_cols =
      opts.direction_symmetric ? disturbance_param_count(orders) / 2 : disturbance_param_count(orders);
  const Eigen::Index p = static_cast<Eigen::Index>(data.samples.size());

  Mat w(n * p, b + dist_cols);
  Vec omega(n * p);
  for (Eigen::Index s = 0; s < p; ++s) {
    const auto& sample = data.samples[s];
    w.block(n * s, 0, n, b) = gravity_regressor_base(model, spec, sample.q);
    if (opts.direction_symmetric) {
      w.block(n * s, b, n, dist_cols) = phi_matrix(sample.q, orders, centers);
    } else {
      w.block(n * s, b, n, dist_cols) =
          disturbance_regressor(sample.q, sample.dirs, orders, centers);
    }
    omega.segment(n * s, n) = sample.tau;
  }
  return {std::move(w), std::move(omega)};
}

namespace {

ParamSet params_from_flat(const KinematicModel& model, const GravityRegressorSpec& spec,
                          const std::vector<int>& orders, const std::vector<double>& centers,
                          bool symmetric, const Vec& beta) {
  ParamSet out;
  out.gspec = spec;
  out.gravity_base = beta.head(spec.base_count());
  out.disturbance.orders = orders;
  out.disturbance.centers = centers;
  int half = 0;
  for (int k : orders) half += k + 1;
  int at = spec.base_count();
  for (int i = 0; i < static_cast<int>(orders.size()); ++i) {
    const Vec plus = beta.segment(at, orders[i] + 1);
    out.disturbance.a_plus.push_back(plus);
    if (symmetric) {
      out.disturbance.a_minus.push_back(plus);
    } else {
      out.disturbance.a_minus.push_back(beta.segment(at + half, orders[i] + 1));
    }
    at += orders[i] + 1;
  }
  return out;
}

}  // namespace

ParamSet slse(const Dataset& data, const KinematicModel& model, const GravityRegressorSpec& spec,
              const EstimationOptions& opts) {
  const auto orders = resolved_orders(opts, model.n_joints);
  const auto centers = effective_centers(model, opts, orders.size());
  auto [w, omega] = stack_regressor(data, model, spec, opts);
  const auto sol = solve_ls(w, omega, "slse");

  ParamSet out = params_from_flat(model, spec, orders, centers, opts.direction_symmetric, sol.beta);
  out.provenance.method = opts.direction_symmetric ? "fontanelli-like" : "slse";

  const int n = model.n_joints;
  const Vec predicted = w * sol.beta;
  for (int i = 0; i < n; ++i) {
    const Eigen::Index p = static_cast<Eigen::Index>(data.samples.size());
    Vec pred_i(p), meas_i(p);
    for (Eigen::Index s = 0; s < p; ++s) {
      pred_i[s] = predicted[n * s + i];
      meas_i[s] = omega[n * s + i];
    }
    out.provenance.per_joint.push_back(residual_stats(pred_i, meas_i, sol.cond));
  }
  out.validate();
  return out;
}

Mat joint_step_regressor(const Dataset& data, const KinematicModel& model,
                         const GravityRegressorSpec& spec, const MlsePartition& partition,
                         int joint, const EstimationOptions& opts) {
  data.validate();
  if (joint < 0 || joint >= model.n_joints) throw ModelError("joint index out of range");
  const auto orders = resolved_orders(opts, model.n_joints);
  const auto centers = effective_centers(model, opts, orders.size());
  const auto& new_cols = partition.step_cols[joint];
  const int k = orders[joint];
  const int dist_dim = opts.direction_symmetric ? k + 1 : 2 * (k + 1);
  const Eigen::Index p = static_cast<Eigen::Index>(data.samples.size());
  Mat w(p, static_cast<Eigen::Index>(new_cols.size()) + dist_dim);
  for (Eigen::Index s = 0; s < p; ++s) {
    const auto& sample = data.samples[s];
    const Mat yb = gravity_regressor_base(model, spec, sample.q);
    for (size_t c = 0; c < new_cols.size(); ++c) w(s, c) = yb(joint, new_cols[c]);
    const Vec phi = poly_basis(sample.q[joint] - centers[joint], k);
    if (opts.direction_symmetric) {
      w.block(s, new_cols.size(), 1, k + 1) = phi.transpose();
    } else {
      w.block(s, new_cols.size(), 1, 2 * (k + 1)).setZero();
      const Eigen::Index off = sample.dirs[joint] > 0 ? 0 : k + 1;
      w.block(s, new_cols.size() + off, 1, k + 1) = phi.transpose();
    }
  }
  return w;
}

ParamSet mlse(const std::vector<Dataset>& per_joint_datasets, const KinematicModel& model,
              const GravityRegressorSpec& spec, const EstimationOptions& opts) {
  const int n = model.n_joints;
  if (static_cast<int>(per_joint_datasets.size()) != n)
    throw ModelError("mlse needs one dataset per joint");
  for (int i = 0; i < n; ++i) {
    if (per_joint_datasets[i].samples.empty())
      throw ModelError("missing dataset for joint " + std::to_string(i + 1));
    per_joint_datasets[i].validate();
  }
  const auto orders = resolved_orders(opts, n);
  const auto centers = effective_centers(model, opts, orders.size());
  const MlsePartition partition = build_partition(model, spec);

  ParamSet out;
  out.gspec = spec;
  out.gravity_base = Vec::Zero(spec.base_count());
  out.disturbance = PolyDisturbance::zeros(orders);
  out.disturbance.centers = centers;
  out.provenance.method = "mlse";
  out.provenance.per_joint.resize(n);

  std::vector<bool> estimated(spec.base_count(), false);

  // Distal to proximal: step i touches only joint i's dataset, so estimates
  // for joints > i are committed before this dataset can influence anything.
  for (int i = n - 1; i >= 0; --i) {
    const auto& data = per_joint_datasets[i];
    const auto& new_cols = partition.step_cols[i];
    std::vector<int> prev_cols;
    for (int c = 0; c < spec.base_count(); ++c)
      if (estimated[c]) prev_cols.push_back(c);

    const int dist_dim = opts.direction_symmetric ? orders[i] + 1 : 2 * (orders[i] + 1);
    const Eigen::Index p = static_cast<Eigen::Index>(data.samples.size());
    Mat w(p, static_cast<Eigen::Index>(new_cols.size()) + dist_dim);
    Vec rhs(p);
    for (Eigen::Index s = 0; s < p; ++s) {
      const auto& sample = data.samples[s];
      const Mat yb = gravity_regressor_base(model, spec, sample.q);
      for (size_t c = 0; c < new_cols.size(); ++c) w(s, c) = yb(i, new_cols[c]);
      const Vec phi = poly_basis(sample.q[i] - centers[i], orders[i]);
      if (opts.direction_symmetric) {
        w.block(s, new_cols.size(), 1, orders[i] + 1) = phi.transpose();
      } else {
        const bool pos = sample.dirs[i] > 0;
        w.block(s, new_cols.size(), 1, 2 * (orders[i] + 1)).setZero();
        const Eigen::Index off = pos ? 0 : orders[i] + 1;
        w.block(s, new_cols.size() + off, 1, orders[i] + 1) = phi.transpose();
      }
      double subtract = 0.0;
      for (int c : prev_cols) subtract += yb(i, c) * out.gravity_base[c];
      rhs[s] = sample.tau[i] - subtract;
    }

    const auto sol = solve_ls(w, rhs, "mlse step for joint " + std::to_string(i + 1));

    for (size_t c = 0; c < new_cols.size(); ++c) {
      out.gravity_base[new_cols[c]] = sol.beta[c];
      estimated[new_cols[c]] = true;
    }
    const Vec plus = sol.beta.segment(new_cols.size(), orders[i] + 1);
    out.disturbance.a_plus[i] = plus;
    out.disturbance.a_minus[i] =
        opts.direction_symmetric ? plus : sol.beta.tail(orders[i] + 1).eval();

    // Fit stats on this joint's own rows, against the full prediction.
    Vec meas(p);
    for (Eigen::Index s = 0; s < p; ++s) meas[s] = data.samples[s].tau[i];
    const Vec predicted = (w * sol.beta) + (meas - rhs);
    out.provenance.per_joint[i] = residual_stats(predicted, meas, sol.cond);
  }
  out.validate();
  return out;
}

Dataset merge_datasets(const std::vector<Dataset>& datasets) {
  Dataset out;
  out.source = "merged";
  for (const auto& d : datasets) {
    out.samples.insert(out.samples.end(), d.samples.begin(), d.samples.end());
    if (!d.sweep.empty()) out.sweep += (out.sweep.empty() ? "" : "; ") + d.sweep;
  }
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ModelError("test fraction must be in (0, 1)");
  Dataset train, test;
  train.source = data.source + " [train]";
  test.source = data.source + " [test]";
  train.estimated_joint = test.estimated_joint = data.estimated_joint;
  for (size_t s = 0; s < data.samples.size(); ++s) {
    const bool to_test = std::floor((s + 1) * test_fraction) > std::floor(s * test_fraction);
    (to_test ? test : train).samples.push_back(data.samples[s]);
  }
  if (train.samples.empty() || test.samples.empty())
    throw ModelError("insufficient samples for the requested split");
  return {std::move(train), std::move(test)};
}

double OrderSweepResult::lookup(int joint, int order, bool test) const {
  for (const auto& e : table) {
    if (e.joint == joint && e.order == order) return test ? e.test_rms : e.train_rms;
  }
  throw ModelError("order sweep entry not found");
}

OrderSweepResult order_sweep(const std::vector<Dataset>& per_joint_datasets,
                             const KinematicModel& model, const GravityRegressorSpec& spec,
                             const std::vector<int>& k_range, double test_fraction,
                             const EstimationOptions& base_opts) {
  if (k_range.empty()) throw ModelError("order sweep needs a nonempty order range");
  const int n = model.n_joints;
  std::vector<Dataset> train(n), test(n);
  for (int i = 0; i < n; ++i)
    std::tie(train[i], test[i]) = split_train_test(per_joint_datasets[i], test_fraction);

  const auto base_orders = resolved_orders(base_opts, n);

  OrderSweepResult result;
  result.best_order.assign(n, k_range.front());
  for (int joint = 0; joint < n; ++joint) {
    double best = std::numeric_limits<double>::infinity();
    for (int k : k_range) {
      EstimationOptions opts = base_opts;
      opts.orders = base_orders;
      opts.orders[joint] = k;
      ParamSet params;
      try {
        params = mlse(train, model, spec, opts);
      } catch (const IdentifiabilityError&) {
        // An order too high for the available excitation: record the entry as
        // not-a-number so the rest of the sweep is still reported.
        OrderSweepEntry entry;
        entry.joint = joint;
        entry.order = k;
        entry.train_rms = std::numeric_limits<double>::quiet_NaN();
        entry.test_rms = std::numeric_limits<double>::quiet_NaN();
        result.table.push_back(entry);
        continue;
      }

      auto joint_rms = [&](const Dataset& d) {
        double ss = 0.0;
        for (const auto& s : d.samples) {
          const double pred = predict_torque(model, params, s.q, s.dirs)[joint];
          const double e = pred - s.tau[joint];
          ss += e * e;
        }
        return std::sqrt(ss / static_cast<double>(d.samples.size()));
      };

      OrderSweepEntry entry;
      entry.joint = joint;
      entry.order = k;
      entry.train_rms = joint_rms(train[joint]);
      entry.test_rms = joint_rms(test[joint]);
      result.table.push_back(entry);
      if (entry.test_rms < best) {
        best = entry.test_rms;
        result.best_order[joint] = k;
      }
    }
  }
  return result;
}

}  // namespace gcid
