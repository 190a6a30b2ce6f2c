#include "gcid/metrics.hpp"

#include <cmath>

namespace gcid {

double rms_relative(const Vec& predicted, const Vec& measured) {
  if (predicted.size() != measured.size() || measured.size() == 0)
    throw ModelError("rms_relative needs equal-length nonempty sequences");
  const double denom = measured.norm();
  if (denom == 0.0) throw ModelError("rms_relative undefined for all-zero measured torque");
  return (predicted - measured).norm() / denom * 100.0;
}

namespace {

JointStats stats_from(const Vec& predicted, const Vec& measured) {
  JointStats st;
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

TorqueEvalReport trajectory_test(Plant& plant, const ParamSet& params,
                                 const std::vector<Vec>& waypoints, double hold_seconds) {
  if (waypoints.size() < 2) throw ModelError("trajectory test needs at least 2 waypoints");
  const auto& model = plant.spec().model;
  const int n = model.n_joints;
  // One steady-state sample per second of hold, per arrival direction.
  const int reps = std::max(1, static_cast<int>(std::llround(hold_seconds)));

  std::vector<Vec> predicted(n), measured(n);
  std::vector<std::vector<double>> pred(n), meas(n);
  for (const auto& wp : waypoints) {
    for (int sign : {+1, -1}) {
      const DirectionVec dirs = DirectionVec::Constant(n, sign);
      const Vec model_tau = predict_torque(model, params, wp, dirs);
      for (int rep = 0; rep < reps; ++rep) {
        const Vec tau = plant.measure_static(wp, dirs);
        for (int i = 0; i < n; ++i) {
          pred[i].push_back(model_tau[i]);
          meas[i].push_back(tau[i]);
        }
      }
    }
  }

  TorqueEvalReport report;
  report.method = params.provenance.method;
  report.dataset_id = "trajectory-test";
  for (int i = 0; i < n; ++i) {
    report.per_joint.push_back(
        stats_from(Eigen::Map<Vec>(pred[i].data(), pred[i].size()),
                   Eigen::Map<Vec>(meas[i].data(), meas[i].size())));
  }
  return report;
}

DriftSummary drift_test(const PlantSpec& plant, const KinematicModel& model,
                        const ParamSet& params, const GccConfig& config,
                        const std::vector<Vec>& poses, double duration, double dt) {
  if (poses.empty()) throw ModelError("drift test needs at least one pose");
  config.validate();
  DriftSummary s;
  TorqueController controller = [&](const Vec& q, const Vec& dq) {
    return compensation_torque(model, params, config, q, dq);
  };
  for (size_t i = 0; i < poses.size(); ++i) {
    try {
      const DriftResult r = drift_simulate(plant, controller, poses[i], duration, dt);
      s.translational.push_back(r.translational);
      s.rotational.push_back(r.rotational);
    } catch (const std::exception& e) {
      throw ModelError("drift test failed at pose " + std::to_string(i) + ": " + e.what());
    }
  }
  auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  };
  mean_std(s.translational, s.mean_translational, s.std_translational);
  mean_std(s.rotational, s.mean_rotational, s.std_rotational);
  return s;
}

TorqueEvalReport evaluate_on_dataset(const KinematicModel& model, const ParamSet& params,
                                     const Dataset& data, const std::string& label) {
  data.validate();
  const int n = model.n_joints;
  std::vector<std::vector<double>> pred(n), meas(n);
  for (const auto& s : data.samples) {
    const Vec p = predict_torque(model, params, s.q, s.dirs);
    for (int i = 0; i < n; ++i) {
      pred[i].push_back(p[i]);
      meas[i].push_back(s.tau[i]);
    }
  }
  TorqueEvalReport report;
  report.method = params.provenance.method;
  report.dataset_id = label.empty() ? data.source : label;
  for (int i = 0; i < n; ++i) {
    report.per_joint.push_back(
        stats_from(Eigen::Map<Vec>(pred[i].data(), pred[i].size()),
                   Eigen::Map<Vec>(meas[i].data(), meas[i].size())));
  }
  return report;
}

}  // namespace gcid
