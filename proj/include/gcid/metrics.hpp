#pragma once

#include "gcid/controller.hpp"
#include "gcid/plant.hpp"

namespace gcid {

struct TorqueEvalReport {
  std::vector<JointStats> per_joint;
  std::string method;
  std::string dataset_id;
};

/// ||predicted - measured|| / ||measured|| * 100.  Throws ModelError on an
/// all-zero measured sequence (the metric is undefined, not zero).
double rms_relative(const Vec& predicted, const Vec& measured);

/// Static holds at each waypoint, measured with both pre-arrival direction
/// tags; predictions are the direction-tagged model torques.
TorqueEvalReport trajectory_test(Plant& plant, const ParamSet& params,
                                 const std::vector<Vec>& waypoints, double hold_seconds = 5.0);

struct DriftSummary {
  double mean_translational = 0.0, std_translational = 0.0;  // m
  double mean_rotational = 0.0, std_rotational = 0.0;        // deg
  std::vector<double> translational, rotational;             // per pose
};

/// Releases the plant under compensation-only control at each pose.
DriftSummary drift_test(const PlantSpec& plant, const KinematicModel& model,
                        const ParamSet& params, const GccConfig& config,
                        const std::vector<Vec>& poses, double duration = 2.0, double dt = 1e-3);

/// Per-joint prediction-error statistics of a parameter set on a dataset.
TorqueEvalReport evaluate_on_dataset(const KinematicModel& model, const ParamSet& params,
                                     const Dataset& data, const std::string& label = {});

}  // namespace gcid
