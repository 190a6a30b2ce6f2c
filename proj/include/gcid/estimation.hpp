#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcid/disturbance.hpp"
#include "gcid/gravity_model.hpp"

namespace gcid {

struct Sample {
  Vec q;              // rad
  DirectionVec dirs;  // per joint, -1 / +1
  Vec tau;            // N·m
};

struct Dataset {
  std::vector<Sample> samples;
  std::string source;               // "plant-sim" or file path
  std::optional<int> estimated_joint;  // 0-based, for per-joint collections
  std::string sweep;                // human-readable schedule description

  int n_joints() const { return samples.empty() ? 0 : static_cast<int>(samples[0].q.size()); }
  void validate(const KinematicModel* model = nullptr) const;
};

struct JointStats {
  double condition_number = 0.0;
  double rms_relative_pct = 0.0;
  double rms_absolute = 0.0;
  double max_absolute = 0.0;
  int rows = 0;
};

struct Provenance {
  std::string method;  // "slse", "mlse", "fontanelli-like"
  std::vector<JointStats> per_joint;
};

/// Identified parameters: lumped gravity base vector plus per-joint
/// disturbance coefficients, with the regressor spec needed to evaluate them.
struct ParamSet {
  GravityRegressorSpec gspec;
  Vec gravity_base;           // length gspec.base_count()
  PolyDisturbance disturbance;
  Provenance provenance;

  void validate() const;
};

/// Predicted static torque Y_g(q)*beta_g + tau_ext(q, dirs).
Vec predict_torque(const KinematicModel& model, const ParamSet& params, const Vec& q,
                   const DirectionVec& dirs);

/// Column-index partition for the sequential estimator: step_cols[i] lists
/// base columns whose torque contribution first appears at row i scanning
/// from the distal end (equivalently: row i is the highest row where the
/// column is nonzero).  Disturbance coefficients of joint i always belong
/// to step i and are not listed here.
struct MlsePartition {
  std::vector<std::vector<int>> step_cols;  // per joint, indices into base set
};

MlsePartition build_partition(const KinematicModel& model, const GravityRegressorSpec& spec,
                              int probe_count = 200, unsigned seed = 7u);

struct EstimationOptions {
  std::vector<int> orders;            // per joint; empty -> default_orders(n)
  bool direction_symmetric = false;   // share one coefficient set for both directions
  bool center = false;                // center q at joint mid-range before powering
};

/// Paper-default polynomial orders: 4 everywhere, 1 on joint 2.
std::vector<int> default_orders(int n_joints);

/// Full stacked regressor over all samples: W is (n*p) x m with the gravity
/// base block first, then the disturbance block; omega stacks torques.
std::pair<Mat, Vec> stack_regressor(const Dataset& data, const KinematicModel& model,
                                    const GravityRegressorSpec& spec,
                                    const EstimationOptions& opts);

/// One global least-squares solve over all joints (orthogonal decomposition).
ParamSet slse(const Dataset& data, const KinematicModel& model, const GravityRegressorSpec& spec,
              const EstimationOptions& opts);

/// Sequential distal-to-proximal estimation; per_joint_datasets[i] is the
/// collection for joint i.  Solves each step against that joint's own rows
/// with the previously estimated gravity contribution subtracted.
ParamSet mlse(const std::vector<Dataset>& per_joint_datasets, const KinematicModel& model,
              const GravityRegressorSpec& spec, const EstimationOptions& opts);

/// Largest-to-smallest singular value ratio; +inf when rank-deficient.
double condition_number(const Mat& W);

/// Regressor of joint `joint`'s sequential step over one dataset: the gravity
/// base columns introduced at that step plus the joint's own disturbance
/// block, evaluated on the joint's torque rows.  This is the matrix whose
/// conditioning decides how well that joint's parameters can be estimated
/// from the collection.
Mat joint_step_regressor(const Dataset& data, const KinematicModel& model,
                         const GravityRegressorSpec& spec, const MlsePartition& partition,
                         int joint, const EstimationOptions& opts);

Dataset merge_datasets(const std::vector<Dataset>& datasets);

struct OrderSweepEntry {
  int joint = 0;  // 0-based
  int order = 0;
  double train_rms = 0.0;  // absolute RMS, N·m, joint's own rows
  double test_rms = 0.0;
};

struct OrderSweepResult {
  std::vector<OrderSweepEntry> table;
  std::vector<int> best_order;  // per joint, argmin of test error

  double lookup(int joint, int order, bool test) const;
};

/// For each joint, sweeps that joint's polynomial order over k_range while
/// the other joints keep their defaults, refitting on the training fraction
/// and evaluating RMS absolute error on both fractions.  The train/test
/// split is interleaved and deterministic.
OrderSweepResult order_sweep(const std::vector<Dataset>& per_joint_datasets,
                             const KinematicModel& model, const GravityRegressorSpec& spec,
                             const std::vector<int>& k_range, double test_fraction,
                             const EstimationOptions& base_opts);

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double test_fraction);

}  // namespace gcid
