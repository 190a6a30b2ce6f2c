#pragma once

#include <vector>

#include "gcid/kinematics.hpp"

namespace gcid {

/// Numerically reduced (lumped) gravity parametrization.  The full
/// parametrization has 4 entries per link: (m*rx, m*ry, m*rz, m).  The base
/// set keeps `base_cols` of the full columns; the remaining dependent
/// columns fold into them through `combination`:
///   reduce(beta_full) = beta_full[base_cols] + combination * beta_full[dep_cols]
struct GravityRegressorSpec {
  int full_param_count = 0;
  std::vector<int> base_cols;  // ascending
  std::vector<int> dep_cols;   // ascending
  Mat combination;             // base_count x dep_count
  double g = 9.81;

  int base_count() const { return static_cast<int>(base_cols.size()); }
};

/// Rank tolerance for an m x n matrix with largest singular value smax.
double rank_tolerance(double smax, Eigen::Index rows, Eigen::Index cols);

double potential_energy(const KinematicModel& model, const LinkMassParams& masses, const Vec& q,
                        double g = 9.81);

/// Actuator torque holding the arm static against gravity: +dP/dq,
/// closed-form partials through the transform chain.
Vec gravity_torque(const KinematicModel& model, const LinkMassParams& masses, const Vec& q,
                   double g = 9.81);

/// Full regressor: gravity_torque == gravity_regressor_full(model,q,g) * beta
/// for beta = stacked (m*rx, m*ry, m*rz, m) per link.
Mat gravity_regressor_full(const KinematicModel& model, const Vec& q, double g = 9.81);

Vec full_params_from_masses(const LinkMassParams& masses);

/// Rank-revealing reduction over a probe set of configurations.
/// Throws IdentifiabilityError when the probes are degenerate (their rank
/// falls below the rank obtained with a 10x larger internal probe set).
GravityRegressorSpec reduce_to_base(const KinematicModel& model,
                                    const std::vector<Vec>& probe_configs, double g = 9.81);

Vec reduce_params(const GravityRegressorSpec& spec, const Vec& beta_full);

/// Base regressor: the retained columns of the full regressor.
Mat gravity_regressor_base(const KinematicModel& model, const GravityRegressorSpec& spec,
                           const Vec& q);

}  // namespace gcid
