#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gcid/kinematics.hpp"
#include "gcid/types.hpp"

namespace gcid {

enum class AuxSetting { Lo, Mid, Hi };

struct PlanPoint {
  Vec q;
  Direction dir;  // sweep direction of the estimated joint, tags the whole sample
};

struct CollectionPlan {
  int estimated_joint = 0;  // 0-based
  std::optional<int> auxiliary_joint;
  std::vector<PlanPoint> schedule;  // visit order; lo->hi positive pass, hi->lo negative pass
  double settle_time = 0.5;         // s, informational for a hardware backend
  int samples_per_hold = 1;

  std::string describe() const;
};

/// Collection ranges and auxiliary-joint assignments.  Defaults reproduce
/// the shipped six-joint description: aux map 6->5, 5->3, 4->3, 3->2 and
/// joints 1-2 without auxiliary joints (1-based numbering in this comment,
/// 0-based in code).
struct PlanConfig {
  std::map<int, int> aux_map;                       // estimated joint -> auxiliary joint
  std::vector<std::array<double, 2>> est_range;     // per joint, rad
  std::map<int, std::array<double, 2>> aux_range;   // per estimated joint, aux sweep range, rad
  Vec rest;                                         // pinned values for non-swept joints

  static PlanConfig defaults(const KinematicModel& model);
};

/// Uniform grid over the estimated and auxiliary joint: at each auxiliary
/// setting the estimated joint sweeps lo->hi (positive tags) then hi->lo
/// (negative tags).  counts = (N_est, N_aux); N_est*N_aux configurations
/// per direction.  Joints without an auxiliary joint get a 1-D grid; asking
/// for one explicitly is an error.
CollectionPlan two_joint_plan(const KinematicModel& model, const PlanConfig& cfg, int joint,
                              std::pair<int, int> counts);

/// Baseline: only the estimated joint moves, the auxiliary joint pinned at
/// the lo / mid / hi point of its range.
CollectionPlan one_joint_plan(const KinematicModel& model, const PlanConfig& cfg, int joint,
                              AuxSetting aux_setting, int count);

/// (N^n, n*N^2): full-grid vs two-joint sample-count scaling, for reporting.
std::pair<double, double> scaling_estimate(int n_joints, int samples_per_joint);

}  // namespace gcid
