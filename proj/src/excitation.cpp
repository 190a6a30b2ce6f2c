#include "gcid/excitation.hpp"

#include <cmath>
#include <sstream>

namespace gcid {

namespace {
constexpr double kDeg = M_PI / 180.0;
}

std::string CollectionPlan::describe() const {
  std::ostringstream os;
  os << "joint " << estimated_joint + 1;
  if (auxiliary_joint) os << " with auxiliary joint " << *auxiliary_joint + 1;
  os << ", " << schedule.size() << " scheduled points";
  return os.str();
}

PlanConfig PlanConfig::defaults(const KinematicModel& model) {
  PlanConfig cfg;
  if (model.n_joints != 6) {
    // No table for other arms: sweep each joint over its own limits, no aux.
    cfg.est_range = model.joint_limits;
    cfg.rest = Vec::Zero(model.n_joints);
    for (int i = 0; i < model.n_joints; ++i)
      cfg.rest[i] = 0.5 * (model.joint_limits[i][0] + model.joint_limits[i][1]);
    return cfg;
  }
  cfg.aux_map = {{5, 4}, {4, 2}, {3, 2}, {2, 1}};  // 6->5, 5->3, 4->3, 3->2 (1-based)
  cfg.est_range = {
      {{-7 * kDeg, 40 * kDeg}},    // joint 1
      {{-14 * kDeg, 40 * kDeg}},   // joint 2
      {{-34 * kDeg, 34 * kDeg}},   // joint 3
      {{-190 * kDeg, 80 * kDeg}},  // joint 4
      {{-85 * kDeg, 175 * kDeg}},  // joint 5
      {{-40 * kDeg, 40 * kDeg}},   // joint 6
  };
  cfg.aux_range = {
      {5, {{-90 * kDeg, 90 * kDeg}}},   // joint 5 as aux of joint 6
      {4, {{-10 * kDeg, 20 * kDeg}}},   // joint 3 as aux of joint 5
      {3, {{-10 * kDeg, 20 * kDeg}}},   // joint 3 as aux of joint 4
      {2, {{-14 * kDeg, 40 * kDeg}}},   // joint 2 as aux of joint 3
  };
  cfg.rest = Vec::Zero(6);
  for (int i = 0; i < 6; ++i)
    cfg.rest[i] = 0.5 * (model.joint_limits[i][0] + model.joint_limits[i][1]);
  return cfg;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(0.5 * (lo + hi));
    return out;
  }
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

void check_plan_inputs(const KinematicModel& model, const PlanConfig& cfg, int joint) {
  if (joint < 0 || joint >= model.n_joints) throw ModelError("estimated joint out of range");
  if (static_cast<int>(cfg.est_range.size()) != model.n_joints)
    throw ModelError("plan config ranges must cover every joint");
  if (cfg.rest.size() != model.n_joints) throw ModelError("plan rest vector has wrong length");
  if (!model.within_limits(cfg.rest, 1e-12)) throw ModelError("rest pose outside joint limits");
}

CollectionPlan grid_plan(const KinematicModel& model, const PlanConfig& cfg, int joint,
                         std::optional<int> aux, const std::vector<double>& est_points,
                         const std::vector<double>& aux_points) {
  CollectionPlan plan;
  plan.estimated_joint = joint;
  plan.auxiliary_joint = aux;
  for (double av : aux_points) {
    for (int pass = 0; pass < 2; ++pass) {
      const Direction dir = pass == 0 ? Direction::Positive : Direction::Negative;
      for (size_t k = 0; k < est_points.size(); ++k) {
        const double ev =
            pass == 0 ? est_points[k] : est_points[est_points.size() - 1 - k];
        Vec q = cfg.rest;
        q[joint] = ev;
        if (aux) q[*aux] = av;
        if (!model.within_limits(q, 1e-12))
          throw ModelError("planned configuration outside joint limits");
        plan.schedule.push_back(PlanPoint{std::move(q), dir});
      }
    }
  }
  return plan;
}

}  // namespace

CollectionPlan two_joint_plan(const KinematicModel& model, const PlanConfig& cfg, int joint,
                              std::pair<int, int> counts) {
  check_plan_inputs(model, cfg, joint);
  const auto aux_it = cfg.aux_map.find(joint);
  const auto& er = cfg.est_range[joint];
  if (aux_it == cfg.aux_map.end()) {
    // joints without auxiliary joints get a plain 1-D sweep
    return grid_plan(model, cfg, joint, std::nullopt,
                     uniform_grid(er[0], er[1], counts.first * counts.second), {0.0});
  }
  const auto& ar = cfg.aux_range.at(joint);
  return grid_plan(model, cfg, joint, aux_it->second, uniform_grid(er[0], er[1], counts.first),
                   uniform_grid(ar[0], ar[1], counts.second));
}

CollectionPlan one_joint_plan(const KinematicModel& model, const PlanConfig& cfg, int joint,
                              AuxSetting aux_setting, int count) {
  check_plan_inputs(model, cfg, joint);
  const auto aux_it = cfg.aux_map.find(joint);
  if (aux_it == cfg.aux_map.end())
    throw ModelError("joint " + std::to_string(joint + 1) + " has no auxiliary joint");
  const auto& er = cfg.est_range[joint];
  const auto& ar = cfg.aux_range.at(joint);
  double av = 0.5 * (ar[0] + ar[1]);
  if (aux_setting == AuxSetting::Lo) av = ar[0];
  if (aux_setting == AuxSetting::Hi) av = ar[1];
  return grid_plan(model, cfg, joint, aux_it->second, uniform_grid(er[0], er[1], count), {av});
}

std::pair<double, double> scaling_estimate(int n_joints, int samples_per_joint) {
  if (n_joints < 1 || samples_per_joint < 1) throw ModelError("scaling_estimate needs n, N >= 1");
  const double n = n_joints, N = samples_per_joint;
  return {std::pow(N, n), n * N * N};
}

}  // namespace gcid
