#include "gcid/plant.hpp"

#include <cmath>

#include "gcid/gravity_model.hpp"

namespace gcid {

double DisturbanceCurve::eval(double q) const {
  auto poly = [&](const Vec& c) {
    double acc = 0.0;
    for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = acc * q + c[i];
    return acc;
  };
  switch (kind) {
    case Kind::Polynomial:
      return poly(coeffs);
    case Kind::SinusoidPoly:
      return poly(coeffs) + sin_amp * std::sin(sin_freq * q + sin_phase);
    case Kind::PiecewiseLinear: {
      if (points.empty()) return 0.0;
      if (q <= points.front().first) return points.front().second;
      if (q >= points.back().first) return points.back().second;
      for (size_t i = 1; i < points.size(); ++i) {
        if (q <= points[i].first) {
          const auto& [x0, y0] = points[i - 1];
          const auto& [x1, y1] = points[i];
          return y0 + (y1 - y0) * (q - x0) / (x1 - x0);
        }
      }
      return points.back().second;
    }
  }
  return 0.0;
}

DisturbanceCurve DisturbanceCurve::polynomial(const Vec& coeffs) {
  DisturbanceCurve c;
  c.kind = Kind::Polynomial;
  c.coeffs = coeffs;
  return c;
}

DisturbanceCurve DisturbanceCurve::piecewise(std::vector<std::pair<double, double>> points) {
  DisturbanceCurve c;
  c.kind = Kind::PiecewiseLinear;
  c.points = std::move(points);
  return c;
}

DisturbanceCurve DisturbanceCurve::sinusoid_poly(const Vec& coeffs, double amp, double freq,
                                                 double phase) {
  DisturbanceCurve c;
  c.kind = Kind::SinusoidPoly;
  c.coeffs = coeffs;
  c.sin_amp = amp;
  c.sin_freq = freq;
  c.sin_phase = phase;
  return c;
}

void PlantSpec::validate() const {
  model.validate();
  if (static_cast<int>(masses.links.size()) != model.link_count())
    throw ModelError("plant masses must cover every link");
  for (const auto& lm : masses.links)
    if (lm.mass < 0.0) throw ModelError("plant link masses must be >= 0");
  if (static_cast<int>(curves.size()) != model.n_joints)
    throw ModelError("plant disturbance curves must cover every joint");
  if (noise_sigma < 0.0) throw ModelError("noise sigma must be >= 0");
  if (inertia.size() != model.n_joints || damping.size() != model.n_joints)
    throw ModelError("drift dynamics constants must cover every joint");
  if ((inertia.array() <= 0.0).any()) throw ModelError("drift inertia must be > 0");
  if ((damping.array() < 0.0).any()) throw ModelError("drift damping must be >= 0");
}

Vec PlantSpec::true_disturbance(const Vec& q, const DirectionVec& dirs) const {
  Vec out(model.n_joints);
  for (int i = 0; i < model.n_joints; ++i) {
    out[i] = curves[i][dirs[i] > 0 ? 1 : 0].eval(q[i]);
  }
  return out;
}

Plant::Plant(PlantSpec spec) : spec_(std::move(spec)), rng_(spec_.seed) { spec_.validate(); }

Vec Plant::measure_static(const Vec& q, const DirectionVec& dirs) {
  if (!spec_.model.within_limits(q, 1e-9)) throw ModelError("measurement pose outside joint limits");
  Vec tau = gravity_torque(spec_.model, spec_.masses, q, spec_.g) +
            spec_.true_disturbance(q, dirs);
  if (spec_.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec_.noise_sigma);
    for (Eigen::Index i = 0; i < tau.size(); ++i) tau[i] += noise(rng_);
  }
  return tau;
}

Dataset Plant::collect(const CollectionPlan& plan) {
  Dataset data;
  data.source = "plant-sim";
  data.estimated_joint = plan.estimated_joint;
  data.sweep = plan.describe();
  const int n = spec_.model.n_joints;
  for (const auto& point : plan.schedule) {
    DirectionVec dirs = DirectionVec::Constant(n, static_cast<int>(point.dir));
    for (int rep = 0; rep < plan.samples_per_hold; ++rep) {
      data.samples.push_back(Sample{point.q, dirs, measure_static(point.q, dirs)});
    }
  }
  return data;
}

DriftResult drift_simulate(const PlantSpec& spec, const TorqueController& controller,
                           const Vec& q0, double duration, double dt) {
  if (!(duration > 0.0) || !(dt > 0.0) || dt > duration)
    throw ModelError("drift_simulate needs 0 < dt <= duration");
  spec.validate();
  const int n = spec.model.n_joints;
  Vec q = q0;
  Vec v = Vec::Zero(n);
  const Mat4 pose0 = end_effector_pose(spec.model, q0);

  DriftResult result;
  const int steps = static_cast<int>(std::llround(duration / dt));
  const int decimate = std::max(1, steps / 200);
  for (int s = 0; s < steps; ++s) {
    const Vec dq = v * dt;  // joint difference over the last step, as a controller would see
    const Vec tau_c = controller(q, dq);
    const DirectionVec dirs = directions_from_delta(v);
    const Vec tau_g = gravity_torque(spec.model, spec.masses, q, spec.g);
    const Vec tau_ext = spec.true_disturbance(q, dirs);
    const Vec acc =
        (tau_c - tau_g - tau_ext - spec.damping.cwiseProduct(v)).cwiseQuotient(spec.inertia);
    v += dt * acc;
    q += dt * v;
    if (!q.allFinite() || !v.allFinite())
      throw ModelError("drift simulation diverged at step " + std::to_string(s));
    if (s % decimate == 0) result.trace.push_back(q);
  }

  const Mat4 pose_t = end_effector_pose(spec.model, q);
  result.translational = (pose_t.block<3, 1>(0, 3) - pose0.block<3, 1>(0, 3)).norm();
  const Eigen::Matrix3d rel = pose0.block<3, 3>(0, 0).transpose() * pose_t.block<3, 3>(0, 0);
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  result.rotational = std::acos(c) * 180.0 / M_PI;
  return result;
}

std::vector<Vec> random_poses(const KinematicModel& model, int count, std::uint64_t seed) {
  if (count < 1) throw ModelError("random_poses needs count >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Vec> poses;
  poses.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec q(model.n_joints);
    for (int j = 0; j < model.n_joints; ++j) {
      const auto& lim = model.joint_limits[j];
      if (lim[0] == lim[1]) {
        q[j] = lim[0];
      } else {
        std::uniform_real_distribution<double> u(lim[0], lim[1]);
        q[j] = u(rng);
      }
    }
    poses.push_back(std::move(q));
  }
  return poses;
}

}  // namespace gcid
