#pragma once

#include <functional>
#include <random>
#include <vector>

#include "gcid/estimation.hpp"
#include "gcid/excitation.hpp"
#include "gcid/kinematics.hpp"

namespace gcid {

/// One directional ground-truth disturbance curve over joint angle.
struct DisturbanceCurve {
  enum class Kind { Polynomial, PiecewiseLinear, SinusoidPoly };
  Kind kind = Kind::Polynomial;
  Vec coeffs;                       // Polynomial / SinusoidPoly polynomial part
  std::vector<std::pair<double, double>> points;  // PiecewiseLinear knots, ascending q
  double sin_amp = 0.0, sin_freq = 0.0, sin_phase = 0.0;  // SinusoidPoly extra term

  double eval(double q) const;

  static DisturbanceCurve polynomial(const Vec& coeffs);
  static DisturbanceCurve piecewise(std::vector<std::pair<double, double>> points);
  static DisturbanceCurve sinusoid_poly(const Vec& coeffs, double amp, double freq, double phase);
};

struct PlantSpec {
  KinematicModel model;
  LinkMassParams masses;
  std::vector<std::array<DisturbanceCurve, 2>> curves;  // per joint: [negative, positive]
  double noise_sigma = 0.0;  // N·m, i.i.d. Gaussian per joint torque
  Vec inertia;               // J_i > 0, kg·m²
  Vec damping;               // c_i >= 0, N·m·s/rad
  double g = 9.81;
  std::uint64_t seed = 0;

  void validate() const;
  Vec true_disturbance(const Vec& q, const DirectionVec& dirs) const;
};

struct DriftResult {
  double translational = 0.0;  // m
  double rotational = 0.0;     // deg
  std::vector<Vec> trace;      // per-step joint angles (decimated)
};

/// Ground-truth measurement source.  Owns the noise stream: identical spec
/// (including seed) and call sequence give identical measurements.
class Plant {
 public:
  explicit Plant(PlantSpec spec);

  const PlantSpec& spec() const { return spec_; }

  /// tau = gravity + true disturbance + noise; throws ModelError outside limits.
  Vec measure_static(const Vec& q, const DirectionVec& dirs);

  /// Executes a plan: one measurement per schedule point (times samples_per_hold).
  Dataset collect(const CollectionPlan& plan);

 private:
  PlantSpec spec_;
  std::mt19937_64 rng_;
};

using TorqueController = std::function<Vec(const Vec& q, const Vec& dq)>;

/// Integrates J q'' = tau_c - tau_g - tau_ext(sign q') - c q' by
/// semi-implicit Euler from rest at q0; the noise stream is not involved.
DriftResult drift_simulate(const PlantSpec& spec, const TorqueController& controller,
                           const Vec& q0, double duration, double dt);

/// Uniform in-limit joint configurations, deterministic per seed.
std::vector<Vec> random_poses(const KinematicModel& model, int count, std::uint64_t seed);

}  // namespace gcid
