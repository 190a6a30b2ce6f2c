#pragma once

#include "gcid/estimation.hpp"

namespace gcid {

/// Dead band / saturation shaping of the direction-dependent compensation.
struct GccConfig {
  Vec dead_band;   // rad, >= 0
  Vec saturation;  // rad, > dead_band
  double alpha = 0.5;  // in [0, 1]

  static GccConfig defaults(int n_joints);  // 1e-3 / 8e-3 rad, alpha 0.5
  void validate() const;
};

/// Configuration-dependent disturbance estimate: Phi(q) * (a+ + a-) / 2.
Vec tau_ec_hat(const ParamSet& params, const Vec& q);

/// Direction-dependent disturbance estimate: Phi(q) * (a+ - a-) / 2.
Vec tau_ed_hat(const ParamSet& params, const Vec& q);

/// Per-joint compensation ratio: 0 in the dead band, linear ramp to
/// sign(dq)*alpha, saturated beyond; continuous in dq.
Vec xi(const GccConfig& config, const Vec& dq);

/// tau_c = Y_g(q) beta_g + tau_ec_hat(q) + xi(dq) .* tau_ed_hat(q)
Vec compensation_torque(const KinematicModel& model, const ParamSet& params,
                        const GccConfig& config, const Vec& q, const Vec& dq);

/// Convenience wrapper owning the previous-q memory for callers that feed
/// only positions.  Single-owner; the stateless entry point above is the
/// primitive.
class GccController {
 public:
  GccController(const KinematicModel& model, ParamSet params, GccConfig config);

  Vec update(const Vec& q);
  void reset();

 private:
  const KinematicModel& model_;
  ParamSet params_;
  GccConfig config_;
  bool has_prev_ = false;
  Vec prev_q_;
};

}  // namespace gcid
