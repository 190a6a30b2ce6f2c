#include "gcid/controller.hpp"

#include <cmath>

namespace gcid {

GccConfig GccConfig::defaults(int n_joints) {
  GccConfig c;
  c.dead_band = Vec::Constant(n_joints, 1e-3);
  c.saturation = Vec::Constant(n_joints, 8e-3);
  c.alpha = 0.5;
  return c;
}

void GccConfig::validate() const {
  if (dead_band.size() != saturation.size()) throw ModelError("gcc config size mismatch");
  if ((dead_band.array() < 0.0).any()) throw ModelError("dead band must be >= 0");
  if ((saturation.array() <= dead_band.array()).any())
    throw ModelError("saturation must be > dead band");
  if (alpha < 0.0 || alpha > 1.0) throw ModelError("alpha must be in [0, 1]");
}

Vec tau_ec_hat(const ParamSet& params, const Vec& q) {
  const auto& d = params.disturbance;
  Vec out(d.n_joints());
  for (int i = 0; i < d.n_joints(); ++i) {
    const double c = d.centers.empty() ? 0.0 : d.centers[i];
    const Vec phi = poly_basis(q[i] - c, d.orders[i]);
    out[i] = 0.5 * phi.dot(d.a_plus[i] + d.a_minus[i]);
  }
  return out;
}

Vec tau_ed_hat(const ParamSet& params, const Vec& q) {
  const auto& d = params.disturbance;
  Vec out(d.n_joints());
  for (int i = 0; i < d.n_joints(); ++i) {
    const double c = d.centers.empty() ? 0.0 : d.centers[i];
    const Vec phi = poly_basis(q[i] - c, d.orders[i]);
    out[i] = 0.5 * phi.dot(d.a_plus[i] - d.a_minus[i]);
  }
  return out;
}

Vec xi(const GccConfig& config, const Vec& dq) {
  Vec out(dq.size());
  for (Eigen::Index i = 0; i < dq.size(); ++i) {
    const double mag = std::abs(dq[i]);
    const double sign = dq[i] > 0.0 ? 1.0 : (dq[i] < 0.0 ? -1.0 : 0.0);
    const double db = config.dead_band[i], sat = config.saturation[i];
    if (mag <= db) {
      out[i] = 0.0;
    } else if (mag >= sat) {
      out[i] = sign * config.alpha;
    } else {
      out[i] = (mag - db) / (sat - db) * sign * config.alpha;
    }
  }
  return out;
}

Vec compensation_torque(const KinematicModel& model, const ParamSet& params,
                        const GccConfig& config, const Vec& q, const Vec& dq) {
  return gravity_regressor_base(model, params.gspec, q) * params.gravity_base +
         tau_ec_hat(params, q) + xi(config, dq).cwiseProduct(tau_ed_hat(params, q));
}

GccController::GccController(const KinematicModel& model, ParamSet params, GccConfig config)
    : model_(model), params_(std::move(params)), config_(std::move(config)) {
  config_.validate();
  params_.validate();
}

Vec GccController::update(const Vec& q) {
  const Vec dq = has_prev_ ? (q - prev_q_).eval() : Vec::Zero(q.size()).eval();
  prev_q_ = q;
  has_prev_ = true;
  return compensation_torque(model_, params_, config_, q, dq);
}

void GccController::reset() { has_prev_ = false; }

}  // namespace gcid
