#pragma once

#include <vector>

#include "gcid/types.hpp"

namespace gcid {

/// Per-joint direction-dependent polynomial disturbance model.
/// tau_ext_i(q) = phi(q_i - center_i)^T a_plus[i]   (positive direction)
///             = phi(q_i - center_i)^T a_minus[i]   (negative direction)
struct PolyDisturbance {
  std::vector<int> orders;        // k_i >= 0 per joint
  std::vector<Vec> a_plus;        // length k_i + 1 each
  std::vector<Vec> a_minus;       // length k_i + 1 each
  std::vector<double> centers;    // polynomial centering offsets, default 0

  int n_joints() const { return static_cast<int>(orders.size()); }
  void validate() const;  // throws ModelError on length mismatches

  static PolyDisturbance zeros(const std::vector<int>& orders);
};

/// phi(q, k) = [1, q, q^2, ..., q^k]
Vec poly_basis(double q, int k);

double tau_ext_joint(const PolyDisturbance& d, int joint, double q, Direction dir);

Vec tau_ext(const PolyDisturbance& d, const Vec& q, const DirectionVec& dirs);

int disturbance_param_count(const std::vector<int>& orders);  // 2 * sum(k_i + 1)

/// Diagonal 0/1 activation matrix of size sum(k_i+1): block of k_i+1 copies
/// of u(dq_i) per joint, u(x) = 1 for x > 0 and 0 otherwise.
Mat activation_matrix(const Vec& dq, const std::vector<int>& orders);

DirectionVec directions_from_delta(const Vec& dq);

/// Block-diagonal polynomial regressor, one phi_i^T block row per joint.
Mat phi_matrix(const Vec& q, const std::vector<int>& orders,
               const std::vector<double>& centers = {});

/// [Phi*U  Phi*(1-U)] so that the product with the stacked (a_plus, a_minus)
/// coefficient vector reproduces tau_ext per joint.
Mat disturbance_regressor(const Vec& q, const DirectionVec& dirs, const std::vector<int>& orders,
                          const std::vector<double>& centers = {});

/// Stacks (a_1+ ... a_n+, a_1- ... a_n-) to pair with disturbance_regressor.
Vec stack_disturbance_params(const PolyDisturbance& d);

}  // namespace gcid
