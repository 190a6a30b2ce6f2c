#pragma once

#include <optional>
#include <vector>

#include "gcid/types.hpp"

namespace gcid {

/// Affine map from actuated coordinates to one DH row angle:
/// q_eff = offset + sum_j coeff_j * q_j.  An empty term list gives a fixed
/// row at the constant angle `offset` (on top of the row's theta_offset).
struct RowCoupling {
  double offset = 0.0;
  std::vector<std::pair<int, double>> terms;  // (actuated joint index, coefficient)

  static RowCoupling identity(int joint) { return RowCoupling{0.0, {{joint, 1.0}}}; }
  static RowCoupling fixed(double angle = 0.0) { return RowCoupling{angle, {}}; }
};

/// One standard-DH row.  alpha and theta_offset are normalized to (-pi, pi]
/// at construction time via normalize().
struct DhRow {
  double a = 0.0;             // link length (m)
  double alpha = 0.0;         // link twist (rad)
  double d = 0.0;             // link offset (m)
  double theta_offset = 0.0;  // joint angle offset (rad)
  RowCoupling coupling;       // which actuated coordinates drive this row
};

double normalize_angle(double x);  // result in (-pi, pi]

struct KinematicModel {
  int n_joints = 0;
  std::vector<std::vector<DhRow>> chains;           // chain 0 is the primary chain
  std::vector<std::array<double, 2>> joint_limits;  // per actuated joint, rad
  Vec3 gravity_direction{0.0, 0.0, -1.0};           // unit vector, base frame

  int link_count() const;
  /// Flattened (chain, row) pair for link index i in [0, link_count()).
  std::pair<int, int> link_ref(int link) const;
  bool within_limits(const Vec& q, double tol = 0.0) const;
  /// Throws ModelError on inconsistent dimensions, bad limits, non-unit
  /// gravity direction, or coupling terms referencing nonexistent joints.
  void validate() const;
};

/// Mass and COM of every link, flattened in chain order.
struct LinkMass {
  double mass = 0.0;
  Vec3 com = Vec3::Zero();  // in the link's own frame (m)
};

struct LinkMassParams {
  std::vector<LinkMass> links;
};

/// A(q) = Rot_z(theta_offset + q) * Trans_z(d) * Trans_x(a) * Rot_x(alpha)
Mat4 link_transform(const DhRow& row, double q);

/// Effective row coordinates for every row of every chain.
std::vector<std::vector<double>> resolve_coupling(const KinematicModel& model, const Vec& q);

/// Cumulative transforms of one chain: prefixes[r] = A_0 * ... * A_r.
std::vector<Mat4> chain_prefixes(const KinematicModel& model, int chain, const Vec& q);

/// COM of link i (flattened index) in the base frame.
Vec3 com_position(const KinematicModel& model, const LinkMassParams& masses, const Vec& q,
                  int link);

/// Pose of the last frame of the primary chain.
Mat4 end_effector_pose(const KinematicModel& model, const Vec& q);

}  // namespace gcid
