#include "gcid/kinematics.hpp"

#include <cmath>

namespace gcid {

double normalize_angle(double x) {
  x = std::fmod(x, 2.0 * M_PI);
  if (x <= -M_PI) x += 2.0 * M_PI;
  if (x > M_PI) x -= 2.0 * M_PI;
  return x;
}

int KinematicModel::link_count() const {
  int n = 0;
  for (const auto& c : chains) n += static_cast<int>(c.size());
  return n;
}

std::pair<int, int> KinematicModel::link_ref(int link) const {
  for (int c = 0; c < static_cast<int>(chains.size()); ++c) {
    const int sz = static_cast<int>(chains[c].size());
    if (link < sz) return {c, link};
    link -= sz;
  }
  throw ModelError("link index out of range");
}

bool KinematicModel::within_limits(const Vec& q, double tol) const {
  if (q.size() != n_joints) return false;
  for (int i = 0; i < n_joints; ++i) {
    if (q[i] < joint_limits[i][0] - tol || q[i] > joint_limits[i][1] + tol) return false;
  }
  return true;
}

void KinematicModel::validate() const {
  if (n_joints <= 0) throw ModelError("n_joints must be positive");
  if (static_cast<int>(joint_limits.size()) != n_joints)
    throw ModelError("joint_limits size != n_joints");
  for (int i = 0; i < n_joints; ++i) {
    if (!(joint_limits[i][0] < joint_limits[i][1]))
      throw ModelError("joint " + std::to_string(i + 1) + ": limit lo must be < hi");
  }
  if (std::abs(gravity_direction.norm() - 1.0) > 1e-12)
    throw ModelError("gravity_direction must have unit norm");
  if (chains.empty() || chains[0].empty()) throw ModelError("primary chain is empty");
  for (const auto& chain : chains) {
    for (const auto& row : chain) {
      for (const auto& [j, c] : row.coupling.terms) {
        (void)c;
        if (j < 0 || j >= n_joints)
          throw ModelError("coupling references nonexistent joint " + std::to_string(j + 1));
      }
    }
  }
}

Mat4 link_transform(const DhRow& row, double q) {
  const double th = row.theta_offset + q;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Mat4 t;
  t << ct, -st * ca, st * sa, row.a * ct,
       st, ct * ca, -ct * sa, row.a * st,
       0.0, sa, ca, row.d,
       0.0, 0.0, 0.0, 1.0;
  return t;
}

std::vector<std::vector<double>> resolve_coupling(const KinematicModel& model, const Vec& q) {
  if (q.size() != model.n_joints) throw ModelError("q length != n_joints");
  std::vector<std::vector<double>> out(model.chains.size());
  for (size_t c = 0; c < model.chains.size(); ++c) {
    out[c].reserve(model.chains[c].size());
    for (const auto& row : model.chains[c]) {
      double qe = row.coupling.offset;
      for (const auto& [j, coeff] : row.coupling.terms) {
        if (j < 0 || j >= model.n_joints)
          throw ModelError("coupling references nonexistent joint " + std::to_string(j + 1));
        qe += coeff * q[j];
      }
      out[c].push_back(qe);
    }
  }
  return out;
}

std::vector<Mat4> chain_prefixes(const KinematicModel& model, int chain, const Vec& q) {
  const auto qeff = resolve_coupling(model, q);
  const auto& rows = model.chains.at(chain);
  std::vector<Mat4> prefixes(rows.size());
  Mat4 acc = Mat4::Identity();
  for (size_t r = 0; r < rows.size(); ++r) {
    acc = acc * link_transform(rows[r], qeff[chain][r]);
    prefixes[r] = acc;
  }
  return prefixes;
}

Vec3 com_position(const KinematicModel& model, const LinkMassParams& masses, const Vec& q,
                  int link) {
  if (link < 0 || link >= model.link_count()) throw ModelError("link index out of range");
  if (static_cast<int>(masses.links.size()) != model.link_count())
    throw ModelError("mass parameter count != link count");
  const auto [chain, row] = model.link_ref(link);
  const auto prefixes = chain_prefixes(model, chain, q);
  Eigen::Vector4d r_h;
  r_h << masses.links[link].com, 1.0;
  return (prefixes[row] * r_h).head<3>();
}

Mat4 end_effector_pose(const KinematicModel& model, const Vec& q) {
  const auto prefixes = chain_prefixes(model, 0, q);
  return prefixes.back();
}

}  // namespace gcid
