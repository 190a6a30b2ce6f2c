#include "gcid/gravity_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gcid {

double rank_tolerance(double smax, Eigen::Index rows, Eigen::Index cols) {
  return smax * 1e-8 * static_cast<double>(std::max(rows, cols));
}

double potential_energy(const KinematicModel& model, const LinkMassParams& masses, const Vec& q,
                        double g) {
  double p = 0.0;
  int link = 0;
  for (int c = 0; c < static_cast<int>(model.chains.size()); ++c) {
    const auto prefixes = chain_prefixes(model, c, q);
    for (size_t r = 0; r < model.chains[c].size(); ++r, ++link) {
      const auto& lm = masses.links.at(link);
      Eigen::Vector4d r_h;
      r_h << lm.com, 1.0;
      const Vec3 pos = (prefixes[r] * r_h).head<3>();
      // height measured against the gravity direction
      p += lm.mass * g * (-model.gravity_direction.dot(pos));
    }
  }
  return p;
}

Vec full_params_from_masses(const LinkMassParams& masses) {
  Vec beta(4 * masses.links.size());
  for (size_t i = 0; i < masses.links.size(); ++i) {
    beta.segment<3>(4 * i) = masses.links[i].mass * masses.links[i].com;
    beta[4 * i + 3] = masses.links[i].mass;
  }
  return beta;
}

Mat gravity_regressor_full(const KinematicModel& model, const Vec& q, double g) {
  const int n = model.n_joints;
  const int n_links = model.link_count();
  Mat y = Mat::Zero(n, 4 * n_links);
  const Vec3 ghat = model.gravity_direction;

  int link_base = 0;
  for (int c = 0; c < static_cast<int>(model.chains.size()); ++c) {
    const auto& rows = model.chains[c];
    const auto prefixes = chain_prefixes(model, c, q);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      const int link = link_base + r;
      for (int e = 0; e < 4; ++e) {
        const Eigen::Vector4d v = prefixes[r].col(e);
        // d(P_r v)/d(theta_k) = z_{k-1} x (v_xyz - v_w * o_{k-1})
        for (int k = 0; k <= r; ++k) {
          if (rows[k].coupling.terms.empty()) continue;
          Vec3 z = Vec3::UnitZ();
          Vec3 o = Vec3::Zero();
          if (k > 0) {
            z = prefixes[k - 1].block<3, 1>(0, 2);
            o = prefixes[k - 1].block<3, 1>(0, 3);
          }
          const Vec3 w = z.cross(v.head<3>() - v[3] * o);
          const double val = g * (-ghat.dot(w));
          for (const auto& [j, coeff] : rows[k].coupling.terms) {
            y(j, 4 * link + e) += coeff * val;
          }
        }
      }
    }
    link_base += static_cast<int>(rows.size());
  }
  return y;
}

Vec gravity_torque(const KinematicModel& model, const LinkMassParams& masses, const Vec& q,
                   double g) {
  return gravity_regressor_full(model, q, g) * full_params_from_masses(masses);
}

namespace {

Mat stack_full_regressor(const KinematicModel& model, const std::vector<Vec>& probes, double g) {
  const int n = model.n_joints;
  const int cols = 4 * model.link_count();
  Mat w(n * static_cast<Eigen::Index>(probes.size()), cols);
  for (size_t i = 0; i < probes.size(); ++i) {
    w.middleRows(n * i, n) = gravity_regressor_full(model, probes[i], g);
  }
  return w;
}

Eigen::Index numerical_rank(const Mat& w) {
  Eigen::BDCSVD<Mat> svd(w);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double tol = rank_tolerance(s[0], w.rows(), w.cols());
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;
  return rank;
}

}  // namespace

GravityRegressorSpec reduce_to_base(const KinematicModel& model,
                                    const std::vector<Vec>& probe_configs, double g) {
  const int full = 4 * model.link_count();
  if (static_cast<int>(probe_configs.size()) < 2 * full) {
    throw ModelError("reduce_to_base needs at least " + std::to_string(2 * full) +
                     " probe configurations");
  }
  const Mat w = stack_full_regressor(model, probe_configs, g);
  const Eigen::Index rank = numerical_rank(w);

  // Reference rank from a 10x larger internal probe set; a probe set that
  // loses rank against it is degenerate, not a property of the model.
  {
    std::mt19937_64 rng(0x6b8b4567u);
    std::vector<Vec> ref(probe_configs.size() * 10);
    for (auto& q : ref) {
      q.resize(model.n_joints);
      for (int j = 0; j < model.n_joints; ++j) {
        std::uniform_real_distribution<double> u(model.joint_limits[j][0],
                                                 model.joint_limits[j][1]);
        q[j] = u(rng);
      }
    }
    const Eigen::Index ref_rank = numerical_rank(stack_full_regressor(model, ref, g));
    if (rank < ref_rank) {
      throw IdentifiabilityError(
          "ill-conditioned probe set: rank " + std::to_string(rank) + " < reference rank " +
          std::to_string(ref_rank) + "; sample probes across the whole workspace");
    }
  }

  Eigen::ColPivHouseholderQR<Mat> qr(w);
  const auto perm = qr.colsPermutation().indices();
  std::vector<int> base(perm.data(), perm.data() + rank);
  std::vector<int> dep(perm.data() + rank, perm.data() + perm.size());
  std::sort(base.begin(), base.end());
  std::sort(dep.begin(), dep.end());

  Mat w_base(w.rows(), base.size()), w_dep(w.rows(), dep.size());
  for (size_t i = 0; i < base.size(); ++i) w_base.col(i) = w.col(base[i]);
  for (size_t i = 0; i < dep.size(); ++i) w_dep.col(i) = w.col(dep[i]);

  GravityRegressorSpec spec;
  spec.full_param_count = full;
  spec.base_cols = std::move(base);
  spec.dep_cols = std::move(dep);
  spec.combination = w_base.colPivHouseholderQr().solve(w_dep);
  spec.g = g;
  return spec;
}

Vec reduce_params(const GravityRegressorSpec& spec, const Vec& beta_full) {
  if (beta_full.size() != spec.full_param_count)
    throw ModelError("full parameter vector has wrong length");
  Vec out(spec.base_count());
  for (int i = 0; i < spec.base_count(); ++i) out[i] = beta_full[spec.base_cols[i]];
  if (!spec.dep_cols.empty()) {
    Vec dep(spec.dep_cols.size());
    for (size_t i = 0; i < spec.dep_cols.size(); ++i) dep[i] = beta_full[spec.dep_cols[i]];
    out += spec.combination * dep;
  }
  return out;
}

Mat gravity_regressor_base(const KinematicModel& model, const GravityRegressorSpec& spec,
                           const Vec& q) {
  const Mat full = gravity_regressor_full(model, q, spec.g);
  Mat out(full.rows(), spec.base_count());
  for (int i = 0; i < spec.base_count(); ++i) out.col(i) = full.col(spec.base_cols[i]);
  return out;
}

}  // namespace gcid
