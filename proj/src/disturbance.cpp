#include "gcid/disturbance.hpp"

namespace gcid {

void PolyDisturbance::validate() const {
  const size_t n = orders.size();
  if (a_plus.size() != n || a_minus.size() != n)
    throw ModelError("disturbance coefficient sets must cover every joint");
  if (!centers.empty() && centers.size() != n)
    throw ModelError("centering offsets must cover every joint");
  for (size_t i = 0; i < n; ++i) {
    if (orders[i] < 0) throw ModelError("polynomial order must be >= 0");
    if (a_plus[i].size() != orders[i] + 1 || a_minus[i].size() != orders[i] + 1)
      throw ModelError("joint " + std::to_string(i + 1) +
                       ": coefficient vector length must be order + 1");
  }
}

PolyDisturbance PolyDisturbance::zeros(const std::vector<int>& orders) {
  PolyDisturbance d;
  d.orders = orders;
  for (int k : orders) {
    d.a_plus.push_back(Vec::Zero(k + 1));
    d.a_minus.push_back(Vec::Zero(k + 1));
  }
  d.centers.assign(orders.size(), 0.0);
  return d;
}

Vec poly_basis(double q, int k) {
  if (k < 0) throw ModelError("polynomial order must be >= 0");
  Vec phi(k + 1);
  phi[0] = 1.0;
  for (int i = 1; i <= k; ++i) phi[i] = phi[i - 1] * q;
  return phi;
}

double tau_ext_joint(const PolyDisturbance& d, int joint, double q, Direction dir) {
  const double c = d.centers.empty() ? 0.0 : d.centers[joint];
  const Vec phi = poly_basis(q - c, d.orders[joint]);
  return phi.dot(dir == Direction::Positive ? d.a_plus[joint] : d.a_minus[joint]);
}

Vec tau_ext(const PolyDisturbance& d, const Vec& q, const DirectionVec& dirs) {
  Vec out(d.n_joints());
  for (int i = 0; i < d.n_joints(); ++i) {
    out[i] = tau_ext_joint(d, i, q[i], dirs[i] > 0 ? Direction::Positive : Direction::Negative);
  }
  return out;
}

int disturbance_param_count(const std::vector<int>& orders) {
  int n = 0;
  for (int k : orders) n += k + 1;
  return 2 * n;
}

DirectionVec directions_from_delta(const Vec& dq) {
  DirectionVec dirs(dq.size());
  for (Eigen::Index i = 0; i < dq.size(); ++i)
    dirs[i] = static_cast<int>(direction_from_delta(dq[i]));
  return dirs;
}

Mat activation_matrix(const Vec& dq, const std::vector<int>& orders) {
  int dim = 0;
  for (int k : orders) dim += k + 1;
  Mat u = Mat::Zero(dim, dim);
  int at = 0;
  for (size_t i = 0; i < orders.size(); ++i) {
    const double val = dq[i] > 0.0 ? 1.0 : 0.0;  // u(0) = 0
    for (int j = 0; j <= orders[i]; ++j) u(at + j, at + j) = val;
    at += orders[i] + 1;
  }
  return u;
}

Mat phi_matrix(const Vec& q, const std::vector<int>& orders, const std::vector<double>& centers) {
  const int n = static_cast<int>(orders.size());
  int dim = 0;
  for (int k : orders) dim += k + 1;
  Mat phi = Mat::Zero(n, dim);
  int at = 0;
  for (int i = 0; i < n; ++i) {
    const double c = centers.empty() ? 0.0 : centers[i];
    phi.block(i, at, 1, orders[i] + 1) = poly_basis(q[i] - c, orders[i]).transpose();
    at += orders[i] + 1;
  }
  return phi;
}

Mat disturbance_regressor(const Vec& q, const DirectionVec& dirs, const std::vector<int>& orders,
                          const std::vector<double>& centers) {
  const Mat phi = phi_matrix(q, orders, centers);
  Vec dq(dirs.size());
  for (Eigen::Index i = 0; i < dirs.size(); ++i) dq[i] = static_cast<double>(dirs[i]);
  const Mat u = activation_matrix(dq, orders);
  Mat y(phi.rows(), 2 * phi.cols());
  y.leftCols(phi.cols()) = phi * u;
  y.rightCols(phi.cols()) = phi * (Mat::Identity(u.rows(), u.cols()) - u);
  return y;
}

Vec stack_disturbance_params(const PolyDisturbance& d) {
  int half = 0;
  for (int k : d.orders) half += k + 1;
  Vec beta(2 * half);
  int at = 0;
  for (int i = 0; i < d.n_joints(); ++i) {
    beta.segment(at, d.orders[i] + 1) = d.a_plus[i];
    beta.segment(half + at, d.orders[i] + 1) = d.a_minus[i];
    at += d.orders[i] + 1;
  }
  return beta;
}

}  // namespace gcid
