#include "gcid/builtin.hpp"

#include <cmath>

namespace gcid {

namespace {
constexpr double kDeg = M_PI / 180.0;
}

KinematicModel default_kinematic_model() {
  KinematicModel m;
  m.n_joints = 6;
  m.gravity_direction = Vec3(0.0, 0.0, -1.0);
  m.joint_limits = {
      {{-10 * kDeg, 45 * kDeg}},   // 1: base yaw, axis along gravity
      {{-20 * kDeg, 45 * kDeg}},   // 2: shoulder pitch
      {{-40 * kDeg, 40 * kDeg}},   // 3: elbow (parallelogram-driven)
      {{-195 * kDeg, 85 * kDeg}},  // 4: forearm roll
      {{-95 * kDeg, 180 * kDeg}},  // 5: wrist pitch
      {{-45 * kDeg, 45 * kDeg}},   // 6: wrist yaw
  };

  // Primary chain.  Row 2 realizes the parallelogram: the physical forearm
  // angle is q3 - q2, so the elbow actuator stays at the shoulder.
  std::vector<DhRow> primary;
  primary.push_back(DhRow{0.0, M_PI / 2.0, 0.0, 0.0, RowCoupling::identity(0)});
  primary.push_back(DhRow{0.2794, 0.0, 0.0, 0.0, RowCoupling::identity(1)});
  primary.push_back(DhRow{0.3645, -M_PI / 2.0, 0.0, 0.0, RowCoupling{0.0, {{1, -1.0}, {2, 1.0}}}});
  primary.push_back(DhRow{0.0, M_PI / 2.0, 0.1506, 0.0, RowCoupling::identity(3)});
  primary.push_back(DhRow{0.0, -M_PI / 2.0, 0.0, 0.0, RowCoupling::identity(4)});
  primary.push_back(DhRow{0.0, M_PI / 2.0, 0.0, 0.0, RowCoupling::identity(5)});

  // Counterweight chain closing the parallelogram behind the shoulder.
  std::vector<DhRow> counterweight;
  counterweight.push_back(DhRow{0.0, M_PI / 2.0, 0.0, 0.0, RowCoupling::identity(0)});
  counterweight.push_back(DhRow{0.1, 0.0, 0.0, M_PI, RowCoupling::identity(2)});
  counterweight.push_back(DhRow{0.2794, 0.0, 0.0, 0.0, RowCoupling{0.0, {{1, 1.0}, {2, -1.0}}}});

  m.chains = {std::move(primary), std::move(counterweight)};
  m.validate();
  return m;
}

LinkMassParams default_masses(const KinematicModel& model) {
  LinkMassParams p;
  p.links = {
      {0.90, Vec3(0.020, 0.010, -0.050)},   // yaw housing (no gravity moment)
      {0.70, Vec3(-0.120, 0.015, 0.005)},   // upper arm
      {0.45, Vec3(-0.180, 0.010, 0.002)},   // forearm
      {0.30, Vec3(0.000, 0.010, -0.050)},   // wrist platform
      {0.15, Vec3(0.010, 0.040, 0.005)},    // wrist pitch link
      {0.20, Vec3(0.005, 0.020, 0.030)},    // lumped distal links
      {0.00, Vec3(0.0, 0.0, 0.0)},          // counterweight chain base (massless)
      {0.80, Vec3(0.150, 0.000, 0.000)},    // counterweight
      {0.40, Vec3(-0.150, 0.010, 0.000)},   // coupler link
  };
  if (static_cast<int>(p.links.size()) != model.link_count())
    throw ModelError("default masses do not match the model");
  return p;
}

namespace {

Vec coeffs(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Configuration-dependent parts (mean curves), order 4 except joint 2.
std::vector<Vec> symmetric_part() {
  return {
      coeffs({0.08, -0.10, 0.05, 0.40, -0.25}),
      coeffs({0.05, -0.12}),
      coeffs({-0.06, 0.15, -0.08, 0.35, 0.20}),
      coeffs({0.10, -0.05, 0.02, 0.004, 0.0015}),
      coeffs({-0.08, 0.06, -0.02, 0.008, -0.002}),
      coeffs({0.04, 0.10, -0.06, 0.45, 0.30}),
  };
}

// Direction-dependent halves (tau_ed), low order and modest magnitude.
std::vector<Vec> asymmetric_part() {
  return {
      coeffs({0.020, 0.010, 0.0, 0.0, 0.0}),
      coeffs({0.015, 0.005}),
      coeffs({0.025, 0.000, 0.0, 0.0, 0.0}),
      coeffs({0.030, 0.005, 0.0, 0.0, 0.0}),
      coeffs({0.020, 0.008, 0.0, 0.0, 0.0}),
      coeffs({0.010, 0.000, 0.0, 0.0, 0.0}),
  };
}

// Extra q^5 / q^6 content for the out-of-class plant.
Vec order6_tail(int joint) {
  switch (joint) {
    case 3: return coeffs({0.0, 0.0, 0.0, 0.0, 0.0, 4e-4, 2e-4});
    case 4: return coeffs({0.0, 0.0, 0.0, 0.0, 0.0, 8e-4, -4e-4});
    default: return coeffs({0.0, 0.0, 0.0, 0.0, 0.0, 0.10, 0.08});
  }
}

Vec padded_sum(const Vec& a, const Vec& b, double sb) {
  Vec out = Vec::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) += sb * b;
  return out;
}

}  // namespace

PlantSpec default_plant(PlantKind kind, double noise_sigma, std::uint64_t seed) {
  PlantSpec spec;
  spec.model = default_kinematic_model();
  spec.masses = default_masses(spec.model);
  spec.noise_sigma = noise_sigma;
  spec.seed = seed;
  spec.inertia = Vec::Constant(6, 0.05);
  spec.damping = Vec::Constant(6, 0.1);

  const auto sym = symmetric_part();
  const auto asym = asymmetric_part();
  spec.curves.resize(6);
  for (int i = 0; i < 6; ++i) {
    Vec ec = sym[i];
    Vec ed = asym[i];
    switch (kind) {
      case PlantKind::InClassSymmetric:
        ed.setZero();
        break;
      case PlantKind::InClassAsymmetric:
        break;
      case PlantKind::OutOfClassOrder6:
        ec = padded_sum(ec, order6_tail(i), 1.0);
        ed.conservativeResize(ec.size());
        ed.tail(ec.size() - asym[i].size()).setZero();
        break;
      case PlantKind::PiecewiseSin:
        break;
    }
    if (kind == PlantKind::PiecewiseSin) {
      const auto& lim = spec.model.joint_limits[i];
      if (i % 2 == 0) {
        const double mid = 0.5 * (lim[0] + lim[1]);
        spec.curves[i][0] = DisturbanceCurve::piecewise(
            {{lim[0], -0.12}, {mid, 0.05}, {lim[1], 0.20}});
        spec.curves[i][1] = DisturbanceCurve::piecewise(
            {{lim[0], -0.08}, {mid, 0.09}, {lim[1], 0.24}});
      } else {
        spec.curves[i][0] = DisturbanceCurve::sinusoid_poly(ec, 0.05, 2.0, 0.3);
        spec.curves[i][1] = DisturbanceCurve::sinusoid_poly(ec, 0.05, 2.0, 0.3);
      }
      continue;
    }
    spec.curves[i][1] = DisturbanceCurve::polynomial(padded_sum(ec, ed, +1.0));  // positive
    spec.curves[i][0] = DisturbanceCurve::polynomial(padded_sum(ec, ed, -1.0));  // negative
  }
  spec.validate();
  return spec;
}

}  // namespace gcid
