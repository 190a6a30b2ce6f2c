// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each check is self-contained and uses fixed seeds throughout.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "gcid/builtin.hpp"
#include "gcid/controller.hpp"
#include "gcid/io.hpp"
#include "gcid/metrics.hpp"

using namespace gcid;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << idx << "] " << name;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct Context {
  KinematicModel model = default_kinematic_model();
  GravityRegressorSpec spec;
  PlanConfig cfg;
  EstimationOptions opts;

  Context() : cfg(PlanConfig::defaults(model)) {
    spec = reduce_to_base(model, random_poses(model, 500, 99));
    opts.orders = default_orders(model.n_joints);
  }

  std::vector<Dataset> collect_all(const PlantSpec& pspec, std::pair<int, int> counts) const {
    std::vector<Dataset> out;
    for (int j = 0; j < model.n_joints; ++j) {
      Plant plant(pspec);
      out.push_back(plant.collect(two_joint_plan(model, cfg, j, counts)));
    }
    return out;
  }

  ParamSet identify(const PlantSpec& pspec, std::pair<int, int> counts = {25, 24}) const {
    return mlse(collect_all(pspec, counts), model, spec, opts);
  }
};

// ---------------------------------------------------------------------------

void criterion_1_gravity_oracle(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const LinkMassParams masses = default_masses(ctx.model);
  const double h = 1e-6;
  double worst = 0.0;
  for (const Vec& q : random_poses(ctx.model, 100, 41)) {
    const Vec tau = gravity_torque(ctx.model, masses, q);
    for (int i = 0; i < ctx.model.n_joints; ++i) {
      Vec qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const double fd =
          (potential_energy(ctx.model, masses, qp) - potential_energy(ctx.model, masses, qm)) /
          (2 * h);
      worst = std::max(worst, std::abs(tau[i] - fd));
    }
  }
  const double elapsed = seconds_since(t0);
  report(1, "gravity torque matches finite-difference potential energy",
         worst < 1e-5 && elapsed < 5.0,
         "max |analytic - fd| = " + fmt(worst) + " N*m, " + fmt(elapsed) + " s");
}

void criterion_2_base_reduction(const Context& ctx) {
  std::mt19937 rng(17);
  std::normal_distribution<double> dist(0.0, 1.0);
  double worst = 0.0;
  const auto poses = random_poses(ctx.model, 100, 42);
  for (const Vec& q : poses) {
    Vec beta_full(ctx.spec.full_param_count);
    for (Eigen::Index i = 0; i < beta_full.size(); ++i) beta_full[i] = dist(rng);
    const Vec via_base =
        gravity_regressor_base(ctx.model, ctx.spec, q) * reduce_params(ctx.spec, beta_full);
    const Vec via_full = gravity_regressor_full(ctx.model, q) * beta_full;
    worst = std::max(worst, (via_base - via_full).cwiseAbs().maxCoeff());
  }
  bool stable = true;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    // Pivot choice may differ between probe sets; the base dimension may not.
    const GravityRegressorSpec s = reduce_to_base(ctx.model, random_poses(ctx.model, 500, seed));
    if (s.base_count() != ctx.spec.base_count()) stable = false;
  }
  report(2, "base reduction reproduces the full model; base set stable over seeds",
         worst < 1e-9 && stable,
         "max error = " + fmt(worst) + ", b = " + std::to_string(ctx.spec.base_count()));
}

void criterion_3_exact_recovery(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();

  // Trajectory accuracy on the direction-asymmetric in-class plant.
  const PlantSpec asym = default_plant(PlantKind::InClassAsymmetric, 0.0, 1);
  const ParamSet p_asym = ctx.identify(asym);
  Plant plant(asym);
  const TorqueEvalReport traj =
      trajectory_test(plant, p_asym, random_poses(ctx.model, 10, 21), 5.0);
  double worst_pct = 0.0;
  for (const auto& js : traj.per_joint) worst_pct = std::max(worst_pct, js.rms_relative_pct);

  // Free-drift under compensation.  The release starts at rest, where the
  // velocity-gated blend suppresses the direction-dependent half; the
  // direction-symmetric in-class plant is the one this controller can hold
  // exactly, so it carries the quantitative drift bound.
  const PlantSpec sym = default_plant(PlantKind::InClassSymmetric, 0.0, 1);
  const ParamSet p_sym = ctx.identify(sym);
  const DriftSummary drift = drift_test(sym, ctx.model, p_sym, GccConfig::defaults(6),
                                        random_poses(ctx.model, 50, 123), 2.0);
  const double elapsed = seconds_since(t0);
  report(3, "noiseless in-class pipeline recovers the plant exactly",
         worst_pct < 1e-6 && drift.mean_translational < 1e-6 &&
             drift.mean_rotational < 1e-4 && elapsed < 120.0,
         "worst joint RMS = " + fmt(worst_pct) + " %, drift " +
             fmt(drift.mean_translational) + " m / " + fmt(drift.mean_rotational) + " deg, " +
             fmt(elapsed) + " s");
}

void criterion_4_noise_floor(const Context& ctx) {
  double lo = 1e9, hi = 0.0;
  bool ok = true;
  for (unsigned sd = 1; sd <= 10; ++sd) {
    const PlantSpec pspec = default_plant(PlantKind::InClassAsymmetric, 0.01, sd);
    const ParamSet params = ctx.identify(pspec);
    // Held-out: fresh noisy measurements at random poses, both directions.
    PlantSpec held = pspec;
    held.seed = sd + 1000;
    Plant probe(held);
    const auto poses = random_poses(ctx.model, 200, 200 + sd);
    Vec sq = Vec::Zero(6);
    int n = 0;
    for (const Vec& q : poses) {
      for (int sign : {1, -1}) {
        const DirectionVec dirs = DirectionVec::Constant(6, sign);
        const Vec err = predict_torque(ctx.model, params, q, dirs) - probe.measure_static(q, dirs);
        sq += err.cwiseAbs2();
        ++n;
      }
    }
    for (int i = 0; i < 6; ++i) {
      const double rms = std::sqrt(sq[i] / n);
      lo = std::min(lo, rms);
      hi = std::max(hi, rms);
      if (rms < 0.005 || rms > 0.02) ok = false;
    }
  }
  report(4, "held-out error sits at the injected noise scale (sigma = 0.01)", ok,
         "per-joint RMS range [" + fmt(lo) + ", " + fmt(hi) + "] over 10 seeds");
}

void criterion_5_two_joint_superiority(const Context& ctx) {
  const MlsePartition partition = build_partition(ctx.model, ctx.spec);
  const PlantSpec noiseless = default_plant(PlantKind::InClassAsymmetric, 0.0, 3);
  const PlantSpec noisy = default_plant(PlantKind::InClassAsymmetric, 0.01, 3);
  Plant truth(noiseless);
  const auto eval_poses = random_poses(ctx.model, 300, 777);

  const std::vector<Dataset> two_sets = ctx.collect_all(noisy, {25, 24});
  const ParamSet two_fit = mlse(two_sets, ctx.model, ctx.spec, ctx.opts);
  const auto heldout_rms = [&](const ParamSet& params, int joint) {
    double sq = 0.0;
    int n = 0;
    for (const Vec& q : eval_poses) {
      for (int sign : {1, -1}) {
        const DirectionVec dirs = DirectionVec::Constant(6, sign);
        const double e =
            predict_torque(ctx.model, params, q, dirs)[joint] - truth.measure_static(q, dirs)[joint];
        sq += e * e;
        ++n;
      }
    }
    return std::sqrt(sq / n);
  };

  bool ok = true;
  std::string detail;
  for (const auto& [joint, aux] : ctx.cfg.aux_map) {
    (void)aux;
    Plant pa(noiseless);
    const Dataset two_clean = pa.collect(two_joint_plan(ctx.model, ctx.cfg, joint, {20, 20}));
    const double cond_two =
        condition_number(joint_step_regressor(two_clean, ctx.model, ctx.spec, partition, joint,
                                              ctx.opts));
    const double rms_two = heldout_rms(two_fit, joint);
    for (AuxSetting setting : {AuxSetting::Lo, AuxSetting::Mid, AuxSetting::Hi}) {
      Plant pb(noiseless);
      const Dataset one_clean =
          pb.collect(one_joint_plan(ctx.model, ctx.cfg, joint, setting, 400));
      const double cond_one = condition_number(
          joint_step_regressor(one_clean, ctx.model, ctx.spec, partition, joint, ctx.opts));
      if (!(cond_two < cond_one)) {
        ok = false;
        detail += " cond j" + std::to_string(joint + 1);
      }
      // Accuracy: refit with this joint's collection replaced by the
      // one-joint sweep (same 1200-sample budget).  A sweep too poor to
      // identify at all counts as a win for the two-joint strategy.
      std::vector<Dataset> sets = two_sets;
      Plant pc(noisy);
      sets[joint] = pc.collect(one_joint_plan(ctx.model, ctx.cfg, joint, setting, 600));
      double rms_one = std::numeric_limits<double>::infinity();
      try {
        rms_one = heldout_rms(mlse(sets, ctx.model, ctx.spec, ctx.opts), joint);
      } catch (const IdentifiabilityError&) {
      }
      if (!(rms_two < rms_one)) {
        ok = false;
        detail += " rms j" + std::to_string(joint + 1) + " " + fmt(rms_two) + ">=" + fmt(rms_one);
      }
    }
  }
  report(5, "two-joint sweeps beat one-joint sweeps in conditioning and held-out error", ok,
         ok ? "all auxiliary-coupled joints, 3 one-joint settings each" : detail);
}

void criterion_6_order_sweep(const Context& ctx) {
  const std::vector<int> ks = {0, 1, 2, 3, 4, 5, 6};
  const auto aggregate = [&](const OrderSweepResult& r, int k) {
    double sum = 0.0;
    int n = 0;
    for (int j = 0; j < ctx.model.n_joints; ++j) {
      const double v = r.lookup(j, k, true);
      if (std::isfinite(v)) {
        sum += v;
        ++n;
      }
    }
    return sum / n;
  };

  const PlantSpec p4 = default_plant(PlantKind::InClassAsymmetric, 0.005, 7);
  const OrderSweepResult r4 =
      order_sweep(ctx.collect_all(p4, {25, 24}), ctx.model, ctx.spec, ks, 0.25, ctx.opts);
  bool train_monotone = true;
  for (int j = 0; j < ctx.model.n_joints; ++j) {
    for (size_t t = 1; t < ks.size(); ++t) {
      const double prev = r4.lookup(j, ks[t - 1], false);
      const double cur = r4.lookup(j, ks[t], false);
      if (std::isfinite(prev) && std::isfinite(cur) && cur > prev + 1e-12)
        train_monotone = false;
    }
  }
  int best_k = ks[0];
  for (int k : ks)
    if (aggregate(r4, k) < aggregate(r4, best_k)) best_k = k;

  const PlantSpec p6 = default_plant(PlantKind::OutOfClassOrder6, 0.005, 9);
  const OrderSweepResult r6 =
      order_sweep(ctx.collect_all(p6, {25, 24}), ctx.model, ctx.spec, ks, 0.25, ctx.opts);
  const bool underfit = aggregate(r6, 4) > aggregate(r6, 6);

  report(6, "polynomial order sweep finds the true order and flags underfitting",
         train_monotone && best_k >= 3 && best_k <= 5 && underfit,
         "test-error argmin k = " + std::to_string(best_k) + ", order-6 plant k4/k6 = " +
             fmt(aggregate(r6, 4)) + "/" + fmt(aggregate(r6, 6)));
}

void criterion_7_method_comparison(const Context& ctx) {
  const PlantSpec pspec = default_plant(PlantKind::InClassAsymmetric, 0.0, 11);
  const std::vector<Dataset> sets = ctx.collect_all(pspec, {25, 24});
  const ParamSet full = mlse(sets, ctx.model, ctx.spec, ctx.opts);
  EstimationOptions baseline_opts;
  baseline_opts.orders.assign(6, 1);
  baseline_opts.direction_symmetric = true;
  const ParamSet baseline = slse(merge_datasets(sets), ctx.model, ctx.spec, baseline_opts);

  const auto waypoints = random_poses(ctx.model, 10, 21);
  Plant pa(pspec), pb(pspec);
  const TorqueEvalReport ra = trajectory_test(pa, full, waypoints, 5.0);
  const TorqueEvalReport rb = trajectory_test(pb, baseline, waypoints, 5.0);
  bool per_joint_ok = true;
  for (int i = 0; i < 6; ++i)
    if (!(ra.per_joint[i].rms_relative_pct < rb.per_joint[i].rms_relative_pct))
      per_joint_ok = false;

  const auto poses = random_poses(ctx.model, 20, 31);
  const GccConfig gcc = GccConfig::defaults(6);
  const DriftSummary da = drift_test(pspec, ctx.model, full, gcc, poses, 2.0);
  const DriftSummary db = drift_test(pspec, ctx.model, baseline, gcc, poses, 2.0);
  const double ratio = db.mean_translational / da.mean_translational;
  report(7, "full direction-split model beats the linear symmetric baseline",
         per_joint_ok && ratio >= 5.0,
         "drift ratio " + fmt(ratio) + "x, per-joint RMS lower on all 6 joints");
}

void criterion_8_mlse_isolation(const Context& ctx) {
  const PlantSpec pspec = default_plant(PlantKind::InClassAsymmetric, 0.01, 5);
  const std::vector<Dataset> clean = ctx.collect_all(pspec, {13, 8});
  std::vector<Dataset> corrupt = clean;
  for (auto& s : corrupt[1].samples) s.tau = 1.37 * s.tau + Vec::Constant(6, 0.3);
  const ParamSet a = mlse(clean, ctx.model, ctx.spec, ctx.opts);
  const ParamSet b = mlse(corrupt, ctx.model, ctx.spec, ctx.opts);

  const MlsePartition partition = build_partition(ctx.model, ctx.spec);
  bool identical = true;
  for (int j = 2; j < 6; ++j) {
    if (a.disturbance.a_plus[j] != b.disturbance.a_plus[j] ||
        a.disturbance.a_minus[j] != b.disturbance.a_minus[j])
      identical = false;
    for (int col : partition.step_cols[j])
      if (a.gravity_base[col] != b.gravity_base[col]) identical = false;
  }
  bool joint2_moved = a.disturbance.a_plus[1] != b.disturbance.a_plus[1];
  report(8, "corrupting the joint-2 dataset leaves joints 3-6 bitwise unchanged",
         identical && joint2_moved, identical ? "distal steps isolated" : "distal params moved");
}

void criterion_9_controller_continuity(const Context& ctx) {
  const PlantSpec pspec = default_plant(PlantKind::InClassAsymmetric, 0.0, 11);
  const ParamSet params = ctx.identify(pspec);
  const GccConfig cfg = GccConfig::defaults(6);
  const Vec q = random_poses(ctx.model, 1, 9)[0];
  bool bounded = true;
  for (double dq0 = -0.02; dq0 <= 0.02; dq0 += 1e-5) {
    const Vec x = xi(cfg, Vec::Constant(6, dq0));
    if (x.cwiseAbs().maxCoeff() > cfg.alpha + 1e-15) bounded = false;
  }
  double max_jump = 0.0;
  for (double boundary : {-cfg.saturation[0], -cfg.dead_band[0], cfg.dead_band[0],
                          cfg.saturation[0]}) {
    const Vec below = compensation_torque(ctx.model, params, cfg, q,
                                          Vec::Constant(6, std::nextafter(boundary, -1.0)));
    const Vec above = compensation_torque(ctx.model, params, cfg, q,
                                          Vec::Constant(6, std::nextafter(boundary, 1.0)));
    max_jump = std::max(max_jump, (below - above).cwiseAbs().maxCoeff());
  }
  report(9, "compensation torque is continuous across blend boundaries",
         bounded && max_jump < 1e-12,
         "max boundary jump = " + fmt(max_jump) + " N*m, |xi| <= alpha");
}

#ifdef GCID_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + GCID_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

bool run_workflow(const fs::path& dir, const fs::path& plant_file) {
  const fs::path data = dir / "data";
  const fs::path out = dir / "out";
  fs::create_directories(data);
  fs::create_directories(out);
  const std::string plant = "\"" + plant_file.string() + "\"";
  if (run_cli("collect --plant " + plant + " --joint all --counts 13x8 --seed 5 --out \"" +
              data.string() + "\"") != 0)
    return false;
  if (run_cli("estimate --data \"" + data.string() + "\" --method mlse --out \"" +
              (dir / "model.txt").string() + "\"") != 0)
    return false;
  if (run_cli("validate --model \"" + (dir / "model.txt").string() + "\" --plant " + plant +
              " --mode trajectory --poses 5 --out \"" + out.string() + "\"") != 0)
    return false;
  if (run_cli("validate --model \"" + (dir / "model.txt").string() + "\" --plant " + plant +
              " --mode drift --poses 3 --duration 1 --out \"" + out.string() + "\"") != 0)
    return false;
  return true;
}

bool dirs_byte_identical(const fs::path& a, const fs::path& b, std::string& mismatch) {
  const auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  size_t count_a = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++count_a;
    const fs::path rel = fs::relative(e.path(), a);
    if (!fs::exists(b / rel) || read(e.path()) != read(b / rel)) {
      mismatch = rel.string();
      return false;
    }
  }
  size_t count_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) ++count_b;
  if (count_a != count_b) {
    mismatch = "file count";
    return false;
  }
  return count_a > 0;
}

void criterion_10_cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "gcid_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path plant_file = root / "plant.json";
  save_plant_spec(default_plant(PlantKind::InClassAsymmetric, 0.01, 2), plant_file);
  std::string mismatch;
  const bool ran = run_workflow(root / "run1", plant_file) && run_workflow(root / "run2", plant_file);
  const bool same = ran && dirs_byte_identical(root / "run1", root / "run2", mismatch);
  report(10, "CLI workflows are byte-identical across reruns", ran && same,
         !ran ? "workflow failed" : (same ? "collect/estimate/validate outputs match" : mismatch));
  fs::remove_all(root);
}
#else
void criterion_10_cli_determinism() {
  report(10, "CLI workflows are byte-identical across reruns", false, "CLI path not configured");
}
#endif

}  // namespace

int main() {
  std::cout << std::unitbuf;
  const Context ctx;
  criterion_1_gravity_oracle(ctx);
  criterion_2_base_reduction(ctx);
  criterion_3_exact_recovery(ctx);
  criterion_4_noise_floor(ctx);
  criterion_5_two_joint_superiority(ctx);
  criterion_6_order_sweep(ctx);
  criterion_7_method_comparison(ctx);
  criterion_8_mlse_isolation(ctx);
  criterion_9_controller_continuity(ctx);
  criterion_10_cli_determinism();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(g_failures) + " FAILED")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
