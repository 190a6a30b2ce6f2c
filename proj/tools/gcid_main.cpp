// Command-line front end: collect -> estimate -> validate workflows over files.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "gcid/builtin.hpp"
#include "gcid/io.hpp"

namespace fs = std::filesystem;
using namespace gcid;

namespace {

// Exit codes: 0 ok, 2 usage, 3 validation, 4 identifiability, 5 I/O.
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIdentifiability = 4;
constexpr int kExitIo = 5;

std::vector<int> parse_orders(const std::string& s, int n) {
  if (s.empty()) return default_orders(n);
  std::vector<int> orders;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) orders.push_back(std::stoi(tok));
  if (static_cast<int>(orders.size()) != n)
    throw ModelError("expected " + std::to_string(n) + " comma-separated orders");
  return orders;
}

GravityRegressorSpec build_spec(const KinematicModel& model, std::uint64_t seed) {
  const auto probes = random_poses(model, 2 * 4 * model.link_count() + 200, seed ^ 0x5eedULL);
  return reduce_to_base(model, probes);
}

int cmd_collect(const std::string& plant_path, const std::string& joint_arg, int n_est, int n_aux,
                std::uint64_t seed, const std::string& out_dir) {
  PlantSpec spec = load_plant_spec(plant_path);
  spec.seed = seed;
  const auto cfg = PlanConfig::defaults(spec.model);
  std::vector<int> joints;
  if (joint_arg == "all") {
    for (int i = 0; i < spec.model.n_joints; ++i) joints.push_back(i);
  } else {
    joints.push_back(std::stoi(joint_arg) - 1);
  }
  fs::create_directories(out_dir);
  const std::string hash = kinematic_model_hash(spec.model);
  for (int j : joints) {
    Plant plant(spec);  // fresh noise stream per dataset, deterministic per seed
    const auto plan = two_joint_plan(spec.model, cfg, j, {n_est, n_aux});
    Dataset data = plant.collect(plan);
    DatasetFileMeta meta;
    meta.model_hash = hash;
    meta.orders_hint = default_orders(spec.model.n_joints);
    meta.plant_seed = seed;
    const fs::path out = fs::path(out_dir) / ("joint" + std::to_string(j + 1) + ".csv");
    save_dataset(data, meta, out);
    std::cout << "wrote " << out.string() << " (" << data.samples.size() << " samples)\n";
  }
  return 0;
}

int cmd_estimate(const std::string& data_dir, const std::string& method,
                 const std::string& orders_arg, const std::string& out_path) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(data_dir)) {
    if (e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .csv datasets in " + data_dir);

  std::vector<Dataset> datasets;
  std::optional<std::uint64_t> seed;
  for (const auto& f : files) {
    DatasetFileMeta meta;
    datasets.push_back(load_dataset(f, &meta));
    if (meta.plant_seed) seed = meta.plant_seed;
  }
  const int n = datasets[0].n_joints();
  const KinematicModel model = default_kinematic_model();
  if (model.n_joints != n) throw ModelError("datasets do not match the kinematic model");

  EstimationOptions opts;
  opts.orders = parse_orders(orders_arg, n);
  if (method == "fontanelli-like") {
    opts.direction_symmetric = true;
    opts.orders.assign(n, 1);
  }

  const GravityRegressorSpec spec = build_spec(model, seed.value_or(1));

  ParamSet params;
  if (method == "mlse") {
    std::vector<Dataset> per_joint(n);
    for (auto& d : datasets) {
      if (!d.estimated_joint) throw ModelError("mlse needs per-joint datasets (estimated_joint header)");
      per_joint[*d.estimated_joint] = std::move(d);
    }
    for (int i = 0; i < n; ++i) {
      if (per_joint[i].samples.empty())
        throw ModelError("missing dataset for joint " + std::to_string(i + 1));
    }
    params = mlse(per_joint, model, spec, opts);
  } else if (method == "slse" || method == "fontanelli-like") {
    params = slse(merge_datasets(datasets), model, spec, opts);
  } else {
    throw ModelError("unknown method '" + method + "'");
  }

  ModelFile mf{model, params, GccConfig::defaults(n)};
  save_model_file(mf, out_path);

  TorqueEvalReport report;
  report.method = params.provenance.method;
  report.dataset_id = data_dir;
  report.per_joint = params.provenance.per_joint;
  std::cout << report_to_text(report);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_validate(const std::string& model_path, const std::string& plant_path,
                 const std::string& mode, int poses, double duration, std::uint64_t seed,
                 const std::string& out_dir) {
  const ModelFile mf = load_model_file(model_path);
  PlantSpec pspec = load_plant_spec(plant_path);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  if (mode == "trajectory") {
    Plant plant(pspec);
    const auto waypoints = random_poses(pspec.model, 10, seed);
    const auto report = trajectory_test(plant, mf.params, waypoints, 5.0);
    write_text_file(dir / "trajectory.csv", report_to_csv(report));
    write_text_file(dir / "trajectory.txt", report_to_text(report));
    std::cout << report_to_text(report);
  } else if (mode == "drift") {
    const auto ps = random_poses(pspec.model, poses, seed);
    const auto summary = drift_test(pspec, mf.model, mf.params, mf.gcc, ps, duration);
    write_text_file(dir / "drift.csv", drift_summary_to_csv(summary));
    write_text_file(dir / "drift.txt", drift_summary_to_text(summary));
    std::cout << drift_summary_to_text(summary);
  } else if (mode == "order-sweep") {
    const auto cfg = PlanConfig::defaults(pspec.model);
    std::vector<Dataset> per_joint;
    for (int j = 0; j < pspec.model.n_joints; ++j) {
      Plant plant(pspec);
      per_joint.push_back(plant.collect(two_joint_plan(pspec.model, cfg, j, {25, 24})));
    }
    const GravityRegressorSpec spec = build_spec(pspec.model, seed);
    std::vector<int> k_range;
    for (int k = 0; k <= 8; ++k) k_range.push_back(k);
    const auto result = order_sweep(per_joint, pspec.model, spec, k_range, 0.3, {});
    write_text_file(dir / "order_sweep.csv", order_sweep_to_csv(result));
    std::cout << "best test order per joint:";
    for (int b : result.best_order) std::cout << ' ' << b;
    std::cout << "\n";
  } else if (mode == "cond-study") {
    const auto cfg = PlanConfig::defaults(pspec.model);
    const GravityRegressorSpec spec = build_spec(pspec.model, seed);
    const MlsePartition partition = build_partition(pspec.model, spec);
    std::ostringstream csv;
    csv << "joint,strategy,condition_number\n";
    for (const auto& [joint, aux] : cfg.aux_map) {
      (void)aux;
      auto cond_of = [&](const CollectionPlan& plan) {
        Plant plant(pspec);
        const Dataset data = plant.collect(plan);
        EstimationOptions opts;
        opts.orders = default_orders(pspec.model.n_joints);
        return condition_number(
            joint_step_regressor(data, pspec.model, spec, partition, joint, opts));
      };
      csv << joint + 1 << ",two-joint,"
          << format_double(cond_of(two_joint_plan(pspec.model, cfg, joint, {20, 20}))) << "\n";
      const char* names[] = {"one-joint-a1", "one-joint-a2", "one-joint-a3"};
      const AuxSetting settings[] = {AuxSetting::Lo, AuxSetting::Mid, AuxSetting::Hi};
      for (int s = 0; s < 3; ++s) {
        csv << joint + 1 << "," << names[s] << ","
            << format_double(cond_of(one_joint_plan(pspec.model, cfg, joint, settings[s], 400)))
            << "\n";
      }
    }
    write_text_file(dir / "cond_study.csv", csv.str());
    std::cout << csv.str();
  } else {
    throw ModelError("unknown validate mode '" + mode + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static gravity + cable-disturbance identification toolkit"};
  app.require_subcommand(1);

  std::string plant_path, out_path, joint_arg = "all", method = "mlse", orders_arg, data_dir;
  std::string model_path, mode = "trajectory";
  int n_est = 25, n_aux = 24, poses = 400;
  double duration = 2.0;
  std::uint64_t seed = 1;

  auto* collect = app.add_subcommand("collect", "generate datasets from a plant simulator");
  collect->add_option("--plant", plant_path, "plant spec file")->required();
  collect->add_option("--joint", joint_arg, "joint number or 'all'");
  collect->add_option("--counts", [&](const std::vector<std::string>& v) {
    const auto x = v.back();
    const auto pos = x.find('x');
    if (pos == std::string::npos) return false;
    n_est = std::stoi(x.substr(0, pos));
    n_aux = std::stoi(x.substr(pos + 1));
    return true;
  }, "grid counts NxM (estimated x auxiliary)");
  collect->add_option("--seed", seed, "noise / plan seed");
  collect->add_option("--out", out_path, "output directory")->required();

  auto* estimate = app.add_subcommand("estimate", "fit parameters from datasets");
  estimate->add_option("--data", data_dir, "dataset directory")->required();
  estimate->add_option("--method", method, "slse | mlse | fontanelli-like");
  estimate->add_option("--orders", orders_arg, "per-joint polynomial orders k1,...,kn");
  estimate->add_option("--out", out_path, "model file path")->required();

  auto* validate = app.add_subcommand("validate", "run a validation protocol");
  validate->add_option("--model", model_path, "model file")->required();
  validate->add_option("--plant", plant_path, "plant spec file")->required();
  validate->add_option("--mode", mode, "trajectory | drift | order-sweep | cond-study");
  validate->add_option("--poses", poses, "drift test pose count");
  validate->add_option("--duration", duration, "drift test duration (s)");
  validate->add_option("--seed", seed, "pose / probe seed");
  validate->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (collect->parsed()) return cmd_collect(plant_path, joint_arg, n_est, n_aux, seed, out_path);
    if (estimate->parsed()) return cmd_estimate(data_dir, method, orders_arg, out_path);
    if (validate->parsed())
      return cmd_validate(model_path, plant_path, mode, poses, duration, seed, out_path);
  } catch (const IdentifiabilityError& e) {
    std::cerr << "identifiability error: " << e.what() << "\n";
    return kExitIdentifiability;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ModelError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
