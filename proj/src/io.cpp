#include "gcid/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gcid {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw IoError("bad numeric field: '" + s + "'");
  return v;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a) {
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r)));
  return rows;
}

Mat mat_from_json(const json& rows, Eigen::Index ncols_hint) {
  if (rows.empty()) return Mat(0, ncols_hint);
  Mat m(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

json read_json_file(const std::filesystem::path& path, const std::string& expect_kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (!j.contains("format") || j["format"].get<int>() != 1)
    throw IoError(path.string() + ": missing or unrecognized 'format' key (expected 1)");
  if (!j.contains("kind") || j["kind"].get<std::string>() != expect_kind)
    throw IoError(path.string() + ": 'kind' key must be '" + expect_kind + "'");
  return j;
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json kinematic_to_json(const KinematicModel& model) {
  json j;
  j["n_joints"] = model.n_joints;
  j["angle_unit"] = "rad";
  j["gravity_direction"] = {model.gravity_direction[0], model.gravity_direction[1],
                            model.gravity_direction[2]};
  json limits = json::array();
  for (const auto& l : model.joint_limits) limits.push_back({l[0], l[1]});
  j["joint_limits"] = limits;
  json chains = json::array();
  for (const auto& chain : model.chains) {
    json rows = json::array();
    for (const auto& row : chain) {
      json r;
      r["a"] = row.a;
      r["alpha"] = row.alpha;
      r["d"] = row.d;
      r["theta_offset"] = row.theta_offset;
      json coupling;
      coupling["offset"] = row.coupling.offset;
      json terms = json::array();
      // 1-based joint numbers in files
      for (const auto& [joint, coeff] : row.coupling.terms)
        terms.push_back({joint + 1, coeff});
      coupling["terms"] = terms;
      r["coupling"] = coupling;
      rows.push_back(r);
    }
    chains.push_back({{"rows", rows}});
  }
  j["chains"] = chains;
  return j;
}

KinematicModel kinematic_from_json(const json& j) {
  KinematicModel model;
  model.n_joints = j.at("n_joints").get<int>();
  const double unit =
      j.value("angle_unit", std::string("rad")) == "deg" ? M_PI / 180.0 : 1.0;
  const auto& g = j.at("gravity_direction");
  model.gravity_direction = Vec3(g[0].get<double>(), g[1].get<double>(), g[2].get<double>());
  for (const auto& l : j.at("joint_limits"))
    model.joint_limits.push_back({l[0].get<double>() * unit, l[1].get<double>() * unit});
  for (const auto& cj : j.at("chains")) {
    std::vector<DhRow> chain;
    for (const auto& rj : cj.at("rows")) {
      DhRow row;
      row.a = rj.at("a").get<double>();
      row.alpha = normalize_angle(rj.at("alpha").get<double>() * unit);
      row.d = rj.at("d").get<double>();
      row.theta_offset = normalize_angle(rj.at("theta_offset").get<double>() * unit);
      if (rj.contains("joint")) {
        if (rj["joint"].is_string()) {
          if (rj["joint"].get<std::string>() != "fixed")
            throw IoError("row 'joint' must be a joint number or \"fixed\"");
          row.coupling = RowCoupling::fixed();
        } else {
          row.coupling = RowCoupling::identity(rj["joint"].get<int>() - 1);
        }
      } else if (rj.contains("coupling")) {
        row.coupling.offset = rj["coupling"].at("offset").get<double>() * unit;
        for (const auto& t : rj["coupling"].at("terms"))
          row.coupling.terms.push_back({t[0].get<int>() - 1, t[1].get<double>()});
      } else {
        throw IoError("DH row needs a 'joint' or 'coupling' entry");
      }
      chain.push_back(row);
    }
    model.chains.push_back(std::move(chain));
  }
  model.validate();
  return model;
}

}  // namespace

KinematicModel load_kinematic_model(const std::filesystem::path& path) {
  return kinematic_from_json(read_json_file(path, "kinematic_model"));
}

void save_kinematic_model(const KinematicModel& model, const std::filesystem::path& path) {
  json j = kinematic_to_json(model);
  j["format"] = 1;
  j["kind"] = "kinematic_model";
  write_json_file(j, path);
}

std::string kinematic_model_hash(const KinematicModel& model) {
  return fnv1a_hex(kinematic_to_json(model).dump());
}

namespace {

json curve_to_json(const DisturbanceCurve& c) {
  json j;
  switch (c.kind) {
    case DisturbanceCurve::Kind::Polynomial:
      j["type"] = "polynomial";
      j["coeffs"] = vec_to_json(c.coeffs);
      break;
    case DisturbanceCurve::Kind::SinusoidPoly:
      j["type"] = "sinusoid_poly";
      j["coeffs"] = vec_to_json(c.coeffs);
      j["amp"] = c.sin_amp;
      j["freq"] = c.sin_freq;
      j["phase"] = c.sin_phase;
      break;
    case DisturbanceCurve::Kind::PiecewiseLinear:
      j["type"] = "piecewise_linear";
      j["points"] = json::array();
      for (const auto& [x, y] : c.points) j["points"].push_back({x, y});
      break;
  }
  return j;
}

DisturbanceCurve curve_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "polynomial") return DisturbanceCurve::polynomial(vec_from_json(j.at("coeffs")));
  if (type == "sinusoid_poly") {
    return DisturbanceCurve::sinusoid_poly(vec_from_json(j.at("coeffs")), j.at("amp").get<double>(),
                                           j.at("freq").get<double>(), j.at("phase").get<double>());
  }
  if (type == "piecewise_linear") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j.at("points")) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    return DisturbanceCurve::piecewise(std::move(pts));
  }
  throw IoError("unknown disturbance curve type '" + type + "'");
}

}  // namespace

PlantSpec load_plant_spec(const std::filesystem::path& path) {
  const json j = read_json_file(path, "plant");
  PlantSpec spec;
  try {
    spec.model = kinematic_from_json(j.at("kinematic"));
    for (const auto& mj : j.at("masses")) {
      LinkMass lm;
      lm.mass = mj.at("mass").get<double>();
      const auto& com = mj.at("com");
      lm.com = Vec3(com[0].get<double>(), com[1].get<double>(), com[2].get<double>());
      spec.masses.links.push_back(lm);
    }
    for (const auto& dj : j.at("disturbance")) {
      spec.curves.push_back({curve_from_json(dj.at("neg")), curve_from_json(dj.at("pos"))});
    }
    spec.noise_sigma = j.at("noise_sigma").get<double>();
    spec.inertia = vec_from_json(j.at("drift").at("inertia"));
    spec.damping = vec_from_json(j.at("drift").at("damping"));
    spec.g = j.value("g", 9.81);
    spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

void save_plant_spec(const PlantSpec& spec, const std::filesystem::path& path) {
  json j;
  j["format"] = 1;
  j["kind"] = "plant";
  j["kinematic"] = kinematic_to_json(spec.model);
  j["masses"] = json::array();
  for (const auto& lm : spec.masses.links) {
    j["masses"].push_back({{"mass", lm.mass}, {"com", {lm.com[0], lm.com[1], lm.com[2]}}});
  }
  j["disturbance"] = json::array();
  for (const auto& pair : spec.curves) {
    j["disturbance"].push_back({{"neg", curve_to_json(pair[0])}, {"pos", curve_to_json(pair[1])}});
  }
  j["noise_sigma"] = spec.noise_sigma;
  j["drift"] = {{"inertia", vec_to_json(spec.inertia)}, {"damping", vec_to_json(spec.damping)}};
  j["g"] = spec.g;
  j["seed"] = spec.seed;
  write_json_file(j, path);
}

void save_dataset(const Dataset& data, const DatasetFileMeta& meta,
                  const std::filesystem::path& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const int n = data.n_joints();
  out << "# format: 1\n# kind: dataset\n";
  out << "# n_joints: " << n << "\n";
  if (!meta.model_hash.empty()) out << "# model_hash: " << meta.model_hash << "\n";
  if (data.estimated_joint) out << "# estimated_joint: " << *data.estimated_joint + 1 << "\n";
  if (!meta.orders_hint.empty()) {
    out << "# orders_hint: ";
    for (size_t i = 0; i < meta.orders_hint.size(); ++i)
      out << (i ? "," : "") << meta.orders_hint[i];
    out << "\n";
  }
  if (meta.plant_seed) out << "# plant_seed: " << *meta.plant_seed << "\n";
  if (!data.source.empty()) out << "# source: " << data.source << "\n";
  if (!data.sweep.empty()) out << "# sweep: " << data.sweep << "\n";
  for (int i = 0; i < n; ++i) out << "q" << i + 1 << ",";
  for (int i = 0; i < n; ++i) out << "dir" << i + 1 << ",";
  for (int i = 0; i < n; ++i) out << "tau" << i + 1 << (i + 1 < n ? "," : "\n");
  for (const auto& s : data.samples) {
    for (int i = 0; i < n; ++i) out << format_double(s.q[i]) << ",";
    for (int i = 0; i < n; ++i) out << s.dirs[i] << ",";
    for (int i = 0; i < n; ++i) out << format_double(s.tau[i]) << (i + 1 < n ? "," : "\n");
  }
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFileMeta* meta) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Dataset data;
  DatasetFileMeta local;
  int n = -1;
  bool format_seen = false;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
      };
      trim(key);
      trim(value);
      if (key == "format") {
        if (value != "1") throw IoError(path.string() + ": unrecognized dataset format " + value);
        format_seen = true;
      } else if (key == "n_joints") {
        n = std::stoi(value);
      } else if (key == "model_hash") {
        local.model_hash = value;
      } else if (key == "estimated_joint") {
        data.estimated_joint = std::stoi(value) - 1;
      } else if (key == "orders_hint") {
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) local.orders_hint.push_back(std::stoi(tok));
      } else if (key == "plant_seed") {
        local.plant_seed = std::stoull(value);
      } else if (key == "source") {
        data.source = value;
      } else if (key == "sweep") {
        data.sweep = value;
      }
      continue;
    }
    if (!header_done) {  // column header row
      header_done = true;
      continue;
    }
    if (n <= 0) throw IoError(path.string() + ": missing n_joints header");
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (static_cast<int>(fields.size()) != 3 * n)
      throw IoError(path.string() + ": row width " + std::to_string(fields.size()) +
                    " != 3 * n_joints");
    Sample s;
    s.q.resize(n);
    s.dirs.resize(n);
    s.tau.resize(n);
    for (int i = 0; i < n; ++i) s.q[i] = parse_double(fields[i]);
    for (int i = 0; i < n; ++i) s.dirs[i] = std::stoi(fields[n + i]);
    for (int i = 0; i < n; ++i) s.tau[i] = parse_double(fields[2 * n + i]);
    data.samples.push_back(std::move(s));
  }
  if (!format_seen) throw IoError(path.string() + ": missing 'format' header");
  data.validate();
  if (meta) *meta = local;
  return data;
}

void save_model_file(const ModelFile& mf, const std::filesystem::path& path) {
  mf.params.validate();
  mf.gcc.validate();
  json j;
  j["format"] = 1;
  j["kind"] = "model";
  j["kinematic"] = kinematic_to_json(mf.model);
  json grav;
  grav["g"] = mf.params.gspec.g;
  grav["full_param_count"] = mf.params.gspec.full_param_count;
  grav["base_cols"] = mf.params.gspec.base_cols;
  grav["dep_cols"] = mf.params.gspec.dep_cols;
  grav["combination"] = mat_to_json(mf.params.gspec.combination);
  grav["beta"] = vec_to_json(mf.params.gravity_base);
  j["gravity"] = grav;
  json dist;
  dist["orders"] = mf.params.disturbance.orders;
  dist["centers"] = mf.params.disturbance.centers;
  dist["a_plus"] = json::array();
  dist["a_minus"] = json::array();
  for (const auto& a : mf.params.disturbance.a_plus) dist["a_plus"].push_back(vec_to_json(a));
  for (const auto& a : mf.params.disturbance.a_minus) dist["a_minus"].push_back(vec_to_json(a));
  j["disturbance"] = dist;
  j["gcc"] = {{"dead_band", vec_to_json(mf.gcc.dead_band)},
              {"saturation", vec_to_json(mf.gcc.saturation)},
              {"alpha", mf.gcc.alpha}};
  json prov;
  prov["method"] = mf.params.provenance.method;
  prov["per_joint"] = json::array();
  for (const auto& st : mf.params.provenance.per_joint) {
    prov["per_joint"].push_back({{"condition_number", st.condition_number},
                                 {"rms_relative_pct", st.rms_relative_pct},
                                 {"rms_absolute", st.rms_absolute},
                                 {"max_absolute", st.max_absolute},
                                 {"rows", st.rows}});
  }
  j["provenance"] = prov;
  write_json_file(j, path);
}

ModelFile load_model_file(const std::filesystem::path& path) {
  const json j = read_json_file(path, "model");
  ModelFile mf;
  try {
    mf.model = kinematic_from_json(j.at("kinematic"));
    const auto& grav = j.at("gravity");
    mf.params.gspec.g = grav.at("g").get<double>();
    mf.params.gspec.full_param_count = grav.at("full_param_count").get<int>();
    mf.params.gspec.base_cols = grav.at("base_cols").get<std::vector<int>>();
    mf.params.gspec.dep_cols = grav.at("dep_cols").get<std::vector<int>>();
    mf.params.gspec.combination =
        mat_from_json(grav.at("combination"), mf.params.gspec.dep_cols.size());
    mf.params.gravity_base = vec_from_json(grav.at("beta"));
    const auto& dist = j.at("disturbance");
    mf.params.disturbance.orders = dist.at("orders").get<std::vector<int>>();
    mf.params.disturbance.centers = dist.at("centers").get<std::vector<double>>();
    for (const auto& a : dist.at("a_plus")) mf.params.disturbance.a_plus.push_back(vec_from_json(a));
    for (const auto& a : dist.at("a_minus"))
      mf.params.disturbance.a_minus.push_back(vec_from_json(a));
    const auto& gcc = j.at("gcc");
    mf.gcc.dead_band = vec_from_json(gcc.at("dead_band"));
    mf.gcc.saturation = vec_from_json(gcc.at("saturation"));
    mf.gcc.alpha = gcc.at("alpha").get<double>();
    const auto& prov = j.at("provenance");
    mf.params.provenance.method = prov.at("method").get<std::string>();
    for (const auto& st : prov.at("per_joint")) {
      JointStats s;
      s.condition_number = st.at("condition_number").get<double>();
      s.rms_relative_pct = st.at("rms_relative_pct").get<double>();
      s.rms_absolute = st.at("rms_absolute").get<double>();
      s.max_absolute = st.at("max_absolute").get<double>();
      s.rows = st.at("rows").get<int>();
      mf.params.provenance.per_joint.push_back(s);
    }
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  mf.params.validate();
  mf.gcc.validate();
  return mf;
}

std::string report_to_text(const TorqueEvalReport& report) {
  std::ostringstream os;
  os << "torque evaluation (" << report.method << ", " << report.dataset_id << ")\n";
  os << "joint  cond        rms_rel_%   rms_abs_Nm  max_abs_Nm  rows\n";
  for (size_t i = 0; i < report.per_joint.size(); ++i) {
    const auto& st = report.per_joint[i];
    os << i + 1 << "      " << format_double(st.condition_number) << "  "
       << format_double(st.rms_relative_pct) << "  " << format_double(st.rms_absolute) << "  "
       << format_double(st.max_absolute) << "  " << st.rows << "\n";
  }
  return os.str();
}

std::string report_to_csv(const TorqueEvalReport& report) {
  std::ostringstream os;
  os << "joint,condition_number,rms_relative_pct,rms_absolute_Nm,max_absolute_Nm,rows\n";
  for (size_t i = 0; i < report.per_joint.size(); ++i) {
    const auto& st = report.per_joint[i];
    os << i + 1 << "," << format_double(st.condition_number) << ","
       << format_double(st.rms_relative_pct) << "," << format_double(st.rms_absolute) << ","
       << format_double(st.max_absolute) << "," << st.rows << "\n";
  }
  return os.str();
}

std::string drift_summary_to_text(const DriftSummary& s) {
  std::ostringstream os;
  os << "drift test over " << s.translational.size() << " poses\n";
  os << "translational mean " << format_double(s.mean_translational) << " m, std "
     << format_double(s.std_translational) << " m\n";
  os << "rotational mean " << format_double(s.mean_rotational) << " deg, std "
     << format_double(s.std_rotational) << " deg\n";
  return os.str();
}

std::string drift_summary_to_csv(const DriftSummary& s) {
  std::ostringstream os;
  os << "pose,translational_m,rotational_deg\n";
  for (size_t i = 0; i < s.translational.size(); ++i) {
    os << i << "," << format_double(s.translational[i]) << "," << format_double(s.rotational[i])
       << "\n";
  }
  return os.str();
}

std::string order_sweep_to_csv(const OrderSweepResult& r) {
  std::ostringstream os;
  os << "joint,order,train_rms_Nm,test_rms_Nm\n";
  for (const auto& e : r.table) {
    os << e.joint + 1 << "," << e.order << "," << format_double(e.train_rms) << ","
       << format_double(e.test_rms) << "\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

}  // namespace gcid
