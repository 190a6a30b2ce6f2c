#pragma once

#include <filesystem>
#include <string>

#include "gcid/controller.hpp"
#include "gcid/metrics.hpp"
#include "gcid/plant.hpp"

namespace gcid {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);
double parse_double(const std::string& s);

std::string fnv1a_hex(const std::string& bytes);

// --- kinematic model files (JSON, format: 1) ---
KinematicModel load_kinematic_model(const std::filesystem::path& path);
void save_kinematic_model(const KinematicModel& model, const std::filesystem::path& path);
std::string kinematic_model_hash(const KinematicModel& model);

// --- plant specification files ---
PlantSpec load_plant_spec(const std::filesystem::path& path);
void save_plant_spec(const PlantSpec& spec, const std::filesystem::path& path);

// --- dataset files (CSV with '#'-prefixed header block) ---
struct DatasetFileMeta {
  std::string model_hash;
  std::vector<int> orders_hint;
  std::optional<std::uint64_t> plant_seed;
};

void save_dataset(const Dataset& data, const DatasetFileMeta& meta,
                  const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path, DatasetFileMeta* meta = nullptr);

// --- model files: kinematics + ParamSet + GccConfig + provenance ---
struct ModelFile {
  KinematicModel model;
  ParamSet params;
  GccConfig gcc;
};

void save_model_file(const ModelFile& mf, const std::filesystem::path& path);
ModelFile load_model_file(const std::filesystem::path& path);

// --- reports ---
std::string report_to_text(const TorqueEvalReport& report);
std::string report_to_csv(const TorqueEvalReport& report);
std::string drift_summary_to_text(const DriftSummary& s);
std::string drift_summary_to_csv(const DriftSummary& s);
std::string order_sweep_to_csv(const OrderSweepResult& r);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace gcid
