#pragma once

#include "gcid/plant.hpp"

namespace gcid {

/// Representative six-joint description of an MTM-like arm: vertical first
/// axis, shoulder/elbow pair with a parallelogram counterweight chain,
/// spherical-ish wrist.  The DH constants are illustrative defaults, not a
/// calibrated table; real deployments load their own model file.
KinematicModel default_kinematic_model();

LinkMassParams default_masses(const KinematicModel& model);

enum class PlantKind {
  InClassSymmetric,   // order-4 curves, identical in both directions
  InClassAsymmetric,  // order-4 curves, direction-dependent
  OutOfClassOrder6,   // order-6 curves, direction-dependent
  PiecewiseSin,       // mixed piecewise-linear / sinusoid-plus-polynomial curves
};

PlantSpec default_plant(PlantKind kind, double noise_sigma = 0.0, std::uint64_t seed = 1);

}  // namespace gcid
