#pragma once

// Experiment configuration: a JSON document whose keys mirror the types below.
// Missing keys take defaults; unknown keys are rejected.

#include "wingsense/classify.hpp"
#include "wingsense/encode.hpp"
#include "wingsense/kinematics.hpp"
#include "wingsense/plate.hpp"
#include "wingsense/sspoc.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wingsense {

struct DisturbanceGrid {
  int n_components = 15;
  double freq_low_hz = 1.0;
  double freq_high_hz = 10.0;
  std::vector<double> flap_levels{0.031, 0.31, 3.1, 31.0};
  std::vector<double> rotation_levels{0.01, 0.1, 1.0, 10.0};
  /// Both classes of a trial reuse one disturbance realization when true.
  bool shared_between_classes = false;
};

struct Cell {
  double flap_std = 0.31;
  double rotation_std = 0.1;
};

struct EncoderGrids {
  std::vector<double> sta_frequency{2 * kPi / 100, 2 * kPi / 50, 2 * kPi / 25, 2 * kPi / 12.5};
  std::vector<double> sta_width{0.25, 1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<double> nla_slope{1.0, 5.0, 10.0, 20.0, 40.0, 80.0};
  std::vector<double> nla_half_max{0.0, 0.1, 0.2, 0.3, 0.5};
};

struct ExperimentConfig {
  PlateParams plate;
  FlapProfile flap;
  double rotation_rate = 10.0;  // rad/s, the flap+rotation class
  SimulationOptions simulation;
  double discard_ms = 960.0;
  DisturbanceGrid disturbance;
  Cell cell;
  EncoderSpec encoder;
  EncoderGrids encoder_grids;
  double train_fraction = 0.9;
  LdaOptions lda;
  int svd_rank = 12;
  SparseOptions sparse;
  std::vector<int> q_list{1, 2, 3, 5, 8, 11, 16, 23, 33, 1326};
  int n_trials = 20;
  int random_draws = 1;
  int heatmap_q = 11;
  std::uint64_t master_seed = 1;
  std::string output_dir = "results";
  int threads = 0;  // 0: OpenMP default

  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);
/// Canonical JSON with every field resolved.
std::string dump_config(const ExperimentConfig& cfg);
/// 16 hex digits over the canonical dump.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace wingsense
