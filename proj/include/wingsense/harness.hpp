#pragma once

// End-to-end trials, parameter sweeps, aggregation and result tables.

#include "wingsense/config.hpp"
#include "wingsense/sigmoid.hpp"
#include "wingsense/sspoc.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wingsense {

/// Plate basis and matrices shared by every trial of a config.
struct PlateModel {
  PlateParams params;
  ShapeBasis basis;
  SystemMatrices system;
  SensorGrid grid;

  explicit PlateModel(const PlateParams& p);
};

/// Trial seed = derive_seed(master, {bits(flap_std), bits(rotation_std), trial}).
uint64_t trial_seed(uint64_t master, double flap_std, double rotation_std, int trial);

struct ConditionPair {
  StrainField flap;
  StrainField rotation;
};

/// Simulates the flap-only and flap+rotation classes of one trial.
ConditionPair simulate_pair(const ExperimentConfig& cfg, const PlateModel& model, double flap_std,
                            double rotation_std, uint64_t seed);

struct QAccuracy {
  int q_requested = 0;
  int q = 0;  // realized
  Provenance provenance = Provenance::Sspoc;
  int draw = 0;
  double accuracy = 0.0;
};

struct TrialResult {
  std::string cell;
  int trial = 0;
  uint64_t seed = 0;
  int n_sensors = 0;
  bool ok = true;
  std::string failed_stage;
  std::string message;
  std::optional<double> raw_full;
  double encoded_full = 0.0;
  std::vector<QAccuracy> sspoc;  // one per q in the list
  std::vector<SensorSet> sspoc_sets;
  std::vector<QAccuracy> random;
};

struct TrialOptions {
  bool raw_baseline = true;
  bool random_baseline = true;
};

/// Encoding, classification and the q sweep on an already simulated pair.
TrialResult evaluate_pair(const ExperimentConfig& cfg, const ConditionPair& pair, const EncoderSpec& encoder,
                          uint64_t seed, const TrialOptions& opt = {});

/// Simulate and evaluate one trial; failures are reported in the result.
TrialResult run_trial(const ExperimentConfig& cfg, const PlateModel& model, const Cell& cell, int trial,
                      const EncoderSpec& encoder, const TrialOptions& opt = {});

struct AccuracyCurve {
  std::string cell;
  std::vector<int> q;                        // requested values, in list order
  std::vector<std::vector<double>> sspoc;    // per q, trial-level
  std::vector<std::vector<double>> random;   // per q, pooled over draws
  std::vector<double> sspoc_mean, sspoc_std, random_mean, random_std;
  std::vector<double> encoded_full, raw_full;
  SigmoidFit fit;
  int failed_trials = 0;
};

AccuracyCurve aggregate_curve(const std::string& cell, const std::vector<int>& q_list,
                              const std::vector<TrialResult>& trials);

struct SensorHeatmap {
  std::string cell;
  int q = 0;
  std::vector<double> frequency;  // per grid location
  int n_trials = 0;
};

struct HeatmapSet {
  SensorHeatmap all;
  std::optional<SensorHeatmap> good, poor;  // present when partitioned and non-empty
  bool empty_group = false;
};

HeatmapSet aggregate_heatmap(const std::vector<TrialResult>& trials, int q, int n_sensors,
                             std::optional<double> partition_threshold = std::nullopt);

struct SweepResult {
  std::vector<std::string> cells;
  std::vector<std::vector<TrialResult>> trials;  // per cell
  std::vector<AccuracyCurve> curves;
  std::vector<EncoderSpec> encoders;  // per cell
  bool encoder_grid = false;
};

/// Label used in result tables.
std::string cell_label(double flap_std, double rotation_std);

/// Every (flap, rotation) disturbance level pair; cells in row-major order
/// with the flap level varying slowest.
SweepResult sweep_disturbances(const ExperimentConfig& cfg);

/// Single cell from cfg.cell with cfg.encoder.
SweepResult sweep_cell(const ExperimentConfig& cfg);

enum class EncoderGridKind { Sta, Nla };
/// Varies (sta_frequency, sta_width) or (nla_slope, nla_half_max) with the
/// other function at its configured values; simulations are shared across
/// encoder cells of a trial.
SweepResult sweep_encoder(const ExperimentConfig& cfg, EncoderGridKind kind);

// Result tables. Each begins with "# config_hash=..." and "# master_seed=..."
// comment lines followed by a CSV header.
struct TableStamp {
  std::string config_hash;
  uint64_t master_seed = 0;
};

void write_accuracy_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep);
void write_sigmoids_csv(std::ostream& os, const TableStamp& stamp, const std::vector<AccuracyCurve>& curves);
void write_heatmap_csv(std::ostream& os, const TableStamp& stamp, const std::vector<HeatmapSet>& maps,
                       const SensorGrid& grid);
void write_selections_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep);
void write_failures_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep);
void write_encoder_grid_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep);

/// Writes every table for a sweep into `dir`.
void write_sweep_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const SweepResult& sweep,
                         std::optional<double> partition_threshold = std::nullopt);

struct AccuracyRow {
  std::string cell;
  int trial = 0;
  int q = 0;
  std::string provenance;
  double accuracy = 0.0;
};
std::vector<AccuracyRow> read_accuracy_csv(std::istream& is, TableStamp* stamp = nullptr);

/// Sigmoid fits per cell from accuracy rows of the given provenance.
std::vector<AccuracyCurve> fit_curves(const std::vector<AccuracyRow>& rows, const std::string& provenance);

struct SelectionRow {
  std::string cell;
  int trial = 0;
  int q = 0;
  double accuracy = 0.0;
  std::vector<int> sensors;
};
std::vector<SelectionRow> read_selections_csv(std::istream& is, TableStamp* stamp = nullptr);
std::vector<HeatmapSet> heatmaps_from_selections(const std::vector<SelectionRow>& rows, int q, int n_sensors,
                                                 std::optional<double> partition_threshold);

}  // namespace wingsense
