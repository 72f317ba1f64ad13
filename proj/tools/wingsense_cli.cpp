// Command-line front end. Exit codes: 0 success, 1 configuration or input
// error, 2 numerical failure (stage name on stderr).

#include "wingsense/config.hpp"
#include "wingsense/errors.hpp"
#include "wingsense/field_io.hpp"
#include "wingsense/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace wingsense;

namespace {

struct Common {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out;
};

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config_path.empty() ? ExperimentConfig{} : load_config(c.config_path);
  if (c.seed) cfg.master_seed = *c.seed;
  if (!c.out.empty()) cfg.output_dir = c.out;
  cfg.validate();
  return cfg;
}

LabeledDataMatrix load_pair(const std::string& flap, const std::string& rotation) {
  const std::string kf = peek_field_kind(flap), kr = peek_field_kind(rotation);
  if (kf != kr) throw ConfigError("field kinds differ: " + kf + " vs " + kr);
  if (kf == "strain") return assemble(load_strain_field(flap), load_strain_field(rotation));
  return assemble(load_encoded_field(flap), load_encoded_field(rotation));
}

std::ifstream open_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  return is;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation detection from neural-encoded wing strain"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", common.seed, "Override the master seed");
  app.add_option("--out", common.out, "Output directory");

  double flap_std = -1, rotation_std = -1;
  int trial = 0;
  auto* simulate = app.add_subcommand("simulate", "Simulate both conditions and write strain fields");
  simulate->add_option("--flap-std", flap_std, "Flap disturbance std (rad/s)");
  simulate->add_option("--rotation-std", rotation_std, "Rotation disturbance std (rad/s)");
  simulate->add_option("--trial", trial, "Trial index used for seed derivation");

  std::string in_flap, in_rotation;
  auto* encode = app.add_subcommand("encode", "Encode a pair of strain fields with a joint normalization");
  encode->add_option("--flap", in_flap, "Flap-only strain field")->required()->check(CLI::ExistingFile);
  encode->add_option("--rotation", in_rotation, "Flap+rotation strain field")->required()->check(CLI::ExistingFile);

  std::string sensors_path;
  auto* classify = app.add_subcommand("classify", "Fit and validate an LDA classifier");
  classify->add_option("--flap", in_flap, "Flap-only field (strain or encoded)")->required()->check(CLI::ExistingFile);
  classify->add_option("--rotation", in_rotation, "Flap+rotation field")->required()->check(CLI::ExistingFile);
  classify->add_option("--sensors", sensors_path, "Restrict to a sensor set file")->check(CLI::ExistingFile);

  int q = 11;
  auto* select = app.add_subcommand("select", "Run one sparse sensor selection");
  select->add_option("--flap", in_flap, "Flap-only encoded field")->required()->check(CLI::ExistingFile);
  select->add_option("--rotation", in_rotation, "Flap+rotation encoded field")->required()->check(CLI::ExistingFile);
  select->add_option("--q", q, "Number of sensors")->check(CLI::PositiveNumber);

  std::string grid = "disturbance";
  std::optional<double> partition;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of trials and write result tables");
  sweep->add_option("--grid", grid, "Grid to run")
      ->check(CLI::IsMember({"disturbance", "encoder-sta", "encoder-nla", "cell"}));
  sweep->add_option("--partition", partition, "Accuracy threshold splitting heatmaps into good/poor groups");

  std::string in_table, provenance = "sspoc";
  auto* fit = app.add_subcommand("fit", "Fit accuracy curves from an accuracy table");
  fit->add_option("--in", in_table, "accuracy.csv")->required()->check(CLI::ExistingFile);
  fit->add_option("--provenance", provenance, "Rows to fit")->check(CLI::IsMember({"sspoc", "random"}));

  auto* heatmap = app.add_subcommand("heatmap", "Sensor selection frequencies from a selections table");
  heatmap->add_option("--in", in_table, "selections.csv")->required()->check(CLI::ExistingFile);
  heatmap->add_option("--q", q, "Sensor count")->check(CLI::PositiveNumber);
  heatmap->add_option("--partition", partition, "Accuracy threshold for good/poor groups");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ExperimentConfig cfg = resolve(common);
    const fs::path out = cfg.output_dir;

    if (*simulate) {
      const PlateModel model(cfg.plate);
      const double fs_ = flap_std >= 0 ? flap_std : cfg.cell.flap_std;
      const double rs_ = rotation_std >= 0 ? rotation_std : cfg.cell.rotation_std;
      const uint64_t seed = trial_seed(cfg.master_seed, fs_, rs_, trial);
      const ConditionPair pair = simulate_pair(cfg, model, fs_, rs_, seed);
      save_field(out / "strain_flap.wsf", pair.flap);
      save_field(out / "strain_rotation.wsf", pair.rotation);
      std::cout << "wrote " << (out / "strain_flap.wsf").string() << " and " << (out / "strain_rotation.wsf").string()
                << " (" << pair.flap.samples() << " samples x " << pair.flap.grid.size() << " sensors)\n";
    } else if (*encode) {
      const EncodedPair e = encode_conditions(load_strain_field(in_flap), load_strain_field(in_rotation), cfg.encoder);
      save_field(out / "encoded_flap.wsf", e.flap);
      save_field(out / "encoded_rotation.wsf", e.rotation);
      std::cout << "c_xi " << format_double(e.flap.c_xi) << "\n";
    } else if (*classify) {
      const SplitData data = split(load_pair(in_flap, in_rotation), cfg.train_fraction);
      SensorSet set = sensors_path.empty() ? all_sensors(static_cast<int>(data.sensor_ids.size()))
                                           : load_sensor_set(sensors_path);
      std::vector<int> rows;
      for (int id : set.indices) {
        if (id < 0 || id >= static_cast<int>(data.sensor_ids.size())) throw ConfigError("sensor index out of range");
        rows.push_back(id);
      }
      const SplitData sub = restrict_rows(data, rows);
      const LdaModel model = fit_lda(sub, cfg.lda);
      const double acc = evaluate(model, sub.X_test, sub.test_labels);
      save_model(out / "model.txt", model);
      std::cout << "accuracy " << format_double(acc) << " (q = " << rows.size() << ")\n";
    } else if (*select) {
      const SplitData data = split(load_pair(in_flap, in_rotation), cfg.train_fraction);
      const int rank = std::min<int>(cfg.svd_rank, static_cast<int>(data.X_train.rows()));
      const TruncatedBasis basis = svd_truncate(data.X_train, rank);
      const Matrix features = basis.psi.transpose() * (data.X_train.colwise() - basis.mean);
      const LdaModel fm = fit_lda(features, data.train_labels, cfg.lda);
      const SparseSolution sol = solve_sparse(select_features(basis, fm.w, std::min(q, rank)), cfg.sparse);
      const SensorSet set = extract_sensors(sol, q);
      const double acc = classify_with_sensors(set, data, cfg.lda);
      const SensorGrid g = SensorGrid::for_plate(cfg.plate);
      const fs::path path = out / ("sensors_q" + std::to_string(q) + ".txt");
      save_sensor_set(path, set, g);
      std::cout << "accuracy " << format_double(acc) << " with " << set.q() << " sensors; lambda "
                << format_double(sol.lambda) << ", residual " << format_double(sol.residual) << "\nwrote "
                << path.string() << "\n";
    } else if (*sweep) {
      SweepResult result;
      if (grid == "disturbance") result = sweep_disturbances(cfg);
      else if (grid == "encoder-sta") result = sweep_encoder(cfg, EncoderGridKind::Sta);
      else if (grid == "encoder-nla") result = sweep_encoder(cfg, EncoderGridKind::Nla);
      else result = sweep_cell(cfg);
      write_sweep_outputs(out, cfg, result, partition);
      int failed = 0;
      for (const AccuracyCurve& c : result.curves) failed += c.failed_trials;
      std::cout << "wrote results for " << result.cells.size() << " cells to " << out.string() << " (" << failed
                << " failed trials)\n";
    } else if (*fit) {
      auto is = open_table(in_table);
      TableStamp stamp;
      const auto rows = read_accuracy_csv(is, &stamp);
      const auto curves = fit_curves(rows, provenance);
      fs::create_directories(out);
      std::ofstream os(out / "sigmoids.csv", std::ios::binary);
      write_sigmoids_csv(os, stamp, curves);
      for (const AccuracyCurve& c : curves)
        std::cout << c.cell << ": q75 " << (c.fit.q75 ? format_double(*c.fit.q75) : std::string("never")) << "\n";
    } else if (*heatmap) {
      auto is = open_table(in_table);
      TableStamp stamp;
      const auto rows = read_selections_csv(is, &stamp);
      const SensorGrid g = SensorGrid::for_plate(cfg.plate);
      const auto maps = heatmaps_from_selections(rows, q, g.size(), partition);
      fs::create_directories(out);
      std::ofstream os(out / "heatmap.csv", std::ios::binary);
      write_heatmap_csv(os, stamp, maps, g);
      for (const HeatmapSet& m : maps)
        if (m.empty_group) std::cerr << "warning: " << m.all.cell << " has an empty accuracy group\n";
      std::cout << "wrote " << (out / "heatmap.csv").string() << " (" << maps.size() << " cells)\n";
    }
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
