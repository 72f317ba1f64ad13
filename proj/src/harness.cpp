#include "wingsense/harness.hpp"

#include "wingsense/errors.hpp"
#include "wingsense/field_io.hpp"
#include "wingsense/random.hpp"
#include "wingsense/stats.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wingsense {

PlateModel::PlateModel(const PlateParams& p)
    : params(p), basis(build_shape_basis(p)), system(assemble_matrices(basis, p)), grid(SensorGrid::for_plate(p)) {}

uint64_t trial_seed(uint64_t master, double flap_std, double rotation_std, int trial) {
  return derive_seed(master, {std::bit_cast<uint64_t>(flap_std), std::bit_cast<uint64_t>(rotation_std),
                              static_cast<uint64_t>(trial)});
}

ConditionPair simulate_pair(const ExperimentConfig& cfg, const PlateModel& model, double flap_std,
                            double rotation_std, uint64_t seed) {
  ConditionPair out;
  for (int c = 0; c < 2; ++c) {
    const uint64_t cls = cfg.disturbance.shared_between_classes ? 0 : static_cast<uint64_t>(c);
    const DisturbanceGrid& d = cfg.disturbance;
    const DisturbanceSpec fd{flap_std, d.n_components, d.freq_low_hz, d.freq_high_hz, derive_seed(seed, {cls, 0})};
    const DisturbanceSpec rd{rotation_std, d.n_components, d.freq_low_hz, d.freq_high_hz,
                             derive_seed(seed, {cls, 1})};
    const KinematicDrive drive(cfg.flap, RotationSpec{c == 0 ? 0.0 : cfg.rotation_rate}, realize_disturbance(fd),
                               realize_disturbance(rd), cfg.simulation.t_end_ms);
    const Trajectory traj = integrate(model.system, drive, cfg.simulation);
    StrainField f = strain_field(traj, model.basis, model.params, cfg.discard_ms);
    f.drive_hash = drive.hash();
    (c == 0 ? out.flap : out.rotation) = std::move(f);
  }
  return out;
}

TrialResult evaluate_pair(const ExperimentConfig& cfg, const ConditionPair& pair, const EncoderSpec& encoder,
                          uint64_t seed, const TrialOptions& opt) {
  TrialResult r;
  r.seed = seed;
  std::string stage = "assemble";
  try {
    const int n_sensors = pair.flap.grid.size();
    r.n_sensors = n_sensors;
    if (opt.raw_baseline) {
      stage = "classify_raw";
      const SplitData raw = split(assemble(pair.flap, pair.rotation), cfg.train_fraction);
      const LdaModel m = fit_lda(raw, cfg.lda);
      r.raw_full = evaluate(m, raw.X_test, raw.test_labels);
    }

    stage = "encode";
    const EncodedPair enc_pair = encode_conditions(pair.flap, pair.rotation, encoder);
    const SplitData enc = split(assemble(enc_pair.flap, enc_pair.rotation), cfg.train_fraction);

    stage = "classify";
    {
      const LdaModel m = fit_lda(enc, cfg.lda);
      r.encoded_full = evaluate(m, enc.X_test, enc.test_labels);
    }

    stage = "svd";
    const int rank = std::min<int>(cfg.svd_rank, static_cast<int>(std::min(enc.X_train.rows(), enc.X_train.cols())));
    const TruncatedBasis basis = svd_truncate(enc.X_train, rank);
    const Matrix features = basis.psi.transpose() * (enc.X_train.colwise() - basis.mean);
    const LdaModel feature_model = fit_lda(features, enc.train_labels, cfg.lda);

    std::map<int, SparseSolution> by_rho;
    for (int q : cfg.q_list) {
      QAccuracy qa;
      qa.q_requested = q;
      qa.provenance = Provenance::Sspoc;
      SensorSet set;
      if (q >= n_sensors) {
        set = all_sensors(n_sensors);
        set.provenance = Provenance::Sspoc;
        qa.accuracy = r.encoded_full;
      } else {
        stage = "solve_sparse";
        const int rho = std::min(q, rank);
        auto it = by_rho.find(rho);
        if (it == by_rho.end())
          it = by_rho.emplace(rho, solve_sparse(select_features(basis, feature_model.w, rho), cfg.sparse)).first;
        set = extract_sensors(it->second, q);
        stage = "classify_sparse";
        qa.accuracy = classify_with_sensors(set, enc, cfg.lda);
      }
      qa.q = set.q();
      r.sspoc.push_back(qa);
      r.sspoc_sets.push_back(std::move(set));

      if (opt.random_baseline) {
        stage = "classify_random";
        for (int draw = 0; draw < cfg.random_draws; ++draw) {
          QAccuracy ra;
          ra.q_requested = q;
          ra.provenance = Provenance::Random;
          ra.draw = draw;
          if (q >= n_sensors) {
            ra.q = n_sensors;
            ra.accuracy = r.encoded_full;
          } else {
            const SensorSet rs =
                random_sensors(q, derive_seed(seed, {2, static_cast<uint64_t>(q), static_cast<uint64_t>(draw)}),
                               n_sensors);
            ra.q = rs.q();
            ra.accuracy = classify_with_sensors(rs, enc, cfg.lda);
          }
          r.random.push_back(ra);
        }
      }
    }
  } catch (const NumericalError& e) {
    r.ok = false;
    r.failed_stage = e.stage();
    r.message = e.what();
  } catch (const std::exception& e) {
    r.ok = false;
    r.failed_stage = stage;
    r.message = e.what();
  }
  return r;
}

TrialResult run_trial(const ExperimentConfig& cfg, const PlateModel& model, const Cell& cell, int trial,
                      const EncoderSpec& encoder, const TrialOptions& opt) {
  const uint64_t seed = trial_seed(cfg.master_seed, cell.flap_std, cell.rotation_std, trial);
  TrialResult r;
  try {
    const ConditionPair pair = simulate_pair(cfg, model, cell.flap_std, cell.rotation_std, seed);
    r = evaluate_pair(cfg, pair, encoder, seed, opt);
  } catch (const NumericalError& e) {
    r.ok = false;
    r.failed_stage = e.stage();
    r.message = e.what();
  } catch (const std::exception& e) {
    r.ok = false;
    r.failed_stage = "simulate";
    r.message = e.what();
  }
  r.seed = seed;
  r.trial = trial;
  r.cell = cell_label(cell.flap_std, cell.rotation_std);
  return r;
}

AccuracyCurve aggregate_curve(const std::string& cell, const std::vector<int>& q_list,
                              const std::vector<TrialResult>& trials) {
  AccuracyCurve c;
  c.cell = cell;
  c.q = q_list;
  c.sspoc.assign(q_list.size(), {});
  c.random.assign(q_list.size(), {});
  std::vector<double> fit_q, fit_a;
  for (const TrialResult& t : trials) {
    if (!t.ok) {
      ++c.failed_trials;
      continue;
    }
    c.encoded_full.push_back(t.encoded_full);
    if (t.raw_full) c.raw_full.push_back(*t.raw_full);
    for (const QAccuracy& a : t.sspoc) {
      const auto k = static_cast<std::size_t>(std::find(q_list.begin(), q_list.end(), a.q_requested) - q_list.begin());
      if (k < q_list.size()) c.sspoc[k].push_back(a.accuracy);
      fit_q.push_back(a.q);
      fit_a.push_back(a.accuracy);
    }
    for (const QAccuracy& a : t.random) {
      const auto k = static_cast<std::size_t>(std::find(q_list.begin(), q_list.end(), a.q_requested) - q_list.begin());
      if (k < q_list.size()) c.random[k].push_back(a.accuracy);
    }
  }
  for (std::size_t k = 0; k < q_list.size(); ++k) {
    c.sspoc_mean.push_back(mean(c.sspoc[k]));
    c.sspoc_std.push_back(stddev(c.sspoc[k]));
    c.random_mean.push_back(mean(c.random[k]));
    c.random_std.push_back(stddev(c.random[k]));
  }
  c.fit = fit_sigmoid(fit_q, fit_a);
  return c;
}

namespace {

SelectionRow selection_of(const TrialResult& t, std::size_t k) {
  return SelectionRow{t.cell, t.trial, t.sspoc[k].q, t.sspoc[k].accuracy, t.sspoc_sets[k].indices};
}

}  // namespace

std::vector<HeatmapSet> heatmaps_from_selections(const std::vector<SelectionRow>& rows, int q, int n_sensors,
                                                 std::optional<double> threshold) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const SelectionRow*>> by_cell;
  for (const SelectionRow& r : rows) {
    if (r.q != q) continue;
    if (!by_cell.count(r.cell)) order.push_back(r.cell);
    by_cell[r.cell].push_back(&r);
  }
  auto build = [&](const std::string& cell, const std::vector<const SelectionRow*>& sel) {
    SensorHeatmap h;
    h.cell = cell;
    h.q = q;
    h.frequency.assign(static_cast<std::size_t>(n_sensors), 0.0);
    h.n_trials = static_cast<int>(sel.size());
    for (const SelectionRow* r : sel)
      for (int id : r->sensors) {
        if (id < 0 || id >= n_sensors) throw std::out_of_range("heatmap: sensor index out of range");
        h.frequency[static_cast<std::size_t>(id)] += 1.0;
      }
    if (h.n_trials > 0)
      for (double& f : h.frequency) f /= h.n_trials;
    return h;
  };
  std::vector<HeatmapSet> out;
  for (const std::string& cell : order) {
    const auto& sel = by_cell[cell];
    HeatmapSet s;
    s.all = build(cell, sel);
    if (threshold) {
      std::vector<const SelectionRow*> good, poor;
      for (const SelectionRow* r : sel) (r->accuracy >= *threshold ? good : poor).push_back(r);
      if (!good.empty()) s.good = build(cell + "|good", good);
      if (!poor.empty()) s.poor = build(cell + "|poor", poor);
      s.empty_group = good.empty() || poor.empty();
    }
    out.push_back(std::move(s));
  }
  return out;
}

HeatmapSet aggregate_heatmap(const std::vector<TrialResult>& trials, int q, int n_sensors,
                             std::optional<double> threshold) {
  std::vector<SelectionRow> rows;
  std::string cell;
  for (const TrialResult& t : trials) {
    if (!t.ok) continue;
    cell = t.cell;
    for (std::size_t k = 0; k < t.sspoc.size(); ++k)
      if (t.sspoc[k].q_requested == q) {
        SelectionRow row = selection_of(t, k);
        row.q = q;
        rows.push_back(std::move(row));
      }
  }
  auto maps = heatmaps_from_selections(rows, q, n_sensors, threshold);
  if (maps.empty()) {
    HeatmapSet s;
    s.all.cell = cell;
    s.all.q = q;
    s.all.frequency.assign(static_cast<std::size_t>(n_sensors), 0.0);
    s.empty_group = threshold.has_value();
    return s;
  }
  return maps.front();
}

std::string cell_label(double flap_std, double rotation_std) {
  return "phi=" + format_double(flap_std) + "/theta=" + format_double(rotation_std);
}

namespace {

int thread_count(const ExperimentConfig& cfg) { return cfg.threads > 0 ? cfg.threads : omp_get_max_threads(); }

SweepResult sweep_cells(const ExperimentConfig& cfg, const std::vector<Cell>& cells) {
  const PlateModel model(cfg.plate);
  SweepResult out;
  out.trials.assign(cells.size(), std::vector<TrialResult>(static_cast<std::size_t>(cfg.n_trials)));
  const long n_items = static_cast<long>(cells.size()) * cfg.n_trials;
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(cfg))
  for (long item = 0; item < n_items; ++item) {
    const auto c = static_cast<std::size_t>(item / cfg.n_trials);
    const int t = static_cast<int>(item % cfg.n_trials);
    out.trials[c][static_cast<std::size_t>(t)] = run_trial(cfg, model, cells[c], t, cfg.encoder);
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    out.cells.push_back(cell_label(cells[c].flap_std, cells[c].rotation_std));
    out.curves.push_back(aggregate_curve(out.cells.back(), cfg.q_list, out.trials[c]));
    out.encoders.push_back(cfg.encoder);
  }
  return out;
}

}  // namespace

SweepResult sweep_disturbances(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (double f : cfg.disturbance.flap_levels)
    for (double r : cfg.disturbance.rotation_levels) cells.push_back({f, r});
  return sweep_cells(cfg, cells);
}

SweepResult sweep_cell(const ExperimentConfig& cfg) { return sweep_cells(cfg, {cfg.cell}); }

SweepResult sweep_encoder(const ExperimentConfig& cfg, EncoderGridKind kind) {
  std::vector<EncoderSpec> encoders;
  std::vector<std::string> labels;
  const EncoderGrids& g = cfg.encoder_grids;
  if (kind == EncoderGridKind::Sta) {
    for (double f : g.sta_frequency)
      for (double b : g.sta_width) {
        EncoderSpec e = cfg.encoder;
        e.sta.frequency = f;
        e.sta.width = b;
        encoders.push_back(e);
        labels.push_back("fsta=" + format_double(f) + "/b=" + format_double(b));
      }
  } else {
    for (double c : g.nla_slope)
      for (double d : g.nla_half_max) {
        EncoderSpec e = cfg.encoder;
        e.nla.slope = c;
        e.nla.half_max = d;
        encoders.push_back(e);
        labels.push_back("c=" + format_double(c) + "/d=" + format_double(d));
      }
  }
  for (const EncoderSpec& e : encoders) {
    try {
      e.validate();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("encoder grid: ") + ex.what());
    }
  }

  const PlateModel model(cfg.plate);
  SweepResult out;
  out.encoder_grid = true;
  out.cells = labels;
  out.encoders = encoders;
  out.trials.assign(encoders.size(), std::vector<TrialResult>(static_cast<std::size_t>(cfg.n_trials)));
  const TrialOptions opt{false, false};
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(cfg))
  for (int t = 0; t < cfg.n_trials; ++t) {
    const uint64_t seed = trial_seed(cfg.master_seed, cfg.cell.flap_std, cfg.cell.rotation_std, t);
    std::optional<ConditionPair> pair;
    TrialResult failure;
    try {
      pair = simulate_pair(cfg, model, cfg.cell.flap_std, cfg.cell.rotation_std, seed);
    } catch (const NumericalError& e) {
      failure.ok = false;
      failure.failed_stage = e.stage();
      failure.message = e.what();
    } catch (const std::exception& e) {
      failure.ok = false;
      failure.failed_stage = "simulate";
      failure.message = e.what();
    }
    for (std::size_t k = 0; k < encoders.size(); ++k) {
      TrialResult r = pair ? evaluate_pair(cfg, *pair, encoders[k], seed, opt) : failure;
      r.cell = labels[k];
      r.trial = t;
      r.seed = seed;
      out.trials[k][static_cast<std::size_t>(t)] = std::move(r);
    }
  }
  for (std::size_t k = 0; k < encoders.size(); ++k)
    out.curves.push_back(aggregate_curve(labels[k], cfg.q_list, out.trials[k]));
  return out;
}

namespace {

void write_stamp(std::ostream& os, const TableStamp& s) {
  os << "# config_hash=" << s.config_hash << "\n# master_seed=" << s.master_seed << "\n";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Reads stamp comments and the header; returns column names.
std::vector<std::string> read_preamble(std::istream& is, TableStamp* stamp) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# config_hash=", 0) == 0) {
      if (stamp) stamp->config_hash = line.substr(14);
    } else if (line.rfind("# master_seed=", 0) == 0) {
      if (stamp) stamp->master_seed = std::stoull(line.substr(14));
    } else if (!line.empty() && line[0] == '#') {
      continue;
    } else {
      return split_csv(line);
    }
  }
  throw ConfigError("table has no header row");
}

double parse_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed number '" + s + "' in table");
  }
}

}  // namespace

void write_accuracy_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep) {
  write_stamp(os, stamp);
  os << "cell,trial,q,provenance,accuracy\n";
  for (const auto& trials : sweep.trials) {
    for (const TrialResult& t : trials) {
      if (!t.ok) continue;
      const int n_full = t.n_sensors;
      const std::string prefix = t.cell + "," + std::to_string(t.trial) + ",";
      if (t.raw_full) os << prefix << n_full << ",raw_full," << format_double(*t.raw_full) << "\n";
      os << prefix << n_full << ",encoded_full," << format_double(t.encoded_full) << "\n";
      for (const QAccuracy& a : t.sspoc) os << prefix << a.q << ",sspoc," << format_double(a.accuracy) << "\n";
      for (const QAccuracy& a : t.random) os << prefix << a.q << ",random," << format_double(a.accuracy) << "\n";
    }
  }
}

void write_sigmoids_csv(std::ostream& os, const TableStamp& stamp, const std::vector<AccuracyCurve>& curves) {
  write_stamp(os, stamp);
  os << "cell,c1,c2,c3,q75,residual\n";
  for (const AccuracyCurve& c : curves) {
    const SigmoidParams& p = c.fit.params;
    os << c.cell << ',' << format_double(p.c1) << ',' << format_double(p.c2) << ',' << format_double(p.c3) << ','
       << (c.fit.q75 ? format_double(*c.fit.q75) : std::string("never")) << ',' << format_double(c.fit.residual)
       << "\n";
  }
}

void write_heatmap_csv(std::ostream& os, const TableStamp& stamp, const std::vector<HeatmapSet>& maps,
                       const SensorGrid& grid) {
  write_stamp(os, stamp);
  os << "cell,q,x,y,frequency\n";
  auto emit = [&](const SensorHeatmap& h) {
    for (std::size_t i = 0; i < h.frequency.size(); ++i) {
      const int id = static_cast<int>(i);
      os << h.cell << ',' << h.q << ',' << format_double(grid.x(id)) << ',' << format_double(grid.y(id)) << ','
         << format_double(h.frequency[i]) << "\n";
    }
  };
  for (const HeatmapSet& s : maps) {
    emit(s.all);
    if (s.good) emit(*s.good);
    if (s.poor) emit(*s.poor);
  }
}

void write_selections_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep) {
  write_stamp(os, stamp);
  os << "cell,trial,q,accuracy,sensors\n";
  for (const auto& trials : sweep.trials)
    for (const TrialResult& t : trials) {
      if (!t.ok) continue;
      for (std::size_t k = 0; k < t.sspoc.size(); ++k) {
        os << t.cell << ',' << t.trial << ',' << t.sspoc[k].q << ',' << format_double(t.sspoc[k].accuracy) << ',';
        const auto& idx = t.sspoc_sets[k].indices;
        if (static_cast<int>(idx.size()) == t.sspoc[k].q && t.sspoc_sets[k].provenance == Provenance::Full) {
          os << "all";
        } else {
          for (std::size_t j = 0; j < idx.size(); ++j) os << (j ? ";" : "") << idx[j];
        }
        os << "\n";
      }
    }
}

void write_failures_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep) {
  write_stamp(os, stamp);
  os << "cell,trial,stage,message\n";
  for (const auto& trials : sweep.trials)
    for (const TrialResult& t : trials) {
      if (t.ok) continue;
      std::string msg = t.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      os << t.cell << ',' << t.trial << ',' << t.failed_stage << ',' << msg << "\n";
    }
}

void write_encoder_grid_csv(std::ostream& os, const TableStamp& stamp, const SweepResult& sweep) {
  write_stamp(os, stamp);
  os << "cell,sta_frequency,sta_width,nla_slope,nla_half_max,q75\n";
  for (std::size_t k = 0; k < sweep.curves.size(); ++k) {
    const EncoderSpec& e = sweep.encoders[k];
    const AccuracyCurve& c = sweep.curves[k];
    os << c.cell << ',' << format_double(e.sta.frequency) << ',' << format_double(e.sta.width) << ','
       << format_double(e.nla.slope) << ',' << format_double(e.nla.half_max) << ','
       << (c.fit.q75 ? format_double(*c.fit.q75) : std::string("never")) << "\n";
  }
}

void write_sweep_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const SweepResult& sweep,
                         std::optional<double> threshold) {
  std::filesystem::create_directories(dir);
  const TableStamp stamp{config_hash(cfg), cfg.master_seed};
  auto open = [&](const char* name) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
  };
  {
    auto os = open("accuracy.csv");
    write_accuracy_csv(os, stamp, sweep);
  }
  {
    auto os = open("sigmoids.csv");
    write_sigmoids_csv(os, stamp, sweep.curves);
  }
  {
    auto os = open("selections.csv");
    write_selections_csv(os, stamp, sweep);
  }
  {
    auto os = open("failures.csv");
    write_failures_csv(os, stamp, sweep);
  }
  {
    const SensorGrid grid = SensorGrid::for_plate(cfg.plate);
    std::vector<HeatmapSet> maps;
    for (const auto& trials : sweep.trials) maps.push_back(aggregate_heatmap(trials, cfg.heatmap_q, grid.size(), threshold));
    auto os = open("heatmap.csv");
    write_heatmap_csv(os, stamp, maps, grid);
  }
  if (sweep.encoder_grid) {
    auto os = open("encoder_grid.csv");
    write_encoder_grid_csv(os, stamp, sweep);
  }
  {
    auto os = open("config.resolved.json");
    os << dump_config(cfg) << "\n";
  }
}

std::vector<AccuracyRow> read_accuracy_csv(std::istream& is, TableStamp* stamp) {
  const auto cols = read_preamble(is, stamp);
  if (cols != std::vector<std::string>{"cell", "trial", "q", "provenance", "accuracy"})
    throw ConfigError("accuracy table has an unexpected header");
  std::vector<AccuracyRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 5) throw ConfigError("accuracy table row has " + std::to_string(f.size()) + " fields");
    rows.push_back({f[0], static_cast<int>(parse_number(f[1])), static_cast<int>(parse_number(f[2])), f[3],
                    parse_number(f[4])});
  }
  return rows;
}

std::vector<AccuracyCurve> fit_curves(const std::vector<AccuracyRow>& rows, const std::string& provenance) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> samples;
  for (const AccuracyRow& r : rows) {
    if (r.provenance != provenance) continue;
    if (!samples.count(r.cell)) order.push_back(r.cell);
    samples[r.cell].first.push_back(r.q);
    samples[r.cell].second.push_back(r.accuracy);
  }
  std::vector<AccuracyCurve> out;
  for (const std::string& cell : order) {
    AccuracyCurve c;
    c.cell = cell;
    const auto& [q, a] = samples[cell];
    std::set<int> distinct(q.begin(), q.end());
    c.q.assign(distinct.begin(), distinct.end());
    c.fit = fit_sigmoid(q, a);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SelectionRow> read_selections_csv(std::istream& is, TableStamp* stamp) {
  const auto cols = read_preamble(is, stamp);
  if (cols != std::vector<std::string>{"cell", "trial", "q", "accuracy", "sensors"})
    throw ConfigError("selection table has an unexpected header");
  std::vector<SelectionRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 5) throw ConfigError("selection table row has " + std::to_string(f.size()) + " fields");
    SelectionRow r{f[0], static_cast<int>(parse_number(f[1])), static_cast<int>(parse_number(f[2])),
                   parse_number(f[3]), {}};
    if (f[4] == "all") {
      for (int i = 0; i < r.q; ++i) r.sensors.push_back(i);
    } else {
      std::istringstream ss(f[4]);
      std::string tok;
      while (std::getline(ss, tok, ';')) r.sensors.push_back(static_cast<int>(parse_number(tok)));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace wingsense
