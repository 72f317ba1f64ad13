#include "wingsense/classify.hpp"

#include "wingsense/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wingsense {

namespace {

template <class Field>
LabeledDataMatrix assemble_fields(const Field& flap, const Field& rotation) {
  if (!(flap.grid == rotation.grid) || flap.values.rows() != rotation.values.rows())
    throw std::invalid_argument("assemble: grid mismatch between conditions");
  if (flap.samples() != rotation.samples() || flap.t0_ms != rotation.t0_ms ||
      flap.sample_rate_hz != rotation.sample_rate_hz)
    throw std::invalid_argument("assemble: timebase mismatch between conditions");
  LabeledDataMatrix d;
  const long n = flap.samples();
  d.X.resize(flap.values.rows(), 2 * n);
  d.X.leftCols(n) = flap.values;
  d.X.rightCols(n) = rotation.values;
  d.labels.assign(static_cast<std::size_t>(n), Condition::Flap);
  d.labels.resize(static_cast<std::size_t>(2 * n), Condition::FlapRotation);
  d.sensor_ids.resize(static_cast<std::size_t>(flap.values.rows()));
  for (std::size_t i = 0; i < d.sensor_ids.size(); ++i) d.sensor_ids[i] = static_cast<int>(i);
  return d;
}

struct ClassStats {
  Vector mean_flap, mean_rot;
  long n_flap = 0, n_rot = 0;
};

ClassStats class_means(const Matrix& X, const Labels& labels) {
  if (static_cast<long>(labels.size()) != X.cols()) throw std::invalid_argument("labels do not match columns");
  ClassStats s;
  s.mean_flap = Vector::Zero(X.rows());
  s.mean_rot = Vector::Zero(X.rows());
  for (long j = 0; j < X.cols(); ++j) {
    if (labels[static_cast<std::size_t>(j)] == Condition::Flap) {
      s.mean_flap += X.col(j);
      ++s.n_flap;
    } else {
      s.mean_rot += X.col(j);
      ++s.n_rot;
    }
  }
  if (s.n_flap == 0 || s.n_rot == 0) throw std::invalid_argument("both classes must be present");
  s.mean_flap /= static_cast<double>(s.n_flap);
  s.mean_rot /= static_cast<double>(s.n_rot);
  return s;
}

}  // namespace

LabeledDataMatrix assemble(const StrainField& flap, const StrainField& rotation) {
  return assemble_fields(flap, rotation);
}

LabeledDataMatrix assemble(const EncodedField& flap, const EncodedField& rotation) {
  return assemble_fields(flap, rotation);
}

SplitData split(const LabeledDataMatrix& data, double train_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw std::invalid_argument("split: train_frac must lie in (0, 1)");
  std::vector<long> cols_f, cols_r;
  for (long j = 0; j < data.snapshots(); ++j)
    (data.labels[static_cast<std::size_t>(j)] == Condition::Flap ? cols_f : cols_r).push_back(j);
  if (cols_f.size() < 10 || cols_r.size() < 10) throw std::invalid_argument("split: each class needs >= 10 snapshots");

  auto n_train = [&](std::size_t n) {
    return static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n) + 1e-9));
  };
  const std::size_t tf = n_train(cols_f.size()), tr = n_train(cols_r.size());
  if (tf == 0 || tr == 0 || tf == cols_f.size() || tr == cols_r.size())
    throw std::invalid_argument("split: too few snapshots for a train/test split");

  SplitData s;
  s.sensor_ids = data.sensor_ids;
  s.X_train.resize(data.sensors(), static_cast<long>(tf + tr));
  s.X_test.resize(data.sensors(), static_cast<long>(cols_f.size() - tf + cols_r.size() - tr));
  long a = 0, b = 0;
  auto take = [&](const std::vector<long>& cols, std::size_t n_tr, Condition label) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k < n_tr) {
        s.X_train.col(a++) = data.X.col(cols[k]);
        s.train_labels.push_back(label);
      } else {
        s.X_test.col(b++) = data.X.col(cols[k]);
        s.test_labels.push_back(label);
      }
    }
  };
  take(cols_f, tf, Condition::Flap);
  take(cols_r, tr, Condition::FlapRotation);
  return s;
}

SplitData restrict_rows(const SplitData& data, std::span<const int> rows) {
  SplitData s;
  const auto n = static_cast<long>(rows.size());
  s.X_train.resize(n, data.X_train.cols());
  s.X_test.resize(n, data.X_test.cols());
  for (long i = 0; i < n; ++i) {
    const int r = rows[static_cast<std::size_t>(i)];
    if (r < 0 || r >= data.X_train.rows()) throw std::out_of_range("restrict_rows: row out of range");
    s.X_train.row(i) = data.X_train.row(r);
    s.X_test.row(i) = data.X_test.row(r);
    s.sensor_ids.push_back(data.sensor_ids[static_cast<std::size_t>(r)]);
  }
  s.train_labels = data.train_labels;
  s.test_labels = data.test_labels;
  return s;
}

Condition LdaModel::predict(const Eigen::Ref<const Vector>& x) const {
  const bool above = w.dot(x) > threshold;
  const Condition lower = upper_class == Condition::Flap ? Condition::FlapRotation : Condition::Flap;
  return above ? upper_class : lower;
}

LdaModel fit_lda(const Matrix& X, const Labels& labels, const LdaOptions& opt) {
  const long n = X.rows();
  if (X.cols() < n + 2) throw std::invalid_argument("fit_lda: need at least q + 2 training snapshots");
  const ClassStats st = class_means(X, labels);

  // Within-class scatter from class-centred columns.
  Matrix centred = X;
  for (long j = 0; j < X.cols(); ++j)
    centred.col(j) -= labels[static_cast<std::size_t>(j)] == Condition::Flap ? st.mean_flap : st.mean_rot;
  Matrix sw = Matrix::Zero(n, n);
  sw.selfadjointView<Eigen::Lower>().rankUpdate(centred);
  sw = sw.selfadjointView<Eigen::Lower>();
  centred.resize(0, 0);

  const double tr = sw.trace();
  const double ridge = tr > 0.0 ? opt.ridge * tr / static_cast<double>(n) : opt.ridge;
  sw.diagonal().array() += ridge;

  Eigen::LLT<Matrix> llt(sw);
  if (llt.info() != Eigen::Success) {
    const double rcond = Eigen::LDLT<Matrix>(sw).rcond();
    char buf[96];
    std::snprintf(buf, sizeof buf, "regularized S_W is not positive definite (rcond ~ %.3g)", rcond);
    throw NumericalError("fit_lda", buf);
  }

  // S_B = (n_f n_r / N) d d' has rank one, so the symmetrized problem
  // L^-1 S_B L^-T v = lambda v has leading eigenvector v = L^-1 d / |L^-1 d|.
  const Vector d = st.mean_rot - st.mean_flap;
  const Vector u = llt.matrixL().solve(d);
  LdaModel m;
  if (u.norm() == 0.0 || !u.allFinite()) {
    m.w = Vector::Zero(n);
    m.w[0] = 1.0;
  } else {
    m.w = llt.matrixU().solve(u / u.norm());
    m.w.normalize();
  }
  if (!m.w.allFinite()) throw NumericalError("fit_lda", "non-finite discriminant");

  const Vector eta = m.w.transpose() * X;
  m.threshold = gaussian_threshold({eta.data(), static_cast<std::size_t>(eta.size())}, labels);
  m.upper_class = m.w.dot(st.mean_rot) >= m.w.dot(st.mean_flap) ? Condition::FlapRotation : Condition::Flap;
  return m;
}

LdaModel fit_lda(const SplitData& data, const LdaOptions& opt) {
  LdaModel m = fit_lda(data.X_train, data.train_labels, opt);
  m.sensor_ids = data.sensor_ids;
  return m;
}

double gaussian_threshold(std::span<const double> eta, const Labels& labels) {
  if (eta.size() != labels.size()) throw std::invalid_argument("gaussian_threshold: size mismatch");
  double sum[2] = {0, 0}, sq[2] = {0, 0};
  long cnt[2] = {0, 0};
  for (std::size_t k = 0; k < eta.size(); ++k) {
    const int c = static_cast<int>(labels[k]);
    sum[c] += eta[k];
    ++cnt[c];
  }
  if (cnt[0] < 2 || cnt[1] < 2) throw std::invalid_argument("gaussian_threshold: each class needs >= 2 samples");
  const double mu[2] = {sum[0] / cnt[0], sum[1] / cnt[1]};
  for (std::size_t k = 0; k < eta.size(); ++k) {
    const int c = static_cast<int>(labels[k]);
    sq[c] += (eta[k] - mu[c]) * (eta[k] - mu[c]);
  }
  const double s1 = std::sqrt(sq[0] / (cnt[0] - 1)), s2 = std::sqrt(sq[1] / (cnt[1] - 1));
  const double mid = 0.5 * (mu[0] + mu[1]);
  if (!(s1 > 0.0) || !(s2 > 0.0)) return mid;

  // log G1 = log G2  <=>  a x^2 + b x + c = 0
  const double v1 = s1 * s1, v2 = s2 * s2;
  const double a = 0.5 / v1 - 0.5 / v2;
  const double b = mu[1] / v2 - mu[0] / v1;
  const double c = 0.5 * mu[0] * mu[0] / v1 - 0.5 * mu[1] * mu[1] / v2 + std::log(s1 / s2);
  const double lo = std::min(mu[0], mu[1]), hi = std::max(mu[0], mu[1]);

  double roots[2];
  int n_roots = 0;
  const double scale = std::max(0.5 / v1, 0.5 / v2);
  if (std::abs(a) <= 1e-12 * scale) {
    if (b != 0.0) roots[n_roots++] = -c / b;
  } else {
    const double disc = b * b - 4 * a * c;
    if (disc >= 0.0) {
      const double sq_disc = std::sqrt(disc);
      // Numerically stable pair.
      const double qv = -0.5 * (b + std::copysign(sq_disc, b));
      roots[n_roots++] = qv / a;
      if (qv != 0.0) roots[n_roots++] = c / qv;
    }
  }
  double best = mid;
  bool found = false;
  for (int k = 0; k < n_roots; ++k) {
    if (roots[k] > lo && roots[k] < hi && (!found || std::abs(roots[k] - mid) < std::abs(best - mid))) {
      best = roots[k];
      found = true;
    }
  }
  return best;
}

double evaluate(const LdaModel& model, const Matrix& X_test, const Labels& labels) {
  if (X_test.rows() != model.w.size()) throw std::invalid_argument("evaluate: dimension mismatch");
  if (static_cast<long>(labels.size()) != X_test.cols()) throw std::invalid_argument("evaluate: label mismatch");
  if (labels.empty()) throw std::invalid_argument("evaluate: empty test set");
  const Vector eta = model.w.transpose() * X_test;
  const Condition lower = model.upper_class == Condition::Flap ? Condition::FlapRotation : Condition::Flap;
  long correct = 0;
  for (long j = 0; j < eta.size(); ++j) {
    const Condition pred = eta[j] > model.threshold ? model.upper_class : lower;
    correct += pred == labels[static_cast<std::size_t>(j)];
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

void write_model(std::ostream& os, const LdaModel& m) {
  char buf[64];
  os << "# wingsense lda model v1\n";
  os << "n " << m.w.size() << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", m.threshold);
  os << "threshold " << buf << "\n";
  os << "upper_class " << (m.upper_class == Condition::Flap ? "flap" : "flap+rotation") << "\n";
  os << "sensor_ids";
  for (int id : m.sensor_ids) os << ' ' << id;
  os << "\nw";
  for (long i = 0; i < m.w.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", m.w[i]);
    os << ' ' << buf;
  }
  os << "\n";
}

LdaModel read_model(std::istream& is) {
  LdaModel m;
  std::string line;
  long n = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "n") {
      ls >> n;
    } else if (key == "threshold") {
      std::string v;
      ls >> v;
      m.threshold = std::stod(v);
    } else if (key == "upper_class") {
      std::string v;
      ls >> v;
      m.upper_class = v == "flap" ? Condition::Flap : Condition::FlapRotation;
    } else if (key == "sensor_ids") {
      int id;
      while (ls >> id) m.sensor_ids.push_back(id);
    } else if (key == "w") {
      std::vector<double> w;
      std::string v;
      while (ls >> v) w.push_back(std::stod(v));
      m.w = Eigen::Map<Vector>(w.data(), static_cast<long>(w.size()));
    } else {
      throw ConfigError("read_model: unknown key '" + key + "'");
    }
  }
  if (n < 0 || m.w.size() != n) throw ConfigError("read_model: malformed model file");
  return m;
}

}  // namespace wingsense
