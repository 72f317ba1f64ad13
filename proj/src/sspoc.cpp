#include "wingsense/sspoc.hpp"

#include "wingsense/errors.hpp"
#include "wingsense/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace wingsense {

TruncatedBasis svd_truncate(const Matrix& X, int r) {
  const long n = X.rows(), m = X.cols();
  if (r < 1 || r > std::min(n, m)) throw std::invalid_argument("svd_truncate: rank out of range");
  TruncatedBasis b;
  b.mean = X.rowwise().mean();
  Matrix centred = X.colwise() - b.mean;

  // Left singular vectors from whichever Gram matrix is smaller.
  Matrix u_full;
  Vector s2;
  if (n <= m) {
    Matrix g = Matrix::Zero(n, n);
    g.selfadjointView<Eigen::Lower>().rankUpdate(centred);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.selfadjointView<Eigen::Lower>());
    if (es.info() != Eigen::Success) throw NumericalError("svd_truncate", "eigensolver failed");
    s2 = es.eigenvalues().reverse();
    u_full = es.eigenvectors().rowwise().reverse();
  } else {
    Matrix g = Matrix::Zero(m, m);
    g.selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.selfadjointView<Eigen::Lower>());
    if (es.info() != Eigen::Success) throw NumericalError("svd_truncate", "eigensolver failed");
    s2 = es.eigenvalues().reverse();
    const Matrix v = es.eigenvectors().rowwise().reverse().leftCols(r);
    u_full = centred * v;
    for (int k = 0; k < r; ++k) {
      const double nk = u_full.col(k).norm();
      if (nk > 0.0) u_full.col(k) /= nk;
    }
  }
  b.psi = u_full.leftCols(r);
  b.sigma = s2.head(r).cwiseMax(0.0).cwiseSqrt();

  // Fix signs: largest-magnitude entry of each mode positive.
  for (int k = 0; k < r; ++k) {
    Eigen::Index imax;
    b.psi.col(k).cwiseAbs().maxCoeff(&imax);
    if (b.psi(imax, k) < 0.0) b.psi.col(k) *= -1.0;
  }
  return b;
}

FeatureSelection select_features(const TruncatedBasis& basis, const Vector& w, int rho) {
  const int r = basis.rank();
  if (w.size() != r) throw std::invalid_argument("select_features: w length must equal rank");
  if (rho < 1 || rho > r) throw std::invalid_argument("select_features: rho must lie in [1, r]");
  std::vector<int> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  const Vector score = basis.sigma.cwiseProduct(w.cwiseAbs());
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
  FeatureSelection sel;
  sel.indices.assign(order.begin(), order.begin() + rho);
  sel.psi_rho.resize(basis.psi.rows(), rho);
  sel.w_rho.resize(rho);
  for (int k = 0; k < rho; ++k) {
    sel.psi_rho.col(k) = basis.psi.col(sel.indices[static_cast<std::size_t>(k)]);
    sel.w_rho[k] = w[sel.indices[static_cast<std::size_t>(k)]];
  }
  return sel;
}

double elastic_net_objective(const Matrix& psi, const Vector& w, const Vector& s, double lambda, double alpha) {
  const Vector res = w - psi.transpose() * s;
  return 0.5 * res.squaredNorm() + lambda * (alpha * s.lpNorm<1>() + 0.5 * (1.0 - alpha) * s.squaredNorm());
}

ElasticNetResult solve_elastic_net(const Matrix& psi, const Vector& w, double lambda, const ElasticNetOptions& opt,
                                   const Vector* warm) {
  if (psi.cols() != w.size()) throw std::invalid_argument("solve_elastic_net: dimension mismatch");
  if (!(lambda >= 0.0) || !(opt.alpha >= 0.0 && opt.alpha <= 1.0))
    throw std::invalid_argument("solve_elastic_net: need lambda >= 0 and alpha in [0, 1]");
  const long n = psi.rows();

  // Row-major copy: coordinate i touches row i of psi.
  const RowMatrix a = psi;
  const Vector row_sq = a.rowwise().squaredNorm();
  const double l1 = lambda * opt.alpha;
  const double l2 = lambda * (1.0 - opt.alpha);

  ElasticNetResult out;
  out.s = warm ? *warm : Vector::Zero(n);
  if (out.s.size() != n) throw std::invalid_argument("solve_elastic_net: warm start has wrong length");
  Vector res = w - psi.transpose() * out.s;
  const double scale = std::max(w.norm(), 1e-300);
  if (opt.record_objective) out.objective.push_back(elastic_net_objective(psi, w, out.s, lambda, opt.alpha));

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double max_step = 0.0;
    for (long i = 0; i < n; ++i) {
      const double denom = row_sq[i] + l2;
      if (denom <= 0.0) continue;
      const double old = out.s[i];
      const double z = a.row(i).dot(res) + row_sq[i] * old;
      const double mag = std::abs(z) - l1;
      const double next = mag > 0.0 ? std::copysign(mag, z) / denom : 0.0;
      const double delta = next - old;
      if (delta != 0.0) {
        res.noalias() -= delta * a.row(i).transpose();
        out.s[i] = next;
        max_step = std::max(max_step, std::abs(delta) * std::sqrt(row_sq[i]));
      }
    }
    out.sweeps = sweep + 1;
    if (opt.record_objective) out.objective.push_back(elastic_net_objective(psi, w, out.s, lambda, opt.alpha));
    if (!out.s.allFinite()) throw NumericalError("solve_sparse", "non-finite coefficients");
    if (max_step <= opt.tol * scale) {
      out.residual = (w - psi.transpose() * out.s).norm();
      return out;
    }
  }
  out.residual = (w - psi.transpose() * out.s).norm();
  char buf[128];
  std::snprintf(buf, sizeof buf, "elastic net did not converge in %d sweeps (residual %.3g)", opt.max_sweeps,
                out.residual);
  throw NumericalError("solve_sparse", buf);
}

SparseSolution solve_sparse(const FeatureSelection& sel, const SparseOptions& opt) {
  if (sel.psi_rho.cols() != sel.w_rho.size() || sel.w_rho.size() == 0)
    throw std::invalid_argument("solve_sparse: invalid selection");
  if (opt.lambda_steps < 1 || !(opt.lambda_low > 0.0) || !(opt.lambda_high >= opt.lambda_low))
    throw std::invalid_argument("solve_sparse: invalid lambda grid");
  const double lam_max = (sel.psi_rho * sel.w_rho).lpNorm<Eigen::Infinity>();
  const double target = opt.residual_fraction * sel.w_rho.norm();

  SparseSolution best;
  best.alpha = opt.net.alpha;
  Vector warm = Vector::Zero(sel.psi_rho.rows());
  for (int k = 0; k < opt.lambda_steps; ++k) {
    const double frac = opt.lambda_steps == 1 ? 0.0 : static_cast<double>(k) / (opt.lambda_steps - 1);
    const double lambda = lam_max * opt.lambda_high * std::pow(opt.lambda_low / opt.lambda_high, frac);
    ElasticNetResult r = solve_elastic_net(sel.psi_rho, sel.w_rho, lambda, opt.net, &warm);
    warm = r.s;
    best.s = std::move(r.s);
    best.lambda = lambda;
    best.sweeps += r.sweeps;
    best.residual = r.residual;
    if (r.residual <= target) {
      best.met_target = true;
      break;
    }
  }
  return best;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Sspoc: return "sspoc";
    case Provenance::Random: return "random";
    case Provenance::Full: return "full";
  }
  return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "sspoc") return Provenance::Sspoc;
  if (s == "random") return Provenance::Random;
  if (s == "full") return Provenance::Full;
  throw std::invalid_argument("unknown provenance '" + s + "'");
}

SensorSet extract_sensors(const Vector& s, int q) {
  if (q < 1) throw std::invalid_argument("extract_sensors: q must be >= 1");
  const double smax = s.cwiseAbs().maxCoeff();
  if (!(smax > 0.0)) throw NumericalError("extract_sensors", "all-zero sparse solution");
  std::vector<int> order;
  for (long i = 0; i < s.size(); ++i)
    if (std::abs(s[i]) >= 1e-6 * smax) order.push_back(static_cast<int>(i));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(s[a]) > std::abs(s[b]); });
  SensorSet set;
  set.provenance = Provenance::Sspoc;
  set.truncated = static_cast<int>(order.size()) < q;
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(q)));
  set.indices = std::move(order);
  return set;
}

SensorSet extract_sensors(const SparseSolution& sol, int q) { return extract_sensors(sol.s, q); }

SensorSet random_sensors(int q, uint64_t seed, int n_sensors) {
  if (q < 1 || q > n_sensors) throw std::invalid_argument("random_sensors: q must lie in [1, n_sensors]");
  // Partial Fisher-Yates.
  std::vector<int> pool(static_cast<std::size_t>(n_sensors));
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  for (int k = 0; k < q; ++k) {
    const auto j = k + static_cast<int>(rng.below(static_cast<uint64_t>(n_sensors - k)));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
  }
  SensorSet set;
  set.indices.assign(pool.begin(), pool.begin() + q);
  set.provenance = Provenance::Random;
  set.seed = seed;
  return set;
}

SensorSet all_sensors(int n_sensors) {
  SensorSet set;
  set.indices.resize(static_cast<std::size_t>(n_sensors));
  std::iota(set.indices.begin(), set.indices.end(), 0);
  set.provenance = Provenance::Full;
  return set;
}

double classify_with_sensors(const SensorSet& set, const SplitData& data, const LdaOptions& opt) {
  if (set.indices.empty()) throw std::invalid_argument("classify_with_sensors: empty sensor set");
  std::unordered_map<int, int> row_of;
  for (std::size_t k = 0; k < data.sensor_ids.size(); ++k) row_of[data.sensor_ids[k]] = static_cast<int>(k);
  std::vector<int> rows;
  rows.reserve(set.indices.size());
  for (int id : set.indices) {
    auto it = row_of.find(id);
    if (it == row_of.end()) throw std::invalid_argument("classify_with_sensors: sensor not in data");
    rows.push_back(it->second);
  }
  const SplitData sub = restrict_rows(data, rows);
  const LdaModel model = fit_lda(sub, opt);
  return evaluate(model, sub.X_test, sub.test_labels);
}

double classify_with_sensors(const SensorSet& set, const LabeledDataMatrix& data, const LdaOptions& opt) {
  return classify_with_sensors(set, split(data), opt);
}

}  // namespace wingsense
