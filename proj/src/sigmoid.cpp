#include "wingsense/sigmoid.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

namespace wingsense {

double sigmoid_accuracy(const SigmoidParams& p, double q) {
  return 0.5 + p.c1 / (1.0 + std::exp(-(q - p.c2) / p.c3));
}

std::optional<double> q_at_75(const SigmoidParams& p) {
  if (!(p.c1 > 0.25) || !(p.c3 != 0.0)) return std::nullopt;
  return p.c2 - p.c3 * std::log(p.c1 / 0.25 - 1.0);
}

namespace {

// Parameters: c1, c2, log c3.
struct Residuals {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const double> q, acc;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(q.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const SigmoidParams p{x[0], x[1], std::exp(x[2])};
    for (std::size_t i = 0; i < q.size(); ++i) f[static_cast<long>(i)] = sigmoid_accuracy(p, q[i]) - acc[i];
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    const double c3 = std::exp(x[2]);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double z = (q[i] - x[1]) / c3;
      const double e = std::exp(-z);
      const double g = 1.0 / (1.0 + e);
      const double dg = std::isfinite(e) ? e * g * g : 0.0;  // dg/dz
      const auto r = static_cast<long>(i);
      j(r, 0) = g;
      j(r, 1) = -x[0] * dg / c3;
      j(r, 2) = -x[0] * dg * z;
    }
    return 0;
  }
};

double rms(const Residuals& fn, const Eigen::VectorXd& x) {
  Eigen::VectorXd f(fn.values());
  fn(x, f);
  return std::sqrt(f.squaredNorm() / f.size());
}

}  // namespace

SigmoidFit fit_sigmoid(std::span<const double> q, std::span<const double> accuracy) {
  if (q.size() != accuracy.size()) throw std::invalid_argument("fit_sigmoid: size mismatch");
  SigmoidFit out;
  const std::set<double> distinct(q.begin(), q.end());
  const auto [amin, amax] = std::minmax_element(accuracy.begin(), accuracy.end());
  if (distinct.size() < 4 || *amax - *amin < 1e-12) {
    double mean = 0.0;
    for (double a : accuracy) mean += a;
    mean = accuracy.empty() ? 0.5 : mean / static_cast<double>(accuracy.size());
    out.params = {mean - 0.5, distinct.empty() ? 0.0 : *distinct.begin(), 1.0};
    out.degenerate = true;
    out.q75 = std::nullopt;
    return out;
  }

  Residuals fn{q, accuracy};
  const double q_lo = *distinct.begin(), q_hi = *distinct.rbegin();
  std::vector<double> c2_starts, c3_starts;
  for (double frac : {0.0, 0.05, 0.15, 0.35, 0.6}) c2_starts.push_back(q_lo + frac * (q_hi - q_lo));
  for (double v : distinct) c2_starts.push_back(v);
  for (double c3 : {0.3, 1.0, 3.0, 10.0}) c3_starts.push_back(c3);
  const double c1_start = std::max(0.05, *amax - 0.5);

  Eigen::VectorXd best;
  double best_rms = std::numeric_limits<double>::infinity();
  for (double c2 : c2_starts) {
    for (double c3 : c3_starts) {
      Eigen::VectorXd x(3);
      x << c1_start, c2, std::log(c3);
      Eigen::LevenbergMarquardt<Residuals> lm(fn);
      lm.parameters.xtol = 1e-14;
      lm.parameters.ftol = 1e-14;
      lm.parameters.maxfev = 2000;
      lm.minimize(x);
      if (!x.allFinite()) continue;
      const double r = rms(fn, x);
      if (r < best_rms) {
        best_rms = r;
        best = x;
      }
    }
  }
  if (best.size() == 0) {
    out.degenerate = true;
    return out;
  }
  out.params = {best[0], best[1], std::exp(best[2])};
  out.residual = best_rms;
  out.q75 = q_at_75(out.params);
  return out;
}

}  // namespace wingsense
