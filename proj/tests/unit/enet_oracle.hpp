#pragma once

// Exhaustive oracle for the elastic-net objective on 8 sensors: the best
// solution supported on any 3 sensors, found by enumerating supports and
// sign patterns and solving each KKT system directly.

#include "wingsense/types.hpp"

#include <Eigen/LU>

#include <cmath>
#include <vector>

namespace wingsense::testing {

struct SparseOracle {
  Vector s;
  double objective = INFINITY;
  std::vector<int> support;
};

inline double enet_objective(const Matrix& psi, const Vector& w, const Vector& s, double lambda, double alpha) {
  return 0.5 * (w - psi.transpose() * s).squaredNorm() +
         lambda * (alpha * s.lpNorm<1>() + 0.5 * (1 - alpha) * s.squaredNorm());
}

inline SparseOracle best_three_sparse(const Matrix& psi, const Vector& w, double lambda, double alpha) {
  SparseOracle best;
  const int n = static_cast<int>(psi.rows());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const int set[3] = {a, b, c};
        for (int pattern = 0; pattern < 27; ++pattern) {
          std::vector<int> active;
          std::vector<double> sign;
          for (int k = 0, p = pattern; k < 3; ++k, p /= 3)
            if (p % 3 != 1) {
              active.push_back(set[k]);
              sign.push_back(p % 3 == 2 ? 1.0 : -1.0);
            }
          Vector s = Vector::Zero(n);
          if (!active.empty()) {
            const int m = static_cast<int>(active.size());
            Matrix P(m, psi.cols());
            for (int i = 0; i < m; ++i) P.row(i) = psi.row(active[i]);
            Vector rhs = P * w;
            for (int i = 0; i < m; ++i) rhs[i] -= lambda * alpha * sign[i];
            const Vector x = (P * P.transpose() + lambda * (1 - alpha) * Matrix::Identity(m, m)).fullPivLu().solve(rhs);
            bool consistent = true;
            for (int i = 0; i < m; ++i) consistent = consistent && x[i] * sign[i] > 0;
            if (!consistent) continue;
            for (int i = 0; i < m; ++i) s[active[i]] = x[i];
          }
          const double f = enet_objective(psi, w, s, lambda, alpha);
          if (f < best.objective) {
            best.objective = f;
            best.s = s;
            best.support.clear();
            for (int i = 0; i < n; ++i)
              if (s[i] != 0.0) best.support.push_back(i);
          }
        }
      }
  return best;
}

/// Indices of the k largest |s| (lower index first on ties), sorted ascending.
inline std::vector<int> top_k(const Vector& s, std::size_t k) {
  std::vector<int> idx(static_cast<std::size_t>(s.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return std::abs(s[x]) > std::abs(s[y]); });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace wingsense::testing
