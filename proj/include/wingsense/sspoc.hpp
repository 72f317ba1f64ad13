#pragma once

// Sparse sensor placement for classification: truncated SVD, discriminant
// weighted feature selection and an elastic-net sparse solve.

#include "wingsense/classify.hpp"
#include "wingsense/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wingsense {

struct TruncatedBasis {
  Matrix psi;    // sensors x r, orthonormal columns
  Vector sigma;  // nonincreasing
  Vector mean;   // global training mean removed before the decomposition

  int rank() const { return static_cast<int>(sigma.size()); }
};

/// Thin SVD of the mean-centred columns of X, truncated to r modes.
TruncatedBasis svd_truncate(const Matrix& X, int r);

struct FeatureSelection {
  std::vector<int> indices;  // columns of psi, ranked by sigma_i |w_i|
  Matrix psi_rho;
  Vector w_rho;
};

FeatureSelection select_features(const TruncatedBasis& basis, const Vector& w, int rho);

struct ElasticNetOptions {
  double alpha = 0.9;
  double tol = 1e-10;  // on the largest scaled coordinate step, relative to |w|
  int max_sweeps = 200000;
  bool record_objective = false;
};

struct ElasticNetResult {
  Vector s;
  int sweeps = 0;
  double residual = 0.0;  // |w - Psi' s|
  std::vector<double> objective;
};

/// Coordinate descent on
///   1/2 |w - Psi' s|^2 + lambda (alpha |s|_1 + (1 - alpha)/2 |s|^2).
/// `psi` is sensors x features. `warm` (optional) seeds the iteration.
ElasticNetResult solve_elastic_net(const Matrix& psi, const Vector& w, double lambda,
                                   const ElasticNetOptions& opt = {}, const Vector* warm = nullptr);

double elastic_net_objective(const Matrix& psi, const Vector& w, const Vector& s, double lambda, double alpha);

struct SparseOptions {
  ElasticNetOptions net;
  double residual_fraction = 0.05;
  double lambda_high = 1.0;  // relative to |Psi w|_inf
  double lambda_low = 1e-4;
  int lambda_steps = 21;
};

struct SparseSolution {
  Vector s;
  double alpha = 0.9;
  double lambda = 0.0;
  int sweeps = 0;
  double residual = 0.0;
  bool met_target = false;
};

/// Geometric lambda sweep from high to low with warm starts; keeps the
/// largest lambda whose residual is within residual_fraction of |w_rho|.
SparseSolution solve_sparse(const FeatureSelection& sel, const SparseOptions& opt = {});

enum class Provenance : uint8_t { Sspoc, Random, Full };
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct SensorSet {
  std::vector<int> indices;  // grid indices
  Provenance provenance = Provenance::Sspoc;
  uint64_t seed = 0;
  bool truncated = false;  // fewer than the requested count survived

  int q() const { return static_cast<int>(indices.size()); }
};

/// Indices of the q largest |s_i|, ties broken by lower index; entries below
/// 1e-6 max|s| are never taken.
SensorSet extract_sensors(const SparseSolution& sol, int q);
SensorSet extract_sensors(const Vector& s, int q);

SensorSet random_sensors(int q, uint64_t seed, int n_sensors = 1326);
SensorSet all_sensors(int n_sensors = 1326);

double classify_with_sensors(const SensorSet& set, const SplitData& data, const LdaOptions& opt = {});
double classify_with_sensors(const SensorSet& set, const LabeledDataMatrix& data, const LdaOptions& opt = {});

}  // namespace wingsense
