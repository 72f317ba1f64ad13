#pragma once

// Two-class linear discriminant analysis on sensors x snapshots data.

#include "wingsense/encode.hpp"
#include "wingsense/plate.hpp"
#include "wingsense/types.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace wingsense {

struct LabeledDataMatrix {
  Matrix X;  // sensors x snapshots; class Flap columns first, then FlapRotation
  Labels labels;
  std::vector<int> sensor_ids;

  long sensors() const { return X.rows(); }
  long snapshots() const { return X.cols(); }
};

LabeledDataMatrix assemble(const StrainField& flap, const StrainField& rotation);
LabeledDataMatrix assemble(const EncodedField& flap, const EncodedField& rotation);

struct SplitData {
  Matrix X_train;
  Labels train_labels;
  Matrix X_test;
  Labels test_labels;
  std::vector<int> sensor_ids;
};

/// Chronological per-class split: the first `train_frac` of each class's
/// snapshots train, the remainder (a later epoch) validates.
SplitData split(const LabeledDataMatrix& data, double train_frac = 0.9);

/// Keeps only the rows at `rows` (positions into sensor_ids).
SplitData restrict_rows(const SplitData& data, std::span<const int> rows);

struct LdaModel {
  Vector w;  // unit norm
  double threshold = 0.0;
  /// Class predicted when w'x > threshold.
  Condition upper_class = Condition::FlapRotation;
  std::vector<int> sensor_ids;

  Condition predict(const Eigen::Ref<const Vector>& x) const;
};

struct LdaOptions {
  double ridge = 1e-8;  // relative to trace(S_W) / n
};

LdaModel fit_lda(const Matrix& X_train, const Labels& labels, const LdaOptions& opt = {});
LdaModel fit_lda(const SplitData& data, const LdaOptions& opt = {});

/// Intersection of the two class Gaussians lying between their means, or the
/// midpoint of the means when there is none (or a class has zero spread).
double gaussian_threshold(std::span<const double> eta, const Labels& labels);

double evaluate(const LdaModel& model, const Matrix& X_test, const Labels& labels);

void write_model(std::ostream& os, const LdaModel& model);
LdaModel read_model(std::istream& is);

}  // namespace wingsense
