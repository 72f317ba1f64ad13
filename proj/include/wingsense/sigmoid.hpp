#pragma once

// Accuracy-versus-sensor-count sigmoid A(q) = 1/2 + c1 / (1 + exp(-(q - c2) / c3)).

#include <optional>
#include <span>

namespace wingsense {

struct SigmoidParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 1.0;
};

double sigmoid_accuracy(const SigmoidParams& p, double q);

/// Sensor count where the curve crosses 0.75; empty when 1/2 + c1 <= 0.75.
std::optional<double> q_at_75(const SigmoidParams& p);

struct SigmoidFit {
  SigmoidParams params;
  std::optional<double> q75;
  double residual = 0.0;    // RMS over samples
  bool degenerate = false;  // constant accuracies or too few distinct q
};

/// Multi-start Levenberg-Marquardt least squares. Needs >= 4 distinct q.
SigmoidFit fit_sigmoid(std::span<const double> q, std::span<const double> accuracy);

}  // namespace wingsense
