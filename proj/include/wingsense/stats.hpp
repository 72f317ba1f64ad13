#pragma once

#include <span>
#include <vector>

namespace wingsense {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> x);

/// Pool-adjacent-violators least-squares fit, nondecreasing or nonincreasing.
std::vector<double> isotonic_fit(std::span<const double> y, bool increasing = true);

/// Mean silhouette of the best two-cluster split of 1-D data (optimal for
/// 1-D k-means, found by scanning the sorted order). 0 when fewer than 3 values
/// or all values are equal.
double two_cluster_silhouette(std::span<const double> x);

/// True when each value exceeds its predecessor by at most tol[i].
bool nonincreasing_within(std::span<const double> values, std::span<const double> tol);

}  // namespace wingsense
