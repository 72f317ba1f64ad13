#include "wingsense/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wingsense {

double mean(std::span<const double> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

std::vector<double> isotonic_fit(std::span<const double> y, bool increasing) {
  struct Block {
    double sum;
    int n;
    double value() const { return sum / n; }
  };
  std::vector<Block> blocks;
  const double sign = increasing ? 1.0 : -1.0;
  for (double v : y) {
    blocks.push_back({sign * v, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].value() > blocks.back().value()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].n += blocks.back().n;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), static_cast<std::size_t>(b.n), sign * b.value());
  return out;
}

double two_cluster_silhouette(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  if (s.back() - s.front() <= 0.0) return 0.0;

  // Best split by within-cluster sum of squares.
  std::vector<double> prefix(n + 1, 0.0), prefix2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + s[i];
    prefix2[i + 1] = prefix2[i] + s[i] * s[i];
  }
  auto sse = [&](std::size_t a, std::size_t b) {
    const double m = static_cast<double>(b - a);
    const double sum = prefix[b] - prefix[a];
    return prefix2[b] - prefix2[a] - sum * sum / m;
  };
  std::size_t cut = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    const double v = sse(0, k) + sse(k, n);
    if (v < best) {
      best = v;
      cut = k;
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = i < cut;
    const std::size_t own_lo = first ? 0 : cut, own_hi = first ? cut : n;
    const std::size_t oth_lo = first ? cut : 0, oth_hi = first ? n : cut;
    const std::size_t own_n = own_hi - own_lo;
    if (own_n <= 1) continue;  // singleton silhouette is 0
    double a = 0.0, b = 0.0;
    for (std::size_t j = own_lo; j < own_hi; ++j) a += std::abs(s[i] - s[j]);
    for (std::size_t j = oth_lo; j < oth_hi; ++j) b += std::abs(s[i] - s[j]);
    a /= static_cast<double>(own_n - 1);
    b /= static_cast<double>(oth_hi - oth_lo);
    const double d = std::max(a, b);
    total += d > 0.0 ? (b - a) / d : 0.0;
  }
  return total / static_cast<double>(n);
}

bool nonincreasing_within(std::span<const double> values, std::span<const double> tol) {
  if (tol.size() != values.size()) throw std::invalid_argument("nonincreasing_within: size mismatch");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] - values[i - 1] > tol[i]) return false;
  return true;
}

}  // namespace wingsense
