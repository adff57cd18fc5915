// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_METRICS_HPP
#define DIFFEST_METRICS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace diffest::metrics
{

// sqrt(sum v^2 * cell_area); the weight cancels in every ratio below.
double l2_norm(std::span<const double> v, double cell_area = 1.0);

// |est| / |truth|
double effectivity_index(std::span<const double> est, std::span<const double> truth,
                         double cell_area = 1.0);

// |est - truth| / |truth|
double relative_accuracy(std::span<const double> est, std::span<const double> truth,
                         double cell_area = 1.0);

// Pooled over all solutions and points.
double averaged_effectivity(std::span<const double> est, std::span<const double> truth);

// Range [1 - r, 1 + r], r = |mean error| / |true error of solution j|, that the index of
// a normal-solution estimate must fall into.
std::pair<double, double> effectivity_bounds(double true_norm, double mean_error_norm);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

struct ErrorRecord
{
  std::string label;
  double effectivity = 0.0;
  double relative_accuracy = 0.0;
  double est_norm = 0.0;
  double true_norm = 0.0;
  bool degenerate = false;  // true norm is zero; indices are NaN
};

struct ErrorReport
{
  std::string variable;
  int nx = 0;
  int ny = 0;
  std::vector<ErrorRecord> records;

  const ErrorRecord &record(const std::string &label) const;
};

// est and truth are n x M blocks (solution-major), one record per label.
ErrorReport build_report(const std::vector<std::string> &labels, std::span<const double> est,
                         std::span<const double> truth, double cell_area,
                         const std::string &variable, int nx, int ny);

}  // namespace diffest::metrics

#endif
