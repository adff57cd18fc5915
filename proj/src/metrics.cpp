// SPDX-License-Identifier: Apache-2.0

#include "diffest/metrics.hpp"

#include <cmath>
#include <limits>

#include "diffest/error.hpp"

namespace diffest::metrics
{

namespace
{

void require_same_shape(std::span<const double> a, std::span<const double> b)
{
  require(a.size() == b.size(), ErrorCode::Structural, "estimate and truth differ in length");
  require(!a.empty(), ErrorCode::Structural, "empty error field");
}

double sum_squares(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
  {
    s += x * x;
  }
  return s;
}

}  // namespace

double l2_norm(std::span<const double> v, double cell_area)
{
  require(!v.empty(), ErrorCode::Structural, "norm of an empty vector");
  require(cell_area > 0.0, ErrorCode::Structural, "cell area must be positive");
  return std::sqrt(sum_squares(v) * cell_area);
}

double effectivity_index(std::span<const double> est, std::span<const double> truth,
                         double cell_area)
{
  require_same_shape(est, truth);
  const double t = l2_norm(truth, cell_area);
  require(t > 0.0, ErrorCode::Degenerate, "true error norm is zero");
  return l2_norm(est, cell_area) / t;
}

double relative_accuracy(std::span<const double> est, std::span<const double> truth,
                         double cell_area)
{
  require_same_shape(est, truth);
  const double t = l2_norm(truth, cell_area);
  require(t > 0.0, ErrorCode::Degenerate, "true error norm is zero");
  double s = 0.0;
  for (std::size_t m = 0; m < est.size(); ++m)
  {
    const double d = est[m] - truth[m];
    s += d * d;
  }
  return std::sqrt(s * cell_area) / t;
}

double averaged_effectivity(std::span<const double> est, std::span<const double> truth)
{
  require_same_shape(est, truth);
  const double t = sum_squares(truth);
  require(t > 0.0, ErrorCode::Degenerate, "true errors are all zero");
  return std::sqrt(sum_squares(est)) / std::sqrt(t);
}

std::pair<double, double> effectivity_bounds(double true_norm, double mean_error_norm)
{
  require(true_norm > 0.0, ErrorCode::Degenerate, "true error norm is zero");
  require(mean_error_norm >= 0.0, ErrorCode::Structural, "norms are non-negative");
  const double r = mean_error_norm / true_norm;
  return {1.0 - r, 1.0 + r};
}

double pearson_correlation(std::span<const double> a, std::span<const double> b)
{
  require_same_shape(a, b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  require(saa > 0.0 && sbb > 0.0, ErrorCode::Degenerate, "correlation of a constant field");
  return sab / std::sqrt(saa * sbb);
}

const ErrorRecord &ErrorReport::record(const std::string &label) const
{
  for (const auto &r : records)
  {
    if (r.label == label)
    {
      return r;
    }
  }
  fail(ErrorCode::Structural, "no record for '" + label + "'");
}

ErrorReport build_report(const std::vector<std::string> &labels, std::span<const double> est,
                         std::span<const double> truth, double cell_area,
                         const std::string &variable, int nx, int ny)
{
  require_same_shape(est, truth);
  require(!labels.empty() && est.size() % labels.size() == 0, ErrorCode::Structural,
          "error block does not split evenly over the labels");
  const std::size_t M = est.size() / labels.size();
  ErrorReport rep;
  rep.variable = variable;
  rep.nx = nx;
  rep.ny = ny;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < labels.size(); ++j)
  {
    const auto e = est.subspan(j * M, M);
    const auto t = truth.subspan(j * M, M);
    ErrorRecord r;
    r.label = labels[j];
    r.est_norm = l2_norm(e, cell_area);
    r.true_norm = l2_norm(t, cell_area);
    if (r.true_norm > 0.0)
    {
      r.effectivity = effectivity_index(e, t, cell_area);
      r.relative_accuracy = relative_accuracy(e, t, cell_area);
    }
    else
    {
      r.degenerate = true;
      r.effectivity = nan;
      r.relative_accuracy = nan;
    }
    rep.records.push_back(r);
  }
  return rep;
}

}  // namespace diffest::metrics
