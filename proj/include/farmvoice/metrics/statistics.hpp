#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace fv::metrics {

struct Aggregate {
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample SD (n - 1); absent when count < 2
};

/// Mean and sample standard deviation. Throws Error{InsufficientData} for an
/// empty series, or for fewer than two values when `require_sd` is set.
Aggregate aggregate(std::span<const double> values, bool require_sd = true);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// P(T > t) for Student's t with `df` degrees of freedom.
double student_t_upper_tail(double t, double df);

/// Which direction of the per-participant difference counts as "worse in
/// the field". Differences are oriented so that worse is positive.
enum class Orientation { HigherIsWorse, LowerIsWorse };

Orientation flipped(Orientation o) noexcept;
std::string_view to_string(Orientation o) noexcept;

struct PairedSample {
  double office = 0.0;
  double field = 0.0;
};

inline constexpr double kDefaultAlpha = 0.10;

struct SignificanceResult {
  std::string metric;
  Orientation orientation = Orientation::HigherIsWorse;
  std::size_t n = 0;
  double mean_difference = 0.0;
  double sd_difference = 0.0;
  std::optional<double> t_statistic;  // absent when the differences have no variance
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  double alpha = kDefaultAlpha;
  bool significant = false;
  bool zero_variance = false;
};

/// One-tailed paired t-test on d_i = field_i - office_i (HigherIsWorse) or
/// office_i - field_i (LowerIsWorse); the p-value is the upper tail.
/// Throws Error{InsufficientPairs} for fewer than two pairs.
SignificanceResult paired_t_one_tailed(std::span<const PairedSample> pairs,
                                       Orientation orientation,
                                       double alpha = kDefaultAlpha);

}  // namespace fv::metrics
