#include "farmvoice/metrics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "farmvoice/core/error.hpp"

namespace fv::metrics {

Aggregate aggregate(std::span<const double> values, bool require_sd) {
  if (values.empty() || (require_sd && values.size() < 2)) {
    throw Error(ErrorCode::InsufficientData,
                "need at least " + std::string(require_sd ? "2" : "1") + " values, got " +
                    std::to_string(values.size()));
  }
  // Welford's running update.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : values) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  Aggregate out;
  out.count = n;
  out.mean = mean;
  if (n >= 2) out.sd = std::sqrt(std::max(0.0, m2 / static_cast<double>(n - 1)));
  return out;
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "incomplete beta: a, b > 0 and 0 <= x <= 1 required");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a + 1) / (a + b + 2); use the
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_upper_tail(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t > 0.0 ? tail : 1.0 - tail;
}

Orientation flipped(Orientation o) noexcept {
  return o == Orientation::HigherIsWorse ? Orientation::LowerIsWorse : Orientation::HigherIsWorse;
}

std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::HigherIsWorse ? "higher_is_worse" : "lower_is_worse";
}

SignificanceResult paired_t_one_tailed(std::span<const PairedSample> pairs,
                                       Orientation orientation, double alpha) {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::InsufficientPairs,
                "paired t-test needs at least 2 pairs, got " + std::to_string(pairs.size()));
  }
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& p : pairs) {
    diffs.push_back(orientation == Orientation::HigherIsWorse ? p.field - p.office
                                                              : p.office - p.field);
  }
  const Aggregate agg = aggregate(diffs);

  SignificanceResult r;
  r.orientation = orientation;
  r.n = diffs.size();
  r.mean_difference = agg.mean;
  r.sd_difference = *agg.sd;
  r.degrees_of_freedom = r.n - 1;
  r.alpha = alpha;

  const bool constant =
      std::all_of(diffs.begin(), diffs.end(), [&](double d) { return d == diffs.front(); });
  if (constant) {
    r.zero_variance = true;
    r.sd_difference = 0.0;
    r.mean_difference = diffs.front();
    r.p_value = diffs.front() > 0.0 ? 0.0 : 1.0;
  } else {
    const double t = agg.mean / (r.sd_difference / std::sqrt(static_cast<double>(r.n)));
    r.t_statistic = t;
    r.p_value = student_t_upper_tail(t, static_cast<double>(r.degrees_of_freedom));
  }
  r.significant = r.p_value < alpha;
  return r;
}

}  // namespace fv::metrics
