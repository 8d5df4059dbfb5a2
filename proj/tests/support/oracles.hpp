#pragma once

// Reference implementations used only by tests. They deliberately take a
// different route than the library code: full matrices, exhaustive
// enumeration, two-pass statistics and Boost.Math distributions.

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

/// Full (n+1)x(m+1) edit-distance matrix over code units of u32 strings.
inline std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> m(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) m[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) m[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      m[i][j] = std::min({m[i - 1][j] + 1, m[i][j - 1] + 1, m[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return m[a.size()][b.size()];
}

/// Plain recursion without memoization; only for very short inputs.
inline std::size_t edit_distance_recursive(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::string ra = a.substr(1), rb = b.substr(1);
  if (a[0] == b[0]) return edit_distance_recursive(ra, rb);
  return 1 + std::min({edit_distance_recursive(ra, b), edit_distance_recursive(a, rb), edit_distance_recursive(ra, rb)});
}

using Triple = std::tuple<std::size_t, std::size_t, std::size_t>;  // S, D, I

/// Every (S, D, I) reachable by some edit script turning ref into hyp,
/// where matching equal words costs nothing.
inline std::set<Triple> all_edit_scripts(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  std::map<std::pair<std::size_t, std::size_t>, std::set<Triple>> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> const std::set<Triple>& {
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::set<Triple> out;
    if (i == ref.size() && j == hyp.size()) {
      out.insert({0, 0, 0});
    } else {
      if (i < ref.size() && j < hyp.size()) {
        const std::size_t sub = ref[i] == hyp[j] ? 0 : 1;
        for (auto [s, d, n] : self(self, i + 1, j + 1)) out.insert({s + sub, d, n});
      }
      if (i < ref.size()) {
        for (auto [s, d, n] : self(self, i + 1, j)) out.insert({s, d + 1, n});
      }
      if (j < hyp.size()) {
        for (auto [s, d, n] : self(self, i, j + 1)) out.insert({s, d, n + 1});
      }
    }
    return memo[key] = std::move(out);
  };
  return rec(rec, 0, 0);
}

struct MeanSd {
  double mean;
  double sd;
};

inline MeanSd two_pass(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

/// One-tailed upper p-value of the paired t-test on differences d.
inline double upper_tail_p(const std::vector<double>& d, double* t_out = nullptr) {
  const auto [mean, sd] = two_pass(d);
  const double t = mean / (sd / std::sqrt(static_cast<double>(d.size())));
  if (t_out) *t_out = t;
  boost::math::students_t dist(static_cast<double>(d.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, t));
}

}  // namespace oracle
