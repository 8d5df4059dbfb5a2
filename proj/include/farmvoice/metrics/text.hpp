#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "farmvoice/core/domain.hpp"

namespace fv::metrics {

struct NormalizationPolicy {
  bool fold_case = true;
  bool strip_punctuation = true;

  friend bool operator==(const NormalizationPolicy&, const NormalizationPolicy&) = default;
};

/// Splits on Unicode whitespace, then optionally lowercases and trims
/// leading/trailing punctuation of each token. Tokens that become empty
/// are dropped.
std::vector<std::string> normalize(std::string_view text,
                                   const NormalizationPolicy& policy = {});

/// Character-level edit distance over Unicode scalar values, unit costs.
std::size_t levenshtein(std::string_view a, std::string_view b);

struct LengthMetrics {
  std::size_t target_bytes = 0;
  long long byte_difference = 0;
  std::size_t target_characters = 0;
  long long character_difference = 0;
};

LengthMetrics length_metrics(std::string_view transcript, const BaselineText& baseline);

}  // namespace fv::metrics
