#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace fv::metrics {

struct TokenAlignment {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t cost() const noexcept { return substitutions + deletions + insertions; }

  friend bool operator==(const TokenAlignment&, const TokenAlignment&) = default;
};

/// Minimum-cost word alignment with unit costs. Among optimal alignments
/// the backtrace prefers substitutions over deletion/insertion pairs.
TokenAlignment align(std::span<const std::string> reference,
                     std::span<const std::string> hypothesis);

/// (S + D + I) / N. Throws Error{EmptyReference} when N == 0.
double word_error_rate(const TokenAlignment& alignment);

}  // namespace fv::metrics
