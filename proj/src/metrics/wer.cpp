#include "farmvoice/metrics/wer.hpp"

#include <vector>

#include "farmvoice/core/error.hpp"

namespace fv::metrics {

TokenAlignment align(std::span<const std::string> reference,
                     std::span<const std::string> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diagonal =
          at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      const std::size_t deletion = at(i - 1, j) + 1;
      const std::size_t insertion = at(i, j - 1) + 1;
      at(i, j) = std::min(diagonal, std::min(deletion, insertion));
    }
  }

  TokenAlignment result;
  result.reference_length = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool match = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (match ? 0 : 1)) {
        if (!match) ++result.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++result.deletions;
      --i;
    } else {
      ++result.insertions;
      --j;
    }
  }
  return result;
}

double word_error_rate(const TokenAlignment& alignment) {
  if (alignment.reference_length == 0) {
    throw Error(ErrorCode::EmptyReference, "word error rate needs a non-empty reference");
  }
  return static_cast<double>(alignment.cost()) /
         static_cast<double>(alignment.reference_length);
}

}  // namespace fv::metrics
