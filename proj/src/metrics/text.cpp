#include "farmvoice/metrics/text.hpp"

#include <algorithm>
#include <numeric>

#include "farmvoice/core/utf8.hpp"

namespace fv::metrics {

std::vector<std::string> normalize(std::string_view text, const NormalizationPolicy& policy) {
  std::vector<std::string> tokens;
  const std::u32string scalars = utf8::decode(text);

  auto flush = [&](std::u32string_view word) {
    std::size_t begin = 0;
    std::size_t end = word.size();
    if (policy.strip_punctuation) {
      while (begin < end && utf8::is_punctuation(word[begin])) ++begin;
      while (end > begin && utf8::is_punctuation(word[end - 1])) --end;
    }
    if (begin == end) return;
    std::string token;
    for (std::size_t i = begin; i < end; ++i) {
      utf8::append(token, policy.fold_case ? utf8::to_lower(word[i]) : word[i]);
    }
    tokens.push_back(std::move(token));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i <= scalars.size(); ++i) {
    if (i == scalars.size() || utf8::is_whitespace(scalars[i])) {
      if (i > start) flush(std::u32string_view(scalars).substr(start, i - start));
      start = i + 1;
    }
  }
  return tokens;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::u32string s = utf8::decode(a);
  std::u32string t = utf8::decode(b);
  if (s.size() < t.size()) std::swap(s, t);

  std::vector<std::size_t> row(t.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (s[i - 1] == t[j - 1] ? 0 : 1);
      row[j] = std::min({substitute, above + 1, row[j - 1] + 1});
      diagonal = above;
    }
  }
  return row[t.size()];
}

LengthMetrics length_metrics(std::string_view transcript, const BaselineText& baseline) {
  LengthMetrics m;
  m.target_bytes = transcript.size();
  m.target_characters = utf8::count_scalars(transcript);
  m.byte_difference = static_cast<long long>(m.target_bytes) -
                      static_cast<long long>(baseline.source_bytes());
  m.character_difference = static_cast<long long>(m.target_characters) -
                           static_cast<long long>(baseline.source_characters());
  return m;
}

}  // namespace fv::metrics
