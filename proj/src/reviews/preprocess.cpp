#include "farmvoice/reviews/preprocess.hpp"

#include <set>

#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/text.hpp"

namespace fv::reviews {

std::string_view to_string(RemovalReason r) noexcept {
  switch (r) {
    case RemovalReason::Duplicate: return "Duplicate";
    case RemovalReason::LengthFilter: return "LengthFilter";
    case RemovalReason::Spurious: return "Spurious";
  }
  return "";
}

namespace {

bool mostly_special(std::string_view text, double max_ratio) {
  std::size_t visible = 0;
  std::size_t special = 0;
  for (char32_t c : utf8::decode(text)) {
    if (utf8::is_whitespace(c)) continue;
    ++visible;
    if (!utf8::is_letter_or_digit(c)) ++special;
  }
  return visible > 0 && static_cast<double>(special) > max_ratio * static_cast<double>(visible);
}

std::size_t visible_length(std::string_view text) {
  const std::u32string s = utf8::decode(text);
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && utf8::is_whitespace(s[begin])) ++begin;
  while (end > begin && utf8::is_whitespace(s[end - 1])) --end;
  return end - begin;
}

}  // namespace

PreprocessResult preprocess(const std::vector<ReviewDocument>& corpus, const PreprocessConfig& config,
                            const nlp::Resources& resources) {
  PreprocessResult out;
  std::set<std::string_view> seen;
  for (const auto& doc : corpus) {
    if (!seen.insert(doc.text).second) {
      out.removed.push_back({doc.id, RemovalReason::Duplicate, "same text as an earlier review"});
      continue;
    }
    if (mostly_special(doc.text, config.max_special_ratio)) {
      out.removed.push_back({doc.id, RemovalReason::Spurious, "special_characters"});
      continue;
    }
    if (visible_length(doc.text) <= config.max_short_length) {
      out.removed.push_back({doc.id, RemovalReason::LengthFilter,
                             "at most " + std::to_string(config.max_short_length) + " characters"});
      continue;
    }
    const auto tokens = metrics::normalize(doc.text);
    std::size_t stopwords = 0;
    for (const auto& t : tokens) {
      if (resources.is_stopword(config.target_language, t)) ++stopwords;
    }
    if (!tokens.empty() && static_cast<double>(stopwords) <
                               config.min_stopword_ratio * static_cast<double>(tokens.size())) {
      out.removed.push_back({doc.id, RemovalReason::Spurious, "foreign_language"});
      continue;
    }
    out.kept.push_back(doc);
  }
  return out;
}

}  // namespace fv::reviews
